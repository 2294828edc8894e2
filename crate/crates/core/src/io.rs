//! JSON file formats. Maps are `serde_json`'s default sorted maps, so every
//! writer here is byte-stable: the same object always serializes the same way.

use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, Group, GroupDescriptor};
use crate::compose::DifferenceMatrix;
use crate::designs::{DesignError, Kaleidoscope, Kdf, Plane};
use crate::schema::{OrderedBlock, Schema, SchemaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("malformed field `{0}`: {1}")]
    Field(&'static str, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

pub fn parse(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Value, name: &'static str) -> Result<&'a Value, IoError> {
    obj.get(name).ok_or(IoError::Missing(name))
}

fn array<'a>(v: &'a Value, name: &'static str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| IoError::Field(name, "expected an array".into()))
}

pub fn group_from_json(v: &Value) -> Result<Arc<Group>, IoError> {
    let d: GroupDescriptor = serde_json::from_value(v.clone()).map_err(|e| IoError::Field("group", e.to_string()))?;
    Ok(Arc::new(Group::new(&d)?))
}

pub fn group_to_json(g: &Group) -> Value {
    serde_json::to_value(g.descriptor()).expect("descriptor serializes")
}

pub fn elements_to_json(g: &Group, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|&x| g.encode(x)).collect())
}

pub fn elements_from_json(g: &Group, v: &Value, name: &'static str) -> Result<Vec<Elem>, IoError> {
    array(v, name)?.iter().map(|x| Ok(g.decode(x)?)).collect()
}

fn rows_from_json(g: &Group, v: &Value, name: &'static str) -> Result<Vec<Vec<Elem>>, IoError> {
    array(v, name)?.iter().map(|row| elements_from_json(g, row, name)).collect()
}

/// `{"group", "blocks"}` with an optional `"lambda"`.
pub struct DfFile {
    pub group: Arc<Group>,
    pub blocks: Vec<Vec<Elem>>,
    pub lambda: Option<usize>,
}

pub fn df_from_json(v: &Value) -> Result<DfFile, IoError> {
    let group = group_from_json(field(v, "group")?)?;
    let blocks = rows_from_json(&group, field(v, "blocks")?, "blocks")?;
    let lambda = match v.get("lambda") {
        None => None,
        Some(l) => Some(l.as_u64().ok_or_else(|| IoError::Field("lambda", "expected an integer".into()))? as usize),
    };
    Ok(DfFile { group, blocks, lambda })
}

pub fn df_to_json(g: &Group, blocks: &[Vec<Elem>]) -> Value {
    json!({
        "group": group_to_json(g),
        "blocks": blocks.iter().map(|b| elements_to_json(g, b)).collect::<Vec<_>>(),
    })
}

pub fn kdf_to_json(kdf: &Kdf) -> Value {
    let g = &kdf.group;
    json!({
        "group": group_to_json(g),
        "schema": kdf.schema.to_json(),
        "blocks": kdf.blocks.iter().map(|b| elements_to_json(g, &b.points)).collect::<Vec<_>>(),
        "provenance": Value::Object(kdf.provenance.clone()),
    })
}

pub fn kdf_from_json(v: &Value) -> Result<Kdf, IoError> {
    let group = group_from_json(field(v, "group")?)?;
    let schema = Schema::from_json(field(v, "schema")?)?;
    let blocks = rows_from_json(&group, field(v, "blocks")?, "blocks")?;
    let mut kdf = Kdf::new(group, schema, blocks)?;
    if let Some(p) = v.get("provenance") {
        kdf.provenance = p.as_object().cloned().ok_or_else(|| IoError::Field("provenance", "expected an object".into()))?;
    }
    Ok(kdf)
}

/// `{"points": v or group, "schema", "planes"}`; `"colors"` (one color list
/// per plane) only when some plane is not colored by line index.
pub fn kaleidoscope_to_json(k: &Kaleidoscope) -> Value {
    let mut obj = Map::new();
    let planes: Vec<Value> = match &k.group {
        Some(g) => k.planes.iter().map(|p| Value::Array(p.points.iter().map(|&x| g.encode(Elem(x))).collect())).collect(),
        None => k.planes.iter().map(|p| json!(p.points)).collect(),
    };
    obj.insert("points".into(), k.group.as_ref().map_or_else(|| json!(k.v), |g| group_to_json(g)));
    obj.insert("schema".into(), k.schema.to_json());
    obj.insert("planes".into(), Value::Array(planes));
    if k.planes.iter().any(|p| p.colors.is_some()) {
        let b = k.schema.b();
        let colors: Vec<Value> =
            k.planes.iter().map(|p| json!((0..b).map(|i| p.color_of_line(i)).collect::<Vec<_>>())).collect();
        obj.insert("colors".into(), Value::Array(colors));
    }
    Value::Object(obj)
}

pub fn kaleidoscope_from_json(v: &Value) -> Result<Kaleidoscope, IoError> {
    let schema = Schema::from_json(field(v, "schema")?)?;
    let (n, group) = match field(v, "points")? {
        Value::Number(n) => (n.as_u64().ok_or_else(|| IoError::Field("points", "expected a count".into()))? as usize, None),
        g => {
            let g = group_from_json(g)?;
            (g.order() as usize, Some(g))
        }
    };
    let mut planes = Vec::new();
    for p in array(field(v, "planes")?, "planes")? {
        let points = match &group {
            Some(g) => elements_from_json(g, p, "planes")?.into_iter().map(|e| e.0).collect(),
            None => array(p, "planes")?
                .iter()
                .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| IoError::Field("planes", format!("bad point {x}"))))
                .collect::<Result<Vec<_>, _>>()?,
        };
        planes.push(Plane::new(points));
    }
    if let Some(colors) = v.get("colors") {
        let colors = array(colors, "colors")?;
        if colors.len() != planes.len() {
            return Err(IoError::Field("colors", format!("{} color lists for {} planes", colors.len(), planes.len())));
        }
        for (plane, c) in planes.iter_mut().zip(colors) {
            let c: Vec<usize> = serde_json::from_value(c.clone()).map_err(|e| IoError::Field("colors", e.to_string()))?;
            plane.colors = Some(c);
        }
    }
    Ok(Kaleidoscope { v: n, group, schema, planes })
}

pub fn dm_to_json(m: &DifferenceMatrix) -> Value {
    json!({
        "group": group_to_json(&m.group),
        "rows": m.rows.iter().map(|r| elements_to_json(&m.group, r)).collect::<Vec<_>>(),
    })
}

pub fn dm_from_json(v: &Value) -> Result<DifferenceMatrix, IoError> {
    let group = group_from_json(field(v, "group")?)?;
    let rows = rows_from_json(&group, field(v, "rows")?, "rows")?;
    Ok(DifferenceMatrix { group, rows })
}

/// `{"schema", "points"}`, plus `"group"` so the file is self-contained.
pub fn block_to_json(g: &Group, schema: &Schema, block: &[Elem]) -> Value {
    json!({
        "group": group_to_json(g),
        "schema": schema.to_json(),
        "points": elements_to_json(g, block),
    })
}

/// Reads a block file; `group` is used when the file has none.
pub fn block_from_json(v: &Value, group: Option<Arc<Group>>) -> Result<(Arc<Group>, Schema, OrderedBlock), IoError> {
    let group = match v.get("group") {
        Some(g) => group_from_json(g)?,
        None => group.ok_or(IoError::Missing("group"))?,
    };
    let schema = Schema::from_json(field(v, "schema")?)?;
    let points = elements_from_json(&group, field(v, "points")?, "points")?;
    let block = OrderedBlock::new(&schema, points)?;
    Ok((group, schema, block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TransversalMode;
    use crate::compose::field_dm;
    use crate::designs::{develop, verify_kdf};
    use crate::search::generate_kdf_from_initial_block;

    fn fkdf19() -> Kdf {
        let f = Arc::new(Group::prime_field(19).unwrap());
        let b: Vec<Elem> = [0, 1, 2, 4, 5, 11, 8].iter().map(|&x| Elem(x)).collect();
        generate_kdf_from_initial_block(f, &Schema::fano(), &b, TransversalMode::SixthPowers).unwrap()
    }

    #[test]
    fn kdf_round_trip_is_byte_stable() {
        let kdf = fkdf19();
        let text = to_canonical_string(&kdf_to_json(&kdf));
        let back = kdf_from_json(&parse(&text).unwrap()).unwrap();
        assert!(verify_kdf(&back).unwrap().valid);
        assert_eq!(to_canonical_string(&kdf_to_json(&back)), text);
    }

    #[test]
    fn extension_elements_are_coefficient_arrays() {
        let f = Arc::new(Group::extension_field(5, &[-3, 0, 1]).unwrap());
        let x = f.parse_element("4+t").unwrap();
        let v = block_to_json(&f, &Schema::fano(), &(0..7).map(|e| f.pow(x, e)).collect::<Vec<_>>());
        assert_eq!(v["points"][1], json!([4, 1]));
        let (_, _, b) = block_from_json(&v, None).unwrap();
        assert_eq!(b.points[1], x);
    }

    #[test]
    fn kaleidoscope_round_trip() {
        let k = develop(&fkdf19()).unwrap();
        let text = to_canonical_string(&kaleidoscope_to_json(&k));
        let back = kaleidoscope_from_json(&parse(&text).unwrap()).unwrap();
        assert_eq!(back.planes, k.planes);
        assert_eq!(to_canonical_string(&kaleidoscope_to_json(&back)), text);
    }

    #[test]
    fn dm_round_trip() {
        let m = field_dm(Arc::new(Group::prime_field(7).unwrap()), 3).unwrap();
        let back = dm_from_json(&dm_to_json(&m)).unwrap();
        assert_eq!(back.rows, m.rows);
    }

    #[test]
    fn missing_fields_are_reported() {
        assert_eq!(kdf_from_json(&json!({"schema": "fano"})).err(), Some(IoError::Missing("group")));
        assert!(matches!(
            kdf_from_json(&json!({"group": {"kind": "prime", "p": 19}, "schema": "fano", "blocks": [[0, 1]]})),
            Err(IoError::Design(_))
        ));
    }
}
