//! Ordered-block templates: which point positions of a `k`-tuple form which
//! colored line.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::Elem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("unknown schema `{0}`")]
    Unknown(String),
    #[error("malformed schema: {0}")]
    Malformed(String),
    #[error("schema `{name}` is not a 2-(k,h,1) design: {report}")]
    NotADesign { name: String, report: SchemaReport },
    #[error("block has {got} points, schema expects {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("block repeats the point {0}")]
    RepeatedPoint(Elem),
}

/// A 2-(k,h,1) design on the positions `0..k`; line `i` carries color `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schema {
    pub name: String,
    pub k: usize,
    pub h: usize,
    lines: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinSchema {
    Fano,
    Hesse,
}

impl std::str::FromStr for BuiltinSchema {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fano" => Ok(BuiltinSchema::Fano),
            "hesse" => Ok(BuiltinSchema::Hesse),
            other => Err(SchemaError::Unknown(other.to_string())),
        }
    }
}

/// Fano: `l_i = {i, i+1, i+3} mod 7`.
///
/// Hesse: position 0 is the point at infinity and positions `1..=8` hold
/// `b_0..b_7`; `l_i = {b_i, b_(i+1), b_(i+3)}` (indices mod 8) for `i < 8` and
/// `l_(8+j) = {b_inf, b_j, b_(j+4)}` for `j < 4`.
pub fn builtin_schema(which: BuiltinSchema) -> Schema {
    match which {
        BuiltinSchema::Fano => Schema {
            name: "fano".into(),
            k: 7,
            h: 3,
            lines: (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect(),
        },
        BuiltinSchema::Hesse => {
            let mut lines: Vec<Vec<usize>> =
                (0..8).map(|i| vec![1 + i, 1 + (i + 1) % 8, 1 + (i + 3) % 8]).collect();
            lines.extend((0..4).map(|j| vec![0, 1 + j, 1 + j + 4]));
            Schema { name: "hesse".into(), k: 9, h: 3, lines }
        }
    }
}

/// A position pair covered by the wrong number of lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairViolation {
    pub pair: (usize, usize),
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaReport {
    pub valid: bool,
    pub first_violation: Option<PairViolation>,
    pub violations: usize,
}

impl fmt::Display for SchemaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_violation {
            None => write!(f, "valid"),
            Some(v) => write!(
                f,
                "pair ({}, {}) covered {} times ({} bad pairs)",
                v.pair.0, v.pair.1, v.count, self.violations
            ),
        }
    }
}

/// Checks that every pair of positions lies in exactly one line.
pub fn validate_schema(schema: &Schema) -> SchemaReport {
    let k = schema.k;
    let mut counts = vec![0usize; k * k];
    for line in &schema.lines {
        for (a, &x) in line.iter().enumerate() {
            for &y in &line[a + 1..] {
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                counts[lo * k + hi] += 1;
            }
        }
    }
    let mut first = None;
    let mut violations = 0;
    for a in 0..k {
        for b in a + 1..k {
            let c = counts[a * k + b];
            if c != 1 {
                violations += 1;
                if first.is_none() {
                    first = Some(PairViolation { pair: (a, b), count: c });
                }
            }
        }
    }
    SchemaReport { valid: violations == 0, first_violation: first, violations }
}

impl Schema {
    /// Builds a schema after checking index ranges, line sizes, and the
    /// pair-coverage property.
    pub fn new(name: impl Into<String>, k: usize, h: usize, lines: Vec<Vec<usize>>) -> Result<Schema, SchemaError> {
        let schema = Schema::new_unchecked(name, k, h, lines)?;
        let report = validate_schema(&schema);
        if !report.valid {
            return Err(SchemaError::NotADesign { name: schema.name, report });
        }
        Ok(schema)
    }

    /// Structural checks only; the result may fail [`validate_schema`].
    pub fn new_unchecked(
        name: impl Into<String>,
        k: usize,
        h: usize,
        lines: Vec<Vec<usize>>,
    ) -> Result<Schema, SchemaError> {
        if h < 2 || k < h {
            return Err(SchemaError::Malformed(format!("need 2 <= h <= k, got k={k}, h={h}")));
        }
        if lines.is_empty() {
            return Err(SchemaError::Malformed("no lines".into()));
        }
        for (i, line) in lines.iter().enumerate() {
            if line.len() != h {
                return Err(SchemaError::Malformed(format!("line {i} has {} positions, expected {h}", line.len())));
            }
            if let Some(&bad) = line.iter().find(|&&x| x >= k) {
                return Err(SchemaError::Malformed(format!("line {i} uses position {bad} >= k={k}")));
            }
            let mut sorted = line.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != h {
                return Err(SchemaError::Malformed(format!("line {i} repeats a position")));
            }
        }
        Ok(Schema { name: name.into(), k, h, lines })
    }

    pub fn fano() -> Schema {
        builtin_schema(BuiltinSchema::Fano)
    }

    pub fn hesse() -> Schema {
        builtin_schema(BuiltinSchema::Hesse)
    }

    /// Number of lines, which is also the number of colors.
    pub fn b(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &[usize] {
        &self.lines[i]
    }

    /// Index of the underlying uncolored design: a kaleidoscope of this type
    /// is a 2-(v, k, b) design once colors are forgotten.
    pub fn lambda_underlying(&self) -> usize {
        self.b()
    }

    /// Number of base blocks in a difference family of order `v`, if integral.
    pub fn blocks_for_order(&self, v: u64) -> Option<u64> {
        let per = (self.h * (self.h - 1)) as u64;
        (v >= 2 && (v - 1) % per == 0).then(|| (v - 1) / per)
    }

    pub fn is_builtin(&self) -> bool {
        (self.name == "fano" && *self == Schema::fano()) || (self.name == "hesse" && *self == Schema::hesse())
    }

    /// Builtin schemas encode as their name, others as a full object.
    pub fn to_json(&self) -> Value {
        if self.is_builtin() {
            Value::from(self.name.clone())
        } else {
            serde_json::to_value(self).expect("schema serializes")
        }
    }

    /// Accepts a builtin name or a full `{"name","k","h","lines"}` object.
    pub fn from_json(v: &Value) -> Result<Schema, SchemaError> {
        match v {
            Value::String(s) => Ok(builtin_schema(s.parse()?)),
            Value::Object(_) => {
                let raw: Schema =
                    serde_json::from_value(v.clone()).map_err(|e| SchemaError::Malformed(e.to_string()))?;
                Schema::new(raw.name, raw.k, raw.h, raw.lines)
            }
            _ => Err(SchemaError::Malformed(v.to_string())),
        }
    }

    /// Point sets of the `b` lines of a block, in color order.
    pub fn lines_of(&self, block: &OrderedBlock) -> Vec<Vec<Elem>> {
        self.lines_of_points(&block.points)
    }

    pub fn lines_of_points<T: Copy>(&self, points: &[T]) -> Vec<Vec<T>> {
        self.lines.iter().map(|line| line.iter().map(|&i| points[i]).collect()).collect()
    }
}

/// A `k`-tuple of distinct group elements read through a schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderedBlock {
    pub points: Vec<Elem>,
}

impl OrderedBlock {
    pub fn new(schema: &Schema, points: Vec<Elem>) -> Result<OrderedBlock, SchemaError> {
        if points.len() != schema.k {
            return Err(SchemaError::WrongLength { expected: schema.k, got: points.len() });
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(SchemaError::RepeatedPoint(w[0]));
        }
        Ok(OrderedBlock { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Free-function form of [`Schema::lines_of`].
pub fn lines_of(schema: &Schema, block: &OrderedBlock) -> Vec<Vec<Elem>> {
    schema.lines_of(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Group;

    fn elems(xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn fano_line_zero() {
        let s = Schema::fano();
        assert_eq!(s.line(0), &[0, 1, 3]);
        assert_eq!(s.b(), 7);
        assert!(validate_schema(&s).valid);
    }

    #[test]
    fn hesse_lines_through_infinity() {
        let s = Schema::hesse();
        // l_8 = {b_inf, b_0, b_4}
        assert_eq!(s.line(8), &[0, 1, 5]);
        assert_eq!(s.line(11), &[0, 4, 8]);
        assert_eq!(s.line(7), &[8, 1, 3]);
        assert_eq!(s.b(), 12);
        assert!(validate_schema(&s).valid);
    }

    #[test]
    fn broken_fano_reports_pair() {
        let mut lines = Schema::fano().lines().to_vec();
        lines[1] = vec![0, 1, 4];
        let bad = Schema::new_unchecked("broken", 7, 3, lines.clone()).unwrap();
        let report = validate_schema(&bad);
        assert!(!report.valid);
        assert_eq!(report.first_violation, Some(PairViolation { pair: (0, 1), count: 2 }));
        assert!(matches!(Schema::new("broken", 7, 3, lines), Err(SchemaError::NotADesign { .. })));
    }

    #[test]
    fn malformed_schemas() {
        assert!(matches!(Schema::new_unchecked("x", 7, 3, vec![vec![0, 1, 9]]), Err(SchemaError::Malformed(_))));
        assert!(matches!(Schema::new_unchecked("x", 7, 3, vec![vec![0, 1]]), Err(SchemaError::Malformed(_))));
        assert!(matches!(Schema::new_unchecked("x", 7, 3, vec![vec![0, 1, 1]]), Err(SchemaError::Malformed(_))));
    }

    #[test]
    fn generic_schema_from_json() {
        // The 2-(4,2,1) design: all pairs of four positions.
        let v = serde_json::json!({
            "name": "k4", "k": 4, "h": 2,
            "lines": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]
        });
        let s = Schema::from_json(&v).unwrap();
        assert_eq!(s.b(), 6);
        assert_eq!(s.to_json(), v);
        assert_eq!(Schema::from_json(&serde_json::json!("fano")).unwrap(), Schema::fano());
        assert!(Schema::from_json(&serde_json::json!("heptagon")).is_err());
    }

    #[test]
    fn lines_of_example_blocks() {
        let fano = Schema::fano();
        let b = OrderedBlock::new(&fano, elems(&[0, 1, 2, 4, 5, 11, 8])).unwrap();
        let lines = fano.lines_of(&b);
        assert_eq!(lines[0], elems(&[0, 1, 4]));
        assert_eq!(lines[4], elems(&[5, 11, 0]));

        let hesse = Schema::hesse();
        let b = OrderedBlock::new(&hesse, elems(&[0, 1, 2, 3, 7, 16, 8, 4, 10])).unwrap();
        assert_eq!(lines_of(&hesse, &b)[0], elems(&[1, 2, 7]));
    }

    #[test]
    fn block_checks() {
        let fano = Schema::fano();
        assert_eq!(
            OrderedBlock::new(&fano, elems(&[0, 1, 2])),
            Err(SchemaError::WrongLength { expected: 7, got: 3 })
        );
        assert_eq!(OrderedBlock::new(&fano, elems(&[0, 1, 2, 3, 4, 5, 1])), Err(SchemaError::RepeatedPoint(Elem(1))));
    }

    #[test]
    fn translation_equivariance_over_z19() {
        let g = Group::cyclic(19).unwrap();
        let fano = Schema::fano();
        let hesse = Schema::hesse();
        let blocks = [
            (&fano, elems(&[0, 1, 2, 4, 5, 11, 8])),
            (&fano, elems(&[0, 7, 14, 9, 16, 1, 18])),
            (&fano, elems(&[0, 11, 3, 6, 17, 7, 12])),
            (&hesse, elems(&[0, 1, 2, 3, 7, 16, 8, 4, 10])),
        ];
        for (schema, pts) in blocks {
            let lines = schema.lines_of_points(&pts);
            for shift in g.elements() {
                let moved: Vec<Elem> = pts.iter().map(|&x| g.add(x, shift)).collect();
                let expected: Vec<Vec<Elem>> =
                    lines.iter().map(|l| l.iter().map(|&x| g.add(x, shift)).collect()).collect();
                assert_eq!(schema.lines_of_points(&moved), expected);
            }
        }
    }

    #[test]
    fn scaling_equivariance_over_f19() {
        let f = Group::prime_field(19).unwrap();
        let fano = Schema::fano();
        let pts = elems(&[0, 1, 2, 4, 5, 11, 8]);
        let lines = fano.lines_of_points(&pts);
        for u in f.elements().skip(1) {
            let scaled: Vec<Elem> = pts.iter().map(|&x| f.mul(u, x)).collect();
            let expected: Vec<Vec<Elem>> = lines.iter().map(|l| l.iter().map(|&x| f.mul(u, x)).collect()).collect();
            assert_eq!(fano.lines_of_points(&scaled), expected);
        }
    }
}
