use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use kaleido_core::algebra::{field_descriptor, transversal, CyclotomicTable, Elem, Group, TransversalMode};
use kaleido_core::compose::{compose_kdf, field_dm, pbd_compose, verify_dm};
use kaleido_core::designs::{
    develop, replicate, verify_df, verify_kaleidoscope, verify_kdf, verify_pbd, Kdf, PairwiseBalancedDesign,
};
use kaleido_core::io::{
    block_from_json, df_from_json, dm_from_json, dm_to_json, elements_to_json, group_to_json, kaleidoscope_from_json,
    kaleidoscope_to_json, kdf_from_json, kdf_to_json, parse, to_canonical_string,
};
use kaleido_core::schema::{validate_schema, Schema};
use kaleido_core::search::{
    asymptotic_initial_block, exhaustive_nonexistence, find_constrained_element, find_initial_block,
    generate_kdf_from_initial_block, parametric_accepts, parametric_search, resolve_constraints, verify_listed_block,
    ClassExpr, CyclotomicConstraint, ExhaustiveMode, ParametricForm, SearchBudget,
};
use kaleido_core::tables::{reproduce, table_ids};
use serde_json::{json, Value};

use crate::catalog::Catalog;
use crate::failure::{malformed, Failure, Outcome};
use crate::{CatalogCmd, Cli, Command, Compose, FieldArgs, Mode, Search, Verify};

type Run = Result<Outcome, Failure>;

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Verify(v) => verify(v),
        Command::Search(s) => search(s),
        Command::Compose(c) => compose(c, cli),
        Command::Develop { file } => {
            let kdf = kdf_from_json(&read_json(file)?)?;
            let k = develop(&kdf)?;
            let report = verify_kaleidoscope(&k)?;
            let summary = format!("developed {} planes on {} points; valid: {}", k.planes.len(), k.v, report.valid);
            Ok(Outcome::new(report.valid, kaleidoscope_to_json(&k), summary))
        }
        Command::Replicate { file, schema } => {
            let design = PairwiseBalancedDesign::parse(&fs::read_to_string(file)?)?;
            let k = replicate(&design, &load_schema(schema)?)?;
            let report = verify_kaleidoscope(&k)?;
            let summary = format!("replicated into {} planes; valid: {}", k.planes.len(), report.valid);
            Ok(Outcome::new(report.valid, kaleidoscope_to_json(&k), summary))
        }
        Command::Nonexistence { v, schema, mode, allow_slow } => {
            let schema = load_schema(schema)?;
            if schema.name == "hesse" && !allow_slow {
                return Err(malformed("the Hesse search is very long; pass --allow-slow to run it"));
            }
            let mode = match mode {
                Mode::Count => ExhaustiveMode::Count,
                Mode::Existence => ExhaustiveMode::Existence,
            };
            let cert = exhaustive_nonexistence(*v, &schema, mode)?;
            let summary = format!(
                "{} solutions over Z_{} ({} nodes, {} subtrees, exhausted: {})",
                cert.solutions, cert.v, cert.nodes_visited, cert.subtrees, cert.exhausted
            );
            Ok(Outcome::new(cert.solutions > 0, to_value(&cert), summary))
        }
        Command::Reproduce { table } => {
            if table == "list" {
                return Ok(Outcome::new(true, json!(table_ids()), "known tables"));
            }
            let report = reproduce(table)?;
            let mut summary = format!("{}: {}/{} entries pass", report.table, report.passed, report.total);
            for e in report.entries.iter().filter(|e| !e.pass) {
                summary.push_str(&format!("\n  q={} value {} fails", e.q, e.value));
                if let (Some(r), Some(ok)) = (&e.replacement, e.replacement_pass) {
                    summary.push_str(&format!("; replacement {r} {}", if ok { "passes" } else { "fails" }));
                }
            }
            Ok(Outcome::new(report.all_pass(), to_value(&report), summary))
        }
        Command::Catalog(c) => catalog(c, cli),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    Ok(parse(&text)?)
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    fs::write(path, to_canonical_string(v)).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

/// `fano`, `hesse`, or the path of a schema JSON file.
fn load_schema(arg: &str) -> Result<Schema, Failure> {
    match arg {
        "fano" => Ok(Schema::fano()),
        "hesse" => Ok(Schema::hesse()),
        path => Ok(Schema::from_json(&read_json(Path::new(path))?)?),
    }
}

fn load_field(args: &FieldArgs) -> Result<Arc<Group>, Failure> {
    let d = field_descriptor(args.q, args.modulus.as_deref())?;
    Ok(Arc::new(Group::new(&d)?))
}

fn parse_form(s: &str) -> Result<ParametricForm, Failure> {
    s.parse().map_err(Failure::Malformed)
}

fn budget(max: Option<u64>) -> SearchBudget {
    SearchBudget { max_candidates: max, ..SearchBudget::default() }
}

fn verify(v: &Verify) -> Run {
    match v {
        Verify::Df { file, lambda } => {
            let df = df_from_json(&read_json(file)?)?;
            let k = df.blocks.first().map_or(0, Vec::len);
            let lambda = match lambda.or(df.lambda) {
                Some(l) => l,
                None => {
                    let pairs = df.blocks.len() * k * k.saturating_sub(1);
                    let nonzero = df.group.order() as usize - 1;
                    if k < 2 || pairs % nonzero != 0 {
                        let summary = format!("{} blocks of size {k} cannot form a difference family", df.blocks.len());
                        return Ok(Outcome::new(false, json!({"valid": false}), summary));
                    }
                    pairs / nonzero
                }
            };
            let report = verify_df(&df.group, &df.blocks, k, lambda)?;
            let summary = format!("({}, {k}, {lambda}) difference family: {}", df.group.order(), report.valid);
            Ok(Outcome::new(report.valid, to_value(&report), summary))
        }
        Verify::Kdf { file } => {
            let kdf = kdf_from_json(&read_json(file)?)?;
            let report = verify_kdf(&kdf)?;
            let summary = format!(
                "{} KDF over a group of order {} with {} blocks: {}",
                kdf.schema.name,
                kdf.group.order(),
                kdf.blocks.len(),
                if report.valid { "valid" } else { "invalid" }
            );
            Ok(Outcome::new(report.valid, to_value(&report), summary))
        }
        Verify::Kaleidoscope { file } => {
            let k = kaleidoscope_from_json(&read_json(file)?)?;
            let report = verify_kaleidoscope(&k)?;
            let summary = format!("{} planes on {} points: {}", report.planes, report.v, report.valid);
            Ok(Outcome::new(report.valid, to_value(&report), summary))
        }
        Verify::Dm { file } => {
            let m = dm_from_json(&read_json(file)?)?;
            let report = verify_dm(&m)?;
            let summary = format!("{} x {} difference matrix: {}", report.rows, report.columns, report.valid);
            Ok(Outcome::new(report.valid, to_value(&report), summary))
        }
        Verify::Block { file, field, x, form, points, schema } => verify_block(file, field, x, form, points, schema),
        Verify::Schema { schema } => {
            let s = load_schema(schema)?;
            let report = validate_schema(&s);
            Ok(Outcome::new(report.valid, to_value(&report), format!("schema {}: {report}", s.name)))
        }
        Verify::Pbd { file } => {
            let pbd = PairwiseBalancedDesign::parse(&fs::read_to_string(file)?)?;
            let report = verify_pbd(&pbd)?;
            let summary = format!("({}, {:?}, 1) PBD: {}", pbd.v, report.block_sizes, report.valid);
            Ok(Outcome::new(report.valid, to_value(&report), summary))
        }
    }
}

fn verify_block(
    file: &Option<std::path::PathBuf>,
    field: &Option<FieldArgs>,
    x: &Option<String>,
    form: &str,
    points: &Option<Vec<String>>,
    schema: &Option<String>,
) -> Run {
    let (group, schema, block) = if let Some(file) = file {
        let field = field.as_ref().map(load_field).transpose()?;
        let (g, s, b) = block_from_json(&read_json(file)?, field)?;
        (g, s, b.points)
    } else {
        let field = load_field(field.as_ref().ok_or_else(|| malformed("give --file, or --q with --x or --points"))?)?;
        match (x, points) {
            (Some(x), None) => {
                let form = parse_form(form)?;
                let xe = field.parse_element(x)?;
                if let Some(s) = schema {
                    if load_schema(s)? != form.schema() {
                        return Err(malformed(format!("form {} uses the {} schema", form.name(), form.schema().name)));
                    }
                }
                let block = form.block(&field, xe);
                let ok = parametric_accepts(&field, form, xe)?;
                let json = json!({
                    "field": group_to_json(&field),
                    "form": form.name(),
                    "x": field.encode(xe),
                    "block": elements_to_json(&field, &block),
                    "valid": ok,
                });
                let summary = format!("B({x}) of form {} over F_{}: {}", form.name(), field.order(), verdict(ok));
                return Ok(Outcome::new(ok, json, summary));
            }
            (None, Some(pts)) => {
                let s = load_schema(schema.as_deref().unwrap_or("fano"))?;
                let block = pts.iter().map(|p| field.parse_element(p)).collect::<Result<Vec<Elem>, _>>()?;
                (field, s, block)
            }
            _ => return Err(malformed("give exactly one of --x and --points")),
        }
    };
    let ok = verify_listed_block(&group, &schema, &block)?;
    let json = json!({
        "field": group_to_json(&group),
        "schema": schema.to_json(),
        "block": elements_to_json(&group, &block),
        "valid": ok,
    });
    let summary = format!("{}-point block over F_{}: {}", block.len(), group.order(), verdict(ok));
    Ok(Outcome::new(ok, json, summary))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "initial block"
    } else {
        "not an initial block"
    }
}

/// Search output: the block together with the transversal and primitive
/// element used to expand it, optionally writing the expanded KDF.
fn block_result(field: &Arc<Group>, schema: &Schema, mut json: Value, block: &[Elem], out: &Option<std::path::PathBuf>) -> Result<Value, Failure> {
    let kdf = generate_kdf_from_initial_block(field.clone(), schema, block, TransversalMode::Canonical)?;
    let obj = json.as_object_mut().expect("object");
    obj.insert("field".into(), group_to_json(field));
    obj.insert("block".into(), elements_to_json(field, block));
    obj.insert("transversal".into(), elements_to_json(field, &transversal(field, TransversalMode::Canonical)?));
    obj.insert("primitive".into(), field.encode(field.primitive_element()?));
    if let Some(path) = out {
        write_json(path, &kdf_to_json(&kdf))?;
    }
    Ok(json)
}

fn search(s: &Search) -> Run {
    match s {
        Search::Parametric { field, form, budget: b, out } => {
            let f = load_field(field)?;
            let form = parse_form(form)?;
            match parametric_search(&f, form, budget(*b))? {
                Some(hit) => {
                    let json = json!({"form": form.name(), "x": f.encode(hit.x)});
                    let json = block_result(&f, &form.schema(), json, &hit.block, out)?;
                    Ok(Outcome::new(true, json, format!("{}: x = {} over F_{}", form.name(), f.format(hit.x), f.order())))
                }
                None => Ok(Outcome::new(
                    false,
                    json!({"field": group_to_json(&f), "form": form.name(), "x": null}),
                    format!("{}: no x over F_{}", form.name(), f.order()),
                )),
            }
        }
        Search::Asymptotic { field, schema, out } => {
            let f = load_field(field)?;
            let schema = load_schema(schema)?;
            match asymptotic_initial_block(&f, &schema)? {
                Some(b) => {
                    let json = block_result(&f, &schema, json!({"schema": schema.to_json()}), &b.points, out)?;
                    Ok(Outcome::new(true, json, format!("constraint chain succeeded over F_{}", f.order())))
                }
                None => Ok(Outcome::new(
                    false,
                    json!({"field": group_to_json(&f), "schema": schema.to_json(), "block": null}),
                    format!("some constrained set is empty over F_{}", f.order()),
                )),
            }
        }
        Search::Constrained { field, constraints, budget: b } => {
            let f = load_field(field)?;
            let table = CyclotomicTable::new(&f, 3)?;
            let parsed = constraints
                .iter()
                .map(|c| {
                    let (shift, class) =
                        c.split_once(':').ok_or_else(|| malformed(format!("constraint `{c}` is not `shift:class`")))?;
                    Ok(CyclotomicConstraint::new(f.parse_element(shift)?, ClassExpr::parse(class)?))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let resolved = resolve_constraints(&table, &parsed);
            let result = find_constrained_element(&f, &resolved, budget(*b))?;
            let json = json!({
                "field": group_to_json(&f),
                "constraints": resolved.iter().map(|c| json!({"shift": f.encode(c.shift), "class": c.class})).collect::<Vec<_>>(),
                "element": result.element.map(|x| f.encode(x)),
                "candidates_checked": result.candidates_checked,
                "contradicts_bound": result.contradicts_bound,
            });
            let summary = match result.element {
                Some(x) => format!("smallest solution {}", f.format(x)),
                None if result.contradicts_bound => "no solution although q exceeds the bound Q(t)".into(),
                None => "no solution".into(),
            };
            Ok(Outcome::new(result.element.is_some(), json, summary))
        }
        Search::Initial { field, schema, budget: b, out } => {
            let f = load_field(field)?;
            let schema = load_schema(schema)?;
            match find_initial_block(&f, &schema, budget(*b))? {
                Some(hit) => {
                    let json = json!({
                        "schema": schema.to_json(),
                        "method": hit.method,
                        "x": hit.x.map(|x| f.encode(x)),
                    });
                    let json = block_result(&f, &schema, json, &hit.block, out)?;
                    Ok(Outcome::new(true, json, format!("initial block over F_{} via {}", f.order(), hit.method)))
                }
                None => Ok(Outcome::new(
                    false,
                    json!({"field": group_to_json(&f), "schema": schema.to_json(), "block": null}),
                    format!("no initial block over F_{}", f.order()),
                )),
            }
        }
    }
}

fn compose(c: &Compose, cli: &Cli) -> Run {
    match c {
        Compose::Dm { field, k } => {
            let f = load_field(field)?;
            let m = field_dm(f, *k)?;
            let report = verify_dm(&m)?;
            Ok(Outcome::new(report.valid, dm_to_json(&m), format!("{k} x {} difference matrix", report.columns)))
        }
        Compose::Kdf { left, right, dm } => {
            let f: Kdf = kdf_from_json(&read_json(left)?)?;
            let f2: Kdf = kdf_from_json(&read_json(right)?)?;
            let m = match dm {
                Some(path) => dm_from_json(&read_json(path)?)?,
                None => field_dm(f2.group.clone(), f.schema.k)?,
            };
            let out = compose_kdf(&f, &f2, &m)?;
            let report = verify_kdf(&out)?;
            let summary = format!("composed {} KDF of order {}: {}", out.schema.name, out.group.order(), report.valid);
            Ok(Outcome::new(report.valid, kdf_to_json(&out), summary))
        }
        Compose::Pbd { file, schema } => {
            let pbd = PairwiseBalancedDesign::parse(&fs::read_to_string(file)?)?;
            let schema = load_schema(schema)?;
            let store = Catalog::new(&cli.catalog, true);
            let sizes = verify_pbd(&pbd)?.block_sizes;
            let mut ingredients = BTreeMap::new();
            for size in sizes {
                match store.get(size, &schema.name) {
                    Ok((_, artifact)) => {
                        ingredients.insert(size, artifact.into_kaleidoscope()?);
                    }
                    Err(Failure::Invalid(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            let k = pbd_compose(&pbd, &ingredients)?;
            let report = verify_kaleidoscope(&k)?;
            let summary = format!("glued {} planes on {} points: {}", k.planes.len(), k.v, report.valid);
            Ok(Outcome::new(report.valid, kaleidoscope_to_json(&k), summary))
        }
    }
}

fn catalog(c: &CatalogCmd, cli: &Cli) -> Run {
    match c {
        CatalogCmd::Add { file } => {
            let store = Catalog::new(&cli.catalog, true);
            let text = fs::read_to_string(file).map_err(|e| malformed(format!("{}: {e}", file.display())))?;
            let entry = store.add(&text)?;
            let summary = format!("stored {} in {}", entry.file, store.root().display());
            Ok(Outcome::new(true, to_value(&entry), summary))
        }
        CatalogCmd::List { no_verify } => {
            let store = Catalog::new(&cli.catalog, !no_verify);
            let entries = store.list()?;
            let ok = entries.iter().all(|e| e.valid);
            let summary = format!("{} entries in {}", entries.len(), store.root().display());
            Ok(Outcome::new(ok, to_value(&entries), summary))
        }
        CatalogCmd::Get { order, schema, no_verify } => {
            let store = Catalog::new(&cli.catalog, !no_verify);
            let (value, artifact) = store.get(*order, schema)?;
            let summary = format!("{} of order {} ({})", artifact.kind(), artifact.order(), artifact.schema_name());
            Ok(Outcome::new(true, value, summary))
        }
    }
}
