//! Initial-block searches over finite fields, and the exhaustive search for
//! kaleidoscopic difference families over small cyclic groups.
//!
//! A triple is *evenly distributed* when its three pairwise differences lie in
//! three distinct cyclotomic classes of index 3. Because `-1` is a cube
//! whenever `q = 1 (mod 6)`, the sign of each difference does not matter. A
//! block all of whose lines are evenly distributed is an *initial block*:
//! scaling it by a transversal of `{1, -1}` in the cubes yields a full KDF.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{transversal, AlgebraError, CyclotomicTable, Elem, Group, TransversalMode};
use crate::designs::{DesignError, Kdf};
use crate::schema::{OrderedBlock, Schema, SchemaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("field order {0} is not 1 (mod 6)")]
    BadCongruence(u32),
    #[error("line {line} of the block is not evenly distributed")]
    NotAnInitialBlock { line: usize },
    #[error("order {0} is outside the supported range of the exhaustive search")]
    UnsupportedOrder(u64),
    #[error("schema `{0}` is not supported here")]
    UnsupportedSchema(String),
    #[error("malformed class expression `{0}`")]
    BadClassExpr(String),
}

/// Published lower bounds `Q(t)` above which any `t` cyclotomic constraints
/// with distinct shifts are simultaneously satisfiable.
pub const Q_TABLE: [(usize, u64); 8] = [
    (1, 1),
    (2, 36),
    (3, 939),
    (4, 19_350),
    (5, 326_661),
    (6, 4_790_260),
    (7, 64_391_800),
    (8, 808_659_000),
];

pub fn q_bound(t: usize) -> Option<u64> {
    Q_TABLE.iter().find(|&&(n, _)| n == t).map(|&(_, q)| q)
}

fn cube_table(field: &Group) -> Result<CyclotomicTable<'_>, SearchError> {
    if !field.is_field() {
        return Err(AlgebraError::NotAField.into());
    }
    if field.order() % 6 != 1 {
        return Err(SearchError::BadCongruence(field.order()));
    }
    Ok(CyclotomicTable::new(field, 3)?)
}

#[inline]
fn even3(table: &CyclotomicTable<'_>, a: Elem, b: Elem, c: Elem) -> bool {
    let f = table.field();
    let (d1, d2, d3) = (f.sub(b, a), f.sub(c, a), f.sub(c, b));
    if d1 == Elem::ZERO || d2 == Elem::ZERO || d3 == Elem::ZERO {
        return false;
    }
    let (c1, c2, c3) = (table.index_unchecked(d1), table.index_unchecked(d2), table.index_unchecked(d3));
    c1 != c2 && c1 != c3 && c2 != c3
}

/// Whether the three pairwise differences of `line` fall in three distinct
/// cyclotomic classes of index 3. Lines with a repeated point are not.
pub fn evenly_distributed(table: &CyclotomicTable<'_>, line: &[Elem]) -> Result<bool, SearchError> {
    if table.e() != 3 || table.field().order() % 6 != 1 {
        return Err(SearchError::BadCongruence(table.field().order()));
    }
    match line {
        [a, b, c] => Ok(even3(table, *a, *b, *c)),
        _ => Ok(false),
    }
}

/// First line of the block that is not evenly distributed, if any.
pub fn first_bad_line(table: &CyclotomicTable<'_>, schema: &Schema, points: &[Elem]) -> Option<usize> {
    schema.lines().iter().position(|line| match line.as_slice() {
        [a, b, c] => !even3(table, points[*a], points[*b], points[*c]),
        _ => true,
    })
}

/// The full initial-block predicate: every line evenly distributed.
pub fn verify_listed_block(field: &Group, schema: &Schema, points: &[Elem]) -> Result<bool, SearchError> {
    if schema.h != 3 {
        return Err(SearchError::UnsupportedSchema(schema.name.clone()));
    }
    let table = cube_table(field)?;
    if points.len() != schema.k || points.iter().any(|&x| !field.contains(x)) {
        return Err(SchemaError::WrongLength { expected: schema.k, got: points.len() }.into());
    }
    Ok(first_bad_line(&table, schema, points).is_none())
}

/// Scales an initial block by a transversal of `{1,-1}` in the cubes.
pub fn generate_kdf_from_initial_block(
    field: Arc<Group>,
    schema: &Schema,
    block: &[Elem],
    mode: TransversalMode,
) -> Result<Kdf, SearchError> {
    if schema.h != 3 {
        return Err(SearchError::UnsupportedSchema(schema.name.clone()));
    }
    let initial = OrderedBlock::new(schema, block.to_vec())?;
    let table = cube_table(&field)?;
    if let Some(line) = first_bad_line(&table, schema, &initial.points) {
        return Err(SearchError::NotAnInitialBlock { line });
    }
    let s = transversal(&field, mode)?;
    let blocks = s.iter().map(|&u| initial.points.iter().map(|&x| field.mul(u, x)).collect()).collect();
    let primitive = field.primitive_element()?;
    let mut kdf = Kdf::new(field.clone(), schema.clone(), blocks)?;
    let enc = |xs: &[Elem]| serde_json::Value::Array(xs.iter().map(|&x| field.encode(x)).collect());
    kdf.provenance.insert("initial_block".into(), enc(&initial.points));
    kdf.provenance.insert("transversal".into(), enc(&s));
    kdf.provenance.insert("primitive".into(), field.encode(primitive));
    kdf.provenance.insert("transversal_mode".into(), serde_json::to_value(mode).expect("mode serializes"));
    Ok(kdf)
}

/// `(constant + two * i + three * j) mod 3`, where `i` and `j` are the cube
/// classes of 2 and 3 in the field at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassExpr {
    pub constant: u8,
    pub two: u8,
    pub three: u8,
}

impl ClassExpr {
    pub const fn fixed(c: u8) -> ClassExpr {
        ClassExpr { constant: c % 3, two: 0, three: 0 }
    }

    /// `mult * i + add`
    pub const fn of_two(mult: u8, add: u8) -> ClassExpr {
        ClassExpr { constant: add % 3, two: mult % 3, three: 0 }
    }

    /// `mult * j + add`
    pub const fn of_three(mult: u8, add: u8) -> ClassExpr {
        ClassExpr { constant: add % 3, two: 0, three: mult % 3 }
    }

    pub fn resolve(self, i: u32, j: u32) -> u32 {
        (self.constant as u32 + self.two as u32 * i + self.three as u32 * j) % 3
    }

    /// Parses sums of terms like `2`, `i`, `2i`, `j`: e.g. `i+1`, `2i`, `j+2`.
    pub fn parse(s: &str) -> Result<ClassExpr, SearchError> {
        let bad = || SearchError::BadClassExpr(s.to_string());
        let mut out = ClassExpr::default();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        for term in compact.split('+') {
            let (coef, var) = match term.chars().last() {
                Some(v @ ('i' | 'j')) => (&term[..term.len() - 1], Some(v)),
                Some(_) => (term, None),
                None => return Err(bad()),
            };
            let c: u8 = if coef.is_empty() && var.is_some() {
                1
            } else {
                (coef.parse::<u32>().map_err(|_| bad())? % 3) as u8
            };
            match var {
                None => out.constant = (out.constant + c) % 3,
                Some('i') => out.two = (out.two + c) % 3,
                Some(_) => out.three = (out.three + c) % 3,
            }
        }
        Ok(out)
    }
}

/// `x - shift` must lie in the cyclotomic class given by `class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicConstraint {
    pub shift: Elem,
    pub class: ClassExpr,
}

impl CyclotomicConstraint {
    pub fn new(shift: Elem, class: ClassExpr) -> Self {
        CyclotomicConstraint { shift, class }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedConstraint {
    pub shift: Elem,
    pub class: u32,
}

/// The classes of 2 and 3 (`i` and `j`).
pub fn symbolic_classes(table: &CyclotomicTable<'_>) -> (u32, u32) {
    let f = table.field();
    let cls = |n: i64| {
        let x = f.from_int(n);
        if x == Elem::ZERO {
            0
        } else {
            table.index_unchecked(x)
        }
    };
    (cls(2), cls(3))
}

pub fn resolve_constraints(table: &CyclotomicTable<'_>, constraints: &[CyclotomicConstraint]) -> Vec<ResolvedConstraint> {
    let (i, j) = symbolic_classes(table);
    constraints.iter().map(|c| ResolvedConstraint { shift: c.shift, class: c.class.resolve(i, j) }).collect()
}

/// Candidate ordering and limits for searches. Candidates are always tried in
/// canonical ascending order and the reported witness is the smallest one,
/// however the work is split across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Only candidates with index below this bound are tried.
    pub max_candidates: Option<u64>,
    /// Minimum number of candidates per parallel task.
    pub chunk_size: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_candidates: None, chunk_size: 256 }
    }
}

impl SearchBudget {
    fn bound(&self, order: u32) -> u32 {
        self.max_candidates.map_or(order, |m| m.min(order as u64) as u32)
    }
}

/// Smallest candidate index in `0..bound` satisfying `pred`.
fn first_match<T: Send>(bound: u32, chunk: usize, pred: impl Fn(u32) -> Option<T> + Sync + Send) -> Option<T> {
    (0..bound).into_par_iter().with_min_len(chunk.max(1)).find_map_first(pred)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstrainedResult {
    pub element: Option<Elem>,
    pub constraints: usize,
    pub candidates_checked: u64,
    /// Set when nothing was found although `q > Q(t)`.
    pub contradicts_bound: bool,
}

/// Smallest `x` with `x - c_i` in class `gamma_i` for every constraint.
pub fn find_constrained_element(
    field: &Group,
    constraints: &[ResolvedConstraint],
    budget: SearchBudget,
) -> Result<ConstrainedResult, SearchError> {
    let table = cube_table(field)?;
    let bound = budget.bound(field.order());
    let found = first_match(bound, budget.chunk_size, |idx| {
        let x = Elem(idx);
        constraints
            .iter()
            .all(|c| {
                let d = field.sub(x, c.shift);
                d != Elem::ZERO && table.index_unchecked(d) == c.class
            })
            .then_some(x)
    });
    let checked = found.map_or(bound as u64, |x| x.0 as u64 + 1);
    let exhausted = bound == field.order();
    let contradicts = found.is_none()
        && exhausted
        && q_bound(constraints.len()).is_some_and(|q| field.order() as u64 > q);
    Ok(ConstrainedResult { element: found, constraints: constraints.len(), candidates_checked: checked, contradicts_bound: contradicts })
}

fn first_constrained(field: &Group, table: &CyclotomicTable<'_>, cs: &[CyclotomicConstraint]) -> Option<Elem> {
    let resolved = resolve_constraints(table, cs);
    find_constrained_element(field, &resolved, SearchBudget::default()).ok().and_then(|r| r.element)
}

/// Runs the constraint chain that produces an asymptotic initial block; `None`
/// as soon as one of the constrained sets is empty.
pub(crate) fn asymptotic_chain(field: &Group, schema: &Schema) -> Result<Option<Vec<Elem>>, SearchError> {
    let table = cube_table(field)?;
    let n = |k: i64| field.from_int(k);
    let c = CyclotomicConstraint::new;
    let fixed = ClassExpr::fixed;
    match (schema.k, schema.b()) {
        (7, 7) if *schema == Schema::fano() => {
            let (i, _) = symbolic_classes(&table);
            let (xs, ys): (Vec<_>, Box<dyn Fn(Elem) -> Vec<CyclotomicConstraint>>) = if i == 0 {
                (
                    vec![c(n(0), fixed(1)), c(n(-1), fixed(1)), c(n(1), fixed(2))],
                    Box::new(move |x| {
                        vec![
                            c(n(-1), fixed(0)),
                            c(field.neg(x), fixed(0)),
                            c(n(1), fixed(1)),
                            c(n(0), fixed(2)),
                            c(x, fixed(2)),
                        ]
                    }),
                )
            } else {
                (
                    vec![c(n(-1), fixed(0)), c(n(0), ClassExpr::of_two(1, 0)), c(n(1), ClassExpr::of_two(2, 0))],
                    Box::new(move |x| {
                        vec![
                            c(field.neg(x), fixed(0)),
                            c(n(1), ClassExpr::of_two(1, 0)),
                            c(x, ClassExpr::of_two(1, 0)),
                            c(n(0), ClassExpr::of_two(2, 0)),
                            c(n(-1), ClassExpr::of_two(2, 0)),
                        ]
                    }),
                )
            };
            let Some(x) = first_constrained(field, &table, &xs) else { return Ok(None) };
            let Some(y) = first_constrained(field, &table, &ys(x)) else { return Ok(None) };
            Ok(Some(vec![n(0), n(1), n(-1), x, field.neg(x), y, field.neg(y)]))
        }
        (9, 12) if *schema == Schema::hesse() => {
            let i1 = ClassExpr::of_two(1, 1);
            let i2 = ClassExpr::of_two(1, 2);
            let j1 = ClassExpr::of_three(1, 1);
            let j2 = ClassExpr::of_three(1, 2);
            let b3 = match first_constrained(
                field,
                &table,
                &[c(n(0), fixed(0)), c(n(3), fixed(0)), c(n(1), fixed(1)), c(n(2), fixed(2))],
            ) {
                Some(x) => x,
                None => return Ok(None),
            };
            let b4 = match first_constrained(
                field,
                &table,
                &[c(b3, fixed(0)), c(n(0), fixed(1)), c(n(2), fixed(1)), c(n(1), fixed(2)), c(n(3), fixed(2))],
            ) {
                Some(x) => x,
                None => return Ok(None),
            };
            let b5 = match first_constrained(
                field,
                &table,
                &[
                    c(n(0), i1),
                    c(n(2), i2),
                    c(b4, fixed(0)),
                    c(n(1), fixed(1)),
                    c(n(3), fixed(1)),
                    c(b3, fixed(2)),
                ],
            ) {
                Some(x) => x,
                None => return Ok(None),
            };
            let b6 = match first_constrained(
                field,
                &table,
                &[
                    c(n(0), j1),
                    c(n(3), j2),
                    c(b5, fixed(0)),
                    c(n(2), fixed(1)),
                    c(b3, fixed(1)),
                    c(n(1), fixed(2)),
                    c(b4, fixed(2)),
                ],
            ) {
                Some(x) => x,
                None => return Ok(None),
            };
            let b7 = match first_constrained(
                field,
                &table,
                &[
                    c(b6, fixed(0)),
                    c(n(0), fixed(1)),
                    c(b4, fixed(1)),
                    c(n(2), fixed(2)),
                    c(b3, fixed(2)),
                    c(b5, fixed(2)),
                    c(n(1), i1),
                    c(n(3), i2),
                ],
            ) {
                Some(x) => x,
                None => return Ok(None),
            };
            Ok(Some(vec![n(0), n(1), n(2), n(3), b3, b4, b5, b6, b7]))
        }
        _ => Err(SearchError::UnsupportedSchema(schema.name.clone())),
    }
}

/// Initial block from the constraint chains that work for every large `q`:
/// Fano `(0, 1, -1, x, -x, y, -y)`, Hesse with prefix `(b_inf, b_0, b_1, b_2) =
/// (0, 1, 2, 3)`. `None` when some constrained set is empty, which can only
/// happen for small fields.
pub fn asymptotic_initial_block(field: &Group, schema: &Schema) -> Result<Option<OrderedBlock>, SearchError> {
    let Some(points) = asymptotic_chain(field, schema)? else { return Ok(None) };
    let table = cube_table(field)?;
    if first_bad_line(&table, schema, &points).is_some() {
        return Ok(None);
    }
    Ok(Some(OrderedBlock::new(schema, points)?))
}

/// Block shapes that depend on a single field element `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParametricForm {
    /// `(0, 1, 2, x, x+1, x^2+x, 2x)`
    FanoAffine,
    /// `(1, x, x^2, ..., x^6)`
    FanoPowers,
    /// `(0, 1, x, x^2, ..., x^7)` with `b_inf = 0`
    HessePowers,
}

impl std::str::FromStr for ParametricForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fano-affine" => Ok(ParametricForm::FanoAffine),
            "fano-powers" => Ok(ParametricForm::FanoPowers),
            "hesse-powers" => Ok(ParametricForm::HessePowers),
            other => Err(format!("unknown form `{other}` (fano-affine, fano-powers, hesse-powers)")),
        }
    }
}

impl ParametricForm {
    pub fn schema(self) -> Schema {
        match self {
            ParametricForm::FanoAffine | ParametricForm::FanoPowers => Schema::fano(),
            ParametricForm::HessePowers => Schema::hesse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ParametricForm::FanoAffine => "fano-affine",
            ParametricForm::FanoPowers => "fano-powers",
            ParametricForm::HessePowers => "hesse-powers",
        }
    }

    /// The block `B(x)` in schema position order.
    pub fn block(self, field: &Group, x: Elem) -> Vec<Elem> {
        let n = |k: i64| field.from_int(k);
        match self {
            ParametricForm::FanoAffine => {
                let x1 = field.add(x, n(1));
                vec![n(0), n(1), n(2), x, x1, field.mul(x, x1), field.add(x, x)]
            }
            ParametricForm::FanoPowers => (0..7).map(|e| field.pow(x, e)).collect(),
            ParametricForm::HessePowers => std::iter::once(n(0)).chain((0..8).map(|e| field.pow(x, e))).collect(),
        }
    }

    /// The reduced set of lines that decides the predicate for blocks of this
    /// form with distinct entries; every other line is a translate or a
    /// multiple of one of these.
    pub fn shortcut_lines(self, field: &Group, x: Elem) -> Vec<[Elem; 3]> {
        let n = |k: i64| field.from_int(k);
        let p = |e: u64| field.pow(x, e);
        match self {
            ParametricForm::FanoAffine => {
                let x2x = field.mul(x, field.add(x, n(1)));
                vec![[n(0), n(1), x], [n(2), x, x2x], [x2x, field.add(x, x), n(1)]]
            }
            ParametricForm::FanoPowers => vec![[n(1), x, p(3)], [p(4), p(5), n(1)], [p(6), n(1), p(2)]],
            ParametricForm::HessePowers => {
                vec![[n(1), x, p(3)], [p(5), p(6), n(1)], [p(7), n(1), p(2)], [n(0), n(1), p(4)]]
            }
        }
    }
}

fn distinct(points: &[Elem]) -> bool {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Fast filter: distinct entries plus the reduced line checks.
pub fn parametric_shortcut(table: &CyclotomicTable<'_>, form: ParametricForm, x: Elem) -> bool {
    let field = table.field();
    let block = form.block(field, x);
    distinct(&block) && form.shortcut_lines(field, x).iter().all(|[a, b, c]| even3(table, *a, *b, *c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricHit {
    pub x: Elem,
    pub block: Vec<Elem>,
}

/// Whether `B(x)` is an initial block, via the shortcut filter confirmed by the
/// full predicate.
pub fn parametric_accepts(field: &Group, form: ParametricForm, x: Elem) -> Result<bool, SearchError> {
    let table = cube_table(field)?;
    Ok(parametric_shortcut(&table, form, x) && first_bad_line(&table, &form.schema(), &form.block(field, x)).is_none())
}

/// Smallest `x` (canonical order) for which `B(x)` is an initial block.
pub fn parametric_search(field: &Group, form: ParametricForm, budget: SearchBudget) -> Result<Option<ParametricHit>, SearchError> {
    let table = cube_table(field)?;
    let schema = form.schema();
    Ok(first_match(budget.bound(field.order()), budget.chunk_size, |idx| {
        let x = Elem(idx);
        if !parametric_shortcut(&table, form, x) {
            return None;
        }
        let block = form.block(field, x);
        first_bad_line(&table, &schema, &block).is_none().then_some(ParametricHit { x, block })
    }))
}

/// Depth-first search for an initial block with the given leading entries.
/// Remaining positions are filled in order with candidates in canonical order;
/// each line is checked as soon as all its positions are filled. The result
/// is the lexicographically smallest completion.
pub fn prefix_search(field: &Group, schema: &Schema, prefix: &[Elem], budget: SearchBudget) -> Result<Option<OrderedBlock>, SearchError> {
    if schema.h != 3 {
        return Err(SearchError::UnsupportedSchema(schema.name.clone()));
    }
    let table = cube_table(field)?;
    let k = schema.k;
    if prefix.len() > k || !distinct(prefix) {
        return Err(SchemaError::WrongLength { expected: k, got: prefix.len() }.into());
    }
    // Lines completed when position p is filled (all other positions < p).
    let completes: Vec<Vec<[usize; 3]>> = (0..k)
        .map(|p| {
            schema
                .lines()
                .iter()
                .filter(|l| l.iter().max() == Some(&p))
                .map(|l| [l[0], l[1], l[2]])
                .collect()
        })
        .collect();
    let lines_ok = |pts: &[Elem], upto: usize| {
        (0..upto).all(|p| completes[p].iter().all(|l| even3(&table, pts[l[0]], pts[l[1]], pts[l[2]])))
    };
    if !distinct(prefix) || !lines_ok(prefix, prefix.len()) {
        return Ok(None);
    }
    if prefix.len() == k {
        return Ok(Some(OrderedBlock::new(schema, prefix.to_vec())?));
    }

    fn dfs(
        table: &CyclotomicTable<'_>,
        completes: &[Vec<[usize; 3]>],
        pts: &mut Vec<Elem>,
        bound: u32,
    ) -> bool {
        let p = pts.len();
        if p == completes.len() {
            return true;
        }
        for idx in 0..bound {
            let x = Elem(idx);
            if pts.contains(&x) {
                continue;
            }
            pts.push(x);
            if completes[p].iter().all(|l| even3(table, pts[l[0]], pts[l[1]], pts[l[2]])) && dfs(table, completes, pts, bound) {
                return true;
            }
            pts.pop();
        }
        false
    }

    let bound = budget.bound(field.order());
    let p0 = prefix.len();
    let found = first_match(bound, 1, |idx| {
        let x = Elem(idx);
        if prefix.contains(&x) {
            return None;
        }
        let mut pts = prefix.to_vec();
        pts.push(x);
        if !completes[p0].iter().all(|l| even3(&table, pts[l[0]], pts[l[1]], pts[l[2]])) {
            return None;
        }
        dfs(&table, &completes, &mut pts, bound).then_some(pts)
    });
    Ok(found.map(|pts| OrderedBlock { points: pts }))
}

/// How an initial block was obtained by [`find_initial_block`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialBlockHit {
    pub method: String,
    pub x: Option<Elem>,
    pub block: Vec<Elem>,
}

/// General initial-block search: the parametric forms first, then the
/// prefix search (`(0,1,2)` for Fano, `(0,1,2,3)` for Hesse).
pub fn find_initial_block(field: &Group, schema: &Schema, budget: SearchBudget) -> Result<Option<InitialBlockHit>, SearchError> {
    let (forms, prefix): (&[ParametricForm], Vec<i64>) = if *schema == Schema::fano() {
        (&[ParametricForm::FanoAffine, ParametricForm::FanoPowers], vec![0, 1, 2])
    } else if *schema == Schema::hesse() {
        (&[ParametricForm::HessePowers], vec![0, 1, 2, 3])
    } else {
        (&[], vec![0, 1])
    };
    for &form in forms {
        if let Some(hit) = parametric_search(field, form, budget)? {
            return Ok(Some(InitialBlockHit { method: form.name().into(), x: Some(hit.x), block: hit.block }));
        }
    }
    let prefix: Vec<Elem> = prefix.into_iter().map(|n| field.from_int(n)).collect();
    Ok(prefix_search(field, schema, &prefix, budget)?
        .map(|b| InitialBlockHit { method: "prefix".into(), x: None, block: b.points }))
}

/// Primes `p = 1 (mod 6)` up to `limit` for which 2 is not a cube while 6 and
/// 20 are; for these `(0,1,...,6)` is a Fano initial block.
pub fn proposition_primes(limit: u64) -> Vec<u64> {
    (7..=limit)
        .step_by(6)
        .filter(|&p| crate::algebra::is_prime(p))
        .filter(|&p| {
            let f = Group::prime_field(p).expect("prime");
            let t = CyclotomicTable::new(&f, 3).expect("p = 1 mod 6");
            let cls = |n: i64| t.index_unchecked(f.from_int(n));
            cls(2) != 0 && cls(6) == 0 && cls(20) == 0
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExhaustiveMode {
    /// Visit the whole normalized tree and count every solution.
    Count,
    /// Stop at the first solution.
    Existence,
}

/// Record of an exhaustive run: what was fixed, how the tree was split, how
/// much of it was visited, and what was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionCertificate {
    pub v: u64,
    pub schema: String,
    pub blocks_per_family: usize,
    pub mode: ExhaustiveMode,
    pub normalizations: Vec<String>,
    pub split_depth: usize,
    pub subtrees: usize,
    pub nodes_visited: u64,
    pub solutions: u64,
    /// True when every subtree was searched to completion.
    pub exhausted: bool,
    /// First solution found (smallest subtree), as blocks of residues.
    pub witness: Option<Vec<Vec<u32>>>,
}

pub const MAX_EXHAUSTIVE_ORDER: u64 = 19;

/// Search state for KDFs over `Z_v`: positions are filled block by block; every
/// placed point adds the differences it forms with already placed points of
/// the same line into that line's color mask, and a repeat prunes the branch.
struct Exhaustive<'a> {
    v: u32,
    schema: &'a Schema,
    t: usize,
    /// For each position: (line color, other position) pairs with the other
    /// position filled earlier.
    back_pairs: Vec<Vec<(usize, usize)>>,
    /// Canonical orbit minimum of every residue under multiplication by units.
    orbit_min: Vec<u32>,
}

#[derive(Clone)]
struct State {
    blocks: Vec<Vec<u32>>,
    masks: Vec<u64>,
}

impl<'a> Exhaustive<'a> {
    fn new(v: u32, schema: &'a Schema, t: usize) -> Self {
        let back_pairs = (0..schema.k)
            .map(|p| {
                let mut out = Vec::new();
                for (color, line) in schema.lines().iter().enumerate() {
                    if line.contains(&p) {
                        out.extend(line.iter().filter(|&&q| q < p).map(|&q| (color, q)));
                    }
                }
                out
            })
            .collect();
        let units: Vec<u32> = (1..v).filter(|&u| gcd(u, v) == 1).collect();
        let orbit_min = (0..v).map(|x| units.iter().map(|&u| (u as u64 * x as u64 % v as u64) as u32).min().unwrap_or(x)).collect();
        Exhaustive { v, schema, t, back_pairs, orbit_min }
    }

    fn total_positions(&self) -> usize {
        self.t * self.schema.k
    }

    /// Tries to place `x` at the next free slot; returns the mask bits added.
    fn place(&self, state: &mut State, x: u32) -> Option<Vec<(usize, u64)>> {
        let bi = state.blocks.iter().position(|b| b.len() < self.schema.k).expect("free slot");
        let p = state.blocks[bi].len();
        if p == 0 && x != 0 {
            return None;
        }
        if bi == 0 && p == 1 && self.orbit_min[x as usize] != x {
            return None;
        }
        if state.blocks[bi].contains(&x) {
            return None;
        }
        if bi >= 2 && p >= 1 {
            // blocks after the first are kept in strictly increasing order
            let prev = &state.blocks[bi - 1];
            let mut cur = state.blocks[bi].clone();
            cur.push(x);
            if cur.as_slice() < &prev[..cur.len()] {
                return None;
            }
            if cur.len() == self.schema.k && cur == *prev {
                return None;
            }
        }
        let mut added: Vec<(usize, u64)> = Vec::new();
        for &(color, q) in &self.back_pairs[p] {
            let y = state.blocks[bi][q];
            let d = (x + self.v - y) % self.v;
            let bits = (1u64 << d) | (1u64 << (self.v - d));
            if d == 0 || state.masks[color] & bits != 0 || d * 2 == self.v {
                for &(c, b) in &added {
                    state.masks[c] &= !b;
                }
                return None;
            }
            state.masks[color] |= bits;
            added.push((color, bits));
        }
        state.blocks[bi].push(x);
        Some(added)
    }

    fn unplace(&self, state: &mut State, added: Vec<(usize, u64)>) {
        let bi = state.blocks.iter().rposition(|b| !b.is_empty()).expect("placed point");
        state.blocks[bi].pop();
        for (c, b) in added {
            state.masks[c] &= !b;
        }
    }

    fn depth(state: &State) -> usize {
        state.blocks.iter().map(Vec::len).sum()
    }

    /// Collects the states after `depth` more placements.
    fn frontier(&self, state: &mut State, depth: usize, out: &mut Vec<State>, nodes: &mut u64) {
        if depth == 0 || Self::depth(state) == self.total_positions() {
            out.push(state.clone());
            return;
        }
        for x in 0..self.v {
            if let Some(added) = self.place(state, x) {
                *nodes += 1;
                self.frontier(state, depth - 1, out, nodes);
                self.unplace(state, added);
            }
        }
    }

    fn dfs(&self, state: &mut State, nodes: &mut u64, solutions: &mut u64, witness: &mut Option<Vec<Vec<u32>>>, stop: &AtomicBool, mode: ExhaustiveMode) {
        if Self::depth(state) == self.total_positions() {
            *solutions += 1;
            if witness.is_none() {
                *witness = Some(state.blocks.clone());
            }
            if mode == ExhaustiveMode::Existence {
                stop.store(true, Ordering::Relaxed);
            }
            return;
        }
        for x in 0..self.v {
            if mode == ExhaustiveMode::Existence && stop.load(Ordering::Relaxed) {
                return;
            }
            if let Some(added) = self.place(state, x) {
                *nodes += 1;
                self.dfs(state, nodes, solutions, witness, stop, mode);
                self.unplace(state, added);
            }
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exhaustive search for KDFs over `Z_v` with the given schema, up to these
/// normalizations: every block starts with 0 (each block may be translated
/// independently); the first block's second point is the smallest element of
/// its orbit under multiplication by units (global scaling); blocks after the
/// first are in strictly increasing lexicographic order (they may be permuted).
pub fn exhaustive_nonexistence(v: u64, schema: &Schema, mode: ExhaustiveMode) -> Result<ExhaustionCertificate, SearchError> {
    const SPLIT_DEPTH: usize = 3;
    if !(7..=MAX_EXHAUSTIVE_ORDER).contains(&v) {
        return Err(SearchError::UnsupportedOrder(v));
    }
    let t = schema.blocks_for_order(v).ok_or(SearchError::UnsupportedOrder(v))? as usize;
    if t == 0 {
        return Err(SearchError::UnsupportedOrder(v));
    }
    let search = Exhaustive::new(v as u32, schema, t);
    let mut root = State { blocks: vec![Vec::new(); t], masks: vec![0; schema.b()] };
    let mut frontier = Vec::new();
    let mut nodes = 0u64;
    search.frontier(&mut root, SPLIT_DEPTH, &mut frontier, &mut nodes);

    let stop = AtomicBool::new(false);
    let total_nodes = AtomicU64::new(nodes);
    let total_solutions = AtomicU64::new(0);
    let witnesses: Mutex<Vec<(usize, Vec<Vec<u32>>)>> = Mutex::new(Vec::new());
    frontier.into_par_iter().enumerate().for_each(|(i, mut state)| {
        if mode == ExhaustiveMode::Existence && stop.load(Ordering::Relaxed) {
            return;
        }
        let (mut n, mut s, mut w) = (0u64, 0u64, None);
        search.dfs(&mut state, &mut n, &mut s, &mut w, &stop, mode);
        total_nodes.fetch_add(n, Ordering::Relaxed);
        total_solutions.fetch_add(s, Ordering::Relaxed);
        if let Some(w) = w {
            witnesses.lock().expect("witness lock").push((i, w));
        }
    });
    let mut witnesses = witnesses.into_inner().expect("witness lock");
    witnesses.sort_by_key(|(i, _)| *i);
    let subtrees = {
        let mut f = Vec::new();
        let mut n = 0;
        search.frontier(&mut State { blocks: vec![Vec::new(); t], masks: vec![0; schema.b()] }, SPLIT_DEPTH, &mut f, &mut n);
        f.len()
    };
    let solutions = total_solutions.load(Ordering::Relaxed);
    Ok(ExhaustionCertificate {
        v,
        schema: schema.name.clone(),
        blocks_per_family: t,
        mode,
        normalizations: vec![
            "every block starts with 0 (independent translation of each block)".into(),
            "second point of the first block is minimal in its orbit under unit multiplication (global scaling)".into(),
            "blocks after the first are in strictly increasing lexicographic order (block permutation)".into(),
        ],
        split_depth: SPLIT_DEPTH,
        subtrees,
        nodes_visited: total_nodes.load(Ordering::Relaxed),
        solutions,
        exhausted: mode == ExhaustiveMode::Count || solutions == 0,
        witness: witnesses.into_iter().next().map(|(_, w)| w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::verify_kdf;

    fn e(xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn evenly_distributed_examples() {
        let f19 = Group::prime_field(19).unwrap();
        let t19 = CyclotomicTable::new(&f19, 3).unwrap();
        assert!(evenly_distributed(&t19, &e(&[0, 1, 4])).unwrap());
        let f7 = Group::prime_field(7).unwrap();
        let t7 = CyclotomicTable::new(&f7, 3).unwrap();
        assert!(evenly_distributed(&t7, &e(&[0, 1, 3])).unwrap());
        for a in 1..19 {
            let line = [Elem(0), Elem(a), f19.mul(Elem(2), Elem(a))];
            assert!(!evenly_distributed(&t19, &line).unwrap());
        }
        let f13 = Group::prime_field(13).unwrap();
        let t13 = CyclotomicTable::new(&f13, 6).unwrap();
        assert!(evenly_distributed(&t13, &e(&[0, 1, 3])).is_err());
    }

    #[test]
    fn sign_and_relabel_independence() {
        for q in [7u64, 13, 19] {
            let f = Group::prime_field(q).unwrap();
            let t = CyclotomicTable::new(&f, 3).unwrap();
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    let c = (a * 5 + b * 3 + 1) % q as u32;
                    let base = even3(&t, Elem(a), Elem(b), Elem(c));
                    assert_eq!(base, even3(&t, Elem(b), Elem(a), Elem(c)));
                    assert_eq!(base, even3(&t, Elem(c), Elem(b), Elem(a)));
                }
            }
        }
    }

    #[test]
    fn class_expr_parsing() {
        assert_eq!(ClassExpr::parse("i+1").unwrap(), ClassExpr::of_two(1, 1));
        assert_eq!(ClassExpr::parse("2i").unwrap(), ClassExpr::of_two(2, 0));
        assert_eq!(ClassExpr::parse("j+2").unwrap(), ClassExpr::of_three(1, 2));
        assert_eq!(ClassExpr::parse("2").unwrap(), ClassExpr::fixed(2));
        assert!(ClassExpr::parse("k").is_err());
        assert_eq!(ClassExpr::of_two(1, 2).resolve(2, 0), 1);
    }

    #[test]
    fn example_19_from_its_initial_block() {
        let f = Arc::new(Group::prime_field(19).unwrap());
        let kdf = generate_kdf_from_initial_block(f, &Schema::fano(), &e(&[0, 1, 2, 4, 5, 11, 8]), TransversalMode::SixthPowers)
            .unwrap();
        let blocks: Vec<Vec<Elem>> = kdf.flattened();
        assert_eq!(
            blocks,
            vec![e(&[0, 1, 2, 4, 5, 11, 8]), e(&[0, 7, 14, 9, 16, 1, 18]), e(&[0, 11, 3, 6, 17, 7, 12])]
        );
        assert!(verify_kdf(&kdf).unwrap().valid);
    }

    #[test]
    fn fkdf7_and_hkdf19_from_initial_blocks() {
        let f7 = Arc::new(Group::prime_field(7).unwrap());
        let kdf = generate_kdf_from_initial_block(f7, &Schema::fano(), &e(&[0, 1, 2, 3, 4, 5, 6]), TransversalMode::Canonical)
            .unwrap();
        assert_eq!(kdf.blocks.len(), 1);
        assert!(verify_kdf(&kdf).unwrap().valid);

        let f19 = Arc::new(Group::prime_field(19).unwrap());
        let kdf = generate_kdf_from_initial_block(
            f19,
            &Schema::hesse(),
            &e(&[0, 1, 2, 3, 7, 16, 8, 4, 10]),
            TransversalMode::SixthPowers,
        )
        .unwrap();
        assert_eq!(kdf.blocks[1].points, e(&[0, 7, 14, 2, 11, 17, 18, 9, 13]));
        assert!(verify_kdf(&kdf).unwrap().valid);
    }

    #[test]
    fn non_initial_block_is_rejected() {
        let f = Arc::new(Group::prime_field(19).unwrap());
        let err = generate_kdf_from_initial_block(f, &Schema::fano(), &e(&[0, 1, 2, 4, 5, 8, 11]), TransversalMode::Canonical)
            .unwrap_err();
        assert!(matches!(err, SearchError::NotAnInitialBlock { .. }));
    }

    #[test]
    fn constrained_examples() {
        let f19 = Group::prime_field(19).unwrap();
        let r = find_constrained_element(&f19, &[ResolvedConstraint { shift: Elem(0), class: 0 }], SearchBudget::default())
            .unwrap();
        // smallest nonzero cube mod 19
        let smallest_cube = (1..19u32).find(|x| (1..19u32).any(|y| y * y * y % 19 == *x)).unwrap();
        assert_eq!(r.element, Some(Elem(smallest_cube)));

        let f7 = Group::prime_field(7).unwrap();
        let cs = [ResolvedConstraint { shift: Elem(0), class: 0 }, ResolvedConstraint { shift: Elem(1), class: 0 }];
        let brute = (0..7u32).find(|&x| [1u32, 6].contains(&x) && [1u32, 6].contains(&((x + 6) % 7)));
        let r = find_constrained_element(&f7, &cs, SearchBudget::default()).unwrap();
        assert_eq!(r.element.map(|x| x.0), brute);
        assert!(!r.contradicts_bound);

        let r = find_constrained_element(&f19, &[], SearchBudget::default()).unwrap();
        assert_eq!(r.element, Some(Elem(0)));
    }

    #[test]
    fn anomaly_flag_needs_exhaustion_above_bound() {
        // Contradictory constraints: x in class 0 and x in class 1.
        let f = Group::prime_field(43).unwrap();
        let cs = [ResolvedConstraint { shift: Elem(0), class: 0 }, ResolvedConstraint { shift: Elem(0), class: 1 }];
        let r = find_constrained_element(&f, &cs, SearchBudget::default()).unwrap();
        assert_eq!(r.element, None);
        assert!(r.contradicts_bound);
        let r = find_constrained_element(&f, &cs, SearchBudget { max_candidates: Some(10), chunk_size: 4 }).unwrap();
        assert!(!r.contradicts_bound);
    }

    #[test]
    fn pairs_of_constraints_are_satisfiable_above_q2() {
        let mut seed = 12345u64;
        let mut next = |m: u64| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % m
        };
        for q in [43u64, 61, 103] {
            let f = Group::prime_field(q).unwrap();
            for _ in 0..50 {
                let s1 = next(q) as u32;
                let s2 = loop {
                    let s = next(q) as u32;
                    if s != s1 {
                        break s;
                    }
                };
                let cs = [
                    ResolvedConstraint { shift: Elem(s1), class: next(3) as u32 },
                    ResolvedConstraint { shift: Elem(s2), class: next(3) as u32 },
                ];
                let r = find_constrained_element(&f, &cs, SearchBudget::default()).unwrap();
                assert!(r.element.is_some(), "q={q} {cs:?}");
            }
        }
    }

    #[test]
    fn asymptotic_chains_yield_initial_blocks_when_nonempty() {
        let mut fano_found = 0;
        let mut hesse_found = 0;
        for p in (7..3000u64).step_by(6).filter(|&p| crate::algebra::is_prime(p)) {
            let f = Group::prime_field(p).unwrap();
            let t = CyclotomicTable::new(&f, 3).unwrap();
            for (schema, count) in [(Schema::fano(), &mut fano_found), (Schema::hesse(), &mut hesse_found)] {
                if let Some(points) = asymptotic_chain(&f, &schema).unwrap() {
                    assert_eq!(first_bad_line(&t, &schema, &points), None, "p={p} {} {points:?}", schema.name);
                    assert!(distinct(&points));
                    *count += 1;
                }
            }
        }
        assert!(fano_found > 100);
        assert!(hesse_found > 10);
    }

    #[test]
    fn asymptotic_small_fields() {
        let f7 = Group::prime_field(7).unwrap();
        assert_eq!(asymptotic_initial_block(&f7, &Schema::hesse()).unwrap(), None);
        let f19 = Group::prime_field(19).unwrap();
        if let Some(b) = asymptotic_initial_block(&f19, &Schema::fano()).unwrap() {
            assert!(verify_listed_block(&f19, &Schema::fano(), &b.points).unwrap());
        }
        let f11 = Group::prime_field(11).unwrap();
        assert!(matches!(asymptotic_initial_block(&f11, &Schema::fano()), Err(SearchError::BadCongruence(11))));
    }

    #[test]
    fn affine_form_line_identities() {
        let fano = Schema::fano();
        let mut seed = 7u64;
        for _ in 0..1000 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let primes = [7u64, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103];
            let q = primes[(seed >> 40) as usize % primes.len()];
            let f = Group::prime_field(q).unwrap();
            let x = Elem(((seed >> 20) % q) as u32);
            let b = ParametricForm::FanoAffine.block(&f, x);
            let lines = fano.lines_of_points(&b);
            let set = |v: Vec<Elem>| {
                let mut v = v;
                v.sort();
                v
            };
            let shift = |l: &[Elem], s: Elem| set(l.iter().map(|&y| f.add(y, s)).collect());
            let scale = |l: &[Elem], s: Elem| set(l.iter().map(|&y| f.mul(y, s)).collect());
            let one = f.from_int(1);
            assert_eq!(set(lines[1].clone()), shift(&lines[0], one));
            assert_eq!(set(lines[3].clone()), shift(&lines[0], x));
            assert_eq!(set(lines[4].clone()), scale(&lines[0], f.add(x, one)));
            assert_eq!(set(lines[6].clone()), scale(&lines[0], f.from_int(2)));
        }
    }

    #[test]
    fn parametric_examples() {
        let f37 = Group::prime_field(37).unwrap();
        assert!(parametric_accepts(&f37, ParametricForm::FanoAffine, Elem(13)).unwrap());
        let f25 = Group::extension_field(5, &[-3, 0, 1]).unwrap();
        let x = f25.parse_element("4+t").unwrap();
        assert!(parametric_accepts(&f25, ParametricForm::FanoPowers, x).unwrap());
        let f97 = Group::prime_field(97).unwrap();
        assert!(parametric_accepts(&f97, ParametricForm::HessePowers, Elem(14)).unwrap());
        let f13 = Group::prime_field(13).unwrap();
        assert_eq!(parametric_search(&f13, ParametricForm::FanoAffine, SearchBudget::default()).unwrap(), None);

        let hit = parametric_search(&f37, ParametricForm::FanoAffine, SearchBudget::default()).unwrap().unwrap();
        assert!(hit.x <= Elem(13));
        assert!(verify_listed_block(&f37, &Schema::fano(), &hit.block).unwrap());
    }

    #[test]
    fn parametric_search_is_schedule_independent() {
        let f = Group::prime_field(577).unwrap();
        let a = parametric_search(&f, ParametricForm::FanoAffine, SearchBudget { max_candidates: None, chunk_size: 1 }).unwrap();
        let b = parametric_search(&f, ParametricForm::FanoAffine, SearchBudget { max_candidates: None, chunk_size: 10_000 }).unwrap();
        assert_eq!(a, b);
        let sequential = (0..577u32).map(Elem).find(|&x| parametric_accepts(&f, ParametricForm::FanoAffine, x).unwrap());
        assert_eq!(a.map(|h| h.x), sequential);
    }

    #[test]
    fn listed_block_examples() {
        let f31 = Group::prime_field(31).unwrap();
        assert!(verify_listed_block(&f31, &Schema::fano(), &e(&[0, 1, 2, 12, 13, 27, 24])).unwrap());
        assert!(verify_listed_block(&f31, &Schema::hesse(), &e(&[12, 0, 1, 3, 6, 13, 8, 28, 11])).unwrap());
        let f169 = Group::extension_field(13, &[-2, 0, 1]).unwrap();
        let x = f169.parse_element("6+2t").unwrap();
        assert!(verify_listed_block(&f169, &Schema::fano(), &ParametricForm::FanoAffine.block(&f169, x)).unwrap());
    }

    #[test]
    fn proposition_prime_list() {
        assert_eq!(proposition_primes(1000), vec![7, 541, 571, 877, 937]);
        assert_eq!(proposition_primes(100), vec![7]);
        assert!(proposition_primes(6).is_empty());
    }

    #[test]
    fn prefix_search_hesse_small() {
        let f = Group::prime_field(31).unwrap();
        let prefix = e(&[0, 1, 2, 3]);
        if let Some(b) = prefix_search(&f, &Schema::hesse(), &prefix, SearchBudget::default()).unwrap() {
            assert_eq!(&b.points[..4], &prefix[..]);
            assert!(verify_listed_block(&f, &Schema::hesse(), &b.points).unwrap());
        }
        let f43 = Group::prime_field(43).unwrap();
        let b = prefix_search(&f43, &Schema::fano(), &e(&[0, 1, 2]), SearchBudget::default()).unwrap().unwrap();
        assert!(verify_listed_block(&f43, &Schema::fano(), &b.points).unwrap());
    }

    #[test]
    fn exhaustive_small_orders() {
        let fano = Schema::fano();
        let c7 = exhaustive_nonexistence(7, &fano, ExhaustiveMode::Count).unwrap();
        assert!(c7.solutions >= 1);
        // A = (0,...,6) up to scaling: some unit multiple of it has b1 = 1, which is A itself.
        assert!(c7.witness.is_some());
        let c19 = exhaustive_nonexistence(19, &fano, ExhaustiveMode::Existence).unwrap();
        assert!(c19.solutions >= 1);
        let w = c19.witness.unwrap();
        let g = Arc::new(Group::cyclic(19).unwrap());
        let kdf = Kdf::new(g, fano.clone(), w.iter().map(|b| b.iter().map(|&x| Elem(x)).collect()).collect()).unwrap();
        assert!(verify_kdf(&kdf).unwrap().valid);
        assert!(matches!(exhaustive_nonexistence(25, &fano, ExhaustiveMode::Count), Err(SearchError::UnsupportedOrder(25))));
        assert!(matches!(exhaustive_nonexistence(9, &fano, ExhaustiveMode::Count), Err(SearchError::UnsupportedOrder(9))));
    }

    #[test]
    fn normalizations_preserve_validity() {
        // Symmetries used to normalize the exhaustive search keep the known FKDF(19) valid.
        let g = Arc::new(Group::prime_field(19).unwrap());
        let blocks = vec![e(&[0, 1, 2, 4, 5, 11, 8]), e(&[0, 7, 14, 9, 16, 1, 18]), e(&[0, 11, 3, 6, 17, 7, 12])];
        let check = |bs: Vec<Vec<Elem>>| verify_kdf(&Kdf::new(g.clone(), Schema::fano(), bs).unwrap()).unwrap().valid;
        assert!(check(blocks.clone()));
        // translate a single block
        let mut moved = blocks.clone();
        moved[1] = moved[1].iter().map(|&x| g.add(x, Elem(5))).collect();
        assert!(check(moved));
        // scale everything by a unit
        for u in 1..19 {
            assert!(check(blocks.iter().map(|b| b.iter().map(|&x| g.mul(x, Elem(u))).collect()).collect()));
        }
        // permute blocks
        let mut permuted = blocks.clone();
        permuted.swap(0, 2);
        assert!(check(permuted));
    }
}
