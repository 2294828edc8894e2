//! Difference families, kaleidoscopic difference families, their development
//! into explicit kaleidoscopes, and the pair-color incidence check.
//!
//! Verification functions return reports; mathematically invalid input is data,
//! not an error. Errors are reserved for malformed input (wrong block sizes,
//! repeated points, out-of-range indices).

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, Group};
use crate::schema::{OrderedBlock, Schema, SchemaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("set repeats the element {0}")]
    DuplicateElements(Elem),
    #[error("block {block} has {got} points, expected {expected}")]
    BlockSize { block: usize, expected: usize, got: usize },
    #[error("element {0} is not in the group")]
    ElementOutOfRange(Elem),
    #[error("family is not a kaleidoscopic difference family (failing colors {failing_colors:?})")]
    InvalidKdf { failing_colors: Vec<usize> },
    #[error("input is not a 2-(v,k,1) design: {0}")]
    NotAUnitalDesign(String),
    #[error("bit vector {0:?} does not have length {1}")]
    BadVectorLength(String, usize),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// All ordered differences `x - y` of a set, sorted by canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferenceMultiset {
    pub entries: Vec<Elem>,
}

impl DifferenceMultiset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_distinct(group: &Group, set: &[Elem]) -> Result<(), DesignError> {
    let mut seen = BTreeSet::new();
    for &x in set {
        if !group.contains(x) {
            return Err(DesignError::ElementOutOfRange(x));
        }
        if !seen.insert(x) {
            return Err(DesignError::DuplicateElements(x));
        }
    }
    Ok(())
}

pub fn delta(group: &Group, set: &[Elem]) -> Result<DifferenceMultiset, DesignError> {
    check_distinct(group, set)?;
    let mut entries = Vec::with_capacity(set.len() * set.len().saturating_sub(1));
    for (i, &x) in set.iter().enumerate() {
        for (j, &y) in set.iter().enumerate() {
            if i != j {
                entries.push(group.sub(x, y));
            }
        }
    }
    entries.sort_unstable();
    Ok(DifferenceMultiset { entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfReport {
    pub valid: bool,
    pub lambda: usize,
    /// Nonzero elements covered fewer than `lambda` times.
    pub under_covered: Vec<Elem>,
    /// Nonzero elements covered more than `lambda` times.
    pub over_covered: Vec<Elem>,
    /// `coverage[x]` = multiplicity of `x` in the union of the difference lists.
    #[serde(skip)]
    pub coverage: Vec<u32>,
}

/// Checks whether the blocks form a `(G, k, lambda)` difference family.
pub fn verify_df(group: &Group, family: &[Vec<Elem>], k: usize, lambda: usize) -> Result<DfReport, DesignError> {
    let mut coverage = vec![0u32; group.order() as usize];
    for (i, block) in family.iter().enumerate() {
        if block.len() != k {
            return Err(DesignError::BlockSize { block: i, expected: k, got: block.len() });
        }
        check_distinct(group, block)?;
        for (a, &x) in block.iter().enumerate() {
            for (b, &y) in block.iter().enumerate() {
                if a != b {
                    coverage[group.sub(x, y).index()] += 1;
                }
            }
        }
    }
    let mut under = Vec::new();
    let mut over = Vec::new();
    for (x, &c) in coverage.iter().enumerate().skip(1) {
        match (c as usize).cmp(&lambda) {
            std::cmp::Ordering::Less => under.push(Elem(x as u32)),
            std::cmp::Ordering::Greater => over.push(Elem(x as u32)),
            std::cmp::Ordering::Equal => {}
        }
    }
    Ok(DfReport { valid: under.is_empty() && over.is_empty(), lambda, under_covered: under, over_covered: over, coverage })
}

/// Ordered base blocks over a group, read through a schema.
#[derive(Debug, Clone)]
pub struct Kdf {
    pub group: Arc<Group>,
    pub schema: Schema,
    pub blocks: Vec<OrderedBlock>,
    /// Free-form reproducibility data (initial block, transversal, primitive element...).
    pub provenance: serde_json::Map<String, serde_json::Value>,
}

impl Kdf {
    pub fn new(group: Arc<Group>, schema: Schema, blocks: Vec<Vec<Elem>>) -> Result<Kdf, DesignError> {
        let blocks = blocks
            .into_iter()
            .map(|pts| {
                if let Some(&bad) = pts.iter().find(|&&x| !group.contains(x)) {
                    return Err(DesignError::ElementOutOfRange(bad));
                }
                Ok(OrderedBlock::new(&schema, pts)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Kdf { group, schema, blocks, provenance: Default::default() })
    }

    /// The `j`-th lines of all blocks.
    pub fn color_class(&self, j: usize) -> Vec<Vec<Elem>> {
        let positions = self.schema.line(j);
        self.blocks.iter().map(|b| positions.iter().map(|&i| b.points[i]).collect()).collect()
    }

    /// The blocks as unordered sets, for difference-family checks.
    pub fn flattened(&self) -> Vec<Vec<Elem>> {
        self.blocks.iter().map(|b| b.points.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KdfReport {
    pub valid: bool,
    /// Whether the blocks form a `(v, k, b)` difference family.
    pub underlying_valid: bool,
    pub failing_colors: Vec<usize>,
    pub color_reports: Vec<DfReport>,
}

pub fn verify_kdf(kdf: &Kdf) -> Result<KdfReport, DesignError> {
    let underlying = verify_df(&kdf.group, &kdf.flattened(), kdf.schema.k, kdf.schema.lambda_underlying())?;
    let mut failing = Vec::new();
    let mut reports = Vec::with_capacity(kdf.schema.b());
    for j in 0..kdf.schema.b() {
        let r = verify_df(&kdf.group, &kdf.color_class(j), kdf.schema.h, 1)?;
        if !r.valid {
            failing.push(j);
        }
        reports.push(r);
    }
    Ok(KdfReport {
        valid: failing.is_empty() && underlying.valid,
        underlying_valid: underlying.valid,
        failing_colors: failing,
        color_reports: reports,
    })
}

/// One colored plane: `points` in schema position order, and optionally a
/// color per schema line (identity when absent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plane {
    pub points: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
}

impl Plane {
    pub fn new(points: Vec<u32>) -> Plane {
        Plane { points, colors: None }
    }

    pub fn color_of_line(&self, line: usize) -> usize {
        self.colors.as_ref().map_or(line, |c| c[line])
    }
}

/// A set of colored planes on the points `0..v`. When built from a group the
/// points are canonical element indices.
#[derive(Debug, Clone)]
pub struct Kaleidoscope {
    pub v: usize,
    pub group: Option<Arc<Group>>,
    pub schema: Schema,
    pub planes: Vec<Plane>,
}

impl Kaleidoscope {
    fn check_planes(&self) -> Result<(), DesignError> {
        let b = self.schema.b();
        for (i, plane) in self.planes.iter().enumerate() {
            if plane.points.len() != self.schema.k {
                return Err(DesignError::BlockSize { block: i, expected: self.schema.k, got: plane.points.len() });
            }
            let mut seen = BTreeSet::new();
            for &x in &plane.points {
                if x as usize >= self.v {
                    return Err(DesignError::ElementOutOfRange(Elem(x)));
                }
                if !seen.insert(x) {
                    return Err(DesignError::DuplicateElements(Elem(x)));
                }
            }
            if let Some(colors) = &plane.colors {
                let mut sorted = colors.clone();
                sorted.sort_unstable();
                if sorted != (0..b).collect::<Vec<_>>() {
                    return Err(DesignError::Malformed(format!("plane {i} colors are not a permutation of 0..{b}")));
                }
            }
        }
        Ok(())
    }
}

/// Index of the unordered pair `{a, b}` (`a != b`) in a packed triangle.
#[inline]
fn pair_index(v: usize, a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo * (2 * v - lo - 1) / 2 + (hi - lo - 1)
}

fn pair_from_index(v: usize, mut idx: usize) -> (usize, usize) {
    let mut lo = 0;
    loop {
        let row = v - lo - 1;
        if idx < row {
            return (lo, lo + 1 + idx);
        }
        idx -= row;
        lo += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceViolation {
    pub pair: (usize, usize),
    pub color: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KaleidoscopeReport {
    pub valid: bool,
    pub v: usize,
    pub colors: usize,
    pub planes: usize,
    pub first_violation: Option<IncidenceViolation>,
    /// Number of (pair, color) cells whose count differs from 1.
    pub violations: usize,
}

/// Every (pair, color) must occur in exactly one plane's line of that color.
pub fn verify_kaleidoscope(k: &Kaleidoscope) -> Result<KaleidoscopeReport, DesignError> {
    k.check_planes()?;
    let v = k.v;
    let b = k.schema.b();
    let pairs = v * v.saturating_sub(1) / 2;
    let mut counts = vec![0u8; pairs * b];
    for plane in &k.planes {
        for (i, line) in k.schema.lines().iter().enumerate() {
            let color = plane.color_of_line(i);
            for (a, &x) in line.iter().enumerate() {
                for &y in &line[a + 1..] {
                    let cell = pair_index(v, plane.points[x] as usize, plane.points[y] as usize) * b + color;
                    counts[cell] = counts[cell].saturating_add(1);
                }
            }
        }
    }
    let mut first = None;
    let mut violations = 0;
    for (cell, &c) in counts.iter().enumerate() {
        if c != 1 {
            violations += 1;
            if first.is_none() {
                first = Some(IncidenceViolation { pair: pair_from_index(v, cell / b), color: cell % b, count: c as usize });
            }
        }
    }
    Ok(KaleidoscopeReport { valid: violations == 0, v, colors: b, planes: k.planes.len(), first_violation: first, violations })
}

/// Whether the planes, colors forgotten, form a 2-(v, k, lambda) design.
pub fn is_underlying_design(k: &Kaleidoscope, lambda: usize) -> bool {
    let v = k.v;
    let mut counts = vec![0usize; v * v.saturating_sub(1) / 2];
    for plane in &k.planes {
        for (a, &x) in plane.points.iter().enumerate() {
            for &y in &plane.points[a + 1..] {
                counts[pair_index(v, x as usize, y as usize)] += 1;
            }
        }
    }
    counts.iter().all(|&c| c == lambda)
}

/// Translates every block by every group element; line `j` of each translate
/// gets color `j`.
pub fn develop(kdf: &Kdf) -> Result<Kaleidoscope, DesignError> {
    let report = verify_kdf(kdf)?;
    if !report.valid {
        return Err(DesignError::InvalidKdf { failing_colors: report.failing_colors });
    }
    Ok(develop_unchecked(kdf))
}

/// Development without the validity check (used to exhibit broken inputs).
pub fn develop_unchecked(kdf: &Kdf) -> Kaleidoscope {
    let g = &kdf.group;
    let mut planes = Vec::with_capacity(kdf.blocks.len() * g.order() as usize);
    for block in &kdf.blocks {
        for shift in g.elements() {
            planes.push(Plane::new(block.points.iter().map(|&x| g.add(x, shift).0).collect()));
        }
    }
    Kaleidoscope { v: g.order() as usize, group: Some(kdf.group.clone()), schema: kdf.schema.clone(), planes }
}

/// A `(v, K, 1)` pairwise balanced design on the points `0..v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseBalancedDesign {
    pub v: usize,
    pub blocks: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbdReport {
    pub valid: bool,
    pub block_sizes: Vec<usize>,
    /// First pair not covered exactly once, with its count.
    pub first_violation: Option<((usize, usize), usize)>,
    pub violations: usize,
}

impl PairwiseBalancedDesign {
    /// Text format: a `v=<n>` line, then one block per line as
    /// space-separated point indices. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<PairwiseBalancedDesign, DesignError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| DesignError::Malformed("empty design file".into()))?;
        let v: usize = header
            .strip_prefix("v=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| DesignError::Malformed(format!("expected `v=<n>`, got `{header}`")))?;
        let blocks = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|_| DesignError::Malformed(format!("bad point `{t}`"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pbd = PairwiseBalancedDesign { v, blocks };
        pbd.check_structure()?;
        Ok(pbd)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("v={}\n", self.v);
        for b in &self.blocks {
            out.push_str(&b.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }

    fn check_structure(&self) -> Result<(), DesignError> {
        for block in &self.blocks {
            let mut seen = BTreeSet::new();
            for &x in block {
                if x as usize >= self.v {
                    return Err(DesignError::ElementOutOfRange(Elem(x)));
                }
                if !seen.insert(x) {
                    return Err(DesignError::DuplicateElements(Elem(x)));
                }
            }
        }
        Ok(())
    }
}

/// Every pair of points must lie in exactly one block.
pub fn verify_pbd(pbd: &PairwiseBalancedDesign) -> Result<PbdReport, DesignError> {
    pbd.check_structure()?;
    let v = pbd.v;
    let mut counts = vec![0usize; v * v.saturating_sub(1) / 2];
    for block in &pbd.blocks {
        for (a, &x) in block.iter().enumerate() {
            for &y in &block[a + 1..] {
                counts[pair_index(v, x as usize, y as usize)] += 1;
            }
        }
    }
    let mut first = None;
    let mut violations = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c != 1 {
            violations += 1;
            if first.is_none() {
                first = Some((pair_from_index(v, i), c));
            }
        }
    }
    let sizes: BTreeSet<usize> = pbd.blocks.iter().map(Vec::len).collect();
    Ok(PbdReport { valid: violations == 0, block_sizes: sizes.into_iter().collect(), first_violation: first, violations })
}

/// Copies each block `b` times; in copy `j` line `i` gets color `(i + j) mod b`.
pub fn replicate(design: &PairwiseBalancedDesign, schema: &Schema) -> Result<Kaleidoscope, DesignError> {
    if let Some((i, blk)) = design.blocks.iter().enumerate().find(|(_, b)| b.len() != schema.k) {
        return Err(DesignError::NotAUnitalDesign(format!("block {i} has {} points, expected {}", blk.len(), schema.k)));
    }
    let report = verify_pbd(design)?;
    if let Some(((x, y), c)) = report.first_violation {
        return Err(DesignError::NotAUnitalDesign(format!("pair ({x}, {y}) lies in {c} blocks")));
    }
    let b = schema.b();
    let mut planes = Vec::with_capacity(design.blocks.len() * b);
    for block in &design.blocks {
        for j in 0..b {
            planes.push(Plane { points: block.clone(), colors: Some((0..b).map(|i| (i + j) % b).collect()) });
        }
    }
    Ok(Kaleidoscope { v: design.v, group: None, schema: schema.clone(), planes })
}

/// Parses bit strings like `"00101"` (most significant bit first) into integers.
pub fn parse_bit_vectors(vectors: &[&str], n: usize) -> Result<Vec<u64>, DesignError> {
    vectors
        .iter()
        .map(|s| {
            if s.len() != n || n > 64 || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(DesignError::BadVectorLength(s.to_string(), n));
            }
            Ok(u64::from_str_radix(s, 2).expect("checked binary digits"))
        })
        .collect()
}

/// True iff the seven vectors together with zero form a subspace of F_2^n.
pub fn is_linear_block(vectors: &[u64], n: usize) -> Result<bool, DesignError> {
    if n == 0 || n > 64 {
        return Err(DesignError::BadVectorLength(format!("{n}-bit vectors"), n));
    }
    let mut set = BTreeSet::new();
    for &x in vectors {
        if n < 64 && x >> n != 0 {
            return Err(DesignError::BadVectorLength(format!("{x:b}"), n));
        }
        if x == 0 {
            return Err(DesignError::Malformed("zero vector in block".into()));
        }
        if !set.insert(x) {
            return Err(DesignError::DuplicateElements(Elem(x as u32)));
        }
    }
    if set.len() != 7 {
        return Ok(false);
    }
    Ok(set.iter().all(|&a| set.iter().all(|&b| a == b || set.contains(&(a ^ b)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    fn example_19() -> Kdf {
        let g = Arc::new(Group::cyclic(19).unwrap());
        Kdf::new(
            g,
            Schema::fano(),
            vec![e(&[0, 1, 2, 4, 5, 11, 8]), e(&[0, 7, 14, 9, 16, 1, 18]), e(&[0, 11, 3, 6, 17, 7, 12])],
        )
        .unwrap()
    }

    #[test]
    fn delta_examples() {
        let g = Group::cyclic(19).unwrap();
        let mut expected = e(&[1, 18, 4, 15, 3, 16]);
        expected.sort();
        assert_eq!(delta(&g, &e(&[0, 1, 4])).unwrap().entries, expected);
        let mut expected = e(&[7, 12, 9, 10, 17, 2]);
        expected.sort();
        assert_eq!(delta(&g, &e(&[0, 7, 9])).unwrap().entries, expected);
        for a in 1..19 {
            let mut expected = e(&[a, 19 - a]);
            expected.sort();
            assert_eq!(delta(&g, &e(&[0, a])).unwrap().entries, expected);
        }
        assert_eq!(delta(&g, &e(&[0, 3, 3])), Err(DesignError::DuplicateElements(Elem(3))));
    }

    #[test]
    fn verify_df_examples() {
        let g19 = Group::cyclic(19).unwrap();
        let f0 = vec![e(&[0, 1, 4]), e(&[0, 7, 9]), e(&[0, 11, 6])];
        assert!(verify_df(&g19, &f0, 3, 1).unwrap().valid);

        let g7 = Group::cyclic(7).unwrap();
        assert!(verify_df(&g7, &[e(&[0, 1, 3])], 3, 1).unwrap().valid);
        let r = verify_df(&g7, &[e(&[0, 1, 2])], 3, 1).unwrap();
        assert!(!r.valid);
        assert_eq!(r.over_covered, e(&[1, 6]));
        assert_eq!(r.under_covered, e(&[3, 4]));
        assert_eq!(r.coverage[1], 2);

        assert!(matches!(verify_df(&g7, &[e(&[0, 1])], 3, 1), Err(DesignError::BlockSize { .. })));
    }

    #[test]
    fn example_19_is_a_kdf() {
        let kdf = example_19();
        let report = verify_kdf(&kdf).unwrap();
        assert!(report.valid, "{report:?}");
        assert!(report.underlying_valid);
    }

    #[test]
    fn swapped_entries_break_a_color() {
        let mut kdf = example_19();
        kdf.blocks[0].points.swap(5, 6);
        let report = verify_kdf(&kdf).unwrap();
        assert!(!report.valid);
        assert!(!report.failing_colors.is_empty());
        // Oracle: recheck each color independently.
        for j in 0..7 {
            let ok = verify_df(&kdf.group, &kdf.color_class(j), 3, 1).unwrap().valid;
            assert_eq!(ok, !report.failing_colors.contains(&j));
        }
        assert!(matches!(develop(&kdf), Err(DesignError::InvalidKdf { .. })));
    }

    #[test]
    fn develop_and_verify_example_19() {
        let k = develop(&example_19()).unwrap();
        assert_eq!(k.planes.len(), 57);
        assert_eq!(k.v, 19);
        let report = verify_kaleidoscope(&k).unwrap();
        assert!(report.valid, "{report:?}");
        assert!(is_underlying_design(&k, 7));

        let mut broken = k.clone();
        broken.planes.remove(10);
        let report = verify_kaleidoscope(&broken).unwrap();
        assert!(!report.valid);
        assert_eq!(report.first_violation.unwrap().count, 0);
    }

    #[test]
    fn single_block_fkdf7() {
        let g = Arc::new(Group::cyclic(7).unwrap());
        let kdf = Kdf::new(g, Schema::fano(), vec![e(&[0, 1, 2, 3, 4, 5, 6])]).unwrap();
        let k = develop(&kdf).unwrap();
        assert_eq!(k.planes.len(), 7);
        assert!(verify_kaleidoscope(&k).unwrap().valid);
    }

    #[test]
    fn pair_index_is_a_bijection() {
        let v = 11;
        let mut seen = vec![false; v * (v - 1) / 2];
        for a in 0..v {
            for b in a + 1..v {
                let i = pair_index(v, a, b);
                assert_eq!(pair_index(v, b, a), i);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(pair_from_index(v, i), (a, b));
            }
        }
    }

    #[test]
    fn replicate_fk7_matches_color_rule() {
        let d = PairwiseBalancedDesign { v: 7, blocks: vec![(0..7).collect()] };
        let k = replicate(&d, &Schema::fano()).unwrap();
        assert_eq!(k.planes.len(), 7);
        for (j, plane) in k.planes.iter().enumerate() {
            for i in 0..7 {
                assert_eq!(plane.color_of_line(i), (i + j) % 7);
            }
        }
        assert!(verify_kaleidoscope(&k).unwrap().valid);
    }

    #[test]
    fn replicate_trivial_hesse() {
        let d = PairwiseBalancedDesign { v: 9, blocks: vec![(0..9).collect()] };
        let k = replicate(&d, &Schema::hesse()).unwrap();
        assert_eq!(k.planes.len(), 12);
        assert!(verify_kaleidoscope(&k).unwrap().valid);
    }

    #[test]
    fn replicate_rejects_non_designs() {
        let d = PairwiseBalancedDesign { v: 8, blocks: vec![(0..7).collect(), vec![0, 1, 2, 3, 4, 5, 7]] };
        assert!(matches!(replicate(&d, &Schema::fano()), Err(DesignError::NotAUnitalDesign(_))));
    }

    #[test]
    fn pbd_text_round_trip() {
        let text = "v=7\n# Fano plane\n0 1 3\n1 2 4\n2 3 5\n3 4 6\n4 5 0\n5 6 1\n6 0 2\n";
        let d = PairwiseBalancedDesign::parse(text).unwrap();
        assert_eq!(d.blocks.len(), 7);
        assert!(verify_pbd(&d).unwrap().valid);
        assert_eq!(PairwiseBalancedDesign::parse(&d.to_text()).unwrap(), d);
        assert!(PairwiseBalancedDesign::parse("7\n0 1").is_err());
        assert!(PairwiseBalancedDesign::parse("v=3\n0 1 5").is_err());
    }

    #[test]
    fn linear_blocks() {
        let full = parse_bit_vectors(&["001", "010", "011", "100", "101", "110", "111"], 3).unwrap();
        assert!(is_linear_block(&full, 3).unwrap());
        let mut embedded =
            parse_bit_vectors(&["00001", "00010", "00011", "00100", "00101", "00110", "00111"], 5).unwrap();
        assert!(is_linear_block(&embedded, 5).unwrap());
        embedded[6] = 0b01000;
        assert!(!is_linear_block(&embedded, 5).unwrap());
        assert!(matches!(parse_bit_vectors(&["0011"], 5), Err(DesignError::BadVectorLength(..))));
        assert!(matches!(is_linear_block(&[0b100000], 5), Err(DesignError::BadVectorLength(..))));
    }
}
