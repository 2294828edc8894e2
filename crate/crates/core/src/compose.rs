//! Difference matrices, composition of difference families over `G x H`, its
//! kaleidoscopic version, and gluing kaleidoscopes along the blocks of a
//! pairwise balanced design.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, Group};
use crate::designs::{verify_df, verify_kdf, verify_pbd, DesignError, Kaleidoscope, Kdf, PairwiseBalancedDesign, Plane};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComposeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("field of order {q} is too small for a difference matrix with {k} rows")]
    OrderTooSmall { q: u32, k: usize },
    #[error("invalid ingredient: {0}")]
    IngredientInvalid(String),
    #[error("schema mismatch: `{0}` vs `{1}`")]
    SchemaMismatch(String, String),
    #[error("no catalog kaleidoscope for block size {0}")]
    MissingIngredient(usize),
    #[error("invalid PBD: {0}")]
    InvalidPbd(String),
    #[error("malformed difference matrix: {0}")]
    Malformed(String),
}

/// A `k x |H|` matrix over `H`; valid when every row-pair difference vector
/// hits each element of `H` exactly once.
#[derive(Debug, Clone)]
pub struct DifferenceMatrix {
    pub group: Arc<Group>,
    pub rows: Vec<Vec<Elem>>,
}

impl DifferenceMatrix {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// The submatrix on the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> DifferenceMatrix {
        DifferenceMatrix { group: self.group.clone(), rows: rows.iter().map(|&r| self.rows[r].clone()).collect() }
    }

    fn check_shape(&self) -> Result<(), ComposeError> {
        let n = self.group.order() as usize;
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(ComposeError::Malformed(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(x) = row.iter().find(|&&x| !self.group.contains(x)) {
                return Err(ComposeError::Malformed(format!("row {i} contains {x}, outside the group")));
            }
        }
        Ok(())
    }
}

/// `M[i][c] = a_i * x_c` where `a_0..a_(k-1)` are the first `k` field elements
/// and `x_c` runs over the field in canonical order.
pub fn field_dm(field: Arc<Group>, k: usize) -> Result<DifferenceMatrix, ComposeError> {
    if !field.is_field() {
        return Err(AlgebraError::NotAField.into());
    }
    let q = field.order();
    if (q as usize) < k {
        return Err(ComposeError::OrderTooSmall { q, k });
    }
    let rows = (0..k as u32).map(|a| field.elements().map(|x| field.mul(Elem(a), x)).collect()).collect();
    Ok(DifferenceMatrix { group: field, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmReport {
    pub valid: bool,
    pub rows: usize,
    pub columns: usize,
    /// Row pairs whose difference vector is not a permutation of the group.
    pub failing_pairs: Vec<(usize, usize)>,
}

pub fn verify_dm(m: &DifferenceMatrix) -> Result<DmReport, ComposeError> {
    m.check_shape()?;
    let g = &m.group;
    let n = g.order() as usize;
    let mut failing = Vec::new();
    let mut seen = vec![false; n];
    for r in 0..m.k() {
        for s in r + 1..m.k() {
            seen.iter_mut().for_each(|x| *x = false);
            let mut ok = true;
            for c in 0..n {
                let d = g.sub(m.rows[r][c], m.rows[s][c]).index();
                if seen[d] {
                    ok = false;
                    break;
                }
                seen[d] = true;
            }
            if !ok {
                failing.push((r, s));
            }
        }
    }
    Ok(DmReport { valid: failing.is_empty(), rows: m.k(), columns: n, failing_pairs: failing })
}

/// `lambda` for which the family could be a `(G, k, lambda)` DF, after checking it is one.
fn df_lambda(group: &Group, family: &[Vec<Elem>], k: usize, what: &str) -> Result<usize, ComposeError> {
    if family.is_empty() {
        return Err(ComposeError::IngredientInvalid(format!("{what} is empty")));
    }
    if let Some(b) = family.iter().find(|b| b.len() != k) {
        return Err(ComposeError::IngredientInvalid(format!("{what} has a block of size {}, expected {k}", b.len())));
    }
    let pairs = family.len() * k * (k - 1);
    let nonzero = group.order() as usize - 1;
    if pairs % nonzero != 0 {
        return Err(ComposeError::IngredientInvalid(format!("{what} cannot be a difference family")));
    }
    let lambda = pairs / nonzero;
    if !verify_df(group, family, k, lambda)?.valid {
        return Err(ComposeError::IngredientInvalid(format!("{what} is not a ({}, {k}, {lambda}) difference family", group.order())));
    }
    Ok(lambda)
}

fn check_dm_for(m: &DifferenceMatrix, h: &Group, k: usize) -> Result<(), ComposeError> {
    if !m.group.same_additive_group(h) {
        return Err(ComposeError::IngredientInvalid("difference matrix is over a different group".into()));
    }
    if m.k() != k {
        return Err(ComposeError::IngredientInvalid(format!("difference matrix has {} rows, blocks have {k} points", m.k())));
    }
    if !verify_dm(m)?.valid {
        return Err(ComposeError::IngredientInvalid("difference matrix is not valid".into()));
    }
    Ok(())
}

/// Blocks `B_(i,j) = {(b_(i,r), m_(r,j))}` for every base block `i` and
/// column `j`, followed by `{0} x B'` for each `B'` of the second family.
/// Output order is `i` major, `j` minor.
fn composed_blocks(product: &Group, f: &[Vec<Elem>], f2: &[Vec<Elem>], m: &DifferenceMatrix) -> Vec<Vec<Elem>> {
    let columns = m.group.order() as usize;
    let mut blocks: Vec<Vec<Elem>> = f
        .par_iter()
        .flat_map_iter(|block| {
            (0..columns).map(move |j| {
                block
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| product.pair(b, m.rows[r][j]).expect("product group"))
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    blocks.extend(f2.iter().map(|block| block.iter().map(|&b| product.pair(Elem::ZERO, b).expect("product group")).collect()));
    blocks
}

/// Composes a `(G,k,lambda)`-DF and an `(H,k,lambda)`-DF through an `(H,k,1)`-DM
/// into a `(G x H, k, lambda)`-DF.
pub fn compose_df(
    g: &Group,
    f: &[Vec<Elem>],
    h: &Group,
    f2: &[Vec<Elem>],
    m: &DifferenceMatrix,
) -> Result<(Arc<Group>, Vec<Vec<Elem>>), ComposeError> {
    let k = f.first().map_or(0, Vec::len);
    if k < 2 {
        return Err(ComposeError::IngredientInvalid("first family has no usable blocks".into()));
    }
    let l1 = df_lambda(g, f, k, "first family")?;
    let l2 = df_lambda(h, f2, k, "second family")?;
    if l1 != l2 {
        return Err(ComposeError::IngredientInvalid(format!("lambda differs: {l1} vs {l2}")));
    }
    check_dm_for(m, h, k)?;
    let product = Arc::new(Group::product(g, h)?);
    let blocks = composed_blocks(&product, f, f2, m);
    Ok((product, blocks))
}

/// Kaleidoscopic composition: same block construction as [`compose_df`] with
/// point positions preserved, so color class `j` of the output is the
/// composition of the two color-`j` classes through the rows of `m` selected
/// by schema line `j`.
pub fn compose_kdf(f: &Kdf, f2: &Kdf, m: &DifferenceMatrix) -> Result<Kdf, ComposeError> {
    if f.schema != f2.schema {
        return Err(ComposeError::SchemaMismatch(f.schema.name.clone(), f2.schema.name.clone()));
    }
    if !verify_kdf(f)?.valid {
        return Err(ComposeError::IngredientInvalid("first family is not a valid KDF".into()));
    }
    if !verify_kdf(f2)?.valid {
        return Err(ComposeError::IngredientInvalid("second family is not a valid KDF".into()));
    }
    check_dm_for(m, &f2.group, f.schema.k)?;
    let product = Arc::new(Group::product(&f.group, &f2.group)?);
    let blocks = composed_blocks(&product, &f.flattened(), &f2.flattened(), m);
    let mut out = Kdf::new(product, f.schema.clone(), blocks)?;
    out.provenance.insert("construction".into(), "difference-matrix composition".into());
    out.provenance.insert("left_order".into(), f.group.order().into());
    out.provenance.insert("right_order".into(), f2.group.order().into());
    Ok(out)
}

/// Places a catalog kaleidoscope on every block of the PBD: catalog point `i`
/// goes to the `i`-th smallest point of the block.
pub fn pbd_compose(pbd: &PairwiseBalancedDesign, catalog: &BTreeMap<usize, Kaleidoscope>) -> Result<Kaleidoscope, ComposeError> {
    let report = verify_pbd(pbd)?;
    if let Some(((x, y), c)) = report.first_violation {
        return Err(ComposeError::InvalidPbd(format!("pair ({x}, {y}) lies in {c} blocks")));
    }
    let mut schema = None;
    for &size in &report.block_sizes {
        let k = catalog.get(&size).ok_or(ComposeError::MissingIngredient(size))?;
        if k.v != size {
            return Err(ComposeError::IngredientInvalid(format!("catalog entry for {size} has {} points", k.v)));
        }
        match &schema {
            None => schema = Some(k.schema.clone()),
            Some(s) if *s != k.schema => return Err(ComposeError::SchemaMismatch(s.name.clone(), k.schema.name.clone())),
            _ => {}
        }
    }
    let schema = schema.ok_or_else(|| ComposeError::InvalidPbd("design has no blocks".into()))?;
    let mut planes = Vec::new();
    for block in &pbd.blocks {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        let ingredient = &catalog[&block.len()];
        planes.extend(ingredient.planes.iter().map(|plane| Plane {
            points: plane.points.iter().map(|&i| sorted[i as usize]).collect(),
            colors: plane.colors.clone(),
        }));
    }
    Ok(Kaleidoscope { v: pbd.v, group: None, schema, planes })
}
