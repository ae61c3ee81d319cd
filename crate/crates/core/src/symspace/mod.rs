//! `SM(n, R)` as the quotient of the free module on `P^1(A/n)` by the
//! presentation relations, its integral structure, cusps and the cuspidal
//! subspace `SM_0(n, R)`.

mod cusps;
mod relations;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::linalg::{rref, snf, Field, Matrix};
use crate::paths::SymCombination;
use crate::projline::ProjectiveLine;

pub use cusps::{boundary, cusp_classes, cusp_equiv, generator_lift, CuspClass, CuspTable, CuspidalSpace};
pub use relations::{build_relations, Relation, RelationFamily, RelationSet};

/// A realized quotient `SM(n, R)` over a field: every generator has a
/// coordinate vector on the basis.
#[derive(Clone, Debug)]
pub struct SymSpace<F: Field> {
    field: F,
    p1: Arc<ProjectiveLine>,
    basis: Vec<usize>,
    projection: Vec<Vec<F::Elem>>,
}

impl<F: Field> SymSpace<F> {
    /// Assembles a space from stored parts (used by the cache).
    pub fn from_parts(field: F, p1: Arc<ProjectiveLine>, basis: Vec<usize>, projection: Vec<Vec<F::Elem>>) -> Self {
        SymSpace { field, p1, basis, projection }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn p1(&self) -> &Arc<ProjectiveLine> {
        &self.p1
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Generator indices whose images form the basis.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn project(&self, gen: usize) -> &[F::Elem] {
        &self.projection[gen]
    }

    pub fn projection(&self) -> &[Vec<F::Elem>] {
        &self.projection
    }

    pub fn project_combination(&self, c: &SymCombination) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, k) in c.iter() {
            let k = f.from_i64(k);
            if f.is_zero(&k) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.projection[i]) {
                if !f.is_zero(x) {
                    *o = f.add(o, &f.mul(&k, x));
                }
            }
        }
        out
    }
}

/// Row-reduces the relations over `field`; the basis is the set of non-pivot
/// representative generators.
pub fn quotient_basis<F: Field>(rels: &RelationSet, p1: Arc<ProjectiveLine>, field: F) -> SymSpace<F> {
    assert_eq!(rels.ngens, p1.len());
    let red = relations::reduce(rels);
    let ncols = red.columns.len();
    let mut m = Matrix::filled(red.rows.len(), ncols, field.zero());
    for (r, row) in red.rows.iter().enumerate() {
        for &(c, v) in row {
            m[(r, c)] = field.from_i64(v);
        }
    }
    let pivots = rref(&field, &mut m);
    let mut pivot_row = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_row[c] = Some(r);
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| pivot_row[c].is_none()).collect();
    let mut free_pos = vec![usize::MAX; ncols];
    for (k, &c) in free.iter().enumerate() {
        free_pos[c] = k;
    }
    let column_coords: Vec<Vec<F::Elem>> = (0..ncols)
        .map(|c| match pivot_row[c] {
            None => {
                let mut v = vec![field.zero(); free.len()];
                v[free_pos[c]] = field.one();
                v
            }
            Some(r) => free.iter().map(|&j| field.neg(&m[(r, j)])).collect(),
        })
        .collect();
    let minus_one = field.from_i64(-1);
    let projection = (0..rels.ngens)
        .map(|g| {
            let v = &column_coords[red.col[g]];
            if red.sign[g] == 1 {
                v.clone()
            } else {
                v.iter().map(|x| field.mul(&minus_one, x)).collect()
            }
        })
        .collect();
    let basis = free.iter().map(|&c| red.columns[c]).collect();
    SymSpace { field, p1, basis, projection }
}

/// Integral structure of `SM(n, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZStructure {
    /// Nonzero invariant factors of the relation matrix.
    pub invariant_factors: Vec<BigInt>,
    /// Invariant factors different from 1.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl ZStructure {
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Smith normal form of the relation matrix. The contraction of `x_a = +-x_b`
/// rows is a unimodular change of variables, so the cokernel is unchanged.
pub fn z_structure(rels: &RelationSet) -> ZStructure {
    let red = relations::reduce(rels);
    let ncols = red.columns.len();
    let dense: Vec<Vec<i64>> = red
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![0i64; ncols];
            for &(c, x) in row {
                v[c] = x;
            }
            v
        })
        .collect();
    let invariant_factors = snf::invariant_factors(&dense, ncols);
    let torsion = invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect();
    let free_rank = ncols - invariant_factors.len();
    ZStructure { invariant_factors, torsion, free_rank }
}
