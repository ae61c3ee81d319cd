//! Hecke operators `T_p` on `SM(n, R)` and `SM_0(n, R)`.

mod matrices;
mod routes;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::Ideal;
use crate::linalg::{add, mul, mul_vec, scale, Field, Matrix};
use crate::symspace::{CuspidalSpace, SymSpace};

pub use matrices::{s_matrices, sigma_catalog, sigma_matrices, Mat2};
pub use routes::{merel_images, DefinitionalRoute, HeckeRoute, MerelRoute, RouteImages, RouteRegistry};

/// Which subspace an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    Ambient,
    Cuspidal,
}

/// Identifies the basis an operator matrix is written in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisId {
    pub level: String,
    pub field: String,
    pub kind: SpaceKind,
    pub dim: usize,
}

impl BasisId {
    pub fn ambient<F: Field>(space: &SymSpace<F>) -> BasisId {
        BasisId {
            level: space.p1().level().to_string(),
            field: space.field().name(),
            kind: SpaceKind::Ambient,
            dim: space.dim(),
        }
    }

    pub fn cuspidal<F: Field>(space: &CuspidalSpace<F>) -> BasisId {
        BasisId { kind: SpaceKind::Cuspidal, dim: space.dim(), ..BasisId::ambient(space.ambient()) }
    }
}

/// A linear operator given by its matrix; column `j` is the image of basis
/// vector `j`.
#[derive(Clone, Debug)]
pub struct HeckeOp<F: Field> {
    pub label: String,
    /// The prime index `p` for `T_p`, `None` for composite labels.
    pub index: Option<Ideal>,
    pub matrix: Matrix<F::Elem>,
    pub basis: BasisId,
    /// Generator-formula terms dropped because they were not in `P^1(A/n)`.
    pub dropped_terms: usize,
}

impl<F: Field> HeckeOp<F> {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `T_p` on the ambient space via `route`.
pub fn hecke_operator<F: Field>(route: &dyn HeckeRoute, p: &Ideal, space: &SymSpace<F>) -> Result<HeckeOp<F>> {
    if p.field_size() != space.p1().field_size() {
        return Err(Error::FieldMismatch(p.field_size(), space.p1().field_size()));
    }
    let out = route.images(p, space.p1(), space.basis());
    let columns: Vec<Vec<F::Elem>> = out.images.par_iter().map(|c| space.project_combination(c)).collect();
    let matrix = Matrix::from_columns(&columns, space.dim(), space.field().zero());
    Ok(HeckeOp {
        label: format!("T_({})", p),
        index: Some(p.clone()),
        matrix,
        basis: BasisId::ambient(space),
        dropped_terms: out.dropped_terms,
    })
}

/// `T_p` by the generator formula over `Sigma_p`.
pub fn hecke_merel<F: Field>(p: &Ideal, space: &SymSpace<F>) -> Result<HeckeOp<F>> {
    hecke_operator(&MerelRoute, p, space)
}

/// `T_p` by its definition through `S_p` and continued fractions.
pub fn hecke_definitional<F: Field>(p: &Ideal, space: &SymSpace<F>) -> Result<HeckeOp<F>> {
    hecke_operator(&DefinitionalRoute, p, space)
}

/// Restricts an ambient operator to the cuspidal subspace, failing if some
/// cuspidal basis vector is mapped outside it.
pub fn restrict_cuspidal<F: Field>(op: &HeckeOp<F>, cusp: &CuspidalSpace<F>) -> Result<HeckeOp<F>> {
    let ambient = cusp.ambient();
    if op.basis != BasisId::ambient(ambient) {
        return Err(Error::BasisMismatch);
    }
    let f = ambient.field();
    let mut columns = Vec::with_capacity(cusp.dim());
    for (j, w) in cusp.basis().iter().enumerate() {
        let image = mul_vec(f, &op.matrix, w);
        let coords = cusp.coordinates(&image).map_err(|_| Error::StabilityViolation(j))?;
        columns.push(coords);
    }
    Ok(HeckeOp {
        label: op.label.clone(),
        index: op.index.clone(),
        matrix: Matrix::from_columns(&columns, cusp.dim(), f.zero()),
        basis: BasisId::cuspidal(cusp),
        dropped_terms: op.dropped_terms,
    })
}

/// For `p = l^i` with `l` prime and `i >= 2`, compares `T_p` with
/// `T_l T_(l^(i-1)) - |l| T_(l^(i-2))` when `l` is prime to the level, and
/// with `T_l^i` when `l` divides it. `None` when `p` is not such a power.
pub fn prime_power_relation<F: Field>(route: &dyn HeckeRoute, p: &Ideal, space: &SymSpace<F>) -> Result<Option<bool>> {
    let Some((l, i)) = p.prime_power() else { return Ok(None) };
    if i < 2 {
        return Ok(None);
    }
    let f = space.field();
    let power = |k: u32| Ideal::new(&l.generator().pow(k as u64)).expect("nonzero");
    let t = |k: u32| hecke_operator(route, &power(k), space).map(|op| op.matrix);
    let tl = t(1)?;
    let want = if l.is_coprime_to(space.p1().level().generator()) {
        let norm = (space.p1().field_size() as i64).pow(l.degree() as u32);
        add(f, &mul(f, &tl, &t(i - 1)?), &scale(f, &f.from_i64(-norm), &t(i - 2)?))
    } else {
        (1..i).fold(tl.clone(), |acc, _| mul(f, &acc, &tl))
    };
    Ok(Some(hecke_operator(route, p, space)?.matrix == want))
}
