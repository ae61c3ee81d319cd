//! Cusps of `Gamma_0(n)`, the boundary map and the cuspidal subspace.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffpoly::{gcd, inv_mod_poly, polys_below, xgcd, FqScalar, Ideal, Poly};
use crate::hecke::Mat2;
use crate::linalg::{kernel, mul_vec, Field, Matrix};
use crate::paths::CuspPoint;
use crate::projline::ProjectiveLine;

use super::SymSpace;

/// Canonical representative of a `Gamma_0(n)`-orbit on `P^1(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspClass {
    pub rep: CuspPoint,
    pub level: Ideal,
}

/// `s` with `s*a = 1 mod c`; for `c = 0` the point is infinity and `a` a unit.
fn inverse_mod_den(a: &Poly, c: &Poly) -> Poly {
    if c.is_zero() {
        let lead = a.leading().expect("infinity is (unit, 0)");
        return Poly::from_scalar(lead.inv().expect("unit"));
    }
    inv_mod_poly(a, c).expect("numerator and denominator are coprime")
}

/// Whether `a1/c1` and `a2/c2` lie in one `Gamma_0(n)`-orbit: some unit
/// `l` has `l*s1*c2 = s2*c1 mod gcd(c1*c2, N)` where `s_i*a_i = 1 mod c_i`.
pub fn cusp_equiv(x: &CuspPoint, y: &CuspPoint, level: &Ideal) -> bool {
    if level.is_prime() {
        let n = level.generator();
        return n.divides(x.den()) == n.divides(y.den());
    }
    let n = level.generator();
    let q = level.field_size();
    let (a1, c1) = (x.num(), x.den());
    let (a2, c2) = (y.num(), y.den());
    let s1 = inverse_mod_den(a1, c1);
    let s2 = inverse_mod_den(a2, c2);
    let modulus = gcd(&(c1 * c2), n);
    let rhs = &(&s2 * c1) % &modulus;
    let base = &s1 * c2;
    FqScalar::units(q).any(|l| &base.scale(l) % &modulus == rhs)
}

/// One representative per cusp class. Candidates are `a/c` with `c` a monic
/// divisor of `N` and `deg a < deg c`, led by infinity.
pub fn cusp_classes(level: &Ideal) -> Vec<CuspClass> {
    CuspTable::new(level).reps.into_iter().map(|rep| CuspClass { rep, level: level.clone() }).collect()
}

#[derive(Clone, Debug)]
pub struct CuspTable {
    level: Ideal,
    reps: Vec<CuspPoint>,
}

impl CuspTable {
    pub fn new(level: &Ideal) -> CuspTable {
        let q = level.field_size();
        let mut reps = vec![CuspPoint::infinity(q)];
        if level.is_prime() {
            reps.push(CuspPoint::zero(q));
            return CuspTable { level: level.clone(), reps };
        }
        for c in level.monic_divisors() {
            let deg_c = c.degree().expect("nonzero");
            let numerators: Vec<Poly> = if deg_c == 0 { vec![Poly::zero(q)] } else { polys_below(q, deg_c).collect() };
            for a in numerators {
                if !gcd(&a, &c).is_one() {
                    continue;
                }
                let cand = CuspPoint::new(&a, &c).expect("coprime");
                if !reps.iter().any(|r| cusp_equiv(r, &cand, level)) {
                    reps.push(cand);
                }
            }
        }
        CuspTable { level: level.clone(), reps }
    }

    pub fn level(&self) -> &Ideal {
        &self.level
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[CuspPoint] {
        &self.reps
    }

    pub fn classify(&self, x: &CuspPoint) -> usize {
        self.reps
            .iter()
            .position(|r| cusp_equiv(r, x, &self.level))
            .unwrap_or_else(|| panic!("cusp {x} matches no class representative"))
    }
}

/// A matrix `(a b; u v)` of `GL_2(A)` whose bottom row lies in the class of
/// generator `gen`.
pub fn generator_lift(p1: &ProjectiveLine, gen: usize) -> Mat2 {
    let q = p1.field_size();
    let n = p1.level().generator();
    let c = p1.class(gen);
    let (u, v) = (c.u.clone(), c.v.clone());
    let (u, v) = if gcd(&u, &v).is_one() {
        (u, v)
    } else if v.is_zero() {
        (Poly::one(q), Poly::zero(q))
    } else {
        // some u + t*N is coprime to v; take the first t in index order
        let bound = v.degree().unwrap_or(0).max(1) + 1;
        let t = polys_below(q, bound).find(|t| gcd(&(&u + &(t * n)), &v).is_one()).expect("a coprime lift exists");
        (&u + &(&t * n), v)
    };
    let (g, s, t) = xgcd(&u, &v).expect("not both zero");
    debug_assert!(g.is_one());
    // t*v - (-s)*u = 1
    Mat2::new(t, -&s, u, v)
}

/// Boundary of `xi(u:v) = [g(0), g(oo)]`: `(class of a/u) - (class of b/v)`.
pub fn boundary(p1: &ProjectiveLine, cusps: &CuspTable, gen: usize) -> BTreeMap<usize, i64> {
    let g = generator_lift(p1, gen);
    let at_inf = CuspPoint::new(&g.a, &g.c).expect("coprime column");
    let at_zero = CuspPoint::new(&g.b, &g.d).expect("coprime column");
    let mut out = BTreeMap::new();
    *out.entry(cusps.classify(&at_inf)).or_insert(0) += 1;
    *out.entry(cusps.classify(&at_zero)).or_insert(0) -= 1;
    out.retain(|_, v| *v != 0);
    out
}

/// `SM_0(n, R)`: the kernel of the boundary map inside an ambient space.
#[derive(Clone, Debug)]
pub struct CuspidalSpace<F: Field> {
    ambient: Arc<SymSpace<F>>,
    cusps: Arc<CuspTable>,
    boundary_matrix: Matrix<F::Elem>,
    basis: Vec<Vec<F::Elem>>,
    coord_cols: Vec<usize>,
}

impl<F: Field> CuspidalSpace<F> {
    pub fn new(ambient: Arc<SymSpace<F>>) -> CuspidalSpace<F> {
        let cusps = Arc::new(CuspTable::new(ambient.p1().level()));
        Self::with_cusps(ambient, cusps)
    }

    pub fn with_cusps(ambient: Arc<SymSpace<F>>, cusps: Arc<CuspTable>) -> CuspidalSpace<F> {
        let f = ambient.field().clone();
        let p1 = ambient.p1().clone();
        let mut bm = Matrix::filled(cusps.len(), ambient.dim(), f.zero());
        for (j, &gen) in ambient.basis().iter().enumerate() {
            for (c, k) in boundary(&p1, &cusps, gen) {
                bm[(c, j)] = f.from_i64(k);
            }
        }
        let (basis, coord_cols) = kernel(&f, &bm);
        // the boundary maps onto the degree-0 divisors on the cusps; a rank
        // deficit means the cusp table or the boundary convention is wrong
        assert_eq!(
            ambient.dim() - basis.len() + 1,
            cusps.len(),
            "boundary rank does not match {} cusps at level {}",
            cusps.len(),
            p1.level()
        );
        CuspidalSpace { ambient, cusps, boundary_matrix: bm, basis, coord_cols }
    }

    pub fn ambient(&self) -> &Arc<SymSpace<F>> {
        &self.ambient
    }

    pub fn cusps(&self) -> &Arc<CuspTable> {
        &self.cusps
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors in ambient coordinates.
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    pub fn boundary_matrix(&self) -> &Matrix<F::Elem> {
        &self.boundary_matrix
    }

    pub fn boundary_rank(&self) -> usize {
        self.ambient.dim() - self.dim()
    }

    pub fn boundary_of(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        mul_vec(self.ambient.field(), &self.boundary_matrix, v)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.ambient.field();
        self.boundary_of(v).iter().all(|x| f.is_zero(x))
    }

    /// Coordinates of an ambient vector lying in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if !self.contains(v) {
            return Err(Error::Precondition("vector is not cuspidal".into()));
        }
        Ok(self.coord_cols.iter().map(|&j| v[j].clone()).collect())
    }
}
