//! The matrix sets `S_p` (definitional Hecke action) and `Sigma_p`
//! (generator formula).

use std::collections::BTreeMap;
use std::fmt;

use crate::ffpoly::{enumerate_monic, gcd, polys_below, Ideal, Poly};
use crate::paths::CuspPoint;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

impl Mat2 {
    pub fn new(a: Poly, b: Poly, c: Poly, d: Poly) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity(q: u32) -> Mat2 {
        Mat2::new(Poly::one(q), Poly::zero(q), Poly::zero(q), Poly::one(q))
    }

    pub fn det(&self) -> Poly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    /// Fractional linear action on `P^1(K)`; requires a nonzero determinant.
    pub fn act(&self, x: &CuspPoint) -> CuspPoint {
        let num = &(&self.a * x.num()) + &(&self.b * x.den());
        let den = &(&self.c * x.num()) + &(&self.d * x.den());
        CuspPoint::new(&num, &den).expect("invertible matrix maps a point to a point")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// `S_p`: all `(a b; 0 d)` with `a, d` monic, `ad = P`, `(a) + n = A` and
/// `deg b < deg d`.
pub fn s_matrices(p: &Ideal, level: &Ideal) -> Vec<Mat2> {
    let q = p.field_size();
    let big_p = p.generator();
    let mut out = Vec::new();
    for a in p.monic_divisors() {
        if !gcd(&a, level.generator()).is_one() {
            continue;
        }
        let d = big_p.exact_div(&a).expect("divisor");
        let deg_d = d.degree().expect("nonzero");
        for b in polys_below(q, deg_d) {
            out.push(Mat2::new(a.clone(), b, Poly::zero(q), d.clone()));
        }
    }
    out
}

/// Every matrix `(a b; c d)` with `a, d` monic, `deg b < deg a`,
/// `deg c < deg d` and `deg a + deg d = m`, grouped by determinant. The
/// determinant of such a matrix is monic of degree `m`.
pub fn sigma_catalog(q: u32, m: usize) -> BTreeMap<Poly, Vec<Mat2>> {
    let mut out: BTreeMap<Poly, Vec<Mat2>> = BTreeMap::new();
    for i in 0..=m {
        let j = m - i;
        let bs: Vec<Poly> = polys_below(q, i).collect();
        let cs: Vec<Poly> = polys_below(q, j).collect();
        for a in enumerate_monic(q, i, false) {
            for d in enumerate_monic(q, j, false) {
                let ad = &a * &d;
                for b in &bs {
                    for c in &cs {
                        let det = &ad - &(b * c);
                        out.entry(det).or_default().push(Mat2::new(a.clone(), b.clone(), c.clone(), d.clone()));
                    }
                }
            }
        }
    }
    out
}

/// `Sigma_p` for a single ideal.
pub fn sigma_matrices(p: &Ideal) -> Vec<Mat2> {
    let q = p.field_size();
    let big_p = p.generator();
    let m = p.degree();
    let mut out = Vec::new();
    for i in 0..=m {
        let j = m - i;
        let cs: Vec<Poly> = polys_below(q, j).collect();
        for a in enumerate_monic(q, i, false) {
            for d in enumerate_monic(q, j, false) {
                let rest = &(&a * &d) - big_p;
                for b in polys_below(q, i) {
                    if b.is_zero() {
                        if rest.is_zero() {
                            for c in &cs {
                                out.push(Mat2::new(a.clone(), b.clone(), c.clone(), d.clone()));
                            }
                        }
                        continue;
                    }
                    if let Some(c) = rest.exact_div(&b) {
                        if c.degree() < Some(j) {
                            out.push(Mat2::new(a.clone(), b.clone(), c, d.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ideal(q: u32, s: &str) -> Ideal {
        Ideal::parse(q, s).unwrap()
    }

    #[test]
    fn s_matrices_degree_one() {
        let n = ideal(3, "T^3+2*T+2");
        assert_eq!(s_matrices(&ideal(3, "T+1"), &n).len(), 4);
        // p = n excludes the (P 0; 0 1) branch
        let n2 = ideal(3, "T+1");
        let s = s_matrices(&n2, &n2);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|m| m.a.is_one()));
        assert_eq!(s_matrices(&Ideal::unit(3), &n), vec![Mat2::identity(3)]);
    }

    #[test]
    fn sigma_degree_one_matches_explicit_list() {
        for q in [2u32, 3, 5] {
            for big_p in enumerate_monic(q, 1, false) {
                let p = Ideal::new(&big_p).unwrap();
                let got: HashSet<Mat2> = sigma_matrices(&p).into_iter().collect();
                let mut want = HashSet::new();
                for l in 0..q {
                    let lam = Poly::constant(q, l as i64);
                    want.insert(Mat2::new(big_p.clone(), lam.clone(), Poly::zero(q), Poly::one(q)));
                    want.insert(Mat2::new(Poly::one(q), Poly::zero(q), lam, big_p.clone()));
                }
                assert_eq!(got.len(), 2 * q as usize);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn sigma_trivial_ideal() {
        assert_eq!(sigma_matrices(&Ideal::unit(2)), vec![Mat2::identity(2)]);
    }

    #[test]
    fn catalog_agrees_with_direct_enumeration() {
        for (q, m) in [(2u32, 2usize), (2, 3), (3, 2)] {
            let cat = sigma_catalog(q, m);
            let total: usize = cat.values().map(Vec::len).sum();
            assert_eq!(total, (m + 1) * (q as usize).pow(2 * m as u32));
            for big_p in enumerate_monic(q, m, false) {
                let p = Ideal::new(&big_p).unwrap();
                let a: HashSet<Mat2> = sigma_matrices(&p).into_iter().collect();
                let b: HashSet<Mat2> = cat.get(&big_p).cloned().unwrap_or_default().into_iter().collect();
                assert_eq!(a, b);
                assert!(a.iter().all(|m| m.det() == big_p));
            }
            assert!(cat.keys().all(|d| d.is_monic() && d.degree() == Some(m)));
        }
    }
}
