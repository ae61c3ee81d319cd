//! Decomposition of modular symbols `[r, s]` into presentation generators via
//! continued fractions in `F_q(T)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ffpoly::{gcd, Poly};
use crate::projline::ProjectiveLine;

/// A point of `P^1(K)` as a reduced fraction `num/den`, with `den` monic, or
/// `(1, 0)` for infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CuspPoint {
    num: Poly,
    den: Poly,
}

impl CuspPoint {
    pub fn new(num: &Poly, den: &Poly) -> Result<CuspPoint> {
        let q = num.field_size();
        if num.is_zero() && den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if den.is_zero() {
            return Ok(CuspPoint::infinity(q));
        }
        let g = gcd(num, den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let (unit, den) = den.monicize()?;
        let num = num.scale(unit.inv().expect("unit"));
        Ok(CuspPoint { num, den })
    }

    pub fn infinity(q: u32) -> CuspPoint {
        CuspPoint { num: Poly::one(q), den: Poly::zero(q) }
    }

    pub fn zero(q: u32) -> CuspPoint {
        CuspPoint { num: Poly::zero(q), den: Poly::one(q) }
    }

    /// The polynomial `a` seen as the cusp `a/1`.
    pub fn from_poly(a: &Poly) -> CuspPoint {
        CuspPoint { num: a.clone(), den: Poly::one(a.field_size()) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }
}

impl fmt::Display for CuspPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Integer combination of generators, keyed by class index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymCombination {
    terms: BTreeMap<usize, i64>,
}

impl SymCombination {
    pub fn new() -> SymCombination {
        SymCombination::default()
    }

    pub fn single(index: usize, coeff: i64) -> SymCombination {
        let mut c = SymCombination::new();
        c.add_term(index, coeff);
        c
    }

    pub fn add_term(&mut self, index: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(index).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, other: &SymCombination, factor: i64) {
        for (&i, &c) in &other.terms {
            self.add_term(i, c * factor);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, index: usize) -> i64 {
        self.terms.get(&index).copied().unwrap_or(0)
    }
}

/// Convergents `p_k/q_k` of `a/c`, starting with `1/0`. Consecutive pairs
/// have determinant `+-1`; the last one is `a/c` up to a scalar.
pub fn convergents(a: &Poly, c: &Poly) -> Result<Vec<(Poly, Poly)>> {
    if c.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !gcd(a, c).is_one() {
        return Err(Error::Precondition(format!("{a} and {c} are not coprime")));
    }
    let q = a.field_size();
    let mut out = vec![(Poly::one(q), Poly::zero(q))];
    let (mut p_prev, mut q_prev) = (Poly::zero(q), Poly::one(q));
    let (mut x, mut y) = (a.clone(), c.clone());
    while !y.is_zero() {
        let (quo, rem) = x.divrem(&y)?;
        let (p_cur, q_cur) = out.last().cloned().expect("nonempty");
        let p_next = &(&quo * &p_cur) + &p_prev;
        let q_next = &(&quo * &q_cur) + &q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        out.push((p_next, q_next));
        x = std::mem::replace(&mut y, rem);
    }
    Ok(out)
}

/// `[oo, x]` as a sum of generators: the edge between consecutive convergents
/// `p_{k-1}/q_{k-1}` and `p_k/q_k` is `xi(q_k : q_{k-1})`, since the matrix
/// `(p_k p_{k-1}; q_k q_{k-1})` sends `0` and `oo` to those convergents.
fn path_from_infinity(x: &CuspPoint, p1: &ProjectiveLine, out: &mut SymCombination, sign: i64) {
    if x.is_infinity() {
        return;
    }
    let conv = convergents(x.num(), x.den()).expect("cusp points are reduced fractions");
    for pair in conv.windows(2) {
        let (_, q_prev) = &pair[0];
        let (_, q_cur) = &pair[1];
        let idx = p1.index_of(q_cur, q_prev).expect("consecutive denominators are coprime");
        out.add_term(idx, sign);
    }
}

/// The modular symbol `[r, s] = [r, oo] + [oo, s]` as a combination of
/// generators `xi(u:v)`.
pub fn path_to_symbols(r: &CuspPoint, s: &CuspPoint, p1: &ProjectiveLine) -> SymCombination {
    let mut out = SymCombination::new();
    if r == s {
        return out;
    }
    path_from_infinity(s, p1, &mut out, 1);
    path_from_infinity(r, p1, &mut out, -1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Ideal;

    fn p(q: u32, s: &str) -> Poly {
        Poly::parse(q, s).unwrap()
    }

    #[test]
    fn convergents_of_polynomial() {
        let u = p(3, "T^2+2");
        let c = convergents(&u, &Poly::one(3)).unwrap();
        assert_eq!(c, vec![(Poly::one(3), Poly::zero(3)), (u, Poly::one(3))]);
    }

    #[test]
    fn convergents_of_fraction() {
        let c = convergents(&p(2, "T^2+1"), &p(2, "T")).unwrap();
        assert_eq!(c, vec![(Poly::one(2), Poly::zero(2)), (p(2, "T"), Poly::one(2)), (p(2, "T^2+1"), p(2, "T"))]);
    }

    #[test]
    fn convergent_determinants_are_units() {
        let a = p(3, "T^5+2*T^3+T+1");
        let c = p(3, "T^4+T^2+2");
        let conv = convergents(&a, &c).unwrap();
        for w in conv.windows(2) {
            let det = &(&w[1].0 * &w[0].1) - &(&w[0].0 * &w[1].1);
            assert!(det.is_unit(), "det = {det}");
        }
        let (pl, ql) = conv.last().unwrap();
        assert_eq!(CuspPoint::new(pl, ql).unwrap(), CuspPoint::new(&a, &c).unwrap());
    }

    #[test]
    fn trivial_path_is_empty() {
        let pl = ProjectiveLine::new(&Ideal::parse(2, "T^3+T+1").unwrap()).unwrap();
        let r = CuspPoint::new(&p(2, "T"), &p(2, "T^2+1")).unwrap();
        assert!(path_to_symbols(&r, &r, &pl).is_empty());
    }

    #[test]
    fn infinity_to_zero_is_one_edge() {
        let pl = ProjectiveLine::new(&Ideal::parse(3, "T^3+2*T+2").unwrap()).unwrap();
        let c = path_to_symbols(&CuspPoint::infinity(3), &CuspPoint::zero(3), &pl);
        let inf = pl.index_of(&Poly::one(3), &Poly::zero(3)).unwrap();
        assert_eq!(c, SymCombination::single(inf, 1));
    }

    #[test]
    fn cusp_point_normalization() {
        let x = CuspPoint::new(&p(3, "2*T+2"), &p(3, "2*T^2+2*T")).unwrap();
        assert_eq!(x.num(), &Poly::one(3));
        assert_eq!(x.den(), &p(3, "T"));
        assert!(CuspPoint::new(&Poly::zero(3), &Poly::zero(3)).is_err());
        assert!(CuspPoint::new(&p(3, "2"), &Poly::zero(3)).unwrap().is_infinity());
    }
}
