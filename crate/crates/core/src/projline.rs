//! The projective line `P^1(A/n)` with canonical representatives.
//!
//! A class `(u:v)` is stored as `(u', d)` where `d` is the monic gcd of `v`
//! and `N`, and `u'` is the smallest `w*u mod N` over all units `w` of `A/n`
//! with `w*v = d mod N`. For prime `n` this is `(u/v mod N : 1)` or `(1:0)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ffpoly::{gcd, inv_mod_poly, polys_below, xgcd, FqScalar, Ideal, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct P1Class {
    pub u: Poly,
    pub v: Poly,
}

impl P1Class {
    fn sort_key(&self) -> (u64, u64) {
        (self.v.index(), self.u.index())
    }
}

impl fmt::Display for P1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.u, self.v)
    }
}

/// The symmetries appearing in the presentation relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `(u:v) -> (-v:u)`
    TwoTerm,
    /// `(u:v) -> (v:-u-v)`
    ThreeTerm1,
    /// `(u:v) -> (-u-v:u)`
    ThreeTerm2,
    /// `(u:v) -> (d1 u : d2 v)`
    Diag(u32, u32),
}

impl Symmetry {
    pub fn apply(self, u: &Poly, v: &Poly) -> (Poly, Poly) {
        match self {
            Symmetry::TwoTerm => (-v, u.clone()),
            Symmetry::ThreeTerm1 => (v.clone(), -(u + v)),
            Symmetry::ThreeTerm2 => (-(u + v), u.clone()),
            Symmetry::Diag(d1, d2) => {
                let q = u.field_size();
                (u.scale(FqScalar::new(d1 as i64, q)), v.scale(FqScalar::new(d2 as i64, q)))
            }
        }
    }
}

/// Canonical representative of `(u:v)` in `P^1(A/n)`.
pub fn p1_normalize(u: &Poly, v: &Poly, level: &Ideal) -> Result<P1Class> {
    normalize_raw(u, v, level.generator(), level.is_prime()).ok_or_else(|| Error::NotCoprime {
        u: u.to_string(),
        v: v.to_string(),
        level: level.to_string(),
    })
}

fn normalize_raw(u: &Poly, v: &Poly, n: &Poly, prime: bool) -> Option<P1Class> {
    let q = n.field_size();
    let u = u % n;
    let v = v % n;
    if v.is_zero() {
        return gcd(&u, n).is_one().then(|| P1Class { u: Poly::one(q), v: Poly::zero(q) });
    }
    if prime {
        let vinv = inv_mod_poly(&v, n)?;
        return Some(P1Class { u: &(&u * &vinv) % n, v: Poly::one(q) });
    }
    let d = gcd(&v, n);
    if d.is_one() {
        let vinv = inv_mod_poly(&v, n)?;
        return Some(P1Class { u: &(&u * &vinv) % n, v: Poly::one(q) });
    }
    if !gcd(&u, &d).is_one() {
        return None;
    }
    let m = n.exact_div(&d).expect("gcd divides the level");
    let (_, s, _) = xgcd(&v, n).ok()?;
    let s = &s % &m;
    let deg_d = d.degree().unwrap_or(0);
    let mut best: Option<Poly> = None;
    for k in polys_below(q, deg_d) {
        let w = &s + &(&k * &m);
        if !gcd(&w, n).is_one() {
            continue;
        }
        let cand = &(&w * &u) % n;
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.map(|u| P1Class { u, v: d })
}

/// `|P^1(A/n)| = |N| * prod_{P | N} (1 + 1/|P|)`, from the factorization.
pub fn p1_cardinality(level: &Ideal) -> u128 {
    let q = level.field_size() as u128;
    level
        .factor()
        .iter()
        .map(|(f, e)| {
            let norm = q.pow(f.degree().unwrap() as u32);
            norm.pow(*e) + norm.pow(*e - 1)
        })
        .product()
}

/// All classes of `P^1(A/n)` in a fixed order, with an index lookup.
#[derive(Clone, Debug)]
pub struct ProjectiveLine {
    level: Ideal,
    prime: bool,
    classes: Vec<P1Class>,
    index: HashMap<P1Class, usize>,
}

impl ProjectiveLine {
    pub fn new(level: &Ideal) -> Result<ProjectiveLine> {
        if level.degree() == 0 {
            return Err(Error::DegenerateLevel);
        }
        let q = level.field_size();
        let n = level.generator();
        let deg = level.degree();
        let prime = level.is_prime();
        let mut classes = Vec::new();
        classes.push(P1Class { u: Poly::one(q), v: Poly::zero(q) });
        if prime {
            classes.extend(polys_below(q, deg).map(|u| P1Class { u, v: Poly::one(q) }));
        } else {
            let mut seen = std::collections::HashSet::new();
            for d in level.monic_divisors() {
                if d == *n {
                    continue;
                }
                for u in polys_below(q, deg) {
                    if let Some(c) = normalize_raw(&u, &d, n, false) {
                        if seen.insert(c.clone()) {
                            classes.push(c);
                        }
                    }
                }
            }
        }
        classes.sort_by_key(P1Class::sort_key);
        let index = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(ProjectiveLine { level: level.clone(), prime, classes, index })
    }

    /// The same classes listed in another order: class `i` of the result is
    /// class `perm[i]` of `self`. Everything downstream depends only on
    /// indices, so this changes which generators become basis elements.
    pub fn permuted(&self, perm: &[usize]) -> Result<ProjectiveLine> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len() || !perm.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true)) {
            return Err(Error::Precondition(format!("not a permutation of 0..{}", self.len())));
        }
        let classes: Vec<P1Class> = perm.iter().map(|&j| self.classes[j].clone()).collect();
        let index = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(ProjectiveLine { level: self.level.clone(), prime: self.prime, classes, index })
    }

    pub fn level(&self) -> &Ideal {
        &self.level
    }

    pub fn field_size(&self) -> u32 {
        self.level.field_size()
    }

    pub fn is_prime_level(&self) -> bool {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[P1Class] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &P1Class {
        &self.classes[i]
    }

    pub fn normalize(&self, u: &Poly, v: &Poly) -> Result<P1Class> {
        p1_normalize(u, v, &self.level)
    }

    /// Index of the class of `(u:v)`, or `None` when `(u)+(v)+n != A`.
    pub fn index_of(&self, u: &Poly, v: &Poly) -> Option<usize> {
        let c = normalize_raw(u, v, self.level.generator(), self.prime)?;
        Some(self.index[&c])
    }

    pub fn index_of_class(&self, c: &P1Class) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn apply(&self, i: usize, sym: Symmetry) -> usize {
        let c = &self.classes[i];
        let (u, v) = sym.apply(&c.u, &c.v);
        self.index_of(&u, &v).expect("symmetries preserve P^1")
    }

    /// Parses `"(u:v)"` using the polynomial text format.
    pub fn parse_class(&self, s: &str) -> Result<P1Class> {
        let q = self.field_size();
        let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let inner =
            s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad("expected (u:v)"))?;
        let (u, v) = inner.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        self.normalize(&Poly::parse(q, u)?, &Poly::parse(q, v)?)
    }
}
