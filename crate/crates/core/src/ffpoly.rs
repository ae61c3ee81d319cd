//! Arithmetic in `F_q` (prime `q`) and in `A = F_q[T]`.
//!
//! Polynomials are stored densely, lowest degree first, with no trailing
//! zero coefficients. The total order on [`Poly`] is the order of
//! [`Poly::index`]: degree first, then coefficients compared from the top
//! down, which is the same as lexicographic order on coefficient vectors with
//! the constant term varying fastest.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Rem, Sub};

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ensure_prime_field(q: u32) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NonPrimeField(q))
    }
}

#[inline]
fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

#[inline]
fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    // q is prime: a^(q-2)
    let mut base = a % q;
    let mut e = q - 2;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

/// An element of the prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqScalar {
    value: u32,
    modulus: u32,
}

impl FqScalar {
    pub fn new(value: i64, modulus: u32) -> Self {
        let v = value.rem_euclid(modulus as i64) as u32;
        FqScalar { value: v, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<FqScalar> {
        if self.value == 0 {
            None
        } else {
            Some(FqScalar { value: inv_mod(self.value, self.modulus), modulus: self.modulus })
        }
    }

    /// The nonzero elements `1, 2, ..., q-1`.
    pub fn units(q: u32) -> impl Iterator<Item = FqScalar> {
        (1..q).map(move |v| FqScalar { value: v, modulus: q })
    }
}

impl Mul for FqScalar {
    type Output = FqScalar;
    fn mul(self, rhs: FqScalar) -> FqScalar {
        FqScalar { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }
}

impl fmt::Display for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A polynomial in `F_q[T]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    q: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(q: u32) -> Poly {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u32) -> Poly {
        Poly { q, coeffs: vec![1] }
    }

    /// The indeterminate `T`.
    pub fn t(q: u32) -> Poly {
        Poly { q, coeffs: vec![0, 1] }
    }

    pub fn constant(q: u32, c: i64) -> Poly {
        Poly::from_coeffs(q, vec![c.rem_euclid(q as i64) as u32])
    }

    pub fn from_scalar(c: FqScalar) -> Poly {
        Poly::from_coeffs(c.modulus, vec![c.value])
    }

    /// `c * T^k`.
    pub fn monomial(q: u32, c: u32, k: usize) -> Poly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c % q;
        Poly::from_coeffs(q, coeffs)
    }

    /// Builds a polynomial from coefficients, lowest degree first. Coefficients
    /// are reduced mod `q` and trailing zeros dropped.
    pub fn from_coeffs(q: u32, mut coeffs: Vec<u32>) -> Poly {
        debug_assert!(q >= 2);
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        let mut p = Poly { q, coeffs };
        p.trim();
        p
    }

    pub fn from_signed(q: u32, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(q, coeffs.iter().map(|c| c.rem_euclid(q as i64) as u32).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial, which therefore sorts below every
    /// genuine degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    /// Nonzero constant, i.e. a unit of `A`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> Option<FqScalar> {
        self.coeffs.last().map(|&c| FqScalar { value: c, modulus: self.q })
    }

    pub fn scale(&self, c: FqScalar) -> Poly {
        if c.value == 0 {
            return Poly::zero(self.q);
        }
        Poly { q: self.q, coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c.value, self.q)).collect() }
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.q, other.q, "polynomials over different fields");
    }

    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if self.q != b.q {
            return Err(Error::FieldMismatch(self.q, b.q));
        }
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let q = self.q;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(q), self.clone()));
        }
        let lead_inv = inv_mod(b.coeffs[db], q);
        let mut quot = vec![0u32; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let f = mul_mod(c, lead_inv, q);
            quot[i - db] = f;
            let shift = i - db;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if bj != 0 {
                    let sub = mul_mod(f, bj, q);
                    let slot = &mut rem[shift + j];
                    *slot = (*slot + q - sub) % q;
                }
            }
        }
        Ok((Poly::from_coeffs(q, quot), Poly::from_coeffs(q, rem)))
    }

    /// Exact quotient, or `None` if `b` does not divide `self`.
    pub fn exact_div(&self, b: &Poly) -> Option<Poly> {
        match self.divrem(b) {
            Ok((quo, rem)) if rem.is_zero() => Some(quo),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        (other % self).is_zero()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self % m;
        let mut acc = &Poly::one(self.q) % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = &(&acc * &base) % m;
            }
            e >>= 1;
            if e > 0 {
                base = &(&base * &base) % m;
            }
        }
        acc
    }

    /// Splits a nonzero polynomial as `unit * monic`.
    pub fn monicize(&self) -> Result<(FqScalar, Poly)> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = lead.inv().expect("leading coefficient is nonzero");
        Ok((lead, self.scale(inv)))
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.monicize() {
            Ok((_, m)) => m,
            Err(_) => self.clone(),
        }
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.q) + c) % self.q;
        }
        acc
    }

    /// Position in the enumeration of all polynomials: `sum c_i q^i`.
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.q as u64 + c as u64)
    }

    pub fn from_index(q: u32, mut idx: u64) -> Poly {
        let mut coeffs = Vec::new();
        while idx > 0 {
            coeffs.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        Poly { q, coeffs }
    }

    /// Parses the textual format, e.g. `"T^3+T+1"`, `"2*T^2+1"`, `"0"`.
    pub fn parse(q: u32, input: &str) -> Result<Poly> {
        let err = |reason: &str| Error::Parse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        if s == "0" {
            return Ok(Poly::zero(q));
        }
        let mut coeffs: Vec<u32> = Vec::new();
        for term in s.split('+') {
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, exp) = parse_term(term).ok_or_else(|| err(&format!("bad term {term:?}")))?;
            if coef == 0 {
                return Err(err("zero coefficient in a term"));
            }
            if coef >= q as u64 {
                return Err(err(&format!("coefficient {coef} not in [0, {q})")));
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            if coeffs[exp] != 0 {
                return Err(err(&format!("repeated exponent {exp}")));
            }
            coeffs[exp] = coef as u32;
        }
        Ok(Poly::from_coeffs(q, coeffs))
    }
}

fn parse_term(term: &str) -> Option<(u64, usize)> {
    let (coef_part, mono) = match term.split_once('*') {
        Some((c, m)) => (Some(c), Some(m)),
        None if term.starts_with('T') => (None, Some(term)),
        None => (Some(term), None),
    };
    let coef = match coef_part {
        Some(c) => {
            if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            c.parse::<u64>().ok()?
        }
        None => 1,
    };
    let exp = match mono {
        None => 0,
        Some("T") => 1,
        Some(m) => {
            let e = m.strip_prefix("T^")?;
            if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            e.parse::<usize>().ok()?
        }
    };
    Some((coef, exp))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (k, 1) => write!(f, "T^{k}")?,
                (k, c) => write!(f, "{c}*T^{k}")?,
            }
        }
        Ok(())
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| (self.coeff(i) + rhs.coeff(i)) % q).collect();
        Poly::from_coeffs(q, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| (self.coeff(i) + q - rhs.coeff(i)) % q).collect();
        Poly::from_coeffs(q, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let q = self.q;
        Poly { q, coeffs: self.coeffs.iter().map(|&c| (q - c) % q).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % q;
            }
        }
        Poly::from_coeffs(self.q, acc.into_iter().map(|c| c as u32).collect())
    }
}

/// Remainder; panics on a zero divisor like integer `%`.
impl Rem for &Poly {
    type Output = Poly;
    fn rem(self, rhs: &Poly) -> Poly {
        self.divrem(rhs).expect("remainder by the zero polynomial").1
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Rem, rem);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Extended gcd: `g = s*a + t*b` with `g` the monic generator of `(a) + (b)`.
pub fn xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    if a.q != b.q {
        return Err(Error::FieldMismatch(a.q, b.q));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = a.q;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
    let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
    while !r1.is_zero() {
        let (quo, rem) = r0.divrem(&r1)?;
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = r0.leading().and_then(FqScalar::inv).expect("nonzero gcd");
    Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x.monic()
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_poly(a: &Poly, m: &Poly) -> Option<Poly> {
    let a = a % m;
    if a.is_zero() {
        return if m.is_unit() { Some(Poly::zero(m.q)) } else { None };
    }
    let (g, s, _) = xgcd(&a, m).ok()?;
    g.is_one().then(|| &s % m)
}

/// Every polynomial of degree `< d` (including zero), in index order.
pub fn polys_below(q: u32, d: usize) -> impl Iterator<Item = Poly> {
    let count = (q as u64).pow(d as u32);
    (0..count).map(move |i| Poly::from_index(q, i))
}

/// Monic polynomials of degree exactly `d`, or of every degree `0..=d` when
/// `upto` is set, in index order.
pub fn enumerate_monic(q: u32, d: usize, upto: bool) -> Vec<Poly> {
    let degrees = if upto { 0..=d } else { d..=d };
    let mut out = Vec::new();
    for k in degrees {
        let lead = (q as u64).pow(k as u32);
        out.extend((0..lead).map(|low| Poly::from_index(q, lead + low)));
    }
    out
}

/// Irreducibility test for monic `a` of positive degree: no common factor with
/// `T^(q^i) - T` for `1 <= i <= deg a / 2`.
pub fn is_irreducible(a: &Poly) -> Result<bool> {
    let d = match a.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial(a.to_string())),
        Some(d) => d,
    };
    if !a.is_monic() {
        return Err(Error::NotMonic(a.to_string()));
    }
    let q = a.q;
    let t = Poly::t(q);
    let mut frob = &t % a;
    for _ in 1..=d / 2 {
        frob = frob.pow_mod(q as u64, a);
        let g = gcd(&(&frob - &t), a);
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic irreducible polynomials of degree `d`, in index order.
pub fn monic_irreducibles(q: u32, d: usize) -> Vec<Poly> {
    enumerate_monic(q, d, false).into_iter().filter(|p| is_irreducible(p).unwrap_or(false)).collect()
}

/// Coefficients `C_{a,0}, ..., C_{a,deg a}` of the Carlitz polynomial
/// `C(a) = sum_k C_{a,k} x^(q^k)`, where `C(T) = T x + x^q`.
pub fn carlitz_coeffs(a: &Poly) -> Result<Vec<Poly>> {
    let d = a.degree().ok_or(Error::ZeroPolynomial)?;
    let q = a.q;
    // C(T^j) for j = 0..=d, each a coefficient list of length j + 1
    let mut power: Vec<Poly> = vec![Poly::one(q)];
    let mut acc: Vec<Poly> = vec![Poly::zero(q); d + 1];
    let t = Poly::t(q);
    for j in 0..=d {
        let c = a.coeff(j);
        if c != 0 {
            let s = FqScalar { value: c, modulus: q };
            for (k, ck) in power.iter().enumerate() {
                acc[k] = &acc[k] + &ck.scale(s);
            }
        }
        if j < d {
            // C(T * T^j)_k = T * C(T^j)_k + C(T^j)_{k-1}^q
            let mut next = Vec::with_capacity(power.len() + 1);
            for k in 0..=power.len() {
                let mut v = if k < power.len() { &t * &power[k] } else { Poly::zero(q) };
                if k > 0 {
                    v = &v + &power[k - 1].pow(q as u64);
                }
                next.push(v);
            }
            power = next;
        }
    }
    Ok(acc)
}

/// A nonzero ideal of `A`, stored by its monic generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Ideal {
    gen: Poly,
}

impl Ideal {
    pub fn new(p: &Poly) -> Result<Ideal> {
        let (_, gen) = p.monicize()?;
        Ok(Ideal { gen })
    }

    pub fn unit(q: u32) -> Ideal {
        Ideal { gen: Poly::one(q) }
    }

    pub fn parse(q: u32, s: &str) -> Result<Ideal> {
        Ideal::new(&Poly::parse(q, s)?)
    }

    pub fn generator(&self) -> &Poly {
        &self.gen
    }

    pub fn degree(&self) -> usize {
        self.gen.degree().expect("ideal generator is nonzero")
    }

    pub fn field_size(&self) -> u32 {
        self.gen.q
    }

    pub fn is_coprime_to(&self, p: &Poly) -> bool {
        gcd(&self.gen, p).is_one()
    }

    pub fn is_prime(&self) -> bool {
        self.degree() > 0 && is_irreducible(&self.gen).unwrap_or(false)
    }

    /// True when some monic degree-1 polynomial divides the generator.
    pub fn has_degree_one_factor(&self) -> bool {
        let q = self.gen.q;
        (0..q).any(|r| self.gen.eval(r) == 0)
    }

    /// Monic divisors of the generator, in index order.
    pub fn monic_divisors(&self) -> Vec<Poly> {
        enumerate_monic(self.gen.q, self.degree(), true).into_iter().filter(|d| d.divides(&self.gen)).collect()
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        Ideal { gen: &self.gen * &other.gen }
    }

    /// Monic irreducible factors with multiplicities, by trial division in
    /// increasing degree.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        let q = self.gen.q;
        let mut rest = self.gen.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            for f in enumerate_monic(q, d, false) {
                let mut e = 0;
                while let Some(quo) = rest.exact_div(&f) {
                    rest = quo;
                    e += 1;
                }
                if e > 0 {
                    out.push((f, e));
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push((rest, 1));
            out.sort();
        }
        out
    }

    /// `(prime, exponent)` when the ideal is a power of a single prime.
    pub fn prime_power(&self) -> Option<(Ideal, u32)> {
        match self.factor().as_slice() {
            [(f, e)] => Some((Ideal { gen: f.clone() }, *e)),
            _ => None,
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)
    }
}
