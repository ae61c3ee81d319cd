use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact coefficient field for row reduction.
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for `Q`.
    fn characteristic(&self) -> u32;
    fn name(&self) -> String;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// `F_p` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> PrimeField {
        assert!(crate::ffpoly::is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let mut base = *a as u64;
        let m = self.p as u64;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Some(acc as u32)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<u32> {
        s.parse::<u32>().ok().filter(|v| *v < self.p)
    }
}

/// The rational numbers, with exact big-integer fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u32 {
        0
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((n, d)) => {
                let n = n.parse::<BigInt>().ok()?;
                let d = d.parse::<BigInt>().ok()?;
                (d.is_positive()).then(|| BigRational::new(n, d))
            }
        }
    }
}
