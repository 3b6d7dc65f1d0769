//! Coefficient kinds: arbitrary-precision integers, exact rationals,
//! residues modulo prime powers and (quarantined) approximate complexes.
//!
//! Integers, rationals and complexes are polynomial coefficient types via
//! [`Coefficient`]. Residues carry their modulus inline and refuse to mix
//! with residues of a different modulus.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ring operations every polynomial coefficient supports.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_integer(n: &BigInt) -> Self;

    /// `self / rhs` when the quotient exists in the coefficient ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }
}

impl Coefficient for BigInt {
    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

impl Coefficient for BigRational {
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

impl Coefficient for Complex64 {
    fn from_integer(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

/// Tag naming the coefficient ring of a parsed map or a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Integer,
    Rational,
    Residue,
    Complex,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ScalarKind::Integer => "integer",
            ScalarKind::Rational => "rational",
            ScalarKind::Residue => "residue",
            ScalarKind::Complex => "complex",
        };
        f.write_str(name)
    }
}

/// Exact characteristic-zero domains (ℤ and ℚ) the deciders accept.
pub trait Domain: Coefficient + fmt::Display {
    const KIND: ScalarKind;

    fn is_unit(&self) -> bool;

    fn to_rational(&self) -> BigRational;

    /// The rational as an element of this ring, if it belongs to it.
    fn from_rational(r: &BigRational) -> Option<Self>;
}

impl Domain for BigInt {
    const KIND: ScalarKind = ScalarKind::Integer;

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        r.is_integer().then(|| r.to_integer())
    }
}

impl Domain for BigRational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
}

/// Deterministic Miller-Rabin; exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `p <= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(i, &b)| b.then_some(i as u64)).collect()
}

/// Prime-power factorisation `n = Π p^e`, primes increasing.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Canonical representative of `n` in `[0, m)`.
pub fn reduce(n: &BigInt, m: &BigInt) -> BigInt {
    n.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// The ring ℤ/pᵏ for a prime `p` and `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    p: u64,
    k: u32,
    value: BigInt,
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("exponent must be at least 1".into()));
        }
        Ok(Self { p, k, value: num_traits::pow(BigInt::from(p), k as usize) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// `pᵏ` as an integer.
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `pᵏ` if it fits comfortably in machine arithmetic.
    pub fn value_u64(&self) -> Option<u64> {
        self.value.to_u64().filter(|&v| v < (1 << 62))
    }

    pub fn with_exponent(&self, k: u32) -> Self {
        Self::new(self.p, k).expect("prime already checked")
    }

    pub fn reduce(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.value)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

/// An element of ℤ/pᵏ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: &BigInt, modulus: &Modulus) -> Self {
        Self { value: modulus.reduce(value), modulus: modulus.clone() }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn check(&self, rhs: &Residue) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.to_string(), right: rhs.modulus.to_string() });
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Residue) -> Result<Residue> {
        self.check(rhs)?;
        Ok(Residue::new(&(&self.value + &rhs.value), &self.modulus))
    }

    pub fn checked_sub(&self, rhs: &Residue) -> Result<Residue> {
        self.check(rhs)?;
        Ok(Residue::new(&(&self.value - &rhs.value), &self.modulus))
    }

    pub fn checked_mul(&self, rhs: &Residue) -> Result<Residue> {
        self.check(rhs)?;
        Ok(Residue::new(&(&self.value * &rhs.value), &self.modulus))
    }

    /// Units of ℤ/pᵏ are exactly the residues not divisible by `p`.
    pub fn is_unit(&self) -> bool {
        !(&self.value % BigInt::from(self.modulus.p)).is_zero()
    }

    pub fn inverse(&self) -> Option<Residue> {
        inverse_mod(&self.value, self.modulus.value()).map(|v| Residue::new(&v, &self.modulus))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, primes_up_to(59));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(1));
    }

    #[test]
    fn modulus_rejects_composites() {
        assert_eq!(Modulus::new(6, 1), Err(Error::NotPrime(6)));
        assert!(Modulus::new(5, 0).is_err());
        assert_eq!(Modulus::new(5, 3).unwrap().value(), &BigInt::from(125));
    }

    #[test]
    fn residues_reduce_and_refuse_mixing() {
        let m25 = Modulus::new(5, 2).unwrap();
        let m5 = Modulus::new(5, 1).unwrap();
        let a = Residue::new(&BigInt::from(-3), &m25);
        assert_eq!(a.value(), &BigInt::from(22));
        let b = Residue::new(&BigInt::from(7), &m25);
        assert_eq!(a.checked_add(&b).unwrap().value(), &BigInt::from(4));
        assert_eq!(a.checked_mul(&b).unwrap().value(), &BigInt::from(4));
        let c = Residue::new(&BigInt::from(2), &m5);
        assert!(matches!(a.checked_add(&c), Err(Error::ModulusMismatch { .. })));
        assert!(!Residue::new(&BigInt::from(10), &m25).is_unit());
        let inv = b.inverse().unwrap();
        assert_eq!(inv.checked_mul(&b).unwrap().value(), &BigInt::from(1));
    }

    #[test]
    fn factorisation() {
        assert_eq!(factor_u64(2000), vec![(2, 4), (5, 3)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(1999), vec![(1999, 1)]);
    }
}
