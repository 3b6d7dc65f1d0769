//! Dense univariate helpers over ℚ and ℤ: rational roots, Sturm-sequence
//! real root isolation and root bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalar::factor_u64;

/// Dense coefficients, constant term first, no trailing zeros.
pub type Dense = Vec<BigRational>;

pub fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn to_dense(p: &MultiPoly<BigInt>) -> Result<Dense> {
    Ok(trim(p.to_univariate()?.into_iter().map(BigRational::from_integer).collect()))
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[BigRational]) -> Dense {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

/// Euclidean division over ℚ; panics on a zero divisor.
pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (Dense, Dense) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Dense {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        a.iter_mut().for_each(|c| *c /= &lead);
    }
    a
}

/// Upper bound on the absolute value of every complex root (Cauchy).
pub fn cauchy_bound(p: &[BigRational]) -> BigInt {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return BigInt::one();
    }
    let lead = p.last().unwrap().abs();
    let max =
        p[..p.len() - 1].iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |m, c| if c > m { c } else { m });
    (max + BigRational::one()).ceil().to_integer()
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &[BigRational]) -> Vec<Dense> {
    let mut chain = vec![trim(p.to_vec()), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = div_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(chain: &[Dense], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain.iter().map(|q| sign(&eval(q, x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// An interval `(lo, hi]` holding exactly one real root; `lo == hi` marks an exact root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }
}

/// Isolates the distinct real roots of a nonzero polynomial, in increasing order,
/// refining each interval to width at most `width`.
pub fn isolate_real_roots(p: &[BigRational], width: &BigRational) -> Vec<RootInterval> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let g = gcd(&p, &derivative(&p));
    let (sqf, _) = div_rem(&p, &g);
    let chain = sturm_chain(&sqf);
    let bound = BigRational::from_integer(cauchy_bound(&sqf));
    let two = BigRational::from_integer(BigInt::from(2));
    let count = |a: &BigRational, b: &BigRational| variations(&chain, a) - variations(&chain, b);

    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        match count(&a, &b) {
            0 => {}
            1 => {
                let (mut lo, mut hi) = (a, b);
                while &hi - &lo > *width {
                    let mid = (&lo + &hi) / &two;
                    if eval(&sqf, &mid).is_zero() {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    if count(&lo, &mid) == 1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                if eval(&sqf, &hi).is_zero() {
                    lo = hi.clone();
                }
                out.push(RootInterval { lo, hi });
            }
            _ => {
                let mid = (&a + &b) / &two;
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    out.sort_by(|x, y| x.hi.cmp(&y.hi));
    out
}

/// A rational root together with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRoot {
    pub value: BigRational,
    pub multiplicity: u32,
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        let mut ds = vec![1u64];
        for (p, e) in factor_u64(small) {
            let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
            for d in &ds {
                let mut q = *d;
                for _ in 0..=e {
                    next.push(q);
                    q *= p;
                }
            }
            ds = next;
        }
        ds.sort_unstable();
        return ds.into_iter().map(BigInt::from).collect();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divides integer coefficients (constant first) by `v·x − u`, if exact.
fn divide_linear(p: &[BigInt], u: &BigInt, v: &BigInt) -> Option<Vec<BigInt>> {
    // p(x) = (v x − u) q(x); solve for q from the top coefficient down.
    let n = p.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = p[n].clone();
    for i in (0..n).rev() {
        let (qi, r) = carry.div_rem(v);
        if !r.is_zero() {
            return None;
        }
        q[i] = qi;
        carry = &p[i] + u * &q[i];
    }
    carry.is_zero().then_some(q)
}

/// All rational roots of a nonzero univariate integer polynomial, with
/// multiplicities, in increasing order.
pub fn rational_roots(p: &MultiPoly<BigInt>) -> Result<Vec<RationalRoot>> {
    if p.nvars() != 1 {
        return Err(Error::NotUnivariate(p.nvars()));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut coeffs = p.to_univariate()?;
    let mut out = Vec::new();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push(RationalRoot { value: BigRational::zero(), multiplicity: zeros as u32 });
        coeffs.drain(..zeros);
    }
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    coeffs.iter_mut().for_each(|c| *c /= &content);

    let lead = coeffs.last().unwrap().clone();
    let trail = coeffs[0].clone();
    let dens = divisors(&lead);
    let nums = divisors(&trail);
    for v in &dens {
        for u in &nums {
            if !u.gcd(v).is_one() {
                continue;
            }
            for u in [u.clone(), -u.clone()] {
                let mut mult = 0;
                while coeffs.len() > 1 {
                    match divide_linear(&coeffs, &u, v) {
                        Some(q) => {
                            coeffs = q;
                            mult += 1;
                        }
                        None => break,
                    }
                }
                if mult > 0 {
                    out.push(RationalRoot { value: BigRational::new(u.clone(), v.clone()), multiplicity: mult });
                }
            }
        }
    }
    out.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(out)
}
