//! Hensel lifting in ℚ[[t]] (or approximately in ℂ[[t]]): the series `p(t)`
//! with `p(0) = a` and `f(p(t)) ≡ s(t) mod t^(K+1)`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalar::Coefficient;
use crate::univariate::rational_roots;

/// Residual bound below which an approximate lift counts as accurate.
const APPROX_TOLERANCE: f64 = 1e-8;

/// How the base root `a` was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesBase {
    Supplied,
    RationalRoot,
    ComplexEigenvalue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesLiftResult {
    /// Coefficients `p_0, …, p_K`; `residual` holds `f(p) − s` through order `K`.
    Exact {
        base: BigRational,
        origin: SeriesBase,
        coefficients: Vec<BigRational>,
        residual: Vec<BigRational>,
    },
    Approximate {
        base: Complex64,
        coefficients: Vec<Complex64>,
        residual_norm: f64,
        precision_loss: bool,
    },
}

impl SeriesLiftResult {
    /// True when the residual vanishes (exact) or is below tolerance (approximate).
    pub fn residual_ok(&self) -> bool {
        match self {
            Self::Exact { residual, .. } => residual.iter().all(Zero::is_zero),
            Self::Approximate { precision_loss, .. } => !precision_loss,
        }
    }
}

/// `f(p)` truncated after `t^order`, by Horner's rule.
fn compose_truncated<C: Coefficient>(f: &[C], p: &[C], order: usize) -> Vec<C> {
    let mut acc = vec![C::zero(); order + 1];
    for c in f.iter().rev() {
        let mut next = vec![C::zero(); order + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in p.iter().enumerate().take(order + 1 - i) {
                next[i + j] = next[i + j].clone() + a.clone() * b.clone();
            }
        }
        next[0] = next[0].clone() + c.clone();
        acc = next;
    }
    acc
}

fn derivative_at<C: Coefficient>(f: &[C], a: &C) -> C {
    f.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(C::zero(), |acc, (i, c)| acc * a.clone() + c.clone() * C::from_i64(i as i64))
}

fn eval_at<C: Coefficient>(f: &[C], a: &C) -> C {
    f.iter().rev().fold(C::zero(), |acc, c| acc * a.clone() + c.clone())
}

/// Order-by-order solve: `f′(a)·p_j = s_j − [f(p_0 + … + p_{j−1} t^{j−1})]_j`.
fn lift<C: Coefficient>(f: &[C], s: &[C], a: C, order: usize) -> (Vec<C>, Vec<C>) {
    let slope = derivative_at(f, &a);
    let mut p = vec![a];
    for j in 1..=order {
        p.push(C::zero());
        let known = compose_truncated(f, &p, j);
        let pj = (s[j].clone() - known[j].clone()).exact_div(&slope).expect("nonzero slope divides in a field");
        p[j] = pj;
    }
    let value = compose_truncated(f, &p, order);
    let residual = value.into_iter().zip(s).map(|(v, t)| v - t.clone()).collect();
    (p, residual)
}

fn integer_multiple(p: &[BigRational]) -> MultiPoly<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    MultiPoly::from_univariate(&ints)
}

fn complex_roots(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    let lead = p[d];
    // Companion matrix of the monic polynomial; coefficients are real here.
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(p[i] / lead).re;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Solves `f(p(t)) ≡ s(t) mod t^(order+1)` with `p(0)` a simple root of `f − s(0)`.
///
/// With a rational base (supplied, or found among the rational roots) the lift
/// is exact. Otherwise a simple root is taken from the companion-matrix
/// eigenvalues and the lift is carried out in double precision.
pub fn series_hensel_lift(
    f: &MultiPoly<BigRational>,
    s: &[BigRational],
    order: usize,
    base: Option<&BigRational>,
) -> Result<SeriesLiftResult> {
    let mut fc = f.to_univariate()?;
    while fc.len() > 1 && fc.last().is_some_and(Zero::is_zero) {
        fc.pop();
    }
    if fc.len() < 2 {
        return Err(Error::NoNonsingularRoot("constant polynomial".into()));
    }
    let mut target = s.to_vec();
    target.resize(order + 1, BigRational::zero());
    target.truncate(order + 1);
    let s0 = target[0].clone();
    let shifted: Vec<BigRational> =
        fc.iter().enumerate().map(|(i, c)| if i == 0 { c - &s0 } else { c.clone() }).collect();

    let exact = |a: BigRational, origin: SeriesBase| {
        let (coefficients, residual) = lift(&fc, &target, a.clone(), order);
        SeriesLiftResult::Exact { base: a, origin, coefficients, residual }
    };

    if let Some(a) = base {
        if !eval_at(&shifted, a).is_zero() {
            return Err(Error::NoNonsingularRoot(format!("f({a}) differs from the constant term of the target")));
        }
        if derivative_at(&fc, a).is_zero() {
            return Err(Error::NoNonsingularRoot(format!("f′ vanishes at {a}")));
        }
        return Ok(exact(a.clone(), SeriesBase::Supplied));
    }

    let rational = rational_roots(&integer_multiple(&shifted))?
        .into_iter()
        .map(|r| r.value)
        .find(|a| !derivative_at(&fc, a).is_zero());
    if let Some(a) = rational {
        return Ok(exact(a, SeriesBase::RationalRoot));
    }

    let to_c = |c: &BigRational| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
    let fcc: Vec<Complex64> = fc.iter().map(to_c).collect();
    let shifted_c: Vec<Complex64> = shifted.iter().map(to_c).collect();
    let scale = fcc.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let mut candidates: Vec<Complex64> = complex_roots(&shifted_c)
        .into_iter()
        .map(|mut a| {
            for _ in 0..4 {
                let d = derivative_at(&fcc, &a);
                if d.norm() == 0.0 {
                    break;
                }
                a -= eval_at(&shifted_c, &a) / d;
            }
            a
        })
        .filter(|a| derivative_at(&fcc, a).norm() > APPROX_TOLERANCE * scale)
        .collect();
    candidates.sort_by(|x, y| {
        (x.norm(), x.re, x.im).partial_cmp(&(y.norm(), y.re, y.im)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let a = *candidates.first().ok_or_else(|| Error::NoNonsingularRoot("every root of f − s(0) is repeated".into()))?;
    let target_c: Vec<Complex64> = target.iter().map(to_c).collect();
    let (coefficients, residual) = lift(&fcc, &target_c, a, order);
    let residual_norm = residual.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(SeriesLiftResult::Approximate {
        base: a,
        coefficients,
        residual_norm,
        precision_loss: residual_norm.is_nan() || residual_norm >= APPROX_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cubic() -> MultiPoly<BigRational> {
        MultiPoly::from_univariate(&[q(0, 1), q(-3, 1), q(0, 1), q(1, 1)])
    }

    #[test]
    fn lifts_identity_target() {
        let r = series_hensel_lift(&cubic(), &[q(0, 1), q(1, 1)], 3, None).unwrap();
        match r {
            SeriesLiftResult::Exact { base, coefficients, residual, .. } => {
                assert_eq!(base, q(0, 1));
                assert_eq!(coefficients, vec![q(0, 1), q(-1, 3), q(0, 1), q(-1, 81)]);
                assert!(residual.iter().all(Zero::is_zero));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_target_two() {
        let r = series_hensel_lift(&cubic(), &[q(2, 1)], 5, None).unwrap();
        match r {
            SeriesLiftResult::Exact { base, coefficients, .. } => {
                assert_eq!(base, q(2, 1));
                assert!(coefficients[1..].iter().all(Zero::is_zero));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(series_hensel_lift(&cubic(), &[q(2, 1)], 5, Some(&q(-1, 1))).is_err());
    }

    #[test]
    fn linear_map() {
        let f = MultiPoly::from_univariate(&[q(-5, 1), q(1, 1)]);
        let s = [q(1, 1), q(2, 1), q(3, 1)];
        match series_hensel_lift(&f, &s, 2, None).unwrap() {
            SeriesLiftResult::Exact { coefficients, .. } => assert_eq!(coefficients, vec![q(6, 1), q(2, 1), q(3, 1)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn approximate_branch() {
        // s(0) = 1 has only irrational roots of x^3 − 3x − 1.
        let r = series_hensel_lift(&cubic(), &[q(1, 1), q(1, 1)], 10, None).unwrap();
        match &r {
            SeriesLiftResult::Approximate { residual_norm, .. } => assert!(*residual_norm < 1e-8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.residual_ok());
    }

    #[test]
    fn repeated_roots_only() {
        let f = MultiPoly::from_univariate(&[q(0, 1), q(0, 1), q(1, 1)]);
        assert!(matches!(series_hensel_lift(&f, &[q(0, 1)], 3, None), Err(Error::NoNonsingularRoot(_))));
    }
}
