//! Injectivity over ℤ, ℤ_(p) and ℤ_p: exact deciders where they exist,
//! certificates and one-sided probes where they do not.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use super::bijective::{is_bijective_mod, Collision};
use super::hensel::hensel_lift_vector;
use super::modular::{decode_point, require_budget, ModPoly};
use super::ResidueVector;
use crate::error::{Error, Result};
use crate::jacobian::jacobian_determinant;
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::Modulus;
use crate::univariate::{cauchy_bound, derivative, eval_int, isolate_real_roots, rational_roots};

/// Default search radius `|c|` for [`rational_noninjectivity_witness`].
pub const DEFAULT_WITNESS_RADIUS: u32 = 10;

/// Whether `x ↦ xᵐ` is injective on ℤ_p: `gcd(m, 2(p − 1)) = 1`.
pub fn power_map_injectivity(m: u32, p: u64) -> bool {
    (m as u64).gcd(&(2 * (p - 1))) == 1
}

/// `b ≢ c (mod p)`, both simple points of `f − f(b)` mod `p`, lifted to mod `p³`.
///
/// Hensel's lemma gives unique `B ≡ b`, `C ≡ c` in ℤ_p with `f(B) = f(C) = f(b)`,
/// so `f` is not injective on ℤ_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonInjectivityCertificate {
    pub prime: u64,
    pub first: u64,
    pub second: u64,
    /// The common value `f(first)` ∈ ℤ.
    pub value: BigInt,
    pub first_lift: ResidueVector,
    pub second_lift: ResidueVector,
}

impl NonInjectivityCertificate {
    pub fn verify(&self, f: &PolyMap<BigInt>) -> bool {
        let p = BigInt::from(self.prime);
        let m = self.first_lift.modulus().value().clone();
        let hits = |r: &ResidueVector| f.evaluate(r.entries()).is_ok_and(|v| (&v[0] - &self.value).is_multiple_of(&m));
        let simple = |x: u64| {
            f.components()[0]
                .partial_derivative(0)
                .and_then(|d| d.eval(&[BigInt::from(x)]))
                .is_ok_and(|v| !v.is_multiple_of(&p))
        };
        let distinct = !(&self.first_lift.entries()[0] - &self.second_lift.entries()[0]).is_multiple_of(&p);
        hits(&self.first_lift) && hits(&self.second_lift) && distinct && simple(self.first) && simple(self.second)
    }
}

fn require_univariate_map(f: &PolyMap<BigInt>) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::NotUnivariate(f.dim()));
    }
    Ok(())
}

/// Searches `𝔽_p` for a collision between two simple points and lifts it to a ℤ_p certificate.
pub fn certify_noninjective_zp(f: &PolyMap<BigInt>, p: u64, budget: u64) -> Result<Option<NonInjectivityCertificate>> {
    require_univariate_map(f)?;
    require_budget(p, 1, budget)?;
    let poly = &f.components()[0];
    let values = ModPoly::new(poly, p);
    let slopes = ModPoly::new(&poly.partial_derivative(0)?, p);
    let mut seen: HashMap<u64, u64> = HashMap::new();
    for x in 0..p {
        if slopes.eval(&[x]) == 0 {
            continue;
        }
        let v = values.eval(&[x]);
        if let Some(&b) = seen.get(&v) {
            let value = poly.eval(&[BigInt::from(b)])?;
            let g = f.translate_values(&[-value.clone()]);
            let base = Modulus::new(p, 1)?;
            let first_lift = hensel_lift_vector(&g, p, 3, &ResidueVector::from_u64(&[b], &base))?;
            let second_lift = hensel_lift_vector(&g, p, 3, &ResidueVector::from_u64(&[x], &base))?;
            let cert = NonInjectivityCertificate { prime: p, first: b, second: x, value, first_lift, second_lift };
            debug_assert!(cert.verify(f));
            return Ok(Some(cert));
        }
        seen.insert(v, x);
    }
    Ok(None)
}

/// Outcome of an injectivity scan of `(ℤ/pᵏ)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityProbe {
    /// Injective mod `pᵏ`, and this forces injectivity on ℤ_pⁿ: either `k ≥ 2`, or
    /// `k = 1` with `det(Jf)` nowhere zero mod `p`.
    ZpInjective,
    /// Injective mod `p` only; a singular point leaves ℤ_p-injectivity open.
    InjectiveModPk,
    /// A collision mod `pᵏ`, which does not refute ℤ_p-injectivity.
    Inconclusive { collision: Collision },
}

impl InjectivityProbe {
    /// True when injectivity on `(ℤ/pᵏ)ⁿ` was established.
    pub fn injective_mod_pk(&self) -> bool {
        !matches!(self, Self::Inconclusive { .. })
    }
}

/// One-sided probe: exhaustive injectivity check on `(ℤ/pᵏ)ⁿ`.
pub fn injectivity_probe_mod_pk(f: &PolyMap<BigInt>, p: u64, k: u32, budget: u64) -> Result<InjectivityProbe> {
    let check = is_bijective_mod(f, p, k, budget)?;
    if let Some(collision) = check.collision {
        return Ok(InjectivityProbe::Inconclusive { collision });
    }
    if k >= 2 {
        return Ok(InjectivityProbe::ZpInjective);
    }
    let n = f.dim();
    let total = require_budget(p, n, budget)?;
    let det = ModPoly::new(&jacobian_determinant(f), p);
    let singular = (0..total).into_par_iter().any(|i| {
        let mut x = vec![0u64; n];
        decode_point(i, p, n, &mut x);
        det.eval(&x) == 0
    });
    Ok(if singular { InjectivityProbe::InjectiveModPk } else { InjectivityProbe::ZpInjective })
}

/// Decision of injectivity on ℤ for a univariate integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerInjectivity {
    Injective,
    NotInjective { first: BigInt, second: BigInt },
}

impl IntegerInjectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Self::Injective)
    }
}

struct Budget {
    spent: u128,
    limit: u64,
}

impl Budget {
    fn charge(&mut self, amount: u128) -> Result<()> {
        self.spent += amount;
        if self.spent > self.limit as u128 {
            return Err(Error::BudgetExceeded { required: self.spent, budget: self.limit });
        }
        Ok(())
    }
}

fn collision(a: BigInt, b: BigInt) -> IntegerInjectivity {
    let (first, second) = if a < b { (a, b) } else { (b, a) };
    IntegerInjectivity::NotInjective { first, second }
}

/// Integer `x ≤ start` with `f(x) = v`, where `f` is monotone on `(−∞, start]`.
fn search_left_tail(
    coeffs: &[BigInt],
    start: &BigInt,
    v: &BigInt,
    increasing: bool,
    budget: &mut Budget,
) -> Result<Option<BigInt>> {
    let f = |x: &BigInt| eval_int(coeffs, x);
    // Orient so that g(x) = ±f(x) increases in x on the tail.
    let g = |x: &BigInt| if increasing { f(x) } else { -f(x) };
    let w = if increasing { v.clone() } else { -v };
    if g(start) < w {
        return Ok(None);
    }
    let mut step = BigInt::one();
    let mut lo = start - &step;
    while g(&lo) > w {
        budget.charge(1)?;
        step *= 2;
        lo = start - &step;
    }
    let mut hi = start.clone();
    // g(lo) ≤ w ≤ g(hi)
    while &hi - &lo > BigInt::one() {
        budget.charge(1)?;
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if g(&mid) <= w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok([lo, hi].into_iter().find(|x| g(x) == w))
}

/// Decides injectivity of `f : ℤ → ℤ`.
///
/// Outside the window spanned by the real critical points `f` is strictly
/// monotone, so collisions either lie in the window, pair a window point with a
/// bounded stretch of a tail, or pair the two tails. For odd degree the tail
/// overlap is a bounded range of values; for even degree a pair `x + y = s`
/// far out forces `s` next to the symmetry point `−2b/(da)`, which bounds the
/// search by root bounds of `f(y) − f(s − y)`.
pub fn injectivity_over_z_univariate(f: &MultiPoly<BigInt>, budget: u64) -> Result<IntegerInjectivity> {
    let mut coeffs = f.to_univariate()?;
    let d = coeffs.len() - 1;
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if coeffs[d].is_negative() {
        coeffs.iter_mut().for_each(|c| *c = -c.clone());
    }
    if d == 1 {
        return Ok(IntegerInjectivity::Injective);
    }
    let mut budget = Budget { spent: 0, limit: budget };
    let dense: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let crit = isolate_real_roots(&derivative(&dense), &BigRational::new(BigInt::one(), BigInt::from(4)));
    if crit.is_empty() {
        return Ok(IntegerInjectivity::Injective);
    }
    let fx = |x: &BigInt| eval_int(&coeffs, x);
    let left: BigInt = crit.iter().map(|r| r.lo.floor().to_integer()).min().expect("nonempty") - 1;
    let right: BigInt = crit.iter().map(|r| r.hi.ceil().to_integer()).max().expect("nonempty") + 1;

    let width: BigInt = &right - &left + 1;
    budget.charge(u128::try_from(&width).unwrap_or(u128::MAX))?;
    let mut window: HashMap<BigInt, BigInt> = HashMap::new();
    let mut x = left.clone();
    while x <= right {
        let v = fx(&x);
        if let Some(prev) = window.get(&v) {
            return Ok(collision(prev.clone(), x));
        }
        window.insert(v, x.clone());
        x += 1;
    }
    let min_w = window.keys().min().unwrap().clone();
    let max_w = window.keys().max().unwrap().clone();
    let odd = d % 2 == 1;

    // Right tail: increasing to +∞.
    let mut y = &right + 1;
    loop {
        let v = fx(&y);
        if v > max_w {
            break;
        }
        budget.charge(1)?;
        if let Some(w) = window.get(&v) {
            return Ok(collision(w.clone(), y));
        }
        y += 1;
    }
    // Left tail: increasing from −∞ (odd) or decreasing from +∞ (even).
    let mut x = &left - 1;
    loop {
        let v = fx(&x);
        if (odd && v < min_w) || (!odd && v > max_w) {
            break;
        }
        budget.charge(1)?;
        if let Some(w) = window.get(&v) {
            return Ok(collision(x, w.clone()));
        }
        x -= 1;
    }

    let tail_start = &left - 1;
    let tail_top = fx(&tail_start);
    if odd {
        let mut y = &right + 1;
        loop {
            let v = fx(&y);
            if v > tail_top {
                break;
            }
            budget.charge(1)?;
            if let Some(x) = search_left_tail(&coeffs, &tail_start, &v, true, &mut budget)? {
                return Ok(collision(x, y));
            }
            y += 1;
        }
        return Ok(IntegerInjectivity::Injective);
    }

    // Even degree: pairs with x + y = s far out force s near twice the symmetry point.
    let a = BigRational::from_integer(coeffs[d].clone());
    let b = BigRational::from_integer(coeffs[d - 1].clone());
    let twice_c = -(BigRational::from_integer(BigInt::from(2)) * b) / (BigRational::from_integer(BigInt::from(d)) * a);
    let sums: Vec<BigInt> = if twice_c.is_integer() {
        let s = twice_c.to_integer();
        vec![&s - 1, s.clone(), s + 1]
    } else {
        let s = twice_c.floor().to_integer();
        vec![s.clone(), s + 1]
    };
    let poly = MultiPoly::from_univariate(&coeffs);
    let mut horizon = right.clone();
    for s in &sums {
        let reflected = MultiPoly::from_univariate(&[s.clone(), -BigInt::one()]);
        let mirrored = poly.substitute(&[reflected])?;
        let diff = &poly - &mirrored;
        if diff.is_zero() {
            // f is symmetric about s/2: (s − y, y) collide for every y.
            let y = &right + 1;
            return Ok(collision(s - &y, y));
        }
        let dense_diff: Vec<BigRational> = diff.to_univariate()?.into_iter().map(BigRational::from_integer).collect();
        horizon = horizon.max(cauchy_bound(&dense_diff)).max(s - &left + 1);
    }
    let mut y = &right + 1;
    while y <= horizon {
        budget.charge(1)?;
        let v = fx(&y);
        if let Some(x) = search_left_tail(&coeffs, &tail_start, &v, false, &mut budget)? {
            return Ok(collision(x, y));
        }
        y += 1;
    }
    Ok(IntegerInjectivity::Injective)
}

/// `r ∈ ℤ_(p)`: the denominator of `r` is prime to `p`.
pub fn zloc_membership(r: &BigRational, p: u64) -> bool {
    !r.denom().is_multiple_of(&BigInt::from(p))
}

fn witness_key(r: &BigRational) -> (BigInt, BigInt, bool) {
    (r.denom().clone(), r.numer().abs(), r.is_negative())
}

/// Two distinct points of ℤ_(p) with the same image, found among the
/// rational roots of `f − f(c)` for `c = 0, 1, −1, 2, −2, …` up to `radius`.
pub fn rational_noninjectivity_witness(
    f: &MultiPoly<BigInt>,
    p: u64,
    radius: u32,
) -> Result<Option<(BigRational, BigRational)>> {
    if f.nvars() != 1 {
        return Err(Error::NotUnivariate(f.nvars()));
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let centres = std::iter::once(0i64).chain((1..=radius as i64).flat_map(|c| [c, -c]));
    for c in centres {
        let level = f.eval(&[BigInt::from(c)])?;
        let shifted = f - &MultiPoly::constant(1, level);
        let mut roots: Vec<BigRational> =
            rational_roots(&shifted)?.into_iter().map(|r| r.value).filter(|r| zloc_membership(r, p)).collect();
        if roots.len() >= 2 {
            roots.sort_by_key(witness_key);
            let (a, b) = (roots[0].clone(), roots[1].clone());
            let fq = f.map_coefficients(|v| BigRational::from_integer(v.clone()));
            assert_eq!(fq.eval(std::slice::from_ref(&a))?, fq.eval(std::slice::from_ref(&b))?);
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_BUDGET;
    use crate::parser::parse_map;

    fn zmap(src: &str) -> PolyMap<BigInt> {
        parse_map(src).unwrap().integer_map().unwrap()
    }

    fn zpoly(src: &str) -> MultiPoly<BigInt> {
        zmap(&format!("vars x; f1 = {src}")).components()[0].clone()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn power_map_formula() {
        assert!(power_map_injectivity(3, 5));
        assert!(!power_map_injectivity(3, 7));
        assert!(!power_map_injectivity(2, 3));
        assert!(!power_map_injectivity(2, 2));
        assert!(power_map_injectivity(3, 2));
    }

    #[test]
    fn noninjectivity_certificates() {
        let cube = zmap("vars x; f1 = x^3");
        let c = certify_noninjective_zp(&cube, 7, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((c.first, c.second), (1, 2));
        assert!(c.verify(&cube));
        assert!(certify_noninjective_zp(&cube, 5, DEFAULT_BUDGET).unwrap().is_none());
        let f = zmap("vars x; f1 = x + x^2");
        let c = certify_noninjective_zp(&f, 2, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((c.first_lift.to_u64(), c.second_lift.to_u64()), (Some(vec![0]), Some(vec![7])));
    }

    #[test]
    fn probes_are_one_sided() {
        let cube = zmap("vars x; f1 = x^3");
        match injectivity_probe_mod_pk(&cube, 2, 3, DEFAULT_BUDGET).unwrap() {
            InjectivityProbe::Inconclusive { collision } => {
                assert_eq!((collision.first, collision.second), (vec![0], vec![2]))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            injectivity_probe_mod_pk(&cube, 3, 2, DEFAULT_BUDGET).unwrap(),
            InjectivityProbe::Inconclusive { .. }
        ));
        assert_eq!(injectivity_probe_mod_pk(&cube, 3, 1, DEFAULT_BUDGET).unwrap(), InjectivityProbe::InjectiveModPk);
        assert_eq!(
            injectivity_probe_mod_pk(&zmap("vars x; f1 = x + 3*x^2"), 3, 1, DEFAULT_BUDGET).unwrap(),
            InjectivityProbe::ZpInjective
        );
    }

    #[test]
    fn integer_injectivity_examples() {
        assert!(injectivity_over_z_univariate(&zpoly("6*x^3 - 5*x^2 + x"), DEFAULT_BUDGET).unwrap().is_injective());
        assert_eq!(
            injectivity_over_z_univariate(&zpoly("x^2"), DEFAULT_BUDGET).unwrap(),
            IntegerInjectivity::NotInjective { first: BigInt::from(-1), second: BigInt::from(1) }
        );
        assert!(injectivity_over_z_univariate(&zpoly("x^3"), DEFAULT_BUDGET).unwrap().is_injective());
        assert_eq!(injectivity_over_z_univariate(&zpoly("7"), DEFAULT_BUDGET), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn far_collisions_are_found() {
        // x^2 + x: f(x) = f(-1 - x), symmetric about -1/2.
        let r = injectivity_over_z_univariate(&zpoly("x^2 + x"), DEFAULT_BUDGET).unwrap();
        assert!(!r.is_injective());
        // 2x^2 + x is injective on Z: f(x) = f(y) needs x + y = -1/2.
        assert!(injectivity_over_z_univariate(&zpoly("2*x^2 + x"), DEFAULT_BUDGET).unwrap().is_injective());
        // x^3 - 100x collides far from zero: f(-10) = f(0) = f(10).
        assert!(!injectivity_over_z_univariate(&zpoly("x^3 - 100*x"), DEFAULT_BUDGET).unwrap().is_injective());
        // x^4 - 50x^3: f(0) = f(50); both tails in play.
        let r = injectivity_over_z_univariate(&zpoly("x^4 - 50*x^3"), DEFAULT_BUDGET).unwrap();
        assert!(matches!(r, IntegerInjectivity::NotInjective { .. }));
    }

    #[test]
    fn zloc_examples() {
        assert!(zloc_membership(&q(1, 2), 3));
        assert!(!zloc_membership(&q(1, 2), 2));
        assert!(zloc_membership(&q(0, 1), 7));
    }

    #[test]
    fn rational_witnesses() {
        let f = zpoly("6*x^3 - 5*x^2 + x");
        assert_eq!(rational_noninjectivity_witness(&f, 5, 10).unwrap(), Some((q(0, 1), q(1, 2))));
        assert_eq!(rational_noninjectivity_witness(&f, 2, 10).unwrap(), Some((q(0, 1), q(1, 3))));
        assert_eq!(rational_noninjectivity_witness(&f, 3, 10).unwrap(), Some((q(0, 1), q(1, 2))));
        assert_eq!(rational_noninjectivity_witness(&zpoly("x^3"), 5, 10).unwrap(), None);
    }
}
