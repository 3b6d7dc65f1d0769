//! Newton–Hensel lifting of roots mod `p` and complete solving of
//! `f(x) ≡ t (mod pᵏ)`, with CRT assembly for composite moduli.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::bijective::jacobian_det_mod_p;
use super::modular::{decode_point, require_budget, ModMap};
use super::ResidueVector;
use crate::error::{Error, Result};
use crate::jacobian::jacobian_matrix;
use crate::poly::PolyMap;
use crate::scalar::{factor_u64, inverse_mod, Modulus};

/// Inverse of a square matrix over ℤ/pᵉ, pivoting on entries not divisible by `p`.
fn invert_mod(matrix: &[Vec<BigInt>], p: &BigInt, modulus: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigInt> = row.iter().map(|v| v.mod_floor(modulus)).collect();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_multiple_of(p))?;
        a.swap(col, pivot);
        let inv = inverse_mod(&a[col][col], modulus)?;
        for v in a[col].iter_mut() {
            *v = (&*v * &inv).mod_floor(modulus);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[col][c];
                    a[r][c] = (&a[r][c] - sub).mod_floor(modulus);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn is_zero_mod(values: &[BigInt], modulus: &BigInt) -> bool {
    values.iter().all(|v| v.is_multiple_of(modulus))
}

/// One Newton step `a ← a − Jf(a)⁻¹ f(a)` carried out modulo `modulus`.
fn newton_step(f: &PolyMap<BigInt>, a: &[BigInt], p: &BigInt, modulus: &BigInt) -> Vec<BigInt> {
    let jac = jacobian_matrix(f).evaluate(a).expect("dimension checked");
    let inv = invert_mod(&jac, p, modulus).expect("Jacobian is a unit mod p along the lift");
    let value = f.evaluate(a).expect("dimension checked");
    a.iter()
        .zip(&inv)
        .map(|(ai, row)| {
            let correction: BigInt = row.iter().zip(&value).map(|(j, v)| j * v).sum();
            (ai - correction).mod_floor(modulus)
        })
        .collect()
}

fn check_seed(f: &PolyMap<BigInt>, p: u64, k: u32, seed: &ResidueVector) -> Result<Vec<BigInt>> {
    Modulus::new(p, k.max(1))?;
    if k == 0 {
        return Err(Error::InvalidModulus("exponent must be at least 1".into()));
    }
    if seed.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: seed.dim() });
    }
    let pb = BigInt::from(p);
    let a: Vec<BigInt> = seed.entries().iter().map(|e| e.mod_floor(&pb)).collect();
    if !is_zero_mod(&f.evaluate(&a)?, &pb) {
        return Err(Error::Precondition(format!("seed {seed} is not a root modulo {p}")));
    }
    let small: Vec<u64> = a.iter().map(|v| v.try_into().expect("reduced mod p")).collect();
    if jacobian_det_mod_p(f, &small, p)? == 0 {
        return Err(Error::Precondition(format!("Jacobian is singular modulo {p} at seed {seed}")));
    }
    Ok(a)
}

/// Lifts a nonsingular root mod `p` to the unique root mod `pᵏ` above it,
/// doubling the precision at each Newton step.
pub fn hensel_lift_vector(f: &PolyMap<BigInt>, p: u64, k: u32, seed: &ResidueVector) -> Result<ResidueVector> {
    let mut a = check_seed(f, p, k, seed)?;
    let pb = BigInt::from(p);
    let mut e = 1u32;
    while e < k {
        let next = (2 * e).min(k);
        let modulus = num_traits::pow(pb.clone(), next as usize);
        a = newton_step(f, &a, &pb, &modulus);
        assert!(is_zero_mod(&f.evaluate(&a)?, &modulus), "Newton step failed to reach precision p^{next}");
        e = next;
    }
    Ok(ResidueVector::new(&a, &Modulus::new(p, k)?))
}

/// Every iterate of the lift, one power of `p` at a time: entry `i` is the root mod `p^(i+1)`.
pub fn hensel_lift_chain(f: &PolyMap<BigInt>, p: u64, k: u32, seed: &ResidueVector) -> Result<Vec<ResidueVector>> {
    let mut a = check_seed(f, p, k, seed)?;
    let pb = BigInt::from(p);
    let mut chain = vec![ResidueVector::new(&a, &Modulus::new(p, 1)?)];
    for e in 2..=k {
        let modulus = num_traits::pow(pb.clone(), e as usize);
        a = newton_step(f, &a, &pb, &modulus);
        assert!(is_zero_mod(&f.evaluate(&a)?, &modulus), "Newton step failed to reach precision p^{e}");
        chain.push(ResidueVector::new(&a, &Modulus::new(p, e)?));
    }
    Ok(chain)
}

/// All solutions of `f(x) ≡ target (mod pᵏ)`, sorted.
///
/// Roots mod `p` are found by scanning; nonsingular ones lift uniquely by
/// Newton iteration, singular ones are extended exhaustively one power of `p`
/// at a time.
pub fn solve_system_mod(
    f: &PolyMap<BigInt>,
    target: &[BigInt],
    p: u64,
    k: u32,
    budget: u64,
) -> Result<Vec<ResidueVector>> {
    let n = f.dim();
    if target.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: target.len() });
    }
    let modulus = Modulus::new(p, k)?;
    let total = require_budget(p, n, budget)?;
    let neg: Vec<BigInt> = target.iter().map(|t| -t).collect();
    let g = f.translate_values(&neg);
    let scan = ModMap::new(&g, p);
    let seeds: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let mut x = vec![0u64; n];
            decode_point(i, p, n, &mut x);
            scan.eval(&x).iter().all(|&v| v == 0).then_some(x)
        })
        .collect();

    let pb = BigInt::from(p);
    let mut spent = total as u128;
    let mut out = Vec::new();
    let base = Modulus::new(p, 1)?;
    for seed in seeds {
        if jacobian_det_mod_p(&g, &seed, p)? != 0 {
            out.push(hensel_lift_vector(&g, p, k, &ResidueVector::from_u64(&seed, &base))?);
            continue;
        }
        let mut level: Vec<Vec<BigInt>> = vec![seed.iter().map(|&v| BigInt::from(v)).collect()];
        let mut step = pb.clone();
        for e in 1..k {
            let next_mod = &step * &pb;
            let mut next = Vec::new();
            for c in &level {
                spent += total as u128;
                if spent > budget as u128 {
                    return Err(Error::BudgetExceeded { required: spent, budget });
                }
                let mut d = vec![0u64; n];
                for i in 0..total {
                    decode_point(i, p, n, &mut d);
                    let x: Vec<BigInt> = c.iter().zip(&d).map(|(ci, &di)| ci + &step * BigInt::from(di)).collect();
                    if is_zero_mod(&g.evaluate(&x)?, &next_mod) {
                        next.push(x);
                    }
                }
            }
            level = next;
            step = next_mod;
            let _ = e;
        }
        out.extend(level.iter().map(|x| ResidueVector::new(x, &modulus)));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Solves `f(x) ≡ target (mod m)` for arbitrary `m ≥ 1` by CRT over its
/// prime-power factors, caching the per-prime-power answers.
pub struct CompositeSolver<'a> {
    map: &'a PolyMap<BigInt>,
    target: Vec<BigInt>,
    budget: u64,
    cache: HashMap<(u64, u32), Option<Vec<BigInt>>>,
}

impl<'a> CompositeSolver<'a> {
    pub fn new(map: &'a PolyMap<BigInt>, target: &[BigInt], budget: u64) -> Self {
        Self { map, target: target.to_vec(), budget, cache: HashMap::new() }
    }

    fn prime_power_solution(&mut self, p: u64, e: u32) -> Result<Option<Vec<BigInt>>> {
        if let Some(hit) = self.cache.get(&(p, e)) {
            return Ok(hit.clone());
        }
        let sols = solve_system_mod(self.map, &self.target, p, e, self.budget)?;
        let first = sols.first().map(|s| s.entries().to_vec());
        self.cache.insert((p, e), first.clone());
        Ok(first)
    }

    /// Smallest-representative-per-factor solution combined by CRT, or `None`.
    pub fn solve(&mut self, m: u64) -> Result<Option<Vec<BigInt>>> {
        if m == 0 {
            return Err(Error::InvalidModulus("modulus must be positive".into()));
        }
        let n = self.map.dim();
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); n];
        let mut acc_mod = BigInt::one();
        for (p, e) in factor_u64(m) {
            let Some(sol) = self.prime_power_solution(p, e)? else {
                return Ok(None);
            };
            let pe = num_traits::pow(BigInt::from(p), e as usize);
            let inv = inverse_mod(&acc_mod, &pe).expect("coprime factors");
            for (a, s) in acc.iter_mut().zip(&sol) {
                let t = ((s - &*a) * &inv).mod_floor(&pe);
                *a = &*a + &acc_mod * t;
            }
            acc_mod *= &pe;
        }
        let values = self.map.evaluate(&acc)?;
        assert!(
            values.iter().zip(&self.target).all(|(v, t)| (v - t).is_multiple_of(&acc_mod)),
            "CRT combination failed to solve the system"
        );
        Ok(Some(acc))
    }
}

/// One-shot wrapper around [`CompositeSolver`].
pub fn solve_composite_mod(f: &PolyMap<BigInt>, target: &[BigInt], m: u64, budget: u64) -> Result<Option<Vec<BigInt>>> {
    CompositeSolver::new(f, target, budget).solve(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_BUDGET;
    use crate::parser::parse_map;

    fn zmap(src: &str) -> PolyMap<BigInt> {
        parse_map(src).unwrap().integer_map().unwrap()
    }

    fn seed(v: &[u64], p: u64) -> ResidueVector {
        ResidueVector::from_u64(v, &Modulus::new(p, 1).unwrap())
    }

    #[test]
    fn lifts_square_root_of_minus_one() {
        let f = zmap("vars x; f1 = x^2 + 1");
        assert_eq!(hensel_lift_vector(&f, 5, 2, &seed(&[2], 5)).unwrap().to_u64(), Some(vec![7]));
        assert_eq!(hensel_lift_vector(&f, 5, 3, &seed(&[2], 5)).unwrap().to_u64(), Some(vec![57]));
        let chain = hensel_lift_chain(&f, 5, 3, &seed(&[2], 5)).unwrap();
        let values: Vec<_> = chain.iter().map(|r| r.to_u64().unwrap()[0]).collect();
        assert_eq!(values, vec![2, 7, 57]);
        let id = zmap("vars x; f1 = x");
        assert_eq!(hensel_lift_vector(&id, 3, 4, &seed(&[0], 3)).unwrap().to_u64(), Some(vec![0]));
    }

    #[test]
    fn seed_preconditions() {
        let f = zmap("vars x; f1 = x^2 + 1");
        assert!(matches!(hensel_lift_vector(&f, 5, 2, &seed(&[1], 5)), Err(Error::Precondition(_))));
        let g = zmap("vars x; f1 = x^2");
        assert!(matches!(hensel_lift_vector(&g, 5, 2, &seed(&[0], 5)), Err(Error::Precondition(_))));
    }

    #[test]
    fn multivariate_lift() {
        let f = zmap("vars x, y; f1 = x^2 + y^2 - 2; f2 = x - y");
        let lifted = hensel_lift_vector(&f, 7, 4, &seed(&[1, 1], 7)).unwrap();
        let v = f.evaluate(lifted.entries()).unwrap();
        assert!(v.iter().all(|c| c.is_multiple_of(&BigInt::from(2401))));
    }

    fn brute(f: &PolyMap<BigInt>, target: &[BigInt], p: u64, k: u32) -> Vec<Vec<u64>> {
        let m = p.pow(k);
        let n = f.dim();
        let mb = BigInt::from(m);
        let mut out = Vec::new();
        let mut x = vec![0u64; n];
        for i in 0..m.pow(n as u32) {
            decode_point(i, m, n, &mut x);
            let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let v = f.evaluate(&xs).unwrap();
            if v.iter().zip(target).all(|(a, b)| (a - b).is_multiple_of(&mb)) {
                out.push(x.clone());
            }
        }
        out
    }

    #[test]
    fn solver_matches_brute_force() {
        let cases = [
            ("vars x; f1 = (2*x + 1)*(3*x + 1)", vec![0], 5, 3),
            ("vars x; f1 = x^2", vec![0], 2, 5),
            ("vars x; f1 = (x^2 - 13)*(x^2 - 17)*(x^2 - 221)", vec![0], 2, 6),
            ("vars x, y; f1 = x^2 + y; f2 = x*y", vec![1, 0], 3, 2),
            ("vars x; f1 = 2*x", vec![1], 2, 1),
        ];
        for (src, t, p, k) in cases {
            let f = zmap(src);
            let target: Vec<BigInt> = t.iter().map(|&v| BigInt::from(v)).collect();
            let got: Vec<Vec<u64>> = solve_system_mod(&f, &target, p, k, DEFAULT_BUDGET)
                .unwrap()
                .iter()
                .map(|r| r.to_u64().unwrap())
                .collect();
            assert_eq!(got, brute(&f, &target, p, k), "{src} mod {p}^{k}");
        }
        let f = zmap("vars x; f1 = (2*x + 1)*(3*x + 1)");
        let sols = solve_system_mod(&f, &[BigInt::zero()], 5, 3, DEFAULT_BUDGET).unwrap();
        let values: Vec<u64> = sols.iter().map(|r| r.to_u64().unwrap()[0]).collect();
        assert_eq!(values, vec![62, 83]);
    }

    #[test]
    fn composite_moduli() {
        let f = zmap("vars x; f1 = (x^2 - 13)*(x^2 - 17)*(x^2 - 221)");
        let mut solver = CompositeSolver::new(&f, &[BigInt::zero()], DEFAULT_BUDGET);
        for m in 1..=300u64 {
            let x = solver.solve(m).unwrap().expect("root mod every m");
            assert!(f.evaluate(&x).unwrap()[0].is_multiple_of(&BigInt::from(m)));
        }
        let g = zmap("vars x; f1 = 2*x");
        assert_eq!(solve_composite_mod(&g, &[BigInt::one()], 6, DEFAULT_BUDGET).unwrap(), None);
    }
}
