//! Surjectivity verdicts over ℤ: a complete global decision through the
//! formal inverse, cross-checked against a bounded table of ℤ_p verdicts.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inverse::{decide_invertibility, InvertibilityCertificate, Obstruction};
use crate::jacobian::jacobian_determinant;
use crate::padic::modular::{decode_point, ModMap};
use crate::padic::{
    rational_noninjectivity_witness, solve_system_mod, zp_surjectivity_criterion, CompositeSolver,
    LocalSurjectivityVerdict, ResidueVector, DEFAULT_WITNESS_RADIUS,
};
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::primes_up_to;
use crate::univariate::rational_roots;

/// Largest `pⁿ` for which the inverse is cross-checked as a permutation of `𝔽ₚⁿ`.
const PERMUTATION_CHECK_LIMIT: u64 = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub enum GlobalObstruction {
    /// The invertibility decision failed, which rules out surjectivity over ℤ.
    NotInvertible(Obstruction<BigInt>),
    /// A scanned prime where surjectivity over ℤ_p fails.
    LocalFailure(LocalSurjectivityVerdict),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GlobalVerdict {
    SurjectiveAndInvertibleOverZ {
        inverse: PolyMap<BigInt>,
    },
    /// The invertibility obstruction first, then the smallest failing prime if any.
    NotSurjectiveOverZ {
        obstructions: Vec<GlobalObstruction>,
    },
}

/// One row of the local table; budget failures are kept per prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEntry {
    pub prime: u64,
    pub result: std::result::Result<LocalSurjectivityVerdict, Error>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyFlags {
    /// No verified inverse coexists with a failing prime, in either direction.
    pub local_global: bool,
    /// For unit-determinant maps bijective at every scanned prime, whether the
    /// inverse also permutes `𝔽ₚⁿ` as the inverse of `f`; `None` when not applicable.
    pub unit_bijective_agreement: Option<bool>,
    /// For invertible univariate maps, whether no ℤ_(p) collision was found at any scanned prime.
    pub localization_injective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub global: GlobalVerdict,
    pub local_table: Vec<LocalEntry>,
    pub consistency: ConsistencyFlags,
    pub determinant: MultiPoly<BigInt>,
}

impl Verdict {
    pub fn is_surjective(&self) -> bool {
        matches!(self.global, GlobalVerdict::SurjectiveAndInvertibleOverZ { .. })
    }

    /// Primes whose local verdict is negative, ascending.
    pub fn failing_primes(&self) -> Vec<u64> {
        self.local_table.iter().filter(|e| matches!(&e.result, Ok(v) if !v.is_surjective())).map(|e| e.prime).collect()
    }
}

fn permutes_as_inverse(f: &PolyMap<BigInt>, g: &PolyMap<BigInt>, p: u64) -> bool {
    let n = f.dim();
    let total = (p as u128).pow(n as u32);
    if total > PERMUTATION_CHECK_LIMIT as u128 {
        return true;
    }
    let (fm, gm) = (ModMap::new(f, p), ModMap::new(g, p));
    (0..total as u64).into_par_iter().all(|i| {
        let mut x = vec![0u64; n];
        decode_point(i, p, n, &mut x);
        gm.eval(&fm.eval(&x)) == x
    })
}

/// Classifies `f : ℤⁿ → ℤⁿ` and tabulates ℤ_p surjectivity for all primes `≤ prime_bound`.
pub fn classify_over_z(f: &PolyMap<BigInt>, prime_bound: u64, budget: u64) -> Verdict {
    let determinant = jacobian_determinant(f);
    let decision = decide_invertibility(f);
    let local_table: Vec<LocalEntry> = primes_up_to(prime_bound)
        .into_par_iter()
        .map(|p| LocalEntry { prime: p, result: zp_surjectivity_criterion(f, p, budget) })
        .collect();
    let first_failure = local_table.iter().find_map(|e| e.result.as_ref().ok().filter(|v| !v.is_surjective()).cloned());

    let local_global = !(decision.is_invertible() && first_failure.is_some());
    let all_local_ok = local_table.iter().all(|e| matches!(&e.result, Ok(v) if v.is_surjective()));
    let unit_det = crate::inverse::is_unit_polynomial(&determinant);
    let unit_bijective_agreement = match decision.inverse() {
        Some(g) if unit_det && all_local_ok => Some(local_table.iter().all(|e| permutes_as_inverse(f, g, e.prime))),
        _ => None,
    };
    let localization_injective = match (&decision, f.dim()) {
        (InvertibilityCertificate::Invertible { .. }, 1) => Some(local_table.iter().all(|e| {
            rational_noninjectivity_witness(&f.components()[0], e.prime, DEFAULT_WITNESS_RADIUS)
                .is_ok_and(|w| w.is_none())
        })),
        _ => None,
    };

    let global = match decision {
        InvertibilityCertificate::Invertible { inverse } => GlobalVerdict::SurjectiveAndInvertibleOverZ { inverse },
        InvertibilityCertificate::NotInvertible { obstruction } => {
            let mut obstructions = vec![GlobalObstruction::NotInvertible(obstruction)];
            obstructions.extend(first_failure.map(GlobalObstruction::LocalFailure));
            GlobalVerdict::NotSurjectiveOverZ { obstructions }
        }
    };
    Verdict {
        global,
        local_table,
        consistency: ConsistencyFlags { local_global, unit_bijective_agreement, localization_injective },
        determinant,
    }
}

/// Solutions of `f(x) ≡ target (mod pᵏ)` at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub prime: u64,
    pub result: std::result::Result<Vec<ResidueVector>, Error>,
}

impl ProfileRow {
    pub fn solvable(&self) -> Option<bool> {
        self.result.as_ref().ok().map(|s| !s.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiophantineProfile {
    pub depth: u32,
    pub rows: Vec<ProfileRow>,
    /// Rational solutions, for univariate systems only.
    pub rational_solutions: Option<Vec<BigRational>>,
}

impl DiophantineProfile {
    pub fn integer_solutions(&self) -> Option<Vec<BigInt>> {
        self.rational_solutions.as_ref().map(|r| r.iter().filter(|x| x.is_integer()).map(|x| x.to_integer()).collect())
    }

    pub fn solvable_everywhere(&self) -> bool {
        self.rows.iter().all(|r| r.solvable() == Some(true))
    }
}

/// Per-prime solvability of `f(x) ≡ target (mod pᵏ)` for `p ≤ prime_bound`.
pub fn diophantine_profile(
    f: &PolyMap<BigInt>,
    target: &[BigInt],
    prime_bound: u64,
    depth: u32,
    budget: u64,
) -> Result<DiophantineProfile> {
    if target.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: target.len() });
    }
    let rows = primes_up_to(prime_bound)
        .into_par_iter()
        .map(|p| ProfileRow { prime: p, result: solve_system_mod(f, target, p, depth, budget) })
        .collect();
    let rational_solutions = if f.dim() == 1 {
        let shifted = &f.components()[0] - &MultiPoly::constant(1, target[0].clone());
        if shifted.is_zero() {
            None
        } else if shifted.is_constant() {
            Some(Vec::new())
        } else {
            Some(rational_roots(&shifted)?.into_iter().map(|r| r.value).collect())
        }
    } else {
        None
    };
    Ok(DiophantineProfile { depth, rows, rational_solutions })
}

/// A solution of `f(x) ≡ target (mod m)` for every `1 ≤ m ≤ max_modulus`, or `None` where there is none.
pub fn composite_profile(
    f: &PolyMap<BigInt>,
    target: &[BigInt],
    max_modulus: u64,
    budget: u64,
) -> Result<Vec<(u64, Option<Vec<BigInt>>)>> {
    let mut solver = CompositeSolver::new(f, target, budget);
    (1..=max_modulus).map(|m| Ok((m, solver.solve(m)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_BUDGET;
    use crate::parser::parse_map;

    fn zmap(src: &str) -> PolyMap<BigInt> {
        parse_map(src).unwrap().integer_map().unwrap()
    }

    #[test]
    fn two_x_fails_only_at_two() {
        let v = classify_over_z(&zmap("vars x; f1 = 2*x"), 20, DEFAULT_BUDGET);
        assert!(!v.is_surjective());
        assert_eq!(v.failing_primes(), vec![2]);
        assert!(v.consistency.local_global);
        match &v.global {
            GlobalVerdict::NotSurjectiveOverZ { obstructions } => {
                assert!(matches!(
                    &obstructions[0],
                    GlobalObstruction::NotInvertible(Obstruction::JacobianNotUnit { .. })
                ));
                assert!(matches!(&obstructions[1], GlobalObstruction::LocalFailure(l) if l.prime == 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn triangular_map_is_invertible() {
        let v = classify_over_z(&zmap("vars x, y; f1 = x + y^2; f2 = y"), 10, DEFAULT_BUDGET);
        assert!(v.is_surjective());
        assert!(v.failing_primes().is_empty());
        assert_eq!(v.consistency.unit_bijective_agreement, Some(true));
    }

    #[test]
    fn cubic_fails_everywhere() {
        let v = classify_over_z(&zmap("vars x; f1 = 6*x^3 - 5*x^2 + x"), 10, DEFAULT_BUDGET);
        assert!(!v.is_surjective());
        assert_eq!(v.failing_primes(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn profiles() {
        let f = zmap("vars x; f1 = (2*x + 1)*(3*x + 1)");
        let prof = diophantine_profile(&f, &[BigInt::from(0)], 20, 2, DEFAULT_BUDGET).unwrap();
        assert!(prof.solvable_everywhere());
        assert_eq!(prof.integer_solutions(), Some(vec![]));
        let id = zmap("vars x; f1 = x");
        let prof = diophantine_profile(&id, &[BigInt::from(7)], 10, 3, DEFAULT_BUDGET).unwrap();
        assert!(prof.solvable_everywhere());
        assert_eq!(prof.integer_solutions(), Some(vec![BigInt::from(7)]));
    }
}
