mod common;

use std::collections::BTreeSet;

use common::{config, int_map, int_poly, ints};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use polymap::jacobian::jacobian_matrix;
use polymap::padic::{
    certify_noninjective_zp, hensel_lift_chain, injectivity_probe_mod_pk, is_bijective_mod, power_map_injectivity,
    series_hensel_lift, solve_system_mod, zp_surjectivity_criterion, InjectivityProbe, ResidueVector, SeriesLiftResult,
    DEFAULT_BUDGET,
};
use polymap::scalar::is_prime;
use polymap::{Modulus, MultiPoly, PolyMap};
use proptest::prelude::*;

fn prime_strategy(max: u64) -> impl Strategy<Value = u64> {
    prop::sample::select((2..=max).filter(|&p| is_prime(p)).collect::<Vec<_>>())
}

fn reduce(v: &BigInt, m: &BigInt) -> BigInt {
    v.mod_floor(m)
}

/// All `x ∈ (ℤ/m)ⁿ` with `f(x) ≡ target`, by direct evaluation.
fn brute_solutions(f: &PolyMap<BigInt>, target: &[BigInt], m: u64) -> BTreeSet<Vec<BigInt>> {
    let n = f.dim();
    let total = m.pow(n as u32);
    let mb = BigInt::from(m);
    (0..total)
        .filter_map(|mut i| {
            let mut x = vec![BigInt::zero(); n];
            for slot in x.iter_mut().rev() {
                *slot = BigInt::from(i % m);
                i /= m;
            }
            let y = f.evaluate(&x).unwrap();
            y.iter().zip(target).all(|(a, b)| reduce(&(a - b), &mb).is_zero()).then_some(x)
        })
        .collect()
}

/// Number of `m`-th roots of unity in ℤ_p: Teichmüller units for odd `p`, `±1` for `p = 2`.
fn roots_of_unity_killed_by(m: u32, p: u64) -> usize {
    if p == 2 {
        return if m.is_multiple_of(2) { 2 } else { 1 };
    }
    (1..p)
        .filter(|&x| {
            let mut acc = 1u64;
            for _ in 0..m {
                acc = acc * x % p;
            }
            acc == 1
        })
        .count()
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn newton_steps_contract(f in int_poly(1, 4, 5, 9), p in prime_strategy(23), k in 2u32..=6) {
        let map = PolyMap::new(vec![f.clone()]).unwrap();
        let df = f.partial_derivative(0).unwrap();
        let pb = BigInt::from(p);
        let simple = (0..p).find(|&x| {
            let xb = [BigInt::from(x)];
            reduce(&f.eval(&xb).unwrap(), &pb).is_zero() && !reduce(&df.eval(&xb).unwrap(), &pb).is_zero()
        });
        prop_assume!(simple.is_some());
        let seed = ResidueVector::from_u64(&[simple.unwrap()], &Modulus::new(p, 1).unwrap());
        let chain = hensel_lift_chain(&map, p, k, &seed).unwrap();
        prop_assert_eq!(chain.len(), k as usize);
        for (i, a) in chain.iter().enumerate() {
            let m = BigInt::from(p).pow(i as u32 + 1);
            prop_assert!(reduce(&f.eval(a.entries()).unwrap(), &m).is_zero());
            if i > 0 {
                prop_assert_eq!(a.reduce_to(i as u32), chain[i - 1].clone());
            }
        }
    }

    #[test]
    fn taylor_congruence(
        f in int_map(3, 3, 4, 7),
        a in prop::collection::vec(-20i64..=20, 3),
        v in prop::collection::vec(-20i64..=20, 3),
        p in prime_strategy(13),
    ) {
        let a = ints(&a);
        let m: Vec<BigInt> = ints(&v).into_iter().map(|x| x * p).collect();
        let shifted: Vec<BigInt> = a.iter().zip(&m).map(|(x, y)| x + y).collect();
        let lhs = f.evaluate(&shifted).unwrap();
        let base = f.evaluate(&a).unwrap();
        let jac = jacobian_matrix(&f).evaluate(&a).unwrap();
        let p2 = BigInt::from(p * p);
        for i in 0..3 {
            let lin: BigInt = (0..3).map(|j| &jac[i][j] * &m[j]).sum();
            prop_assert!(reduce(&(&lhs[i] - &base[i] - lin), &p2).is_zero());
        }
    }

    #[test]
    fn finite_criterion_matches_brute_force(f in (1usize..=2).prop_flat_map(|n| int_map(n, 3, 4, 5)), p in prime_strategy(5)) {
        let verdict = zp_surjectivity_criterion(&f, p, DEFAULT_BUDGET).unwrap();
        prop_assert!(verdict.verify(&f));
        let checks: Vec<_> = (1..=3).map(|k| is_bijective_mod(&f, p, k, DEFAULT_BUDGET).unwrap()).collect();
        for c in &checks {
            prop_assert_eq!(c.collision.is_some(), c.missed_target.is_some());
        }
        prop_assert_eq!(verdict.is_surjective(), checks[1].is_bijective());
        prop_assert_eq!(verdict.is_surjective(), checks[2].is_bijective());
        if verdict.is_surjective() {
            prop_assert!(checks[0].is_bijective());
        }
    }

    #[test]
    fn solve_system_matches_brute_force(
        f in (1usize..=2).prop_flat_map(|n| int_map(n, 3, 3, 5)),
        target in prop::collection::vec(-6i64..=6, 2),
        p in prime_strategy(5),
        k in 1u32..=2,
    ) {
        let target = ints(&target[..f.dim()]);
        let found: BTreeSet<Vec<BigInt>> = solve_system_mod(&f, &target, p, k, DEFAULT_BUDGET)
            .unwrap()
            .into_iter()
            .map(|r| r.entries().to_vec())
            .collect();
        prop_assert_eq!(found, brute_solutions(&f, &target, p.pow(k)));
    }

    #[test]
    fn power_maps(m in 1u32..=20, p in prime_strategy(60)) {
        let injective = power_map_injectivity(m, p);
        prop_assert_eq!(injective, roots_of_unity_killed_by(m, p) == 1);
        let f = PolyMap::new(vec![MultiPoly::var(1, 0).pow(m)]).unwrap();
        let probe = injectivity_probe_mod_pk(&f, p, 1, DEFAULT_BUDGET).unwrap();
        if !injective {
            prop_assert_ne!(&probe, &InjectivityProbe::ZpInjective);
            if !(m as u64).is_multiple_of(p) {
                let cert = certify_noninjective_zp(&f, p, DEFAULT_BUDGET).unwrap();
                prop_assert!(cert.is_some_and(|c| c.verify(&f)));
            }
        } else if !(m as u64).is_multiple_of(p) {
            prop_assert!(probe.injective_mod_pk());
        }
    }

    #[test]
    fn exact_series_residual_vanishes(
        coeffs in prop::collection::vec(-6i64..=6, 2..=5),
        a in -4i64..=4,
        tail in prop::collection::vec(-5i64..=5, 0..=6),
        order in 0usize..=10,
    ) {
        let f = MultiPoly::from_univariate(&coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect::<Vec<_>>());
        let base = BigRational::from_integer(a.into());
        let slope = f.partial_derivative(0).unwrap().eval(std::slice::from_ref(&base)).unwrap();
        prop_assume!(!slope.is_zero());
        let mut s = vec![f.eval(std::slice::from_ref(&base)).unwrap()];
        s.extend(tail.iter().map(|&c| BigRational::from_integer(c.into())));
        let lift = series_hensel_lift(&f, &s, order, Some(&base)).unwrap();
        match &lift {
            SeriesLiftResult::Exact { residual, coefficients, .. } => {
                prop_assert_eq!(coefficients.len(), order + 1);
                prop_assert!(residual.iter().all(Zero::is_zero));
            }
            other => prop_assert!(false, "expected an exact lift, got {:?}", other),
        }
    }

    #[test]
    fn approximate_series_residual_is_small(c0 in prop::sample::select(vec![1i64, 3, -1, -3, 5]), tail in prop::collection::vec(-3i64..=3, 0..=4), order in 1usize..=10) {
        let q = |n: i64| BigRational::from_integer(n.into());
        let f = MultiPoly::from_univariate(&[q(0), q(-3), q(0), q(1)]);
        let mut s = vec![q(c0)];
        s.extend(tail.iter().map(|&c| q(c)));
        let lift = series_hensel_lift(&f, &s, order, None).unwrap();
        if let SeriesLiftResult::Approximate { residual_norm, .. } = &lift {
            prop_assert!(*residual_norm < 1e-8, "residual {}", residual_norm);
        }
        prop_assert!(lift.residual_ok());
    }
}

#[test]
fn sample_lift_values_fit_machine_words() {
    let f = PolyMap::new(vec![MultiPoly::from_univariate(&ints(&[1, 0, 1]))]).unwrap();
    let seed = ResidueVector::from_u64(&[2], &Modulus::new(5, 1).unwrap());
    let chain = hensel_lift_chain(&f, 5, 3, &seed).unwrap();
    let values: Vec<u64> = chain.iter().map(|r| r.entries()[0].to_u64().unwrap()).collect();
    assert_eq!(values, vec![2, 7, 57]);
}
