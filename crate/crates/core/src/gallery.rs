//! Canned worked examples, each run end to end and checked against its
//! expected outcome.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::classifier::{classify_over_z, composite_profile, diophantine_profile};
use crate::display::{default_names, map_source};
use crate::error::{Error, Result};
use crate::inverse::{decide_invertibility, InvertibilityCertificate, Obstruction};
use crate::padic::{
    certify_noninjective_zp, injectivity_over_z_univariate, injectivity_probe_mod_pk, is_bijective_mod,
    power_map_injectivity, rational_noninjectivity_witness, series_hensel_lift, zloc_membership,
    zp_surjectivity_criterion, InjectivityProbe, SeriesLiftResult, DEFAULT_BUDGET, DEFAULT_WITNESS_RADIUS,
};
use crate::parser::parse_map;
use crate::poly::{MultiPoly, PolyMap};
use crate::report::{self, gallery_payload, Report};
use crate::scalar::primes_up_to;
use crate::univariate::rational_roots;

pub const GALLERY_CASES: &[&str] =
    &["2x", "px2_plus_x", "prop51_cubic", "prop52_powers", "bs_polynomial", "example31_series", "intro_counterexample"];

fn zmap(src: &str) -> PolyMap<BigInt> {
    parse_map(src).and_then(|m| m.integer_map()).expect("gallery maps are well formed")
}

fn source(f: &PolyMap<BigInt>) -> String {
    map_source(f, &default_names(f.dim()), None)
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Runs one case by name, or every case for `None`.
pub fn run_gallery(case: Option<&str>) -> Result<Vec<Report>> {
    match case {
        None | Some("all") => GALLERY_CASES.iter().map(|c| run_case(c)).collect(),
        Some(name) => Ok(vec![run_case(name)?]),
    }
}

fn run_case(name: &str) -> Result<Report> {
    let start = Instant::now();
    let (input, payload) = match name {
        "2x" => two_x(),
        "px2_plus_x" => px2_plus_x(),
        "prop51_cubic" => prop51_cubic(),
        "prop52_powers" => prop52_powers(),
        "bs_polynomial" => bs_polynomial()?,
        "example31_series" => example31_series()?,
        "intro_counterexample" => intro_counterexample()?,
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(Report::new("gallery", Some(input), payload).with_timing(start.elapsed()))
}

fn two_x() -> (String, report::Payload) {
    let f = zmap("vars x; f1 = 2*x");
    let bound = 100;
    let v = classify_over_z(&f, bound, DEFAULT_BUDGET);
    let det_two = v.determinant == MultiPoly::constant(1, int(2));
    let verified = v.local_table.iter().all(|e| e.result.as_ref().is_ok_and(|l| l.verify(&f)));
    let inner = report::classify_payload(&v, bound, &default_names(1));
    let checks = [
        ("not_surjective_over_z", !v.is_surjective()),
        ("determinant_is_two", det_two),
        ("fails_exactly_at_two", v.failing_primes() == vec![2]),
        ("local_global_consistent", v.consistency.local_global),
        ("local_certificates_verify", verified),
    ];
    (
        source(&f),
        gallery_payload(
            "2x",
            &checks,
            json!({ "verdict": inner.verdict, "local_table": inner.certificate["local_table"] }),
        ),
    )
}

fn px2_plus_x() -> (String, report::Payload) {
    let names = default_names(1);
    let mut rows = Vec::new();
    let mut all_surjective = true;
    let mut all_bijective = true;
    let mut all_not_invertible = true;
    let mut misses_over_z = true;
    for p in [2u64, 3, 5, 7] {
        let f = zmap(&format!("vars x; f1 = {p}*x^2 + x"));
        let local = zp_surjectivity_criterion(&f, p, DEFAULT_BUDGET).expect("small prime");
        let bijective = is_bijective_mod(&f, p, 1, DEFAULT_BUDGET).is_ok_and(|c| c.is_bijective());
        let decision = decide_invertibility(&f);
        let expected_det = zmap(&format!("vars x; f1 = {}*x + 1", 2 * p)).components()[0].clone();
        let obstruction_ok = matches!(
            &decision,
            InvertibilityCertificate::NotInvertible { obstruction: Obstruction::JacobianNotUnit { determinant } }
                if *determinant == expected_det
        );
        let missed_value = (1..=20i64).find(|&v| {
            let shifted = &f.components()[0] - &MultiPoly::constant(1, int(v));
            rational_roots(&shifted).is_ok_and(|r| r.iter().all(|root| !root.value.is_integer()))
        });
        all_surjective &= local.is_surjective() && local.verify(&f);
        all_bijective &= bijective;
        all_not_invertible &= obstruction_ok;
        misses_over_z &= missed_value.is_some();
        rows.push(json!({
            "prime": p,
            "map": report::map(&f, &names),
            "local": report::local_verdict(&local),
            "invertibility": report::invertibility_payload(&decision, 1, &names).verdict,
            "missed_value": missed_value.map(|v| v.to_string()),
        }));
    }
    let checks = [
        ("surjective_over_zp", all_surjective),
        ("bijective_mod_p", all_bijective),
        ("not_invertible_over_z", all_not_invertible),
        ("misses_a_value_over_z", misses_over_z),
    ];
    ("vars x; f1 = p*x^2 + x".to_string(), gallery_payload("px2_plus_x", &checks, json!({ "rows": rows })))
}

fn prop51_cubic() -> (String, report::Payload) {
    let f = zmap("vars x; f1 = (2*x - 1)*(3*x - 1)*x");
    let poly = &f.components()[0];
    let z_injective = injectivity_over_z_univariate(poly, DEFAULT_BUDGET).is_ok_and(|r| r.is_injective());
    let allowed = [q(0, 1), q(1, 2), q(1, 3)];
    let mut rows = Vec::new();
    let mut witnesses_everywhere = true;
    for p in primes_up_to(100) {
        let w = rational_noninjectivity_witness(poly, p, DEFAULT_WITNESS_RADIUS).ok().flatten();
        let valid = w.as_ref().is_some_and(|(a, b)| {
            a != b
                && zloc_membership(a, p)
                && zloc_membership(b, p)
                && allowed.contains(a)
                && allowed.contains(b)
                && eval_q(poly, a) == eval_q(poly, b)
        });
        witnesses_everywhere &= valid;
        rows.push(json!({
            "prime": p,
            "witness": w.as_ref().map(|(a, b)| json!([report::rational(a), report::rational(b)])),
            "verified": valid,
        }));
    }
    let checks = [
        ("injective_over_z", z_injective),
        ("zloc_witness_at_every_prime", witnesses_everywhere),
        ("injectivity_is_not_local", z_injective && witnesses_everywhere),
    ];
    (source(&f), gallery_payload("prop51_cubic", &checks, json!({ "prime_bound": 100, "rows": rows })))
}

fn eval_q(p: &MultiPoly<BigInt>, x: &BigRational) -> BigRational {
    let coeffs = p.to_univariate().expect("univariate");
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

fn prop52_powers() -> (String, report::Payload) {
    let primes = primes_up_to(50);
    let mut rows = Vec::new();
    let mut certificates_ok = true;
    let mut probes_ok = true;
    let mut never_certified_when_false = true;
    for m in 1..=15u32 {
        let f = zmap(&format!("vars x; f1 = x^{m}"));
        let mut flags = Vec::new();
        for &p in &primes {
            let injective = power_map_injectivity(m, p);
            flags.push(injective);
            let coprime = !(m as u64).is_multiple_of(p);
            let probe = injectivity_probe_mod_pk(&f, p, 1, DEFAULT_BUDGET).expect("small prime");
            if !injective {
                never_certified_when_false &= probe != InjectivityProbe::ZpInjective;
                if coprime {
                    certificates_ok &=
                        certify_noninjective_zp(&f, p, DEFAULT_BUDGET).ok().flatten().is_some_and(|c| c.verify(&f));
                }
            } else if coprime {
                probes_ok &= probe.injective_mod_pk();
            }
        }
        rows.push(json!({ "m": m, "injective": flags }));
    }
    let checks = [
        ("certificates_for_noninjective_entries", certificates_ok),
        ("probes_for_injective_entries", probes_ok),
        ("probe_never_certifies_noninjective", never_certified_when_false),
    ];
    (
        "vars x; f1 = x^m".to_string(),
        gallery_payload("prop52_powers", &checks, json!({ "primes": primes, "rows": rows })),
    )
}

fn bs_polynomial() -> Result<(String, report::Payload)> {
    let f = zmap("vars x; f1 = (x^2 - 13)*(x^2 - 17)*(x^2 - 221)");
    let zero = [BigInt::zero()];
    let max_modulus = 2000;
    let table = composite_profile(&f, &zero, max_modulus, DEFAULT_BUDGET)?;
    let verified = table.iter().all(|(m, sol)| {
        sol.as_ref().is_some_and(|x| f.evaluate(x).is_ok_and(|v| (&v[0] % BigInt::from(*m)).is_zero()))
    });
    let no_rational_root = rational_roots(&f.components()[0])?.is_empty();
    let profile = diophantine_profile(&f, &zero, 50, 2, DEFAULT_BUDGET)?;
    let sample: Vec<Value> = [8u64, 9, 13, 17, 221, 1105, 2000]
        .iter()
        .map(|&m| {
            let root = table[(m - 1) as usize].1.as_ref().map(|x| x[0].to_string());
            json!({ "modulus": m, "root": root })
        })
        .collect();
    let checks = [
        ("root_mod_every_m", verified),
        ("no_rational_root", no_rational_root),
        ("solvable_mod_p2_for_p_le_50", profile.solvable_everywhere()),
    ];
    Ok((
        source(&f),
        gallery_payload(
            "bs_polynomial",
            &checks,
            json!({ "max_modulus": max_modulus, "moduli_checked": table.len(), "sample": sample }),
        ),
    ))
}

fn example31_series() -> Result<(String, report::Payload)> {
    let parsed = parse_map("vars x; f1 = x^3 - 3*x")?;
    let f = parsed.rational_map().components()[0].clone();
    let order = 10;
    let lift = series_hensel_lift(&f, &[BigRational::zero(), BigRational::one()], order, Some(&BigRational::zero()))?;
    let leading_ok = matches!(&lift, SeriesLiftResult::Exact { coefficients, .. }
        if coefficients[..4] == [q(0, 1), q(-1, 3), q(0, 1), q(-1, 81)]);
    let constant = series_hensel_lift(&f, &[q(2, 1)], order, None)?;
    let constant_ok = matches!(&constant, SeriesLiftResult::Exact { base, coefficients, .. }
        if *base == q(2, 1) && coefficients[1..].iter().all(Zero::is_zero));
    let checks = [
        ("leading_terms", leading_ok),
        ("zero_residual", lift.residual_ok()),
        ("constant_target_base_two", constant_ok && constant.residual_ok()),
    ];
    let lifted = report::series_payload(&lift, order);
    Ok((
        "vars x; f1 = x^3 - 3*x".to_string(),
        gallery_payload(
            "example31_series",
            &checks,
            json!({ "target": "t", "series": lifted.verdict["coefficients"], "constant_target_base": "2" }),
        ),
    ))
}

fn intro_counterexample() -> Result<(String, report::Payload)> {
    let f = zmap("vars x; f1 = (2*x + 1)*(3*x + 1)");
    let zero = [BigInt::zero()];
    let profile = diophantine_profile(&f, &zero, 50, 3, DEFAULT_BUDGET)?;
    let composite = composite_profile(&f, &zero, 300, DEFAULT_BUDGET)?;
    let rational = profile.rational_solutions.clone().unwrap_or_default();
    let checks = [
        ("solvable_mod_p3_for_p_le_50", profile.solvable_everywhere()),
        ("solvable_mod_every_m_le_300", composite.iter().all(|(_, s)| s.is_some())),
        ("no_integer_solution", profile.integer_solutions().is_some_and(|v| v.is_empty())),
        ("rational_roots", rational == vec![q(-1, 2), q(-1, 3)]),
    ];
    Ok((
        source(&f),
        gallery_payload(
            "intro_counterexample",
            &checks,
            json!({
                "target": "0",
                "rational_solutions": rational.iter().map(report::rational).collect::<Vec<_>>(),
            }),
        ),
    ))
}
