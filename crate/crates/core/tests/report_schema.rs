use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polymap::classifier::{classify_over_z, diophantine_profile};
use polymap::gallery::run_gallery;
use polymap::inverse::decide_invertibility;
use polymap::jacobian::{jacobian_determinant, jacobian_matrix};
use polymap::padic::{
    hensel_lift_chain, injectivity_over_z_univariate, injectivity_probe_mod_pk, rational_noninjectivity_witness,
    series_hensel_lift, solve_system_mod, zp_surjectivity_criterion, ResidueVector, DEFAULT_BUDGET,
};
use polymap::parser::parse_map;
use polymap::report::{self, Payload, Report, REPORT_SCHEMA, VERDICT_KINDS};
use polymap::{Modulus, PolyMap};
use serde_json::Value;

fn zmap(src: &str) -> PolyMap<BigInt> {
    parse_map(src).unwrap().integer_map().unwrap()
}

fn names(n: usize) -> Vec<String> {
    polymap::display::default_names(n)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// One report for every verdict kind, each produced by a real computation.
fn sample_reports() -> Vec<Report> {
    let mut out: Vec<(&str, Payload)> = Vec::new();
    let two_x = zmap("vars x; f1 = 2*x");
    let tri = zmap("vars x, y; f1 = x + y^2; f2 = y");
    out.push(("classify", report::classify_payload(&classify_over_z(&tri, 5, DEFAULT_BUDGET), 5, &names(2))));
    out.push(("classify", report::classify_payload(&classify_over_z(&two_x, 5, DEFAULT_BUDGET), 5, &names(1))));
    out.push(("invert", report::invertibility_payload(&decide_invertibility(&tri), 2, &names(2))));
    out.push(("invert", report::invertibility_payload(&decide_invertibility(&two_x), 1, &names(1))));
    for p in [3, 2] {
        out.push((
            "surjective-zp",
            report::surjective_zp_payload(&zp_surjectivity_criterion(&two_x, p, DEFAULT_BUDGET).unwrap()),
        ));
    }
    let sq = zmap("vars x; f1 = x^2 + 1");
    let seed = ResidueVector::from_u64(&[2], &Modulus::new(5, 1).unwrap());
    out.push(("hensel", report::hensel_payload(&hensel_lift_chain(&sq, 5, 3, &seed).unwrap())));
    let sols = solve_system_mod(&sq, &[BigInt::zero()], 5, 2, DEFAULT_BUDGET).unwrap();
    out.push(("solve-mod", report::solutions_payload("5^2", &sols)));
    let prof = diophantine_profile(&sq, &[BigInt::zero()], 10, 1, DEFAULT_BUDGET).unwrap();
    out.push(("solve-mod", report::profile_payload(&prof, 10)));
    let cube = zmap("vars x; f1 = x^3");
    let shifted = zmap("vars x; f1 = x^3 + x");
    for (f, p, k) in [(&shifted, 3, 1), (&cube, 5, 1), (&cube, 3, 2)] {
        let probe = injectivity_probe_mod_pk(f, p, k, DEFAULT_BUDGET).unwrap();
        out.push(("inject-probe", report::probe_payload(&probe, &format!("{p}^{k}"), None)));
    }
    let cubic = zmap("vars x; f1 = 6*x^3 - 5*x^2 + x");
    let square = zmap("vars x; f1 = x^2");
    for f in [&cubic, &square] {
        let poly = &f.components()[0];
        out.push((
            "inject-z",
            report::integer_injectivity_payload(&injectivity_over_z_univariate(poly, DEFAULT_BUDGET).unwrap(), poly),
        ));
    }
    let w = rational_noninjectivity_witness(&cubic.components()[0], 5, 10).unwrap();
    out.push(("witness-zloc", report::zloc_witness_payload(5, 10, w.as_ref(), Some(&BigRational::zero()))));
    let line = zmap("vars x; f1 = x");
    let none = rational_noninjectivity_witness(&line.components()[0], 5, 10).unwrap();
    out.push(("witness-zloc", report::zloc_witness_payload(5, 10, none.as_ref(), None)));
    out.push(("resultant", report::resultant_payload(&q(-4, 1), 3)));
    out.push((
        "jacobian",
        report::jacobian_payload(jacobian_matrix(&tri).rows(), &jacobian_determinant(&tri), &names(2)),
    ));
    let fq = parse_map("vars x; f1 = x^3 - 3*x").unwrap().rational_map();
    let exact = series_hensel_lift(&fq.components()[0], &[q(0, 1), BigRational::one()], 6, None).unwrap();
    out.push(("series-lift", report::series_payload(&exact, 6)));
    let approx = series_hensel_lift(&fq.components()[0], &[q(1, 1), q(1, 1)], 6, None).unwrap();
    out.push(("series-lift", report::series_payload(&approx, 6)));
    let mut reports: Vec<Report> =
        out.into_iter().map(|(cmd, payload)| Report::new(cmd, Some("vars x; f1 = x".into()), payload)).collect();
    reports.extend(run_gallery(Some("2x")).unwrap());
    reports
}

#[test]
fn every_verdict_kind_validates_and_round_trips() {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let reports = sample_reports();
    let mut seen = BTreeSet::new();
    for r in &reports {
        let value = r.to_value();
        let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", r.verdict_kind());
        assert_eq!(&Report::from_json(&r.to_json()).unwrap(), r);
        seen.insert(r.verdict_kind().to_string());
    }
    let all: BTreeSet<String> = VERDICT_KINDS.iter().map(|s| s.to_string()).collect();
    assert_eq!(seen, all);
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let good = sample_reports()[0].to_value();
    assert!(validator.is_valid(&good));

    let mut unknown_kind = good.clone();
    unknown_kind["verdict"]["kind"] = Value::from("Maybe");
    assert!(!validator.is_valid(&unknown_kind));

    let mut missing_inverse = good.clone();
    missing_inverse["verdict"].as_object_mut().unwrap().remove("inverse");
    assert!(!validator.is_valid(&missing_inverse));

    let mut wrong_version = good.clone();
    wrong_version["schema_version"] = Value::from(2);
    assert!(!validator.is_valid(&wrong_version));
}

#[test]
fn gallery_reports_validate() {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for r in run_gallery(None).unwrap() {
        assert!(validator.is_valid(&r.to_value()), "{}", r.render_text());
        assert_eq!(r.verdict["passed"], Value::Bool(true), "{}", r.render_text());
    }
}
