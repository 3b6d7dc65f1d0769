//! Versioned JSON reports. Every command produces one [`Report`]; the text
//! rendering is computed from the JSON value.
//!
//! Integers that can exceed machine range (residues, coefficients, values)
//! are JSON strings; primes, counts and exponents are JSON numbers.

use std::fmt::Write as _;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::classifier::{DiophantineProfile, GlobalObstruction, GlobalVerdict, Verdict};
use crate::display::{canonical_string, CoeffText};
use crate::error::{Error, Result};
use crate::inverse::{InvertibilityCertificate, Obstruction};
use crate::padic::{
    Collision, CollisionWitness, InjectivityProbe, IntegerInjectivity, LocalCertificate, LocalSurjectivityVerdict,
    NonInjectivityCertificate, ResidueVector, SeriesLiftResult,
};
use crate::poly::{MultiPoly, PolyMap};

pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Every value `verdict.kind` can take.
pub const VERDICT_KINDS: &[&str] = &[
    "SurjectiveAndInvertibleOverZ",
    "NotSurjectiveOverZ",
    "Invertible",
    "NotInvertible",
    "SurjectiveOverZp",
    "NotSurjectiveOverZp",
    "Lifted",
    "Solutions",
    "DiophantineProfile",
    "ZpInjective",
    "InjectiveModPk",
    "Inconclusive",
    "Injective",
    "NotInjective",
    "Witness",
    "NoWitness",
    "Resultant",
    "Jacobian",
    "SeriesLift",
    "GalleryCase",
];

/// Kinds that record a one-sided probe without a definite answer.
const INCONCLUSIVE_KINDS: &[&str] = &["Inconclusive", "NoWitness"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Canonical form of the input, when there is one.
    pub input: Option<String>,
    pub verdict: Value,
    pub certificate: Value,
    pub timing_ms: f64,
}

/// The `verdict` and `certificate` parts of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Payload {
    pub verdict: Value,
    pub certificate: Value,
}

impl Payload {
    pub fn new(verdict: Value, certificate: Value) -> Self {
        Self { verdict, certificate }
    }
}

impl Report {
    pub fn new(command: &str, input: Option<String>, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input,
            verdict: payload.verdict,
            certificate: payload.certificate,
            timing_ms: 0.0,
        }
    }

    pub fn with_timing(mut self, elapsed: Duration) -> Self {
        self.timing_ms = (elapsed.as_secs_f64() * 1e6).round() / 1e3;
        self
    }

    pub fn verdict_kind(&self) -> &str {
        self.verdict.get("kind").and_then(Value::as_str).unwrap_or("")
    }

    pub fn is_inconclusive(&self) -> bool {
        INCONCLUSIVE_KINDS.contains(&self.verdict_kind())
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report =
            serde_json::from_str(text).map_err(|e| Error::Unsupported(format!("malformed report: {e}")))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Unsupported(format!("schema_version {}", report.schema_version)));
        }
        Ok(report)
    }

    /// Indented key/value rendering of the JSON form.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = self.to_value() {
            for (key, value) in &map {
                render_value(&mut out, key, value, 0);
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn render_value(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Array(items) if is_flat(value) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            let _ = writeln!(out, "{pad}{key}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, item) in items.iter().enumerate() {
                render_value(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                render_value(out, k, v, depth + 1);
            }
        }
        scalar => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar_text(scalar));
        }
    }
}

pub fn big(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) })
}

pub fn poly<C: CoeffText>(p: &MultiPoly<C>, names: &[String]) -> Value {
    Value::String(canonical_string(p, names))
}

pub fn map<C: CoeffText>(f: &PolyMap<C>, names: &[String]) -> Value {
    Value::Array(f.components().iter().map(|c| poly(c, names)).collect())
}

pub fn residues(v: &[u64]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn residue_vector(v: &ResidueVector) -> Value {
    json!({ "modulus": v.modulus().to_string(), "values": v.entry_strings() })
}

pub fn collision(c: &Collision) -> Value {
    json!({ "first": residues(&c.first), "second": residues(&c.second), "image": residues(&c.image) })
}

fn collision_witness(w: &CollisionWitness) -> Value {
    json!({
        "point": residue_vector(&w.point),
        "kernel": residues(&w.kernel),
        "first": residue_vector(&w.first),
        "second": residue_vector(&w.second),
        "image": residue_vector(&w.image),
    })
}

pub fn local_certificate(c: &LocalCertificate) -> Value {
    match c {
        LocalCertificate::BijectiveNonsingular => json!({ "kind": "BijectiveNonsingular" }),
        LocalCertificate::MissedTarget { target, collision: col } => {
            json!({ "kind": "MissedTarget", "target": residues(target), "collision": collision(col) })
        }
        LocalCertificate::SingularCollision(w) => {
            json!({ "kind": "SingularCollision", "witness": collision_witness(w) })
        }
    }
}

pub fn local_verdict(v: &LocalSurjectivityVerdict) -> Value {
    let outcome = if v.is_surjective() { "SurjectiveOverZp" } else { "NotSurjectiveOverZp" };
    json!({ "prime": v.prime, "outcome": outcome, "certificate": local_certificate(&v.certificate) })
}

pub fn obstruction(o: &Obstruction<BigInt>, names: &[String]) -> Value {
    match o {
        Obstruction::JacobianNotUnit { determinant } => {
            json!({ "kind": "JacobianNotUnit", "determinant": poly(determinant, names) })
        }
        Obstruction::NonIntegralCoefficient { degree, component, monomial, value } => json!({
            "kind": "NonIntegralCoefficient",
            "degree": degree,
            "component": component + 1,
            "monomial": monomial,
            "value": value,
        }),
        Obstruction::CompositionMismatch { component, residual } => json!({
            "kind": "CompositionMismatch",
            "component": component + 1,
            "residual": poly(residual, names),
        }),
    }
}

/// `f∘g = g∘f = id` decision.
pub fn invertibility_payload(cert: &InvertibilityCertificate<BigInt>, degree_bound: u32, names: &[String]) -> Payload {
    match cert {
        InvertibilityCertificate::Invertible { inverse } => Payload::new(
            json!({ "kind": "Invertible", "inverse": map(inverse, names) }),
            json!({ "degree_bound": degree_bound, "two_sided": true }),
        ),
        InvertibilityCertificate::NotInvertible { obstruction: o } => Payload::new(
            json!({ "kind": "NotInvertible", "obstruction": obstruction(o, names) }),
            json!({ "degree_bound": degree_bound }),
        ),
    }
}

pub fn classify_payload(v: &Verdict, prime_bound: u64, names: &[String]) -> Payload {
    let mut verdict = Map::new();
    match &v.global {
        GlobalVerdict::SurjectiveAndInvertibleOverZ { inverse } => {
            verdict.insert("kind".into(), json!("SurjectiveAndInvertibleOverZ"));
            verdict.insert("inverse".into(), map(inverse, names));
        }
        GlobalVerdict::NotSurjectiveOverZ { obstructions } => {
            verdict.insert("kind".into(), json!("NotSurjectiveOverZ"));
            let items = obstructions
                .iter()
                .map(|o| match o {
                    GlobalObstruction::NotInvertible(inner) => obstruction(inner, names),
                    GlobalObstruction::LocalFailure(l) => {
                        json!({ "kind": "LocalFailure", "prime": l.prime, "certificate": local_certificate(&l.certificate) })
                    }
                })
                .collect();
            verdict.insert("obstructions".into(), Value::Array(items));
        }
    }
    verdict.insert("determinant".into(), poly(&v.determinant, names));
    verdict.insert("failing_primes".into(), json!(v.failing_primes()));
    let c = &v.consistency;
    verdict.insert(
        "consistency".into(),
        json!({
            "local_global": c.local_global,
            "unit_bijective_agreement": c.unit_bijective_agreement,
            "localization_injective": c.localization_injective,
        }),
    );
    let table: Vec<Value> = v
        .local_table
        .iter()
        .map(|e| match &e.result {
            Ok(l) => local_verdict(l),
            Err(err) => json!({ "prime": e.prime, "error": err.to_string() }),
        })
        .collect();
    Payload::new(Value::Object(verdict), json!({ "prime_bound": prime_bound, "local_table": table }))
}

pub fn surjective_zp_payload(v: &LocalSurjectivityVerdict) -> Payload {
    let kind = if v.is_surjective() { "SurjectiveOverZp" } else { "NotSurjectiveOverZp" };
    Payload::new(json!({ "kind": kind, "prime": v.prime }), local_certificate(&v.certificate))
}

/// `chain[i]` is the root modulo `p^(i+1)`.
pub fn hensel_payload(chain: &[ResidueVector]) -> Payload {
    let root = chain.last().expect("nonempty lifting chain");
    Payload::new(
        json!({ "kind": "Lifted", "root": residue_vector(root) }),
        json!({ "chain": chain.iter().map(residue_vector).collect::<Vec<_>>() }),
    )
}

pub fn solutions_payload(modulus: &str, solutions: &[ResidueVector]) -> Payload {
    Payload::new(
        json!({ "kind": "Solutions", "modulus": modulus, "count": solutions.len() }),
        json!({ "solutions": solutions.iter().map(|s| s.entry_strings()).collect::<Vec<_>>() }),
    )
}

pub fn profile_payload(p: &DiophantineProfile, prime_bound: u64) -> Payload {
    let rows: Vec<Value> = p
        .rows
        .iter()
        .map(|r| match &r.result {
            Ok(s) => json!({ "prime": r.prime, "solvable": !s.is_empty(), "count": s.len() }),
            Err(e) => json!({ "prime": r.prime, "error": e.to_string() }),
        })
        .collect();
    let unsolvable: Vec<u64> = p.rows.iter().filter(|r| r.solvable() == Some(false)).map(|r| r.prime).collect();
    Payload::new(
        json!({
            "kind": "DiophantineProfile",
            "prime_bound": prime_bound,
            "depth": p.depth,
            "solvable_everywhere": p.solvable_everywhere(),
            "unsolvable_primes": unsolvable,
            "integer_solutions": p.integer_solutions().map(|v| v.iter().map(big).collect::<Vec<_>>()),
        }),
        json!({
            "rows": rows,
            "rational_solutions": p.rational_solutions.as_ref().map(|v| v.iter().map(rational).collect::<Vec<_>>()),
        }),
    )
}

pub fn probe_payload(
    probe: &InjectivityProbe,
    modulus: &str,
    zp_witness: Option<&NonInjectivityCertificate>,
) -> Payload {
    let verdict = match probe {
        InjectivityProbe::ZpInjective => json!({ "kind": "ZpInjective", "modulus": modulus }),
        InjectivityProbe::InjectiveModPk => json!({ "kind": "InjectiveModPk", "modulus": modulus }),
        InjectivityProbe::Inconclusive { collision: c } => {
            json!({ "kind": "Inconclusive", "modulus": modulus, "collision": collision(c) })
        }
    };
    Payload::new(verdict, json!({ "zp_noninjectivity": zp_witness.map(noninjectivity_certificate) }))
}

pub fn noninjectivity_certificate(c: &NonInjectivityCertificate) -> Value {
    json!({
        "prime": c.prime,
        "first": c.first.to_string(),
        "second": c.second.to_string(),
        "value": big(&c.value),
        "first_lift": residue_vector(&c.first_lift),
        "second_lift": residue_vector(&c.second_lift),
    })
}

pub fn integer_injectivity_payload(r: &IntegerInjectivity, f: &MultiPoly<BigInt>) -> Payload {
    match r {
        IntegerInjectivity::Injective => Payload::new(json!({ "kind": "Injective" }), json!({})),
        IntegerInjectivity::NotInjective { first, second } => {
            let value = f.eval(std::slice::from_ref(first)).map(|v| big(&v)).unwrap_or(Value::Null);
            Payload::new(
                json!({ "kind": "NotInjective", "first": big(first), "second": big(second) }),
                json!({ "value": value }),
            )
        }
    }
}

pub fn zloc_witness_payload(
    prime: u64,
    radius: u32,
    witness: Option<&(BigRational, BigRational)>,
    value: Option<&BigRational>,
) -> Payload {
    match witness {
        Some((a, b)) => Payload::new(
            json!({ "kind": "Witness", "prime": prime, "first": rational(a), "second": rational(b) }),
            json!({ "value": value.map(rational), "radius": radius }),
        ),
        None => Payload::new(json!({ "kind": "NoWitness", "prime": prime }), json!({ "radius": radius })),
    }
}

pub fn resultant_payload(value: &BigRational, sylvester_size: usize) -> Payload {
    Payload::new(json!({ "kind": "Resultant", "value": rational(value) }), json!({ "sylvester_size": sylvester_size }))
}

pub fn jacobian_payload<C: CoeffText>(matrix: &[Vec<MultiPoly<C>>], det: &MultiPoly<C>, names: &[String]) -> Payload {
    let rows: Vec<Value> =
        matrix.iter().map(|row| Value::Array(row.iter().map(|e| poly(e, names)).collect())).collect();
    Payload::new(json!({ "kind": "Jacobian", "determinant": poly(det, names) }), json!({ "matrix": rows }))
}

pub fn series_payload(r: &SeriesLiftResult, order: usize) -> Payload {
    match r {
        SeriesLiftResult::Exact { base, origin, coefficients, residual } => Payload::new(
            json!({
                "kind": "SeriesLift",
                "exact": true,
                "order": order,
                "base": rational(base),
                "coefficients": coefficients.iter().map(rational).collect::<Vec<_>>(),
                "residual_ok": r.residual_ok(),
            }),
            json!({
                "base_origin": format!("{origin:?}"),
                "residual": residual.iter().map(rational).collect::<Vec<_>>(),
            }),
        ),
        SeriesLiftResult::Approximate { base, coefficients, residual_norm, precision_loss } => {
            let c = |z: &num_complex::Complex64| json!([z.re, z.im]);
            Payload::new(
                json!({
                    "kind": "SeriesLift",
                    "exact": false,
                    "order": order,
                    "base": c(base),
                    "coefficients": coefficients.iter().map(c).collect::<Vec<_>>(),
                    "residual_ok": r.residual_ok(),
                }),
                json!({
                    "base_origin": "ComplexEigenvalue",
                    "residual_norm": residual_norm,
                    "precision_loss": precision_loss,
                }),
            )
        }
    }
}

/// Named boolean checks for one gallery case.
pub fn gallery_payload(case: &str, checks: &[(&str, bool)], data: Value) -> Payload {
    let passed = checks.iter().all(|(_, ok)| *ok);
    let list: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "name": name, "passed": ok })).collect();
    Payload::new(json!({ "kind": "GalleryCase", "case": case, "passed": passed, "checks": list }), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::display::default_names;

    #[test]
    fn text_is_rendered_from_json() {
        let payload = surjective_zp_payload(&LocalSurjectivityVerdict {
            prime: 3,
            outcome: crate::padic::LocalOutcome::SurjectiveOverZp,
            certificate: LocalCertificate::BijectiveNonsingular,
        });
        let r = Report::new("surjective-zp", Some("vars x; f1 = x".into()), payload);
        let text = r.render_text();
        assert!(text.contains("kind: SurjectiveOverZp"));
        assert!(text.contains("input: vars x; f1 = x"));
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn rejects_other_versions() {
        let mut v = Report::new("jacobian", None, Payload::new(json!({"kind": "Jacobian"}), json!({}))).to_value();
        v["schema_version"] = json!(2);
        assert!(Report::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn polynomial_values_are_canonical() {
        let names = default_names(2);
        let p = MultiPoly::from_terms(2, vec![(vec![1, 0], BigInt::from(1)), (vec![0, 2], BigInt::from(1))]);
        assert_eq!(poly(&p, &names), json!("y^2 + x"));
    }
}
