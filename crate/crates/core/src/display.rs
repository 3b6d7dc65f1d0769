//! Canonical text for polynomials and maps. Output is re-parseable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::poly::{Monomial, MultiPoly, PolyMap};
use crate::scalar::{Coefficient, Modulus};

/// Coefficients that know how to print their sign and magnitude.
pub trait CoeffText: Coefficient {
    fn is_negative_coeff(&self) -> bool;
    fn magnitude_text(&self) -> String;
}

impl CoeffText for BigInt {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }

    fn magnitude_text(&self) -> String {
        self.abs().to_string()
    }
}

impl CoeffText for BigRational {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }

    fn magnitude_text(&self) -> String {
        let a = self.abs();
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Default variable names: `x`, `y`, `z` for up to three variables, else `x1, …, xn`.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn monomial_text(m: &Monomial, names: &[String]) -> String {
    m.exponents()
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, name)| if e == 1 { name.clone() } else { format!("{name}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms in descending graded-lex order, e.g. `6*x^3 - 5*x^2 + x`.
pub fn canonical_string<C: CoeffText>(p: &MultiPoly<C>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative_coeff();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.magnitude_text();
        if m.is_one() {
            out.push_str(&mag);
        } else {
            let unit = if neg { (-c.clone()).is_one() } else { c.is_one() };
            if !unit {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&monomial_text(m, names));
        }
    }
    out
}

/// Complete source text `vars …; [mod p^k;] f1 = …; …` for a map.
pub fn map_source<C: CoeffText>(f: &PolyMap<C>, names: &[String], modulus: Option<&Modulus>) -> String {
    let mut parts = vec![format!("vars {}", names.join(", "))];
    if let Some(m) = modulus {
        parts.push(format!("mod {}^{}", m.prime(), m.exponent()));
    }
    for (i, c) in f.components().iter().enumerate() {
        parts.push(format!("f{} = {}", i + 1, canonical_string(c, names)));
    }
    parts.join("; ")
}

/// Component texts only, in order.
pub fn map_components<C: CoeffText>(f: &PolyMap<C>, names: &[String]) -> Vec<String> {
    f.components().iter().map(|c| canonical_string(c, names)).collect()
}
