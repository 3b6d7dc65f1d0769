//! Finite quotients `(ℤ/pᵏ)ⁿ`, truncated p-adic lifting and power-series lifting.
//!
//! ℤ_p only appears through its truncations ℤ/pᵏ together with certificates
//! (Hensel uniqueness) that pin down genuine p-adic points.

mod bijective;
mod hensel;
mod injectivity;
pub mod modular;
mod series;

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::scalar::{Modulus, Residue};

pub use bijective::{
    is_bijective_mod, mod_p2_collision_witness, zp_surjectivity_criterion, BijectivityCheck, Collision,
    CollisionWitness, LocalCertificate, LocalOutcome, LocalSurjectivityVerdict,
};
pub use hensel::{hensel_lift_chain, hensel_lift_vector, solve_composite_mod, solve_system_mod, CompositeSolver};
pub use injectivity::{
    certify_noninjective_zp, injectivity_over_z_univariate, injectivity_probe_mod_pk, power_map_injectivity,
    rational_noninjectivity_witness, zloc_membership, InjectivityProbe, IntegerInjectivity, NonInjectivityCertificate,
    DEFAULT_WITNESS_RADIUS,
};
pub use modular::DEFAULT_BUDGET;
pub use series::{series_hensel_lift, SeriesBase, SeriesLiftResult};

/// A point of `(ℤ/pᵏ)ⁿ`; entries are reduced into `[0, pᵏ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector {
    modulus: Modulus,
    entries: Vec<BigInt>,
}

impl ResidueVector {
    pub fn new(entries: &[BigInt], modulus: &Modulus) -> Self {
        Self { modulus: modulus.clone(), entries: entries.iter().map(|e| modulus.reduce(e)).collect() }
    }

    pub fn from_u64(entries: &[u64], modulus: &Modulus) -> Self {
        let big: Vec<BigInt> = entries.iter().map(|&e| BigInt::from(e)).collect();
        Self::new(&big, modulus)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn to_residues(&self) -> Vec<Residue> {
        self.entries.iter().map(|e| Residue::new(e, &self.modulus)).collect()
    }

    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| e.to_u64()).collect()
    }

    /// The image under `ℤ/pᵏ → ℤ/pʲ` for `j ≤ k`.
    pub fn reduce_to(&self, exponent: u32) -> Self {
        assert!(exponent <= self.modulus.exponent(), "cannot raise precision by reduction");
        Self::new(&self.entries, &self.modulus.with_exponent(exponent))
    }

    /// Entries as decimal strings.
    pub fn entry_strings(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.to_string()).collect()
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.entry_strings().join(", "), self.modulus)
    }
}
