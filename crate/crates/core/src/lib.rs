//! Deciding, certifying and refuting surjectivity, injectivity and
//! invertibility of polynomial self-maps over ℤ, using its finite quotients
//! ℤ/pᵏ, truncated p-adic lifts and formal power series.

pub mod classifier;
pub mod display;
pub mod error;
pub mod gallery;
pub mod inverse;
pub mod jacobian;
pub mod padic;
pub mod parser;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalar;
pub mod univariate;

pub use error::{Error, Result};
pub use poly::{compose_maps, evaluate_map, partial_derivative, Monomial, MultiPoly, PolyMap};
pub use scalar::{Coefficient, Domain, Modulus, Residue, ScalarKind};
pub use univariate::{rational_roots, RationalRoot};
