//! Exhaustive bijectivity scans over `(ℤ/pᵏ)ⁿ` and the finite criterion for
//! surjectivity over ℤ_p: bijective mod `p` with `det(Jf)` nowhere zero mod `p`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::modular::{decode_point, det_mod_p, encode_point, kernel_vector_mod_p, require_budget, ModMap, ModPoly};
use super::ResidueVector;
use crate::error::{Error, Result};
use crate::jacobian::{jacobian_determinant, jacobian_matrix};
use crate::poly::PolyMap;
use crate::scalar::Modulus;

/// Two distinct points with the same image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub first: Vec<u64>,
    pub second: Vec<u64>,
    pub image: Vec<u64>,
}

/// Result of scanning all of `(ℤ/pᵏ)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectivityCheck {
    pub modulus: Modulus,
    /// First repeated image in enumeration order.
    pub collision: Option<Collision>,
    /// Smallest point outside the image.
    pub missed_target: Option<Vec<u64>>,
}

impl BijectivityCheck {
    pub fn is_bijective(&self) -> bool {
        self.collision.is_none()
    }
}

fn machine_modulus(modulus: &Modulus, budget: u64) -> Result<u64> {
    modulus.value_u64().ok_or(Error::BudgetExceeded { required: u128::MAX, budget })
}

/// Images of every point of `(ℤ/m)ⁿ` as encoded indices, in enumeration order.
fn image_table(map: &ModMap, total: u64) -> Vec<u32> {
    let n = map.dim();
    let m = map.modulus();
    (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u64; n], vec![0u64; n]),
            |(x, y), i| {
                decode_point(i, m, n, x);
                map.eval_into(x, y);
                encode_point(y, m) as u32
            },
        )
        .collect()
}

/// Evaluates `f` on all of `(ℤ/pᵏ)ⁿ` and reports whether it permutes it.
pub fn is_bijective_mod(f: &PolyMap<BigInt>, p: u64, k: u32, budget: u64) -> Result<BijectivityCheck> {
    let modulus = Modulus::new(p, k)?;
    let n = f.dim();
    let m = machine_modulus(&modulus, budget)?;
    let total = require_budget(m, n, budget)?;
    if total >= u32::MAX as u64 {
        return Err(Error::Unsupported("residue space too large to tabulate".into()));
    }
    let map = ModMap::new(f, m);
    let images = image_table(&map, total);
    let mut preimage = vec![u32::MAX; total as usize];
    let mut collision = None;
    for (i, &img) in images.iter().enumerate() {
        let slot = &mut preimage[img as usize];
        if *slot == u32::MAX {
            *slot = i as u32;
        } else if collision.is_none() {
            let mut first = vec![0; n];
            let mut second = vec![0; n];
            let mut image = vec![0; n];
            decode_point(*slot as u64, m, n, &mut first);
            decode_point(i as u64, m, n, &mut second);
            decode_point(img as u64, m, n, &mut image);
            collision = Some(Collision { first, second, image });
        }
    }
    let missed_target = preimage.iter().position(|&s| s == u32::MAX).map(|t| {
        let mut v = vec![0; n];
        decode_point(t as u64, m, n, &mut v);
        v
    });
    assert_eq!(
        collision.is_some(),
        missed_target.is_some(),
        "a self-map of a finite set is injective exactly when it is surjective"
    );
    Ok(BijectivityCheck { modulus, collision, missed_target })
}

/// A collision modulo `p²` built from a point where `det(Jf)` vanishes mod `p`.
///
/// For `x` in the kernel of `Jf(a)` mod `p`, `f(a + p·x) ≡ f(a) + p·Jf(a)·x ≡ f(a) (mod p²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionWitness {
    /// The singular point, mod `p`.
    pub point: ResidueVector,
    /// Kernel vector of `Jf(point)` mod `p`.
    pub kernel: Vec<u64>,
    /// `point`, mod `p²`.
    pub first: ResidueVector,
    /// `point + p·kernel`, mod `p²`.
    pub second: ResidueVector,
    /// Common image mod `p²`.
    pub image: ResidueVector,
}

impl CollisionWitness {
    /// Re-checks the collision by direct evaluation.
    pub fn verify(&self, f: &PolyMap<BigInt>) -> bool {
        let m2 = self.first.modulus();
        let a = f.evaluate(self.first.entries()).map(|v| ResidueVector::new(&v, m2));
        let b = f.evaluate(self.second.entries()).map(|v| ResidueVector::new(&v, m2));
        matches!((a, b), (Ok(a), Ok(b)) if a == b && a == self.image) && self.first != self.second
    }
}

fn jacobian_mod_p(f: &PolyMap<BigInt>, point: &[BigInt], p: u64) -> Result<Vec<Vec<u64>>> {
    let pb = BigInt::from(p);
    let values = jacobian_matrix(f).evaluate(point)?;
    Ok(values
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let r = ((v % &pb) + &pb) % &pb;
                    r.to_u64().expect("reduced")
                })
                .collect()
        })
        .collect())
}

/// Builds the mod-`p²` collision at a point `a` where `det(Jf)(a) ≡ 0 (mod p)`.
pub fn mod_p2_collision_witness(f: &PolyMap<BigInt>, p: u64, a: &ResidueVector) -> Result<CollisionWitness> {
    let mp = Modulus::new(p, 1)?;
    if a.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: a.dim() });
    }
    let point = ResidueVector::new(a.entries(), &mp);
    let jac = jacobian_mod_p(f, point.entries(), p)?;
    let kernel = kernel_vector_mod_p(&jac, p)
        .ok_or_else(|| Error::Precondition(format!("Jacobian determinant is a unit at {point}")))?;
    let m2 = Modulus::new(p, 2)?;
    let first = ResidueVector::new(point.entries(), &m2);
    let shifted: Vec<BigInt> =
        point.entries().iter().zip(&kernel).map(|(x, &v)| x + BigInt::from(p) * BigInt::from(v)).collect();
    let second = ResidueVector::new(&shifted, &m2);
    let image = ResidueVector::new(&f.evaluate(first.entries())?, &m2);
    let witness = CollisionWitness { point, kernel, first, second, image };
    assert!(witness.verify(f), "first-order Taylor congruence mod p² failed");
    Ok(witness)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalOutcome {
    SurjectiveOverZp,
    NotSurjectiveOverZp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalCertificate {
    /// `f` permutes `𝔽ₚⁿ` and `det(Jf)` has no zero on `𝔽ₚⁿ`.
    BijectiveNonsingular,
    /// `f` mod `p` misses `target`; `collision` is the matching repeated value.
    MissedTarget { target: Vec<u64>, collision: Collision },
    /// `f` mod `p` is bijective but `det(Jf)` vanishes somewhere; `f` then collides mod `p²`.
    SingularCollision(CollisionWitness),
}

/// Decision on surjectivity of `f : ℤ_pⁿ → ℤ_pⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSurjectivityVerdict {
    pub prime: u64,
    pub outcome: LocalOutcome,
    pub certificate: LocalCertificate,
}

impl LocalSurjectivityVerdict {
    pub fn is_surjective(&self) -> bool {
        self.outcome == LocalOutcome::SurjectiveOverZp
    }

    /// Re-checks failure certificates by direct evaluation over ℤ.
    pub fn verify(&self, f: &PolyMap<BigInt>) -> bool {
        match &self.certificate {
            LocalCertificate::BijectiveNonsingular => true,
            LocalCertificate::MissedTarget { collision, .. } => {
                let m = Modulus::new(self.prime, 1).expect("prime");
                let eval = |x: &[u64]| {
                    let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                    f.evaluate(&xs).map(|y| ResidueVector::new(&y, &m))
                };
                collision.first != collision.second
                    && matches!((eval(&collision.first), eval(&collision.second)), (Ok(a), Ok(b)) if a == b)
            }
            LocalCertificate::SingularCollision(w) => {
                let det = jacobian_determinant(f);
                let singular = det
                    .eval(w.point.entries())
                    .map(|d| ResidueVector::new(&[d], w.point.modulus()).entries()[0] == BigInt::from(0))
                    .unwrap_or(false);
                singular && w.verify(f)
            }
        }
    }
}

/// Decides surjectivity over ℤ_p from finitely many residues mod `p`.
pub fn zp_surjectivity_criterion(f: &PolyMap<BigInt>, p: u64, budget: u64) -> Result<LocalSurjectivityVerdict> {
    let n = f.dim();
    let total = require_budget(p, n, budget)?;
    let check = is_bijective_mod(f, p, 1, budget)?;
    if let (Some(target), Some(collision)) = (check.missed_target, check.collision) {
        return Ok(LocalSurjectivityVerdict {
            prime: p,
            outcome: LocalOutcome::NotSurjectiveOverZp,
            certificate: LocalCertificate::MissedTarget { target, collision },
        });
    }
    let det = ModPoly::new(&jacobian_determinant(f), p);
    let singular = (0..total).into_par_iter().find_first(|&i| {
        let mut x = vec![0u64; n];
        decode_point(i, p, n, &mut x);
        det.eval(&x) == 0
    });
    match singular {
        None => Ok(LocalSurjectivityVerdict {
            prime: p,
            outcome: LocalOutcome::SurjectiveOverZp,
            certificate: LocalCertificate::BijectiveNonsingular,
        }),
        Some(i) => {
            let mut x = vec![0u64; n];
            decode_point(i, p, n, &mut x);
            let a = ResidueVector::from_u64(&x, &Modulus::new(p, 1)?);
            let witness = mod_p2_collision_witness(f, p, &a)?;
            Ok(LocalSurjectivityVerdict {
                prime: p,
                outcome: LocalOutcome::NotSurjectiveOverZp,
                certificate: LocalCertificate::SingularCollision(witness),
            })
        }
    }
}

/// Determinant of `Jf(a)` mod `p`, used by the injectivity probe.
pub(crate) fn jacobian_det_mod_p(f: &PolyMap<BigInt>, a: &[u64], p: u64) -> Result<u64> {
    let xs: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
    Ok(det_mod_p(&jacobian_mod_p(f, &xs, p)?, p))
}
