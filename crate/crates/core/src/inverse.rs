//! Formal inverses of polynomial maps and the complete invertibility decision
//! over ℤ and ℚ.
//!
//! Writing `f = A·x + N(x)` with `N` of order ≥ 2, the inverse series solves
//! `g = A⁻¹(y − N(g))`; its degree-`d` part depends only on lower parts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::display::{canonical_string, default_names};
use crate::error::{Error, Result};
use crate::jacobian::jacobian_determinant;
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::Domain;

/// An `n`-tuple of power series known up to total degree `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeriesMap<C> {
    cutoff: u32,
    components: Vec<MultiPoly<C>>,
}

impl<C: Domain> TruncatedSeriesMap<C> {
    /// Truncates `f` to total degree `cutoff`.
    pub fn from_map(f: &PolyMap<C>, cutoff: u32) -> Self {
        Self { cutoff, components: f.components().iter().map(|c| c.truncate(cutoff)).collect() }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly<C>] {
        &self.components
    }

    /// The truncation viewed as a polynomial map.
    pub fn to_poly_map(&self) -> PolyMap<C> {
        PolyMap::new(self.components.clone()).expect("series components share the dimension")
    }

    /// `self ∘ inner`, discarding terms above the smaller cutoff.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let cutoff = self.cutoff.min(inner.cutoff);
        let components = self
            .components
            .iter()
            .map(|c| c.substitute_truncated(&inner.components, cutoff))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cutoff, components })
    }
}

fn invert_matrix(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = BigRational::one() / m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn apply_matrix(m: &[Vec<BigRational>], v: &[MultiPoly<BigRational>]) -> Vec<MultiPoly<BigRational>> {
    let nvars = v.first().map_or(0, |p| p.nvars());
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(c, _)| !c.is_zero())
                .fold(MultiPoly::zero(nvars), |acc, (c, p)| &acc + &p.scale(c))
        })
        .collect()
}

/// Degree-by-degree solver for the inverse series, over ℚ.
struct SeriesSolver {
    inverse_linear: Vec<Vec<BigRational>>,
    nonlinear: Vec<MultiPoly<BigRational>>,
    inverse: Vec<MultiPoly<BigRational>>,
    degree: u32,
}

impl SeriesSolver {
    /// `f` must have zero constant term; `det_is_unit` decides whether the linear part is invertible in the target ring.
    fn new(f: &PolyMap<BigRational>, det_is_unit: impl Fn(&BigRational) -> bool) -> Result<Self> {
        let n = f.dim();
        if f.components().iter().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NonZeroConstantTerm);
        }
        let linear: Vec<Vec<BigRational>> = f
            .components()
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0u32; n];
                        e[j] = 1;
                        c.coefficient(&e)
                    })
                    .collect()
            })
            .collect();
        let det = crate::jacobian::det_bareiss(&linear, &BigRational::one());
        if det.is_zero() || !det_is_unit(&det) {
            return Err(Error::SingularLinearPart);
        }
        let inverse_linear = invert_matrix(&linear).ok_or(Error::SingularLinearPart)?;
        let nonlinear = f.components().iter().map(|c| c - &c.homogeneous_part(1)).collect();
        let vars: Vec<_> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
        let inverse = apply_matrix(&inverse_linear, &vars);
        Ok(Self { inverse_linear, nonlinear, inverse, degree: 1 })
    }

    fn linear_part(&self) -> Vec<MultiPoly<BigRational>> {
        self.inverse.clone()
    }

    /// Computes and records the next homogeneous part of the inverse.
    fn step(&mut self) -> Vec<MultiPoly<BigRational>> {
        let d = self.degree + 1;
        let defect: Vec<_> = self
            .nonlinear
            .iter()
            .map(|c| c.substitute_truncated(&self.inverse, d).expect("dimensions agree").homogeneous_part(d))
            .collect();
        let part: Vec<_> = apply_matrix(&self.inverse_linear, &defect).into_iter().map(|p| -p).collect();
        for (g, p) in self.inverse.iter_mut().zip(&part) {
            *g = &*g + p;
        }
        self.degree = d;
        part
    }
}

/// Converts a homogeneous part back to `C`, reporting the first coefficient outside `C`.
fn lower_part<C: Domain>(part: &[MultiPoly<BigRational>], degree: u32) -> Result<Vec<MultiPoly<C>>> {
    part.iter()
        .enumerate()
        .map(|(component, p)| {
            for (m, c) in p.terms() {
                if C::from_rational(c).is_none() {
                    let mono = MultiPoly::from_terms(p.nvars(), [(m.exponents().to_vec(), BigInt::one())]);
                    return Err(Error::NonIntegralCoefficient {
                        degree,
                        component,
                        monomial: canonical_string(&mono, &default_names(p.nvars())),
                        value: c.to_string(),
                    });
                }
            }
            Ok(p.map_coefficients(|c| C::from_rational(c).expect("checked above")))
        })
        .collect()
}

/// The unique series `g` with `g(0) = 0` and `f(g(y)) ≡ y` modulo degree `cutoff + 1`.
///
/// Requires `f(0) = 0` and an invertible linear part. Over ℤ every coefficient
/// must stay integral; the first one that does not is reported.
pub fn formal_inverse<C: Domain>(f: &PolyMap<C>, cutoff: u32) -> Result<TruncatedSeriesMap<C>> {
    let fq = f.map_coefficients(|c| c.to_rational());
    let mut solver = SeriesSolver::new(&fq, |d| C::from_rational(d).is_some_and(|c| c.is_unit()))?;
    let n = f.dim();
    let mut components: Vec<MultiPoly<C>> = vec![MultiPoly::zero(n); n];
    if cutoff >= 1 {
        add_parts(&mut components, &lower_part::<C>(&solver.linear_part(), 1)?);
    }
    for _ in 2..=cutoff {
        let part = solver.step();
        add_parts(&mut components, &lower_part::<C>(&part, solver.degree)?);
    }
    Ok(TruncatedSeriesMap { cutoff, components })
}

fn add_parts<C: Domain>(acc: &mut [MultiPoly<C>], part: &[MultiPoly<C>]) {
    for (a, p) in acc.iter_mut().zip(part) {
        *a = &*a + p;
    }
}

/// True iff `p` is a constant unit of its coefficient ring.
pub fn is_unit_polynomial<C: Domain>(p: &MultiPoly<C>) -> bool {
    p.is_constant() && p.constant_term().is_unit()
}

/// Why a map is not invertible.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction<C> {
    /// `det(Jf)` is not a unit of `C[x]`.
    JacobianNotUnit { determinant: MultiPoly<C> },
    /// The inverse series leaves the coefficient ring.
    NonIntegralCoefficient { degree: u32, component: usize, monomial: String, value: String },
    /// The degree-bounded candidate fails `f∘g = id`; `residual` is `(f∘g − id)` in `component`.
    CompositionMismatch { component: usize, residual: MultiPoly<C> },
}

/// Outcome of [`decide_invertibility`].
#[derive(Debug, Clone, PartialEq)]
pub enum InvertibilityCertificate<C> {
    Invertible { inverse: PolyMap<C> },
    NotInvertible { obstruction: Obstruction<C> },
}

impl<C> InvertibilityCertificate<C> {
    pub fn is_invertible(&self) -> bool {
        matches!(self, Self::Invertible { .. })
    }

    pub fn inverse(&self) -> Option<&PolyMap<C>> {
        match self {
            Self::Invertible { inverse } => Some(inverse),
            Self::NotInvertible { .. } => None,
        }
    }
}

fn is_two_sided_inverse<C: Domain>(f: &PolyMap<C>, g: &PolyMap<C>) -> bool {
    f.compose(g).is_ok_and(|h| h.is_identity()) && g.compose(f).is_ok_and(|h| h.is_identity())
}

/// Degree bound `d^(n−1)` on the inverse of an invertible map of degree `d`.
pub fn inverse_degree_bound(degree: u32, n: usize) -> u32 {
    let d = degree.max(1);
    d.saturating_pow(n.saturating_sub(1) as u32)
}

/// Decides whether `f` has a polynomial inverse with coefficients in `C`.
///
/// A unit Jacobian determinant is checked first; then the inverse series of
/// the translated map `f − f(0)` is built up to the degree bound and verified
/// by exact composition in both orders.
pub fn decide_invertibility<C: Domain>(f: &PolyMap<C>) -> InvertibilityCertificate<C> {
    let det = jacobian_determinant(f);
    if !is_unit_polynomial(&det) {
        return InvertibilityCertificate::NotInvertible {
            obstruction: Obstruction::JacobianNotUnit { determinant: det },
        };
    }
    let n = f.dim();
    let shift = f.constant_terms();
    let neg_shift: Vec<C> = shift.iter().map(|c| -c.clone()).collect();
    let centred = f.translate_values(&neg_shift);
    let bound = inverse_degree_bound(f.degree(), n);

    let fq = centred.map_coefficients(|c| c.to_rational());
    let mut solver = match SeriesSolver::new(&fq, |d| C::from_rational(d).is_some_and(|c| c.is_unit())) {
        Ok(s) => s,
        Err(_) => unreachable!("a unit Jacobian determinant makes the linear part invertible"),
    };
    let mut candidate: Vec<MultiPoly<C>> = vec![MultiPoly::zero(n); n];
    let lowered = lower_part::<C>(&solver.linear_part(), 1);
    let mut step_result = lowered.map(|p| add_parts(&mut candidate, &p));
    let mut degree = 1;
    while step_result.is_ok() {
        if degree > 1 || bound == 1 {
            let zero_part = degree == bound || candidate.iter().all(|c| c.degree() < degree);
            if zero_part {
                let g = PolyMap::new(candidate.clone()).expect("square");
                if is_two_sided_inverse(&centred, &g) {
                    let inverse = g.translate_arguments(&neg_shift);
                    debug_assert!(is_two_sided_inverse(f, &inverse));
                    return InvertibilityCertificate::Invertible { inverse };
                }
            }
        }
        if degree >= bound {
            break;
        }
        let part = solver.step();
        degree = solver.degree;
        step_result = lower_part::<C>(&part, degree).map(|p| add_parts(&mut candidate, &p));
    }
    if let Err(Error::NonIntegralCoefficient { degree, component, monomial, value }) = step_result {
        return InvertibilityCertificate::NotInvertible {
            obstruction: Obstruction::NonIntegralCoefficient { degree, component, monomial, value },
        };
    }
    let g = PolyMap::new(candidate).expect("square");
    let composed = centred.compose(&g).expect("same dimension");
    let (component, residual) = composed
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c - &MultiPoly::var(n, i)))
        .find(|(_, r)| !r.is_zero())
        .unwrap_or_else(|| {
            // f∘g = id but g∘f ≠ id cannot happen for square polynomial maps; report g∘f.
            let back = g.compose(&centred).expect("same dimension");
            back.components()
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c - &MultiPoly::var(n, i)))
                .find(|(_, r)| !r.is_zero())
                .expect("candidate failed verification")
        });
    InvertibilityCertificate::NotInvertible { obstruction: Obstruction::CompositionMismatch { component, residual } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_map;

    fn zmap(src: &str) -> PolyMap<BigInt> {
        parse_map(src).unwrap().integer_map().unwrap()
    }

    #[test]
    fn series_inverse_of_x_plus_x2() {
        let f = zmap("vars x; f1 = x + x^2");
        let g = formal_inverse(&f, 4).unwrap();
        assert_eq!(g.components()[0], zmap("vars x; f1 = x - x^2 + 2*x^3 - 5*x^4").components()[0]);
    }

    #[test]
    fn identity_and_triangular() {
        let id = PolyMap::<BigInt>::identity(3);
        assert_eq!(formal_inverse(&id, 5).unwrap().to_poly_map(), id);
        let f = zmap("vars x, y; f1 = x + y^2; f2 = y");
        let g = formal_inverse(&f, 2).unwrap().to_poly_map();
        assert_eq!(g, zmap("vars x, y; f1 = x - y^2; f2 = y"));
    }

    #[test]
    fn formal_inverse_errors() {
        assert_eq!(formal_inverse(&zmap("vars x; f1 = x + 1"), 3), Err(Error::NonZeroConstantTerm));
        assert_eq!(formal_inverse(&zmap("vars x; f1 = 2*x"), 3), Err(Error::SingularLinearPart));
        assert!(matches!(
            formal_inverse(&zmap("vars x, y; f1 = x + y^2; f2 = x + 2*y"), 3),
            Err(Error::SingularLinearPart)
        ));
        let q = zmap("vars x; f1 = 2*x").map_coefficients(|c| BigRational::from_integer(c.clone()));
        assert!(formal_inverse(&q, 3).is_ok());
    }

    #[test]
    fn decisions() {
        match decide_invertibility(&zmap("vars x; f1 = 2*x")) {
            InvertibilityCertificate::NotInvertible { obstruction: Obstruction::JacobianNotUnit { determinant } } => {
                assert_eq!(determinant, MultiPoly::constant(1, BigInt::from(2)))
            }
            other => panic!("unexpected {other:?}"),
        }
        let f = zmap("vars x, y; f1 = x + y^2; f2 = y");
        assert_eq!(decide_invertibility(&f).inverse(), Some(&zmap("vars x, y; f1 = x - y^2; f2 = y")));
        match decide_invertibility(&zmap("vars x; f1 = 2*x^2 + x")) {
            InvertibilityCertificate::NotInvertible { obstruction: Obstruction::JacobianNotUnit { determinant } } => {
                assert_eq!(determinant, zmap("vars x; f1 = 4*x + 1").components()[0])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn translation_is_handled() {
        let f = zmap("vars x, y; f1 = -y + 3; f2 = x + (y - 1)^3 + 5");
        let g = decide_invertibility(&f).inverse().cloned().unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn rational_inverse_with_fractional_coefficients() {
        let parsed = parse_map("vars x, y; f1 = 2*x + y^2; f2 = y").unwrap();
        let zf = parsed.integer_map().unwrap();
        assert!(!decide_invertibility(&zf).is_invertible());
        let g = decide_invertibility(&parsed.rational_map());
        let expect = parse_map("vars x, y; f1 = x/2 - y^2/2; f2 = y").unwrap().rational_map();
        assert_eq!(g.inverse(), Some(&expect));
    }

    #[test]
    fn unit_polynomials() {
        assert!(is_unit_polynomial(&MultiPoly::<BigInt>::one(2)));
        assert!(!is_unit_polynomial(&MultiPoly::constant(1, BigInt::from(2))));
        assert!(is_unit_polynomial(&MultiPoly::constant(1, BigRational::from_integer(2.into()))));
        assert!(!is_unit_polynomial(&zmap("vars x; f1 = 4*x + 1").components()[0]));
        assert!(!is_unit_polynomial(&MultiPoly::<BigInt>::zero(1)));
    }

    #[test]
    fn degree_bound() {
        assert_eq!(inverse_degree_bound(3, 3), 9);
        assert_eq!(inverse_degree_bound(1, 4), 1);
        assert_eq!(inverse_degree_bound(2, 1), 1);
    }
}
