//! Jacobian matrices, exact determinants and Sylvester resultants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::{mul_mod, Coefficient, Domain};

/// Commutative ring elements a determinant can be taken over.
pub trait RingElem: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, rhs: &Self) -> Self;
    fn sub_elem(&self, rhs: &Self) -> Self;
    fn mul_elem(&self, rhs: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// Exact quotient; only called where divisibility is guaranteed.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

macro_rules! scalar_ring_elem {
    ($t:ty) => {
        impl RingElem for $t {
            fn zero_like(&self) -> Self {
                <$t>::zero()
            }
            fn one_like(&self) -> Self {
                <$t>::one()
            }
            fn is_zero_elem(&self) -> bool {
                self.is_zero()
            }
            fn add_elem(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub_elem(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul_elem(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn neg_elem(&self) -> Self {
                -self
            }
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                Coefficient::exact_div(self, rhs)
            }
        }
    };
}

scalar_ring_elem!(BigInt);
scalar_ring_elem!(BigRational);

impl<C: Coefficient> RingElem for MultiPoly<C> {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_elem(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_elem(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.exact_div(rhs)
    }
}

/// Laplace expansion along the first row.
pub fn det_cofactor<R: RingElem>(m: &[Vec<R>], one: &R) -> R {
    let n = m.len();
    match n {
        0 => one.clone(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul_elem(&m[1][1]).sub_elem(&m[0][1].mul_elem(&m[1][0])),
        _ => {
            let mut acc = one.zero_like();
            for j in 0..n {
                if m[0][j].is_zero_elem() {
                    continue;
                }
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = m[0][j].mul_elem(&det_cofactor(&minor, one));
                acc = if j % 2 == 0 { acc.add_elem(&t) } else { acc.sub_elem(&t) };
            }
            acc
        }
    }
}

/// Fraction-free (Bareiss) elimination; every division is exact.
pub fn det_bareiss<R: RingElem>(m: &[Vec<R>], one: &R) -> R {
    let n = m.len();
    if n == 0 {
        return one.clone();
    }
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut prev = one.clone();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero_elem() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero_elem()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return one.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul_elem(&a[k][k]).sub_elem(&a[i][k].mul_elem(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact in an integral domain");
            }
            a[i][k] = one.zero_like();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg_elem()
    } else {
        d
    }
}

/// Square matrix of polynomials sharing one variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix<C> {
    rows: Vec<Vec<MultiPoly<C>>>,
}

impl<C: Coefficient> PolyMatrix<C> {
    pub fn new(rows: Vec<Vec<MultiPoly<C>>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let nvars = rows.first().and_then(|r| r.first()).map(MultiPoly::nvars);
        if let Some(nv) = nvars {
            if let Some(bad) = rows.iter().flatten().find(|p| p.nvars() != nv) {
                return Err(Error::DimensionMismatch { expected: nv, found: bad.nvars() });
            }
        }
        Ok(Self { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<MultiPoly<C>>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly<C> {
        &self.rows[i][j]
    }

    /// Entry-wise evaluation at a point.
    pub fn evaluate(&self, point: &[C]) -> Result<Vec<Vec<C>>> {
        self.rows.iter().map(|r| r.iter().map(|p| p.eval(point)).collect()).collect()
    }
}

/// `J(f)_{ij} = ∂f_i/∂x_j`.
pub fn jacobian_matrix<C: Coefficient>(f: &PolyMap<C>) -> PolyMatrix<C> {
    let n = f.dim();
    let rows = f
        .components()
        .iter()
        .map(|c| (0..n).map(|j| c.partial_derivative(j).expect("index below dimension")).collect())
        .collect();
    PolyMatrix { rows }
}

/// Largest size for which cofactor expansion is used.
pub const COFACTOR_LIMIT: usize = 6;

pub fn det_poly<C: Coefficient>(m: &PolyMatrix<C>) -> MultiPoly<C> {
    let nvars = m.rows.first().and_then(|r| r.first()).map_or(0, MultiPoly::nvars);
    let one = MultiPoly::one(nvars);
    if m.size() <= COFACTOR_LIMIT {
        det_cofactor(&m.rows, &one)
    } else {
        det_bareiss(&m.rows, &one)
    }
}

/// `det(Jf)` as a polynomial.
pub fn jacobian_determinant<C: Coefficient>(f: &PolyMap<C>) -> MultiPoly<C> {
    det_poly(&jacobian_matrix(f))
}

/// Sylvester matrix of univariate `f`, `g`: `deg g` shifted rows of `f`
/// (leading coefficient first) above `deg f` shifted rows of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterMatrix<C> {
    rows: Vec<Vec<C>>,
}

impl<C: Coefficient> SylvesterMatrix<C> {
    pub fn new(f: &MultiPoly<C>, g: &MultiPoly<C>) -> Result<Self> {
        for p in [f, g] {
            if p.nvars() != 1 {
                return Err(Error::NotUnivariate(p.nvars()));
            }
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        let fc: Vec<C> = f.to_univariate()?.into_iter().rev().collect();
        let gc: Vec<C> = g.to_univariate()?.into_iter().rev().collect();
        let (df, dg) = (fc.len() - 1, gc.len() - 1);
        let size = df + dg;
        let mut rows = Vec::with_capacity(size);
        for (coeffs, count) in [(&fc, dg), (&gc, df)] {
            for shift in 0..count {
                let mut row = vec![C::zero(); size];
                for (i, c) in coeffs.iter().enumerate() {
                    row[shift + i] = c.clone();
                }
                rows.push(row);
            }
        }
        Ok(Self { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<C>] {
        &self.rows
    }
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant<C>(f: &MultiPoly<C>, g: &MultiPoly<C>) -> Result<C>
where
    C: Domain + RingElem,
{
    let s = SylvesterMatrix::new(f, g)?;
    Ok(det_bareiss(&s.rows, &C::one()))
}

/// Squarefreeness over an algebraic closure, with `Res(f, f′)` as evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Squarefree<C> {
    pub squarefree: bool,
    pub resultant: C,
}

pub fn is_squarefree<C>(f: &MultiPoly<C>) -> Result<Squarefree<C>>
where
    C: Domain + RingElem,
{
    if f.nvars() != 1 {
        return Err(Error::NotUnivariate(f.nvars()));
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let r = resultant(f, &f.partial_derivative(0)?)?;
    Ok(Squarefree { squarefree: !r.is_zero(), resultant: r })
}

/// Roots `r ∈ 𝔽_p` of `f mod p` with `f′(r) ≢ 0`, by exhaustive scan.
pub fn simple_roots_mod_p(f: &MultiPoly<BigInt>, p: u64) -> Result<Vec<u64>> {
    if !crate::scalar::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let coeffs = f.to_univariate()?;
    let pb = BigInt::from(p);
    let reduced: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let r: BigInt = c.mod_floor(&pb);
            u64::try_from(r).expect("reduced below p")
        })
        .collect();
    if reduced.iter().all(|&c| c == 0) {
        return Err(Error::VanishesModP(p));
    }
    let deriv: Vec<u64> = reduced.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect();
    let horner = |cs: &[u64], x: u64| cs.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p);
    Ok((0..p).filter(|&x| horner(&reduced, x) == 0 && horner(&deriv, x) != 0).collect())
}
