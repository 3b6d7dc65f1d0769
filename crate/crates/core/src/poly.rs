//! Sparse multivariate polynomials and polynomial maps.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration is canonical. Zero coefficients are
//! never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Exponent vector `x_0^e_0 ⋯ x_{n-1}^e_{n-1}`, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divide(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), C::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing duplicates.
    ///
    /// Panics if an exponent vector does not have length `nvars`.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Dense univariate coefficients, constant term first.
    pub fn from_univariate(coeffs: &[C]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    /// Dense coefficients (constant term first) of a univariate polynomial.
    pub fn to_univariate(&self) -> Result<Vec<C>> {
        if self.nvars != 1 {
            return Err(Error::NotUnivariate(self.nvars));
        }
        let mut out = vec![C::zero(); self.degree() as usize + 1];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn coefficient(&self, exponents: &[u32]) -> C {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        self.filter_terms(|m| m.degree() == degree)
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter_terms(|m| m.degree() <= max_degree)
    }

    fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients<D: Coefficient>(&self, f: impl Fn(&Monomial, &C) -> Option<D>) -> Option<MultiPoly<D>> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c)?);
        }
        Some(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coefficients(|a| a.clone() * c.clone())
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    /// Product discarding every term of total degree above `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        self.check_same_ring(other);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > max_degree {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > max_degree {
                    break;
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut powers: Vec<Vec<C>> = point.iter().map(|a| vec![C::one(), a.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[v];
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].clone() * point[v].clone();
                    table.push(next);
                }
                t = t * table[e as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.0.clone();
            dm[var] -= 1;
            out.add_term(Monomial(dm), c.clone() * C::from_i64(e as i64));
        }
        Ok(out)
    }

    /// Substitutes `values[i]` for `x_i`; the result lives in the values' ring.
    pub fn substitute(&self, values: &[MultiPoly<C>]) -> Result<Self> {
        self.substitute_impl(values, None)
    }

    /// Like [`substitute`](Self::substitute) but every intermediate product is
    /// cut at total degree `max_degree`.
    pub fn substitute_truncated(&self, values: &[MultiPoly<C>], max_degree: u32) -> Result<Self> {
        self.substitute_impl(values, Some(max_degree))
    }

    fn substitute_impl(&self, values: &[MultiPoly<C>], cut: Option<u32>) -> Result<Self> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: values.len() });
        }
        let target = values.first().map_or(0, MultiPoly::nvars);
        if let Some(bad) = values.iter().find(|v| v.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, found: bad.nvars });
        }
        let mul = |a: &Self, b: &Self| match cut {
            Some(d) => a.mul_truncated(b, d),
            None => a * b,
        };
        let one = Self::one(target);
        let mut powers: Vec<Vec<Self>> = values.iter().map(|v| vec![one.clone(), v.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[v];
                while table.len() <= e as usize {
                    let next = mul(&table[table.len() - 1], &values[v]);
                    table.push(next);
                }
                t = mul(&t, &table[e as usize]);
                if t.is_zero() {
                    break;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_same_ring(divisor);
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.divide(lm)?;
            let qc = c.exact_div(lc)?;
            let mut t = Self::zero(self.nvars);
            t.terms.insert(qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl<C: Coefficient> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn add(self, rhs: Self) -> MultiPoly<C> {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn sub(self, rhs: Self) -> MultiPoly<C> {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn mul(self, rhs: Self) -> MultiPoly<C> {
        self.mul_truncated(rhs, u32::MAX)
    }
}

impl<C: Coefficient> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        self.map_coefficients(|c| -c.clone())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Coefficient> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;

            fn $method(self, rhs: Self) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<C: Coefficient> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

/// A polynomial self-map `(f_1, …, f_n)` of n-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap<C> {
    components: Vec<MultiPoly<C>>,
}

impl<C: Coefficient> PolyMap<C> {
    pub fn new(components: Vec<MultiPoly<C>>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.nvars() });
        }
        Ok(Self { components })
    }

    pub fn identity(n: usize) -> Self {
        Self { components: (0..n).map(|i| MultiPoly::var(n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly<C>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<MultiPoly<C>> {
        self.components
    }

    /// Largest total degree among the components.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(MultiPoly::degree).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn evaluate(&self, point: &[C]) -> Result<Vec<C>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &PolyMap<C>) -> Result<PolyMap<C>> {
        if inner.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: inner.dim() });
        }
        let components = self.components.iter().map(|c| c.substitute(&inner.components)).collect::<Result<_>>()?;
        Ok(PolyMap { components })
    }

    pub fn constant_terms(&self) -> Vec<C> {
        self.components.iter().map(MultiPoly::constant_term).collect()
    }

    /// `x ↦ self(x) + shift`.
    pub fn translate_values(&self, shift: &[C]) -> PolyMap<C> {
        let n = self.dim();
        PolyMap {
            components: self
                .components
                .iter()
                .zip(shift)
                .map(|(c, s)| c + &MultiPoly::constant(n, s.clone()))
                .collect(),
        }
    }

    /// `x ↦ self(x + shift)`.
    pub fn translate_arguments(&self, shift: &[C]) -> PolyMap<C> {
        let n = self.dim();
        let moved: Vec<_> = (0..n).map(|i| &MultiPoly::var(n, i) + &MultiPoly::constant(n, shift[i].clone())).collect();
        let components = self.components.iter().map(|c| c.substitute(&moved).expect("dimensions agree")).collect();
        PolyMap { components }
    }

    pub fn truncate(&self, max_degree: u32) -> PolyMap<C> {
        PolyMap { components: self.components.iter().map(|c| c.truncate(max_degree)).collect() }
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PolyMap<D> {
        PolyMap { components: self.components.iter().map(|c| c.map_coefficients(&f)).collect() }
    }
}

pub fn evaluate_map<C: Coefficient>(f: &PolyMap<C>, point: &[C]) -> Result<Vec<C>> {
    f.evaluate(point)
}

pub fn compose_maps<C: Coefficient>(f: &PolyMap<C>, g: &PolyMap<C>) -> Result<PolyMap<C>> {
    f.compose(g)
}

pub fn partial_derivative<C: Coefficient>(p: &MultiPoly<C>, var: usize) -> Result<MultiPoly<C>> {
    p.partial_derivative(var)
}
