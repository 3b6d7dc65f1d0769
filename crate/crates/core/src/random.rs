//! Seeded generators for test maps: random polynomials, invertible maps built
//! from elementary and unimodular factors, and non-invertible perturbations.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::inverse::is_unit_polynomial;
use crate::jacobian::jacobian_determinant;
use crate::poly::{MultiPoly, PolyMap};

/// Random polynomial with at most `max_terms` terms of total degree `≤ max_degree`
/// and coefficients in `[−bound, bound]`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
    bound: i64,
) -> MultiPoly<BigInt> {
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<u32>, BigInt)> = (0..count)
        .map(|_| {
            let total = rng.gen_range(0..=max_degree);
            let mut exps = vec![0u32; nvars];
            for _ in 0..total {
                if nvars > 0 {
                    exps[rng.gen_range(0..nvars)] += 1;
                }
            }
            (exps, BigInt::from(rng.gen_range(-bound..=bound)))
        })
        .collect();
    MultiPoly::from_terms(nvars, terms)
}

pub fn random_map<R: Rng>(rng: &mut R, n: usize, max_degree: u32, max_terms: usize, bound: i64) -> PolyMap<BigInt> {
    PolyMap::new((0..n).map(|_| random_poly(rng, n, max_degree, max_terms, bound)).collect())
        .expect("components share n variables")
}

/// `x_i ← x_i + h`, with `h` free of `x_i`.
pub fn random_elementary<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> PolyMap<BigInt> {
    let i = rng.gen_range(0..n);
    let mut h = random_poly(rng, n, max_degree, 3, 3);
    h = MultiPoly::from_terms(
        n,
        h.terms().filter(|(m, _)| m.exponents()[i] == 0).map(|(m, c)| (m.exponents().to_vec(), c.clone())),
    );
    let comps = (0..n)
        .map(|j| {
            let x = MultiPoly::var(n, j);
            if j == i {
                &x + &h
            } else {
                x
            }
        })
        .collect();
    PolyMap::new(comps).expect("square")
}

/// Linear map with determinant ±1: a signed permutation composed with a shear.
pub fn random_unimodular_linear<R: Rng>(rng: &mut R, n: usize) -> PolyMap<BigInt> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut comps: Vec<MultiPoly<BigInt>> = perm
        .iter()
        .map(|&j| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            MultiPoly::var(n, j).scale(&BigInt::from(sign))
        })
        .collect();
    if n >= 2 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2..=2));
        let extra = comps[j].scale(&c);
        comps[i] = &comps[i] + &extra;
    }
    PolyMap::new(comps).expect("square")
}

/// Composition of up to `max_factors` elementary and unimodular factors, plus a
/// translation, whose degree does not exceed `max_degree` (rejection sampling).
pub fn random_invertible_map<R: Rng>(rng: &mut R, n: usize, max_degree: u32, max_factors: usize) -> PolyMap<BigInt> {
    loop {
        let factors = rng.gen_range(1..=max_factors);
        let mut f = PolyMap::identity(n);
        for _ in 0..factors {
            let g = if rng.gen_bool(0.6) {
                random_elementary(rng, n, max_degree)
            } else {
                random_unimodular_linear(rng, n)
            };
            f = g.compose(&f).expect("same dimension");
            if f.degree() > max_degree {
                break;
            }
        }
        if f.degree() > max_degree {
            continue;
        }
        let shift: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        return f.translate_values(&shift);
    }
}

/// A perturbation of `f` whose Jacobian determinant is not `±1`.
pub fn perturb_non_invertible<R: Rng>(rng: &mut R, f: &PolyMap<BigInt>, max_degree: u32) -> PolyMap<BigInt> {
    let n = f.dim();
    loop {
        let mut comps = f.components().to_vec();
        let i = rng.gen_range(0..n);
        if rng.gen_bool(0.5) {
            let c = [2i64, 3, -2, -3][rng.gen_range(0..4)];
            comps[i] = comps[i].scale(&BigInt::from(c));
        } else {
            let extra = random_poly(rng, n, max_degree, 2, 3);
            comps[i] = &comps[i] + &extra;
        }
        let g = PolyMap::new(comps).expect("square");
        if g.degree() <= max_degree && !is_unit_polynomial(&jacobian_determinant(&g)) {
            return g;
        }
    }
}
