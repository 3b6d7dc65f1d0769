#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use polymap::{MultiPoly, PolyMap};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Seed for every randomized suite: `POLYMAP_SEED`, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("POLYMAP_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x5EED_2024)
}

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}

/// Integer polynomial in `n` variables of total degree `≤ max_degree`.
pub fn int_poly(n: usize, max_degree: u32, max_terms: usize, bound: i64) -> impl Strategy<Value = MultiPoly<BigInt>> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), -bound..=bound), 0..=max_terms).prop_map(
        move |terms| {
            let p = MultiPoly::from_terms(n, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))));
            p.truncate(max_degree)
        },
    )
}

pub fn int_map(n: usize, max_degree: u32, max_terms: usize, bound: i64) -> impl Strategy<Value = PolyMap<BigInt>> {
    prop::collection::vec(int_poly(n, max_degree, max_terms, bound), n).prop_map(|c| PolyMap::new(c).unwrap())
}

pub fn rational_poly(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly<BigRational>> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), -20i64..=20, 1i64..=6), 0..=max_terms).prop_map(
        move |terms| {
            let p =
                MultiPoly::from_terms(n, terms.into_iter().map(|(e, a, b)| (e, BigRational::new(a.into(), b.into()))));
            p.truncate(max_degree)
        },
    )
}

pub fn to_q(f: &PolyMap<BigInt>) -> PolyMap<BigRational> {
    f.map_coefficients(|c| BigRational::from_integer(c.clone()))
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
