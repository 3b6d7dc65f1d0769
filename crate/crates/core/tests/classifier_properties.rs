mod common;

use common::{config, int_map};
use num_bigint::BigInt;
use polymap::classifier::{classify_over_z, GlobalVerdict};
use polymap::padic::{rational_noninjectivity_witness, DEFAULT_BUDGET, DEFAULT_WITNESS_RADIUS};
use polymap::parser::parse_map;
use polymap::random::{perturb_non_invertible, random_invertible_map};
use polymap::PolyMap;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_consistency(f: &PolyMap<BigInt>, bound: u64) -> Result<(), TestCaseError> {
    let v = classify_over_z(f, bound, DEFAULT_BUDGET);
    prop_assert!(v.consistency.local_global);
    if let GlobalVerdict::SurjectiveAndInvertibleOverZ { inverse } = &v.global {
        prop_assert!(v.failing_primes().is_empty());
        prop_assert!(f.compose(inverse).unwrap().is_identity());
        prop_assert_ne!(v.consistency.unit_bijective_agreement, Some(false));
        if f.dim() == 1 {
            for p in [2u64, 3, 5, 7] {
                let w = rational_noninjectivity_witness(&f.components()[0], p, DEFAULT_WITNESS_RADIUS).unwrap();
                prop_assert!(w.is_none());
            }
        }
    }
    for entry in &v.local_table {
        if let Ok(local) = &entry.result {
            prop_assert!(local.verify(f));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn local_and_global_routes_agree(seed in any::<u64>(), n in 1usize..=2, random in int_map(2, 2, 3, 3), pick in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = match pick {
            0 => random_invertible_map(&mut rng, n, 3, 4),
            1 => {
                let base = random_invertible_map(&mut rng, n, 3, 3);
                perturb_non_invertible(&mut rng, &base, 3)
            }
            _ => random,
        };
        check_consistency(&f, 7)?;
    }
}

#[test]
fn corpus_is_consistent() {
    let corpus = [
        "vars x; f1 = 2*x",
        "vars x; f1 = 2*x^2 + x",
        "vars x; f1 = 6*x^3 - 5*x^2 + x",
        "vars x; f1 = x + 7",
        "vars x, y; f1 = x + y^2; f2 = y",
        "vars x, y; f1 = x + (y + x^2)^2; f2 = y + x^2",
        "vars x, y; f1 = x^3; f2 = y",
        "vars x, y, z; f1 = x + y*z; f2 = y + z^3; f3 = -z",
    ];
    for src in corpus {
        let f = parse_map(src).unwrap().integer_map().unwrap();
        check_consistency(&f, 11).unwrap_or_else(|e| panic!("{src}: {e}"));
    }
}
