use std::collections::HashMap;

use num_bigint::BigUint;

use gzcount::counting::{a_infinity, a_infinity_raw, count_by_fiber_recursion, vertex_count, CountCache, MultiplicityVector};
use gzcount::oracle::{oracle_count, GzShape, OracleConfig};

#[test]
fn operator_and_fiber_agree_up_to_total_8() {
    let cache = CountCache::new();
    for k in 1..=8 {
        for m in MultiplicityVector::all_up_to(k, 8) {
            assert_eq!(a_infinity(&m, &cache), count_by_fiber_recursion(&m), "{m}");
        }
    }
}

#[test]
fn raw_operator_ignores_zero_multiplicities() {
    let cache = CountCache::new();
    let mut memo = HashMap::new();
    for m in MultiplicityVector::all_up_to(5, 6) {
        assert_eq!(a_infinity_raw(m.parts(), &mut memo), a_infinity(&m.compressed(), &cache), "{m}");
    }
}

#[test]
fn shared_cache_is_consistent_across_threads() {
    let cache = CountCache::new();
    std::thread::scope(|s| {
        for t in 0..4u32 {
            let cache = &cache;
            s.spawn(move || {
                for m in MultiplicityVector::all_up_to(4, 7).into_iter().skip(t as usize) {
                    a_infinity(&m, cache);
                }
            });
        }
    });
    for (m, v) in cache.snapshot() {
        assert_eq!(v, count_by_fiber_recursion(&m), "{m}");
    }
}

#[test]
fn oracle_agrees_on_arbitrary_values() {
    let cache = CountCache::new();
    let config = OracleConfig::default();
    for lambda in [vec![-3, 0, 0, 7], vec![2, 5, 5, 5], vec![0, 10, 20, 30, 30], vec![-1, -1, 4, 4]] {
        let oracle = oracle_count(&GzShape::new(lambda.clone()).unwrap(), &config).unwrap();
        assert_eq!(BigUint::from(oracle), vertex_count(&lambda, &cache).unwrap(), "{lambda:?}");
    }
}

#[test]
fn known_counts() {
    let cache = CountCache::new();
    for (lambda, want) in [
        (vec![1, 2, 3], 7u32),
        (vec![4, 4, 4, 4, 4, 4], 1),
        (vec![1, 1, 1, 2, 2], 10),
        (vec![1, 1, 2, 3], 16),
        (vec![1, 2, 2, 3], 14),
    ] {
        assert_eq!(vertex_count(&lambda, &cache).unwrap(), BigUint::from(want), "{lambda:?}");
    }
    assert!(vertex_count(&[3, 1], &cache).is_err());
}
