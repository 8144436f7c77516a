mod common;

use minor_extremes::linalg::{lambda1, principal_minor, top_eigvec};
use minor_extremes::sampler::{derive_stream, sample_goe};
use minor_extremes::scan::{
    binomial, count_events, count_events_parallel, enumerate_combinations, event_a, event_h,
    make_thresholds, scan_max, scan_max_parallel,
};
use minor_extremes::{SymMatrix, Workers};
use proptest::prelude::*;

#[test]
fn threshold_values() {
    let th = make_thresholds(100, 2, 0.0).unwrap();
    assert!((th.level(1) - 4.63412).abs() < 1e-5);
    assert!((th.y_m - 6.06971).abs() < 1e-5);
    let shifted = make_thresholds(100, 2, 1.5).unwrap();
    assert!((shifted.y_m.powi(2) - th.y_m.powi(2) - 1.5).abs() < 1e-12);
    let ln = 1e4f64.ln();
    let m1 = make_thresholds(10_000, 1, 0.0).unwrap();
    assert!((m1.y_m.powi(2) - (4.0 * ln - 2.0 * ln.ln())).abs() < 1e-12);
}

#[test]
fn combination_counts() {
    assert_eq!(enumerate_combinations(20, 4).unwrap().count(), 4845);
    assert_eq!(binomial(20, 4), 4845.0);
    let singles: Vec<Vec<usize>> = enumerate_combinations(5, 1).unwrap().collect();
    assert_eq!(singles, (0..5).map(|i| vec![i]).collect::<Vec<_>>());
}

#[test]
fn scan_examples() {
    let g = SymMatrix::from_rows(&[vec![0.0, 3.0], vec![3.0, 0.0]], 0.0).unwrap();
    let r = scan_max(&g, 2, true).unwrap();
    assert_eq!((r.t, r.argmax), (3.0, vec![0, 1]));
    let d = SymMatrix::from_diag(&[1.0, 7.0, -2.0]).unwrap();
    let r = scan_max(&d, 1, true).unwrap();
    assert_eq!((r.t, r.argmax, r.v_star), (7.0, vec![1], vec![1.0]));
}

#[test]
fn scan_matches_bisection_brute_force() {
    let mut s = derive_stream(31, 0);
    for (n, m) in [(9, 2), (9, 3), (8, 4), (7, 5)] {
        for _ in 0..5 {
            let g = sample_goe(n, &mut s);
            let (t, alpha) = common::brute_force_t(&g, m);
            let r = scan_max(&g, m, true).unwrap();
            assert!((r.t - t).abs() < 1e-9);
            assert_eq!(r.argmax, alpha);
        }
    }
}

#[test]
fn pruned_equals_unpruned_n40_m3() {
    let mut s = derive_stream(32, 0);
    for _ in 0..20 {
        let g = sample_goe(40, &mut s);
        let a = scan_max(&g, 3, true).unwrap();
        let b = scan_max(&g, 3, false).unwrap();
        assert_eq!((a.t, &a.argmax), (b.t, &b.argmax));
        assert!(a.minors_pruned > 0);
        assert_eq!(b.minors_pruned, 0);
        assert_eq!(b.minors_evaluated as f64, binomial(40, 3));
    }
}

#[test]
fn parallel_scan_is_worker_independent() {
    let g = sample_goe(30, &mut derive_stream(33, 0));
    for m in 1..=4 {
        let seq = scan_max(&g, m, true).unwrap();
        let a = scan_max_parallel(&g, m, true, Workers(1)).unwrap();
        let b = scan_max_parallel(&g, m, true, Workers(8)).unwrap();
        assert_eq!((a.t, &a.argmax, &a.v_star), (seq.t, &seq.argmax, &seq.v_star));
        assert_eq!(a, b);
    }
}

#[test]
fn scan_result_contract() {
    let mut s = derive_stream(34, 0);
    for m in 1..=4 {
        let g = sample_goe(12, &mut s);
        let r = scan_max(&g, m, true).unwrap();
        let minor = principal_minor(&g, &r.argmax).unwrap();
        assert!((lambda1(&minor).unwrap() - r.t).abs() <= 1e-10);
        assert_eq!(r.v_star, top_eigvec(&minor).unwrap());
    }
}

#[test]
fn event_examples() {
    let th = make_thresholds(100, 2, 0.0).unwrap();
    let m = |rows: [[f64; 2]; 2]| SymMatrix::from_rows(&rows.map(|r| r.to_vec()), 0.0).unwrap();
    let zero = m([[0.0, 0.0], [0.0, 0.0]]);
    assert!(event_h(&zero, &[0, 1], &th).unwrap());
    assert!(!event_a(&zero, &[0, 1], &th).unwrap());
    let spike = m([[7.0, 0.0], [0.0, 0.0]]);
    assert!(!event_h(&spike, &[0, 1], &th).unwrap());
    assert!(!event_a(&spike, &[0, 1], &th).unwrap());
    let good = m([[4.0, 4.7], [4.7, 0.0]]);
    assert!(event_a(&good, &[0, 1], &th).unwrap());
    let th1 = make_thresholds(100, 1, 0.0).unwrap();
    assert!(event_h(&SymMatrix::from_diag(&[1e6]).unwrap(), &[0], &th1).unwrap());
}

#[test]
fn count_events_against_pairs() {
    let mut s = derive_stream(35, 0);
    let mut seen = 0;
    for _ in 0..50 {
        let base = sample_goe(10, &mut s);
        let g = SymMatrix::from_fn(10, |i, j| 2.5 * base.get(i, j)).unwrap();
        let th = make_thresholds(10, 2, -5.0).unwrap();
        let brute = enumerate_combinations(10, 2)
            .unwrap()
            .filter(|a| event_a(&g, a, &th).unwrap())
            .count() as u64;
        assert_eq!(count_events(&g, 2, &th).unwrap(), brute);
        assert_eq!(count_events_parallel(&g, 2, &th, Workers(3)).unwrap(), brute);
        seen += brute;
    }
    assert!(seen > 0, "no events exercised");
    let th = make_thresholds(10, 2, 1e6).unwrap();
    assert_eq!(count_events(&sample_goe(10, &mut s), 2, &th).unwrap(), 0);
    let th1 = make_thresholds(10, 1, 0.0).unwrap();
    let mut d = vec![0.0; 10];
    d[4] = 100.0;
    assert_eq!(count_events(&SymMatrix::from_diag(&d).unwrap(), 1, &th1).unwrap(), 1);
}

#[test]
fn growth_sanity() {
    let n = 2000usize;
    let target = 2.0 * (2.0 * (n as f64).ln()).sqrt();
    let total: f64 = (0..200)
        .map(|i| {
            let g = sample_goe(n, &mut derive_stream(36, i));
            (scan_max(&g, 2, true).unwrap().t - target).abs()
        })
        .sum();
    assert!(total / 200.0 < 0.5, "mean gap {}", total / 200.0);
}

fn goe_and_perm() -> impl Strategy<Value = (u64, usize, Vec<usize>)> {
    (any::<u64>(), 4usize..12).prop_flat_map(|(seed, n)| {
        (Just(seed), Just(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_moves_argmax((seed, n, perm) in goe_and_perm(), m in 1usize..4) {
        let g = sample_goe(n, &mut derive_stream(seed, 0));
        // p[i][j] = g[perm[i]][perm[j]], so index i of p is index perm[i] of g
        let p = SymMatrix::from_fn(n, |i, j| g.get(perm[i], perm[j])).unwrap();
        let a = scan_max(&g, m, true).unwrap();
        let b = scan_max(&p, m, true).unwrap();
        prop_assert!((a.t - b.t).abs() <= 1e-10);
        let mut mapped: Vec<usize> = b.argmax.iter().map(|&i| perm[i]).collect();
        mapped.sort_unstable();
        prop_assert_eq!(mapped, a.argmax);
    }

    #[test]
    fn m1_is_max_diagonal(seed in any::<u64>(), n in 1usize..30) {
        let g = sample_goe(n, &mut derive_stream(seed, 0));
        let best = g.diag().into_iter().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(scan_max(&g, 1, true).unwrap().t, best);
    }

    #[test]
    fn dropping_an_index_never_increases_t(seed in any::<u64>(), n in 4usize..14, m in 1usize..4) {
        let g = sample_goe(n, &mut derive_stream(seed, 0));
        let sub = principal_minor(&g, &(0..n - 1).collect::<Vec<_>>()).unwrap();
        prop_assert!(scan_max(&sub, m, true).unwrap().t <= scan_max(&g, m, true).unwrap().t);
    }

    #[test]
    fn event_a_respects_threshold(seed in any::<u64>(), y in -10.0f64..10.0) {
        let g = SymMatrix::from_fn(6, {
            let base = sample_goe(6, &mut derive_stream(seed, 0));
            move |i, j| 3.0 * base.get(i, j)
        }).unwrap();
        let th = make_thresholds(6, 2, y).unwrap();
        for alpha in enumerate_combinations(6, 2).unwrap() {
            if event_a(&g, &alpha, &th).unwrap() {
                let l = lambda1(&principal_minor(&g, &alpha).unwrap()).unwrap();
                prop_assert!(l > th.y_m);
                // raising y past λ₁² kills the event
                let higher = make_thresholds(6, 2, y + (l * l - th.y_m * th.y_m) + 1e-6).unwrap();
                prop_assert!(!event_a(&g, &alpha, &higher).unwrap());
            }
        }
    }
}
