mod common;

use common::{betti, exhaustive_bottleneck, probe_scales};
use proptest::prelude::*;
use strat_core::complexes::{cech_filtration, rips_filtration, subcomplex_outside_ball};
use strat_core::persistence::{bottleneck, reduce_barcodes, relative_barcodes, Bar};
use strat_core::sample_spaces::PointCloud;

fn cloud(coords: &[f64], dim: usize) -> PointCloud {
    PointCloud::from_flat(dim, coords.to_vec()).unwrap()
}

fn coords(n: std::ops::Range<usize>, dim: usize) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(move |k| prop::collection::vec(-1.0f64..1.0, k * dim))
}

fn bars() -> impl Strategy<Value = Vec<Bar>> {
    prop::collection::vec((0.0f64..1.0, 0.01f64..1.0), 0..5)
        .prop_map(|v| v.into_iter().map(|(b, l)| Bar::new(b, b + l)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cech_barcodes_count_betti_numbers(xs in coords(3..9, 2)) {
        let x = cloud(&xs, 2);
        let f = cech_filtration(&x, 2, 3.0).unwrap();
        let bc = reduce_barcodes(&f);
        let none = vec![false; f.len()];
        for alpha in probe_scales(&f) {
            for degree in 0..=2 {
                prop_assert_eq!(bc.live_count(degree, alpha), betti(&f, &none, alpha, degree));
            }
        }
    }

    #[test]
    fn rips_barcodes_count_betti_numbers(xs in coords(3..8, 3)) {
        let x = cloud(&xs, 3);
        let f = rips_filtration(&x, 3, 0.8).unwrap();
        let bc = reduce_barcodes(&f);
        let none = vec![false; f.len()];
        for alpha in probe_scales(&f) {
            for degree in 0..=3 {
                prop_assert_eq!(bc.live_count(degree, alpha), betti(&f, &none, alpha, degree));
            }
        }
    }

    #[test]
    fn relative_barcodes_count_quotient_betti_numbers(xs in coords(3..10, 2), r in 0.2f64..1.0) {
        let x = cloud(&xs, 2);
        let f = cech_filtration(&x, 2, 1.0).unwrap();
        let (a, incl) = subcomplex_outside_ball(&f, &x, r).unwrap();
        let rel = relative_barcodes(&f, &a, &incl).unwrap();
        let mut quotient = vec![false; f.len()];
        for &t in incl.simplex_map() {
            quotient[t] = true;
        }
        for alpha in probe_scales(&f) {
            for degree in 0..=2 {
                prop_assert_eq!(rel.live_count(degree, alpha), betti(&f, &quotient, alpha, degree));
            }
        }
    }

    #[test]
    fn bottleneck_matches_exhaustive_search(a in bars(), b in bars()) {
        let fast = bottleneck(&a, &b);
        let slow = exhaustive_bottleneck(&a, &b);
        prop_assert!((fast - slow).abs() < 1e-12, "{} vs {}", fast, slow);
    }

    #[test]
    fn bottleneck_is_a_metric(a in bars(), b in bars(), c in bars()) {
        prop_assert_eq!(bottleneck(&a, &a), 0.0);
        prop_assert_eq!(bottleneck(&a, &b), bottleneck(&b, &a));
        prop_assert!(bottleneck(&a, &c) <= bottleneck(&a, &b) + bottleneck(&b, &c) + 1e-12);
    }

    #[test]
    fn cech_barcodes_are_stable(xs in coords(4..12, 2), shift in prop::collection::vec(-0.05f64..0.05, 24)) {
        let x = cloud(&xs, 2);
        let mut i = 0;
        let moved = x
            .map_points(|p| {
                let q = vec![p[0] + shift[i], p[1] + shift[i + 1]];
                i += 2;
                q
            })
            .unwrap();
        let delta = (0..x.len())
            .map(|i| strat_core::sample_spaces::dist(x.point(i), moved.point(i)))
            .fold(0.0, f64::max);
        let cap = 0.6;
        let a = reduce_barcodes(&cech_filtration(&x, 2, cap).unwrap()).truncated(cap);
        let b = reduce_barcodes(&cech_filtration(&moved, 2, cap).unwrap()).truncated(cap);
        for degree in 0..2 {
            prop_assert!(bottleneck(a.bars(degree), b.bars(degree)) <= delta + 1e-9);
        }
    }
}
