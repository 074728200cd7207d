use proptest::prelude::*;

use nbc_core::chain::{down_up_matrix, local_walk_matrix, FacetComplex};
use nbc_core::gadgets::{build_opt_reduction, max_weight_nbc_base, WeightVector};
use nbc_core::graph::{count_acyclic_orientations, max_weight_independent_set};
use nbc_core::nbc::{is_log_concave, BruteForceOracle};
use nbc_core::rational::{self, Rational};
use nbc_core::{ElementOrder, Guard, Matroid, MatroidOracle, MultiGraph, NbcComplex};

/// A simple graph on `n ≤ 6` vertices from a bitmask over vertex pairs.
fn graph() -> impl Strategy<Value = MultiGraph> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            MultiGraph::new(n, edges).unwrap()
        })
    })
}

fn graph_with_order() -> impl Strategy<Value = (MultiGraph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let m = g.edge_count();
        (Just(g), Just((0..m).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn complex(g: &MultiGraph, ranking: &[usize]) -> NbcComplex {
    NbcComplex::new(Matroid::graphic(g.clone()), ElementOrder::new(ranking.to_vec()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn face_numbers_ignore_order((g, ranking) in graph_with_order()) {
        let a = complex(&g, &ranking).face_numbers(Guard::Enforce).unwrap();
        let b = NbcComplex::with_identity_order(Matroid::graphic(g)).face_numbers(Guard::Enforce).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn faces_count_acyclic_orientations((g, ranking) in graph_with_order()) {
        let f = complex(&g, &ranking).face_numbers(Guard::Enforce).unwrap();
        prop_assert_eq!(f.total(), count_acyclic_orientations(&g, Guard::Enforce).unwrap());
        prop_assert!(is_log_concave(&f));
    }

    #[test]
    fn nbc_matches_definition((g, ranking) in graph_with_order()) {
        let x = complex(&g, &ranking);
        let brute = BruteForceOracle::new(&x, Guard::Force).unwrap();
        for mask in 0u32..1 << g.edge_count() {
            let s: Vec<usize> = (0..g.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
            let expect = x.matroid().is_independent(&s).unwrap() && !brute.contains_broken_circuit(&s).unwrap();
            prop_assert_eq!(x.is_nbc(&s).unwrap(), expect, "{:?}", s);
        }
    }

    #[test]
    fn faces_extend_to_bases((g, ranking) in graph_with_order()) {
        let x = complex(&g, &ranking);
        for face in x.enumerate_faces(Guard::Enforce).unwrap() {
            let base = x.extend_to_nbc_base(&face).unwrap();
            prop_assert_eq!(base.len(), x.rank());
            prop_assert!(face.iter().all(|e| base.contains(e)));
            prop_assert!(x.is_nbc(&base).unwrap());
        }
    }

    #[test]
    fn truncation_rank_and_faces((g, ranking) in graph_with_order(), cut in 0usize..4) {
        let full = Matroid::graphic(g.clone());
        let r = cut.min(full.rank());
        let t = full.clone().truncate(r).unwrap();
        prop_assert_eq!(t.rank(), r);
        let x = NbcComplex::new(t, ElementOrder::new(ranking.clone()).unwrap()).unwrap();
        let y = complex(&g, &ranking);
        // Below the truncation rank the NBC sets are unchanged.
        let fx = x.face_numbers(Guard::Enforce).unwrap();
        let fy = y.face_numbers(Guard::Enforce).unwrap();
        prop_assert_eq!(&fx.counts()[..r.max(1)], &fy.counts()[..r.max(1)]);
        prop_assert!(is_log_concave(&fx));
    }

    #[test]
    fn down_up_is_symmetric_stochastic((g, ranking) in graph_with_order()) {
        prop_assume!(g.edge_count() > 0);
        let c = FacetComplex::from_nbc(&complex(&g, &ranking), Guard::Enforce).unwrap();
        let p = down_up_matrix(&c);
        prop_assert!(p.is_symmetric());
        prop_assert!(p.is_doubly_stochastic());
        let eig = p.eigenvalues().unwrap();
        prop_assert!((eig[0] - 1.0).abs() < 1e-9);
        prop_assert!(eig.iter().all(|&l| (-1.0 - 1e-9..=1.0 + 1e-9).contains(&l)));
        prop_assert!(eig.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn local_walks_are_reversible((g, ranking) in graph_with_order()) {
        let x = complex(&g, &ranking);
        prop_assume!(x.rank() >= 2);
        let c = FacetComplex::from_nbc(&x, Guard::Enforce).unwrap();
        let p = local_walk_matrix(&c, &[]).unwrap();
        let pi = p.reversing_measure().unwrap();
        let total: Rational = pi.iter().sum();
        prop_assert_eq!(total, rational::int(1));
    }

    #[test]
    fn opt_reduction_is_exact(g in graph(), seed in proptest::collection::vec(0i64..=9, 6)) {
        let w: Vec<Rational> = (0..g.vertex_count()).map(|v| rational::int(seed[v])).collect();
        let (_, mis) = max_weight_independent_set(&g, &w, Guard::Enforce).unwrap();
        let (inst, ew) = build_opt_reduction(&g, &WeightVector::new(w)).unwrap();
        let (_, nbc) = max_weight_nbc_base(&inst.complex, &ew, Guard::Enforce).unwrap();
        prop_assert_eq!(mis, nbc);
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rational::frac(p, q);
        prop_assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }
}
