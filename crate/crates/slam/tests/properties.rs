//! Randomized invariants that complement the acceptance oracles:
//! label-space round-trips, permutation invariance of the external
//! metrics, and structural guarantees of the mutual k-NN graph.

use proptest::prelude::*;

use slam::graph::{build_mutual_knn, knn_lists};
use slam::metrics::{ari, fmi, jaccard_score, nmi, v_measure};
use slam::model::{Labeling, RoleTag};

fn tokens(max_labels: usize, len: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(0..max_labels, len..=len)
        .prop_map(|v| v.into_iter().map(|i| format!("c{i}")).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_labels_round_trip(toks in (2usize..30).prop_flat_map(|n| tokens(4, n))) {
        let labeling = Labeling::new(toks.clone(), RoleTag::Predicted).unwrap();
        let (dense, map) = labeling.dense_labels();
        let back: Vec<&String> = dense
            .iter()
            .map(|&d| map.iter().find(|(_, &i)| i == d).map(|(t, _)| t).unwrap())
            .collect();
        prop_assert_eq!(back, toks.iter().collect::<Vec<_>>());
        // dense codes are 1..=K in ascending token order
        let mut pairs: Vec<(&String, &usize)> = map.iter().collect();
        pairs.sort_by_key(|(t, _)| (*t).clone());
        for (expect, (_, &code)) in pairs.iter().enumerate() {
            prop_assert_eq!(code, expect + 1);
        }
    }

    #[test]
    fn external_metrics_are_permutation_invariant(
        (t, p, perm_seed) in (4usize..20).prop_flat_map(|n| {
            (tokens(3, n), tokens(3, n), any::<u64>())
        })
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = t.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let permute = |v: &[String]| -> Vec<String> {
            order.iter().map(|&i| v[i].clone()).collect()
        };

        let truth = Labeling::new(t.clone(), RoleTag::GroundTruth).unwrap();
        let pred = Labeling::new(p.clone(), RoleTag::Predicted).unwrap();
        let truth_p = Labeling::new(permute(&t), RoleTag::GroundTruth).unwrap();
        let pred_p = Labeling::new(permute(&p), RoleTag::Predicted).unwrap();

        let checks: [(&str, fn(&Labeling, &Labeling) -> slam::error::Result<f64>); 5] = [
            ("ARI", ari),
            ("NMI", nmi),
            ("FMI", fmi),
            ("jaccard", jaccard_score),
            ("v_measure", v_measure),
        ];
        for (name, f) in checks {
            let a = f(&truth, &pred).unwrap();
            let b = f(&truth_p, &pred_p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12, "{} changed under permutation: {} vs {}", name, a, b);
        }
    }

    #[test]
    fn mutual_knn_edges_are_symmetric_and_sorted(
        (coords, k) in (5usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), n..=n)
                    .prop_map(|v| v.into_iter().map(|(x, y)| [x, y]).collect::<Vec<[f64; 2]>>()),
                1usize..4,
            )
        })
    ) {
        let graph = build_mutual_knn(&coords, k).unwrap();
        let lists = knn_lists(&coords, k).unwrap();
        // every edge is mutual, normalized (u < v), and unique
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in graph.edges() {
            prop_assert!(u < v);
            prop_assert!(lists[u].contains(&v) && lists[v].contains(&u));
            prop_assert!(seen.insert((u, v)));
        }
        // completeness: every mutual neighbor pair appears as an edge
        for u in 0..coords.len() {
            for &v in &lists[u] {
                if u < v && lists[v].contains(&u) {
                    prop_assert!(graph.edge_index(u, v).is_some());
                }
            }
        }
    }
}
