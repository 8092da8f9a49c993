use eif_core::forest::Node;
use eif_core::{auroc, build_forest, c_factor, height_limit, Dataset, LabeledScores, Scorer};
use proptest::prelude::*;

fn labeled() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (2usize..60)
        .prop_flat_map(|n| (prop::collection::vec(-50.0f64..50.0, n), prop::collection::vec(0u8..2, n)))
        .prop_filter("both classes", |(_, l)| l.contains(&0) && l.contains(&1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn auroc_ignores_increasing_transforms((scores, labels) in labeled()) {
        let base = auroc(&LabeledScores::new(scores.clone(), labels.clone()).unwrap()).unwrap();
        let warped: Vec<f64> = scores.iter().map(|s| (s / 10.0).exp() * 3.0 + 1.0).collect();
        let other = auroc(&LabeledScores::new(warped, labels).unwrap()).unwrap();
        prop_assert!((base - other).abs() < 1e-12);
    }

    #[test]
    fn auroc_complement((scores, labels) in labeled()) {
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));
        let flipped: Vec<u8> = labels.iter().map(|l| 1 - l).collect();
        let a = auroc(&LabeledScores::new(scores.clone(), labels).unwrap()).unwrap();
        let b = auroc(&LabeledScores::new(scores, flipped).unwrap()).unwrap();
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trees_respect_structure(
        dim in 1usize..5,
        ext_frac in 0.0f64..1.0,
        rows in prop::collection::vec(-10.0f64..10.0, 8..400),
        psi_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let n = rows.len() / dim;
        prop_assume!(n >= 2);
        let data = Dataset::new(dim, rows[..n * dim].to_vec()).unwrap();
        let ext = ((dim as f64) * ext_frac) as usize;
        let psi = 2 + ((n - 2) as f64 * psi_frac) as usize;
        let forest = build_forest(&data, 5, psi, ext.min(dim - 1), seed).unwrap();
        for tree in forest.trees() {
            prop_assert!(tree.max_depth() <= height_limit(psi));
            let mut leaves = 0;
            let mut internals = 0;
            let mut mass = 0;
            for node in tree.nodes() {
                match node {
                    Node::Internal { split, .. } => {
                        internals += 1;
                        prop_assert_eq!(split.nonzero_count(), ext.min(dim - 1) + 1);
                    }
                    Node::External { size } => {
                        leaves += 1;
                        mass += size;
                    }
                }
            }
            prop_assert_eq!(leaves, internals + 1);
            prop_assert_eq!(mass, psi);
        }
        for row in data.rows() {
            let s = forest.score(row).unwrap();
            prop_assert!(s > 0.0 && s < 1.0);
        }
    }

    #[test]
    fn score_decreases_with_depth(a in 0.0f64..30.0, b in 0.0f64..30.0) {
        prop_assume!(a != b);
        let c = c_factor(256);
        let sa = eif_core::forest::score_from_depth(a, c);
        let sb = eif_core::forest::score_from_depth(b, c);
        prop_assert_eq!(a < b, sa > sb);
    }
}
