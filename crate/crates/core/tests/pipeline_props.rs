//! Property-based checks of the attention pipeline's structural invariants.

use moea_core::attention::{
    attention_vector, build_key_matrix, compute_queries, reconstruct_offspring, variance_vector,
};
use moea_core::evo::{Bounds, Individual, Population};
use proptest::prelude::*;

fn population_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
    // (decision vectors, group count k), 2..=20 members, 1..=16 variables.
    (2usize..=20, 1usize..=16)
        .prop_flat_map(|(members, n)| {
            (
                prop::collection::vec(
                    prop::collection::vec(-10.0f64..10.0, n..=n),
                    members..=members,
                ),
                1usize..=n,
            )
        })
}

proptest! {
    #[test]
    fn key_matrix_partitions_variables((xs, k) in population_strategy()) {
        let pop = Population::new(xs.iter().cloned().map(Individual::new).collect());
        let variance = variance_vector(&pop).unwrap();
        let n = variance.len();
        let key = build_key_matrix(&variance, k).unwrap();

        // Every variable in exactly one group; no group empty; near-equal sizes.
        let sizes = key.group_sizes();
        prop_assert_eq!(sizes.len(), k);
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(sizes.iter().all(|&s| s >= 1));
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);

        // Groups follow the ascending-variance order: the largest variance in
        // group j never exceeds the smallest in group j+1.
        for j in 0..k.saturating_sub(1) {
            let hi_j = (0..n).filter(|&i| key.group(i) == j).map(|i| variance[i]).fold(f64::NEG_INFINITY, f64::max);
            let lo_next = (0..n).filter(|&i| key.group(i) == j + 1).map(|i| variance[i]).fold(f64::INFINITY, f64::min);
            prop_assert!(hi_j <= lo_next);
        }
    }

    #[test]
    fn shape_chain_and_identity((xs, k) in population_strategy()) {
        let pop = Population::new(xs.iter().cloned().map(Individual::new).collect());
        let variance = variance_vector(&pop).unwrap();
        let n = variance.len();
        let key = build_key_matrix(&variance, k).unwrap();
        let bounds = Bounds::uniform(n, -10.0, 10.0).unwrap();
        let v = Individual::new(xs[0].clone());

        // R^n -> R^k -> R^n, and the all-ones query reproduces the anchor
        // exactly through the whole chain.
        let projected = key.project(&v.x).unwrap();
        prop_assert_eq!(projected.len(), k);
        let a = attention_vector(&vec![1.0; k], &key).unwrap();
        prop_assert_eq!(a.len(), n);
        let child = reconstruct_offspring(&a, &v, &bounds).unwrap();
        prop_assert_eq!(child.x, v.x);
    }

    #[test]
    fn self_queries_are_neutral((xs, k) in population_strategy()) {
        // Querying the anchor against itself yields all-ones whatever the
        // grouping, including through the epsilon guard.
        let pop = Population::new(xs.iter().cloned().map(Individual::new).collect());
        let variance = variance_vector(&pop).unwrap();
        let key = build_key_matrix(&variance, k).unwrap();
        let v = Individual::new(xs[0].clone());
        let q = compute_queries(std::slice::from_ref(&v), &v, &key, 1e-12).unwrap();
        prop_assert_eq!(q.queries.len(), 1);
        prop_assert!(q.queries[0].iter().all(|&r| r == 1.0));
    }
}
