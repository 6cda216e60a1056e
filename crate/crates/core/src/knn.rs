//! k-nearest-neighbor over Hamming distance. Training stores the
//! examples verbatim; distance work happens at prediction time on the
//! sparse index lists only (the dense vectors are never materialized).

use crate::dataset::{Dataset, LabeledExample, SenseId, SparseBinaryVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NeighborModel {
    pub k: usize,
    pub examples: Vec<LabeledExample>,
    sense_count: usize,
}

impl NeighborModel {
    pub fn stored_count(&self) -> usize {
        self.examples.len()
    }

    pub fn sense_count(&self) -> usize {
        self.sense_count
    }
}

/// Hamming distance between sparse binary vectors: the number of features
/// present in exactly one, by sorted merge of the index lists.
pub fn hamming(a: &SparseBinaryVector, b: &SparseBinaryVector) -> usize {
    a.hamming(b)
}

/// Copies the training examples into the model. No other computation, so
/// training cost is the copy alone.
pub fn knn_train(train: &Dataset, k: usize) -> Result<NeighborModel> {
    if k == 0 || k > train.len() {
        return Err(Error::BadNeighborCount {
            k,
            available: train.len(),
        });
    }
    Ok(NeighborModel {
        k,
        examples: train.examples.clone(),
        sense_count: train.sense_count(),
    })
}

/// Majority sense among the k nearest stored examples.
///
/// Deterministic tie rules: equal distances at the k-boundary admit the
/// example with the lowest training index; a tied vote goes to the
/// candidate with the smallest summed distance, then the lowest sense id.
pub fn knn_predict(model: &NeighborModel, x: &SparseBinaryVector) -> SenseId {
    // Stable sort by distance keeps training order inside equal-distance
    // runs, which is exactly the boundary rule.
    let mut ranked: Vec<(usize, usize)> = model
        .examples
        .iter()
        .enumerate()
        .map(|(i, ex)| (ex.features.hamming(x), i))
        .collect();
    ranked.sort_by_key(|&(d, i)| (d, i));
    let neighbors = &ranked[..model.k];

    let mut votes = vec![0usize; model.sense_count];
    let mut summed = vec![0usize; model.sense_count];
    for &(d, i) in neighbors {
        let label = model.examples[i].label;
        votes[label] += 1;
        summed[label] += d;
    }

    let mut best: Option<SenseId> = None;
    for s in 0..model.sense_count {
        if votes[s] == 0 {
            continue;
        }
        match best {
            None => best = Some(s),
            Some(b) => {
                let better = votes[s] > votes[b] || (votes[s] == votes[b] && summed[s] < summed[b]);
                if better {
                    best = Some(s);
                }
            }
        }
    }
    best.expect("k >= 1 guarantees at least one vote")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureSpace, SenseLabel};
    use crate::rng::{stream, tag};
    use rand::Rng;
    use std::sync::Arc;

    const F: usize = 24;

    fn dataset(rows: &[(SenseId, &[usize])], senses: usize) -> Dataset {
        let space = Arc::new(FeatureSpace::from_names(
            (0..F).map(|i| format!("f{i}")).collect(),
        ));
        let inventory = Arc::new(
            (0..senses)
                .map(|id| SenseLabel {
                    id,
                    name: format!("s{id}"),
                })
                .collect::<Vec<_>>(),
        );
        let examples = rows
            .iter()
            .map(|(label, idx)| LabeledExample {
                features: SparseBinaryVector::from_indices(idx.to_vec()),
                label: *label,
            })
            .collect();
        Dataset::new(space, inventory, examples)
    }

    fn random_vector(rng: &mut crate::rng::Stream, density: f64) -> SparseBinaryVector {
        let idx: Vec<usize> = (0..F).filter(|_| rng.gen_bool(density)).collect();
        SparseBinaryVector::from_indices(idx)
    }

    /// Dense oracle: materialize both bit vectors and count differing
    /// positions directly.
    fn dense_hamming(a: &SparseBinaryVector, b: &SparseBinaryVector) -> usize {
        (0..F).filter(|&f| a.contains(f) != b.contains(f)).count()
    }

    #[test]
    fn hamming_hand_cases() {
        let a = SparseBinaryVector::from_indices(vec![1, 3, 5]);
        let b = SparseBinaryVector::from_indices(vec![1, 4]);
        assert_eq!(hamming(&a, &b), 3);
        assert_eq!(hamming(&a, &a), 0);
        let p = SparseBinaryVector::from_indices(vec![0, 1]);
        let q = SparseBinaryVector::from_indices(vec![2, 3, 4]);
        assert_eq!(hamming(&p, &q), 5);
    }

    #[test]
    fn sparse_merge_matches_dense_oracle() {
        let mut rng = stream(31, &[tag::LEARNER]);
        for _ in 0..1000 {
            let a = random_vector(&mut rng, 0.3);
            let b = random_vector(&mut rng, 0.6);
            assert_eq!(hamming(&a, &b), dense_hamming(&a, &b));
        }
    }

    #[test]
    fn hamming_is_a_metric() {
        let mut rng = stream(32, &[tag::LEARNER]);
        for _ in 0..10_000 {
            let a = random_vector(&mut rng, 0.4);
            let b = random_vector(&mut rng, 0.4);
            let c = random_vector(&mut rng, 0.4);
            assert_eq!(hamming(&a, &b), hamming(&b, &a));
            assert_eq!(hamming(&a, &a), 0);
            if hamming(&a, &b) == 0 {
                assert_eq!(a, b);
            }
            assert!(hamming(&a, &c) <= hamming(&a, &b) + hamming(&b, &c));
        }
    }

    #[test]
    fn training_stores_examples_verbatim() {
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0]), (1, &[1, 2]), (0, &[3])];
        let data = dataset(&rows, 2);
        let model = knn_train(&data, 3).unwrap();
        assert_eq!(model.examples, data.examples);
        assert_eq!(model.k, 3);
    }

    #[test]
    fn neighbor_count_validation() {
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0]), (1, &[1])];
        let data = dataset(&rows, 2);
        assert!(matches!(
            knn_train(&data, 0),
            Err(Error::BadNeighborCount { k: 0, .. })
        ));
        assert!(matches!(
            knn_train(&data, 3),
            Err(Error::BadNeighborCount { k: 3, .. })
        ));
        assert!(knn_train(&data, 2).is_ok());
    }

    #[test]
    fn exact_match_wins_at_k1() {
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0, 1]), (1, &[2, 3]), (2, &[4, 5])];
        let data = dataset(&rows, 3);
        let model = knn_train(&data, 1).unwrap();
        for ex in &data.examples {
            assert_eq!(knn_predict(&model, &ex.features), ex.label);
        }
    }

    #[test]
    fn majority_of_three_wins() {
        // Distances from x={0}: (0 for [0]), (1 for [0,1]), (5 for far).
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0]), (0, &[0, 1]), (1, &[2, 3, 4, 5, 6])];
        let data = dataset(&rows, 2);
        let model = knn_train(&data, 3).unwrap();
        let x = SparseBinaryVector::from_indices(vec![0]);
        assert_eq!(knn_predict(&model, &x), 0);
    }

    #[test]
    fn boundary_tie_admits_lowest_training_index() {
        // Four examples all at distance 1 from x={0}; k=3 must keep the
        // first three in training order, electing sense 1 (two votes).
        let rows: Vec<(SenseId, &[usize])> =
            vec![(1, &[0, 1]), (1, &[0, 2]), (0, &[0, 3]), (0, &[0, 4])];
        let data = dataset(&rows, 2);
        let model = knn_train(&data, 3).unwrap();
        let x = SparseBinaryVector::from_indices(vec![0]);
        assert_eq!(knn_predict(&model, &x), 1);
    }

    #[test]
    fn vote_tie_falls_to_smaller_summed_distance_then_lowest_id() {
        // k=2, one vote each: sense 1 sits at distance 0, sense 0 at 2.
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0, 1, 2]), (1, &[0])];
        let data = dataset(&rows, 2);
        let model = knn_train(&data, 2).unwrap();
        let x = SparseBinaryVector::from_indices(vec![0]);
        assert_eq!(knn_predict(&model, &x), 1);

        // Fully symmetric: equal votes, equal sums → lowest sense id.
        let rows: Vec<(SenseId, &[usize])> = vec![(1, &[1]), (0, &[2])];
        let data = dataset(&rows, 2);
        let model = knn_train(&data, 2).unwrap();
        assert_eq!(knn_predict(&model, &SparseBinaryVector::empty()), 0);
    }

    #[test]
    fn optimized_prediction_matches_dense_oracle() {
        // Oracle recomputes with dense distances and the same documented
        // tie rules, from scratch.
        fn oracle(model: &NeighborModel, x: &SparseBinaryVector) -> SenseId {
            let mut ranked: Vec<(usize, usize)> = model
                .examples
                .iter()
                .enumerate()
                .map(|(i, ex)| (dense_hamming(&ex.features, x), i))
                .collect();
            ranked.sort_by_key(|&(d, i)| (d, i));
            let mut votes = vec![0usize; model.sense_count()];
            let mut sums = vec![0usize; model.sense_count()];
            for &(d, i) in &ranked[..model.k] {
                votes[model.examples[i].label] += 1;
                sums[model.examples[i].label] += d;
            }
            (0..model.sense_count())
                .filter(|&s| votes[s] > 0)
                .min_by_key(|&s| (std::cmp::Reverse(votes[s]), sums[s], s))
                .unwrap()
        }

        let mut rng = stream(33, &[tag::LEARNER]);
        for round in 0..60 {
            let rows: Vec<(SenseId, Vec<usize>)> = (0..30)
                .map(|_| {
                    let label = rng.gen_range(0..3usize);
                    let idx: Vec<usize> = (0..F).filter(|_| rng.gen_bool(0.25)).collect();
                    (label, idx)
                })
                .collect();
            let rows_ref: Vec<(SenseId, &[usize])> =
                rows.iter().map(|(s, v)| (*s, v.as_slice())).collect();
            let data = dataset(&rows_ref, 3);
            let model = knn_train(&data, 3).unwrap();
            for _ in 0..20 {
                let x = random_vector(&mut rng, 0.25);
                assert_eq!(knn_predict(&model, &x), oracle(&model, &x), "round {round}");
            }
        }
    }
}
