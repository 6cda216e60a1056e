//! C4.5-style decision tree: top-down induction on binary presence
//! tests chosen by gain ratio, then a pessimistic pruning pass.

use crate::dataset::{Dataset, FeatureSpace, SenseId, SenseLabel, SparseBinaryVector};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        label: SenseId,
        /// Training histogram at the leaf, for pruning and dumps.
        counts: Vec<usize>,
    },
    Internal {
        feature: usize,
        present: Box<Node>,
        absent: Box<Node>,
        counts: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: Node,
    pub pruned: bool,
}

impl DecisionTree {
    /// Reported model size.
    pub fn leaf_count(&self) -> usize {
        fn leaves(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 1,
                Node::Internal {
                    present, absent, ..
                } => leaves(present) + leaves(absent),
            }
        }
        leaves(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn depth(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 0,
                Node::Internal {
                    present, absent, ..
                } => 1 + depth(present).max(depth(absent)),
            }
        }
        depth(&self.root)
    }

    /// Indented text rendering:
    /// ```text
    /// comput?
    ///   yes: -> product (41)
    ///   no: -> text (12)
    /// ```
    pub fn dump(&self, space: &FeatureSpace, senses: &[SenseLabel]) -> String {
        fn walk(
            node: &Node,
            space: &FeatureSpace,
            senses: &[SenseLabel],
            depth: usize,
            out: &mut String,
        ) {
            let pad = "  ".repeat(depth);
            match node {
                Node::Leaf { label, counts } => {
                    let total: usize = counts.iter().sum();
                    out.push_str(&format!("{pad}-> {} ({total})\n", senses[*label].name));
                }
                Node::Internal {
                    feature,
                    present,
                    absent,
                    ..
                } => {
                    out.push_str(&format!("{pad}{}?\n", space.name(*feature)));
                    out.push_str(&format!("{pad}  yes:\n"));
                    walk(present, space, senses, depth + 2, out);
                    out.push_str(&format!("{pad}  no:\n"));
                    walk(absent, space, senses, depth + 2, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, space, senses, 0, &mut out);
        out
    }
}

fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn majority(counts: &[usize]) -> SenseId {
    let mut best = 0;
    for (s, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = s;
        }
    }
    best
}

/// Upper confidence bound on the error count of a leaf with the given
/// training histogram, at confidence factor 0.25 (z = 0.6745). This is a
/// Wilson-style pessimistic estimate, not bit-for-bit C4.5.
fn pessimistic_errors(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    const Z: f64 = 0.674489750196082;
    let n = total as f64;
    let f = (total - counts[majority(counts)]) as f64 / n;
    let z2 = Z * Z;
    let u =
        (f + z2 / (2.0 * n) + Z * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt()) / (1.0 + z2 / n);
    n * u.min(1.0)
}

const GAIN_EPS: f64 = 1e-12;

struct Builder<'a> {
    data: &'a Dataset,
    used: Vec<bool>,
}

impl Builder<'_> {
    fn build(&mut self, indices: &[usize]) -> Node {
        let senses = self.data.sense_count();
        let features = self.data.feature_count();
        let mut counts = vec![0usize; senses];
        for &i in indices {
            counts[self.data.examples[i].label] += 1;
        }
        let n = indices.len();
        let parent_entropy = entropy(&counts);
        if parent_entropy == 0.0 {
            return Node::Leaf {
                label: majority(&counts),
                counts,
            };
        }

        // Per-feature histograms of the present side, one pass.
        let mut present_counts = vec![0usize; features * senses];
        let mut present_totals = vec![0usize; features];
        for &i in indices {
            let ex = &self.data.examples[i];
            for f in ex.features.iter() {
                present_counts[f * senses + ex.label] += 1;
                present_totals[f] += 1;
            }
        }

        // Best gain ratio among features with positive information gain.
        let mut best: Option<(f64, usize)> = None;
        let mut fallback: Option<usize> = None;
        for f in 0..features {
            if self.used[f] {
                continue;
            }
            let np = present_totals[f];
            if np == 0 || np == n {
                continue;
            }
            if fallback.is_none() {
                fallback = Some(f);
            }
            let present = &present_counts[f * senses..(f + 1) * senses];
            let absent: Vec<usize> = (0..senses).map(|s| counts[s] - present[s]).collect();
            let (wp, wa) = (np as f64 / n as f64, (n - np) as f64 / n as f64);
            let gain = parent_entropy - wp * entropy(present) - wa * entropy(&absent);
            if gain <= GAIN_EPS {
                continue;
            }
            let split_info = -(wp * wp.log2() + wa * wa.log2());
            let ratio = gain / split_info;
            if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                best = Some((ratio, f));
            }
        }

        // No feature has positive gain: concepts like XOR still need a
        // split (gain is zero at the root even though descendants
        // separate perfectly), so fall back to the lowest-indexed
        // feature that partitions this node non-trivially. Pure noise
        // grown this way is collapsed again by pruning.
        let chosen = match best {
            Some((_, f)) => f,
            None => match fallback {
                Some(f) => f,
                None => {
                    return Node::Leaf {
                        label: majority(&counts),
                        counts,
                    }
                }
            },
        };

        let (present_idx, absent_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.data.examples[i].features.contains(chosen));
        self.used[chosen] = true;
        let present = Box::new(self.build(&present_idx));
        let absent = Box::new(self.build(&absent_idx));
        self.used[chosen] = false;
        Node::Internal {
            feature: chosen,
            present,
            absent,
            counts,
        }
    }
}

/// Bottom-up pessimistic pruning: replace a subtree with a leaf whenever
/// the leaf's estimated error does not exceed the subtree's. Returns the
/// estimated error of the (possibly replaced) node.
fn prune(node: &mut Node) -> f64 {
    match node {
        Node::Leaf { counts, .. } => pessimistic_errors(counts),
        Node::Internal {
            present,
            absent,
            counts,
            ..
        } => {
            let subtree = prune(present) + prune(absent);
            let as_leaf = pessimistic_errors(counts);
            if as_leaf <= subtree {
                *node = Node::Leaf {
                    label: majority(counts),
                    counts: counts.clone(),
                };
                as_leaf
            } else {
                subtree
            }
        }
    }
}

/// Grows the full tree without pruning. 100% training accuracy on
/// consistent data.
pub fn dt_train_unpruned(train: &Dataset) -> DecisionTree {
    assert!(!train.is_empty(), "cannot grow a tree from no examples");
    let indices: Vec<usize> = (0..train.len()).collect();
    let mut builder = Builder {
        data: train,
        used: vec![false; train.feature_count()],
    };
    DecisionTree {
        root: builder.build(&indices),
        pruned: false,
    }
}

/// Grows and then prunes; the default training entry point.
pub fn dt_train(train: &Dataset) -> DecisionTree {
    let mut tree = dt_train_unpruned(train);
    prune(&mut tree.root);
    tree.pruned = true;
    tree
}

/// Follows presence tests from the root to a leaf.
pub fn dt_predict(tree: &DecisionTree, x: &SparseBinaryVector) -> SenseId {
    let mut node = &tree.root;
    loop {
        match node {
            Node::Leaf { label, .. } => return *label,
            Node::Internal {
                feature,
                present,
                absent,
                ..
            } => {
                node = if x.contains(*feature) {
                    present
                } else {
                    absent
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureSpace, LabeledExample};
    use std::sync::Arc;

    fn v(indices: &[usize]) -> SparseBinaryVector {
        SparseBinaryVector::from_indices(indices.to_vec())
    }

    fn dataset(rows: &[(SenseId, Vec<usize>)], senses: usize, features: usize) -> Dataset {
        let space = Arc::new(FeatureSpace::from_names(
            (0..features).map(|i| format!("f{i}")).collect(),
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
                features: SparseBinaryVector::from_indices(idx.clone()),
                label: *label,
            })
            .collect();
        Dataset::new(space, inventory, examples)
    }

    fn train_accuracy(tree: &DecisionTree, data: &Dataset) -> f64 {
        let hits = data
            .examples
            .iter()
            .filter(|ex| dt_predict(tree, &ex.features) == ex.label)
            .count();
        hits as f64 / data.len() as f64
    }

    #[test]
    fn pure_data_is_a_single_leaf() {
        let data = dataset(&[(1, vec![0]), (1, vec![1]), (1, vec![])], 2, 2);
        let tree = dt_train(&data);
        assert_eq!(tree.leaf_count(), 1);
        assert_eq!(dt_predict(&tree, &v(&[0])), 1);
    }

    #[test]
    fn single_feature_concept_is_one_split() {
        let data = dataset(&[(1, vec![0]), (0, vec![])], 2, 1);
        let tree = dt_train_unpruned(&data);
        assert_eq!(tree.leaf_count(), 2);
        assert_eq!(tree.depth(), 1);
        assert_eq!(dt_predict(&tree, &v(&[0])), 1);
        assert_eq!(dt_predict(&tree, &v(&[])), 0);
    }

    #[test]
    fn xor_is_learned_exactly_despite_zero_root_gain() {
        let rows = vec![(0, vec![]), (1, vec![0]), (1, vec![1]), (0, vec![0, 1])];
        let data = dataset(&rows, 2, 2);
        let tree = dt_train_unpruned(&data);
        assert_eq!(train_accuracy(&tree, &data), 1.0);
        assert!(tree.leaf_count() >= 3, "no single feature separates XOR");
    }

    #[test]
    fn gain_ratio_prefers_cheap_informative_split() {
        // Feature 0: raw gain 0.189, split info 1.0, ratio 0.189.
        // Feature 1: raw gain 0.138, split info 0.544, ratio 0.254.
        // Plain gain would pick feature 0; gain ratio must pick 1.
        let rows = vec![
            (0, vec![0, 1]),
            (0, vec![0]),
            (0, vec![0]),
            (0, vec![]),
            (1, vec![0]),
            (1, vec![]),
            (1, vec![]),
            (1, vec![]),
        ];
        let data = dataset(&rows, 2, 2);
        let tree = dt_train_unpruned(&data);
        match &tree.root {
            Node::Internal { feature, .. } => assert_eq!(*feature, 1),
            Node::Leaf { .. } => panic!("expected a split at the root"),
        }
    }

    #[test]
    fn majority_leaf_breaks_ties_low() {
        // Indistinguishable rows, labels 2 and 1 equally often.
        let rows = vec![(2, vec![]), (1, vec![]), (2, vec![0]), (1, vec![0])];
        let data = dataset(&rows, 3, 1);
        let tree = dt_train(&data);
        assert_eq!(dt_predict(&tree, &v(&[])), 1);
    }

    #[test]
    fn pruning_collapses_label_independent_noise() {
        // Labels carry no signal: the grown tree splits anyway (zero-gain
        // fallback) but pruning must collapse it to a single leaf.
        let rows = vec![(0, vec![0]), (0, vec![]), (1, vec![0]), (1, vec![])];
        let data = dataset(&rows, 2, 1);
        let unpruned = dt_train_unpruned(&data);
        assert_eq!(unpruned.leaf_count(), 2);
        let pruned = dt_train(&data);
        assert_eq!(pruned.leaf_count(), 1);
    }

    #[test]
    fn pruning_keeps_real_structure() {
        // A clean, strongly supported split must survive pruning.
        let mut rows = Vec::new();
        for _ in 0..30 {
            rows.push((1, vec![0]));
            rows.push((0, vec![]));
        }
        let data = dataset(&rows, 2, 1);
        let tree = dt_train(&data);
        assert_eq!(tree.leaf_count(), 2);
        assert_eq!(train_accuracy(&tree, &data), 1.0);
    }

    #[test]
    fn every_path_tests_distinct_features() {
        fn check(node: &Node, seen: &mut Vec<usize>) {
            if let Node::Internal {
                feature,
                present,
                absent,
                ..
            } = node
            {
                assert!(!seen.contains(feature), "feature {feature} retested");
                seen.push(*feature);
                check(present, seen);
                check(absent, seen);
                seen.pop();
            }
        }
        let rows = vec![
            (0, vec![]),
            (1, vec![0]),
            (1, vec![1]),
            (0, vec![0, 1]),
            (1, vec![2]),
            (0, vec![0, 2]),
        ];
        let data = dataset(&rows, 2, 3);
        let tree = dt_train_unpruned(&data);
        check(&tree.root, &mut Vec::new());
    }

    #[test]
    fn pessimistic_estimate_grows_with_uncertainty() {
        // Same zero error rate, less data → larger estimated error rate.
        let small = pessimistic_errors(&[2, 0]) / 2.0;
        let large = pessimistic_errors(&[100, 0]) / 100.0;
        assert!(small > large);
        // More observed errors → larger estimate.
        assert!(pessimistic_errors(&[5, 5]) > pessimistic_errors(&[9, 1]));
        assert_eq!(pessimistic_errors(&[]), 0.0);
    }

    #[test]
    fn dump_renders_tests_and_leaves() {
        let data = dataset(&[(1, vec![0]), (0, vec![])], 2, 1);
        let tree = dt_train_unpruned(&data);
        let space = FeatureSpace::from_names(vec!["comput".into()]);
        let senses = vec![
            SenseLabel {
                id: 0,
                name: "text".into(),
            },
            SenseLabel {
                id: 1,
                name: "product".into(),
            },
        ];
        let dump = tree.dump(&space, &senses);
        assert!(dump.starts_with("comput?\n"));
        assert!(dump.contains("-> product (1)"));
        assert!(dump.contains("-> text (1)"));
    }
}
