//! One training/prediction surface over the seven learners, so the
//! harness can treat them uniformly.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{Dataset, SenseId, SparseBinaryVector};
use crate::knn::{knn_predict, knn_train, NeighborModel};
use crate::linear::{
    nb_predict, nb_train, perc_predict, perc_train, NaiveBayesModel, PerceptronModel,
};
use crate::rng::Stream;
use crate::symbolic::{
    cnf_predict, dlist_predict, dnf_predict, dt_predict, dt_train, dt_train_unpruned,
    pfoil_cnf_train, pfoil_dlist_train, pfoil_dnf_train, CnfFormula, DecisionList, DecisionTree,
    DnfFormula,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LearnerKind {
    NaiveBayes,
    Perceptron,
    DecisionTree,
    Knn,
    PfoilDnf,
    PfoilCnf,
    PfoilDlist,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 7] = [
        LearnerKind::NaiveBayes,
        LearnerKind::Perceptron,
        LearnerKind::DecisionTree,
        LearnerKind::Knn,
        LearnerKind::PfoilDnf,
        LearnerKind::PfoilCnf,
        LearnerKind::PfoilDlist,
    ];

    /// Stable identifier used in CLI arguments and report files.
    pub fn id(self) -> &'static str {
        match self {
            LearnerKind::NaiveBayes => "naive_bayes",
            LearnerKind::Perceptron => "perceptron",
            LearnerKind::DecisionTree => "decision_tree",
            LearnerKind::Knn => "knn",
            LearnerKind::PfoilDnf => "pfoil_dnf",
            LearnerKind::PfoilCnf => "pfoil_cnf",
            LearnerKind::PfoilDlist => "pfoil_dlist",
        }
    }

    /// RNG sub-tag for the per-cell learner stream. Part of the
    /// reproducibility contract; do not renumber.
    pub fn stream_tag(self) -> u64 {
        match self {
            LearnerKind::NaiveBayes => 0,
            LearnerKind::Perceptron => 1,
            LearnerKind::DecisionTree => 2,
            LearnerKind::Knn => 3,
            LearnerKind::PfoilDnf => 4,
            LearnerKind::PfoilCnf => 5,
            LearnerKind::PfoilDlist => 6,
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl serde::Serialize for LearnerKind {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| {
                Error::BadConfig(format!(
                    "unknown classifier '{s}' (expected one of: {})",
                    LearnerKind::ALL.map(|k| k.id()).join(", ")
                ))
            })
    }
}

/// Hyperparameters for all learners in one bundle; each learner reads
/// only its own fields.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LearnerParams {
    /// Naive Bayes Laplace smoothing.
    pub alpha: f64,
    /// Perceptron learning rate.
    pub eta: f64,
    /// Perceptron epoch cap.
    pub epochs: usize,
    /// Neighbor count.
    pub k: usize,
    /// Whether the decision tree is pruned after growing.
    pub prune: bool,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            eta: 1.0,
            epochs: 100,
            k: 3,
            prune: true,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TrainedModel {
    Bayes(NaiveBayesModel),
    Perceptron(PerceptronModel),
    Tree(DecisionTree),
    Neighbors(NeighborModel),
    Dnf(DnfFormula),
    Cnf(CnfFormula),
    Dlist(DecisionList),
}

impl TrainedModel {
    pub fn kind(&self) -> LearnerKind {
        match self {
            TrainedModel::Bayes(_) => LearnerKind::NaiveBayes,
            TrainedModel::Perceptron(_) => LearnerKind::Perceptron,
            TrainedModel::Tree(_) => LearnerKind::DecisionTree,
            TrainedModel::Neighbors(_) => LearnerKind::Knn,
            TrainedModel::Dnf(_) => LearnerKind::PfoilDnf,
            TrainedModel::Cnf(_) => LearnerKind::PfoilCnf,
            TrainedModel::Dlist(_) => LearnerKind::PfoilDlist,
        }
    }

    pub fn predict(&self, x: &SparseBinaryVector) -> SenseId {
        match self {
            TrainedModel::Bayes(m) => nb_predict(m, x),
            TrainedModel::Perceptron(m) => perc_predict(m, x),
            TrainedModel::Tree(m) => dt_predict(m, x),
            TrainedModel::Neighbors(m) => knn_predict(m, x),
            TrainedModel::Dnf(m) => dnf_predict(m, x),
            TrainedModel::Cnf(m) => cnf_predict(m, x),
            TrainedModel::Dlist(m) => dlist_predict(m, x),
        }
    }

    /// Model-size accounting. Symbolic learners report structure (tree
    /// leaves, formula/list literals); parametric learners report their
    /// parameter count; the instance learner reports stored examples.
    pub fn size(&self) -> usize {
        match self {
            TrainedModel::Bayes(m) => m.parameter_count(),
            TrainedModel::Perceptron(m) => m.parameter_count(),
            TrainedModel::Tree(m) => m.leaf_count(),
            TrainedModel::Neighbors(m) => m.stored_count(),
            TrainedModel::Dnf(m) => m.literal_count(),
            TrainedModel::Cnf(m) => m.literal_count(),
            TrainedModel::Dlist(m) => m.literal_count(),
        }
    }
}

/// Trains one learner. `rng` is consumed only by stochastic learners
/// (currently the perceptron's example shuffles); the rest ignore it,
/// so sibling cells never perturb each other's streams.
pub fn train(
    kind: LearnerKind,
    data: &Dataset,
    params: &LearnerParams,
    rng: &mut Stream,
) -> Result<TrainedModel> {
    Ok(match kind {
        LearnerKind::NaiveBayes => TrainedModel::Bayes(nb_train(data, params.alpha)?),
        LearnerKind::Perceptron => {
            TrainedModel::Perceptron(perc_train(data, params.eta, params.epochs, rng)?)
        }
        LearnerKind::DecisionTree => TrainedModel::Tree(if params.prune {
            dt_train(data)
        } else {
            dt_train_unpruned(data)
        }),
        LearnerKind::Knn => TrainedModel::Neighbors(knn_train(data, params.k)?),
        LearnerKind::PfoilDnf => TrainedModel::Dnf(pfoil_dnf_train(data)?),
        LearnerKind::PfoilCnf => TrainedModel::Cnf(pfoil_cnf_train(data)?),
        LearnerKind::PfoilDlist => TrainedModel::Dlist(pfoil_dlist_train(data)?),
    })
}

/// Fraction of `data` the model labels correctly.
pub fn accuracy(model: &TrainedModel, data: &Dataset) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let hits = data
        .examples
        .iter()
        .filter(|ex| model.predict(&ex.features) == ex.label)
        .count();
    hits as f64 / data.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{self, tag};
    use crate::synth;

    #[test]
    fn ids_round_trip() {
        for kind in LearnerKind::ALL {
            assert_eq!(kind.id().parse::<LearnerKind>().unwrap(), kind);
        }
        assert!("c4.5".parse::<LearnerKind>().is_err());
    }

    #[test]
    fn stream_tags_are_distinct() {
        let mut tags: Vec<u64> = LearnerKind::ALL.iter().map(|k| k.stream_tag()).collect();
        tags.sort_unstable();
        tags.dedup();
        assert_eq!(tags.len(), 7);
    }

    #[test]
    fn every_learner_trains_and_predicts_through_the_facade() {
        // A separable 1-of-2 concept: all seven learners should fit it.
        let spec = synth::random_m_of_n(1, 2, 6, 120, 0.0, 31).unwrap();
        let data = synth::generate(&spec).unwrap();
        let train_set = data.head(90);
        let test_set = data.select(&(90..120).collect::<Vec<_>>());
        let params = LearnerParams::default();
        for kind in LearnerKind::ALL {
            let mut stream = rng::stream(8, &[tag::LEARNER, kind.stream_tag()]);
            let model = train(kind, &train_set, &params, &mut stream).unwrap();
            assert_eq!(model.kind(), kind);
            assert!(model.size() > 0, "{kind} reports an empty model");
            let acc = accuracy(&model, &test_set);
            assert!(acc > 0.9, "{kind} reached only {acc} on a trivial concept");
        }
    }

    #[test]
    fn size_accounting_matches_the_underlying_models() {
        let spec = synth::random_m_of_n(1, 2, 6, 60, 0.0, 31).unwrap();
        let data = synth::generate(&spec).unwrap();
        let params = LearnerParams::default();
        let mut stream = rng::stream(0, &[]);
        let knn = train(LearnerKind::Knn, &data, &params, &mut stream).unwrap();
        assert_eq!(knn.size(), 60);
        let nb = train(LearnerKind::NaiveBayes, &data, &params, &mut stream).unwrap();
        // 2 senses over 6 features: priors + per-sense presence/absence.
        assert_eq!(nb.size(), 2 + 2 * 2 * 6);
        let perc = train(LearnerKind::Perceptron, &data, &params, &mut stream).unwrap();
        assert_eq!(perc.size(), 2 * (6 + 1));
    }
}
