//! One-vs-rest perceptron: a separate linear threshold unit per sense,
//! trained with the classic mistake-driven update.

use rand::seq::SliceRandom;

use crate::dataset::{Dataset, SenseId, SparseBinaryVector};
use crate::error::{Error, Result};
use crate::rng::Stream;

use super::argmax_lowest;

#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronModel {
    pub eta: f64,
    pub epoch_cap: usize,
    /// Per-sense weight vectors, S x F.
    pub weights: Vec<Vec<f64>>,
    /// Per-sense thresholds.
    pub thresholds: Vec<f64>,
    /// A full epoch went by without any unit making a mistake.
    pub converged: bool,
    pub epochs_run: usize,
}

impl PerceptronModel {
    pub fn sense_count(&self) -> usize {
        self.weights.len()
    }

    pub fn feature_count(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Activation of one unit: w_s . x - theta_s.
    pub fn activation(&self, sense: SenseId, x: &SparseBinaryVector) -> f64 {
        let w = &self.weights[sense];
        x.iter().map(|f| w[f]).sum::<f64>() - self.thresholds[sense]
    }

    /// Stored parameter count: weights plus thresholds.
    pub fn parameter_count(&self) -> usize {
        self.sense_count() * (self.feature_count() + 1)
    }

    /// Versioned flat text form.
    pub fn to_text(&self) -> String {
        let mut out = String::from("model perceptron v1\n");
        out.push_str(&format!("senses {}\n", self.sense_count()));
        out.push_str(&format!("features {}\n", self.feature_count()));
        out.push_str(&format!("eta {}\n", self.eta));
        out.push_str(&format!("epoch_cap {}\n", self.epoch_cap));
        out.push_str(&format!("converged {}\n", self.converged));
        out.push_str(&format!("epochs_run {}\n", self.epochs_run));
        for s in 0..self.sense_count() {
            let row = self.weights[s]
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("unit {s} {} {}\n", self.thresholds[s], row));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |detail: &str, line: usize| Error::Parse {
            what: "perceptron model",
            line,
            detail: detail.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (i, line) = lines
                .next()
                .ok_or_else(|| bad("unexpected end of file", 0))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| bad(&format!("expected `{key} ...`"), i + 1))?;
            Ok((i + 1, rest.to_string()))
        };

        let (l, header) = field("model")?;
        if header != "perceptron v1" {
            return Err(bad("unsupported model header", l));
        }
        let (l, v) = field("senses")?;
        let senses: usize = v.trim().parse().map_err(|_| bad("bad count", l))?;
        let (l, v) = field("features")?;
        let features: usize = v.trim().parse().map_err(|_| bad("bad count", l))?;
        let (l, v) = field("eta")?;
        let eta: f64 = v.trim().parse().map_err(|_| bad("bad eta", l))?;
        let (l, v) = field("epoch_cap")?;
        let epoch_cap: usize = v.trim().parse().map_err(|_| bad("bad cap", l))?;
        let (l, v) = field("converged")?;
        let converged: bool = v.trim().parse().map_err(|_| bad("bad flag", l))?;
        let (l, v) = field("epochs_run")?;
        let epochs_run: usize = v.trim().parse().map_err(|_| bad("bad count", l))?;

        let mut weights = Vec::with_capacity(senses);
        let mut thresholds = Vec::with_capacity(senses);
        for s in 0..senses {
            let (l, row) = field("unit")?;
            let row = row
                .strip_prefix(&format!("{s} "))
                .ok_or_else(|| bad("unit out of order", l))?;
            let values: Vec<f64> = row
                .split_whitespace()
                .map(|p| p.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad float", l))?;
            if values.len() != features + 1 {
                return Err(bad("wrong unit width", l));
            }
            thresholds.push(values[0]);
            weights.push(values[1..].to_vec());
        }

        Ok(Self {
            eta,
            epoch_cap,
            weights,
            thresholds,
            converged,
            epochs_run,
        })
    }
}

/// Trains one unit per sense on the 0/1 one-vs-rest target. Each epoch
/// sweeps the examples in a freshly shuffled order (all units share the
/// sweep); a misclassified unit gets w += eta(y-yhat)x, theta -= eta(y-yhat).
/// Stops early after the first epoch with no mistakes on any unit.
pub fn perc_train(
    train: &Dataset,
    eta: f64,
    epoch_cap: usize,
    rng: &mut Stream,
) -> Result<PerceptronModel> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    assert!(eta > 0.0, "learning rate must be positive");
    assert!(epoch_cap >= 1, "need at least one epoch");

    let senses = train.sense_count();
    let features = train.feature_count();
    let mut weights = vec![vec![0.0f64; features]; senses];
    let mut thresholds = vec![0.0f64; senses];
    let mut order: Vec<usize> = (0..train.len()).collect();

    let mut converged = false;
    let mut epochs_run = 0;
    for _ in 0..epoch_cap {
        epochs_run += 1;
        order.shuffle(rng);
        let mut mistakes = 0usize;
        for &i in &order {
            let ex = &train.examples[i];
            for s in 0..senses {
                let activation: f64 =
                    ex.features.iter().map(|f| weights[s][f]).sum::<f64>() - thresholds[s];
                let predicted = if activation > 0.0 { 1.0 } else { 0.0 };
                let target = if ex.label == s { 1.0 } else { 0.0 };
                if predicted != target {
                    mistakes += 1;
                    let step = eta * (target - predicted);
                    for f in ex.features.iter() {
                        weights[s][f] += step;
                    }
                    thresholds[s] -= step;
                }
            }
        }
        if mistakes == 0 {
            converged = true;
            break;
        }
    }

    Ok(PerceptronModel {
        eta,
        epoch_cap,
        weights,
        thresholds,
        converged,
        epochs_run,
    })
}

/// Sense whose unit's activation is highest; ties go to the lowest id.
pub fn perc_predict(model: &PerceptronModel, x: &SparseBinaryVector) -> SenseId {
    let scores: Vec<f64> = (0..model.sense_count())
        .map(|s| model.activation(s, x))
        .collect();
    argmax_lowest(&scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureSpace, LabeledExample, SenseLabel};
    use crate::rng::{stream, tag};
    use std::sync::Arc;

    fn dataset(rows: &[(SenseId, &[usize])], senses: usize, features: usize) -> Dataset {
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
                features: SparseBinaryVector::from_indices(idx.to_vec()),
                label: *label,
            })
            .collect();
        Dataset::new(space, inventory, examples)
    }

    fn train_accuracy(model: &PerceptronModel, data: &Dataset) -> f64 {
        let correct = data
            .examples
            .iter()
            .filter(|ex| perc_predict(model, &ex.features) == ex.label)
            .count();
        correct as f64 / data.len() as f64
    }

    #[test]
    fn hand_built_units_score_as_expected() {
        let model = PerceptronModel {
            eta: 1.0,
            epoch_cap: 100,
            weights: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            thresholds: vec![0.4, 0.4],
            converged: true,
            epochs_run: 1,
        };
        let x = SparseBinaryVector::from_indices(vec![0]);
        assert!((model.activation(0, &x) - 0.6).abs() < 1e-12);
        assert!((model.activation(1, &x) + 0.4).abs() < 1e-12);
        assert_eq!(perc_predict(&model, &x), 0);
    }

    #[test]
    fn zero_model_tie_breaks_to_sense_zero() {
        let model = PerceptronModel {
            eta: 1.0,
            epoch_cap: 100,
            weights: vec![vec![0.0; 3]; 4],
            thresholds: vec![0.0; 4],
            converged: false,
            epochs_run: 0,
        };
        assert_eq!(
            perc_predict(&model, &SparseBinaryVector::from_indices(vec![1])),
            0
        );
    }

    #[test]
    fn positive_scaling_keeps_the_argmax() {
        let mut model = PerceptronModel {
            eta: 1.0,
            epoch_cap: 100,
            weights: vec![vec![2.0, -1.0], vec![0.5, 3.0]],
            thresholds: vec![0.25, 1.5],
            converged: true,
            epochs_run: 1,
        };
        let inputs = [
            SparseBinaryVector::empty(),
            SparseBinaryVector::from_indices(vec![0]),
            SparseBinaryVector::from_indices(vec![1]),
            SparseBinaryVector::from_indices(vec![0, 1]),
        ];
        let before: Vec<_> = inputs.iter().map(|x| perc_predict(&model, x)).collect();
        for row in &mut model.weights {
            for w in row {
                *w *= 7.5;
            }
        }
        for t in &mut model.thresholds {
            *t *= 7.5;
        }
        let after: Vec<_> = inputs.iter().map(|x| perc_predict(&model, x)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn single_example_is_learned() {
        let data = dataset(&[(1, &[0, 2])], 2, 3);
        let mut rng = stream(5, &[tag::LEARNER]);
        let model = perc_train(&data, 1.0, 100, &mut rng).unwrap();
        assert!(model.converged);
        assert_eq!(perc_predict(&model, &data.examples[0].features), 1);
    }

    #[test]
    fn or_concept_converges_to_perfect_training_accuracy() {
        // Exhaustive truth table of f0 OR f1; sense 1 = concept holds.
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[]), (1, &[0]), (1, &[1]), (1, &[0, 1])];
        let data = dataset(&rows, 2, 2);
        let mut rng = stream(17, &[tag::LEARNER]);
        let model = perc_train(&data, 1.0, 1000, &mut rng).unwrap();
        assert!(model.converged, "OR is separable");
        assert_eq!(train_accuracy(&model, &data), 1.0);
    }

    #[test]
    fn convergence_certificate_implies_perfect_reevaluation() {
        // Three linearly separable singleton senses.
        let rows: Vec<(SenseId, &[usize])> = vec![
            (0, &[0]),
            (0, &[0, 3]),
            (1, &[1]),
            (1, &[1, 3]),
            (2, &[2]),
            (2, &[2, 3]),
        ];
        let data = dataset(&rows, 3, 4);
        for seed in 0..10 {
            let mut rng = stream(seed, &[tag::LEARNER]);
            let model = perc_train(&data, 1.0, 1000, &mut rng).unwrap();
            if model.converged {
                assert_eq!(train_accuracy(&model, &data), 1.0, "seed {seed}");
            }
        }
    }

    #[test]
    fn non_separable_data_terminates_at_the_cap() {
        // XOR is not linearly separable: must stop at the cap, weights
        // finite, convergence flag off.
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[]), (1, &[0]), (1, &[1]), (0, &[0, 1])];
        let data = dataset(&rows, 2, 2);
        let mut rng = stream(23, &[tag::LEARNER]);
        let model = perc_train(&data, 1.0, 50, &mut rng).unwrap();
        assert!(!model.converged);
        assert_eq!(model.epochs_run, 50);
        assert!(model.weights.iter().flatten().all(|w| w.is_finite()));
        assert!(model.thresholds.iter().all(|t| t.is_finite()));
    }

    #[test]
    fn same_stream_reproduces_the_model() {
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0]), (1, &[1]), (0, &[0, 2]), (1, &[1, 2])];
        let data = dataset(&rows, 2, 3);
        let mut a = stream(7, &[tag::LEARNER, 0]);
        let mut b = stream(7, &[tag::LEARNER, 0]);
        let first = perc_train(&data, 1.0, 100, &mut a).unwrap();
        let second = perc_train(&data, 1.0, 100, &mut b).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn rejects_empty_dataset() {
        let data = dataset(&[], 2, 1);
        let mut rng = stream(1, &[tag::LEARNER]);
        assert!(matches!(
            perc_train(&data, 1.0, 10, &mut rng),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn text_round_trip() {
        let rows: Vec<(SenseId, &[usize])> = vec![(0, &[0]), (1, &[1])];
        let data = dataset(&rows, 2, 2);
        let mut rng = stream(3, &[tag::LEARNER]);
        let model = perc_train(&data, 1.0, 100, &mut rng).unwrap();
        let back = PerceptronModel::from_text(&model.to_text()).unwrap();
        assert_eq!(back, model);
        assert!(PerceptronModel::from_text("model perceptron v9\n").is_err());
    }
}
