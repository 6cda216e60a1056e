//! The two weighted-evidence learners: naive Bayes and a one-vs-rest
//! perceptron. Both score every sense with a linear function over the
//! full feature vector (absences included for Bayes) and break argmax
//! ties toward the lowest sense id.

pub mod bayes;
pub mod perceptron;

pub use bayes::{nb_predict, nb_train, NaiveBayesModel};
pub use perceptron::{perc_predict, perc_train, PerceptronModel};

/// Shared tie rule: index of the maximum score, lowest index on ties.
pub(crate) fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
