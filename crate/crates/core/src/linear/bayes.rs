//! Naive Bayes over binary features with Laplace smoothing.
//!
//! The classifier assumes conditional independence of features given the
//! sense. A score sums evidence from every feature, absent ones included;
//! prediction is fast on sparse inputs because each sense's total
//! absent-feature mass is precomputed and corrected per present feature.

use crate::dataset::{Dataset, SenseId, SparseBinaryVector};
use crate::error::{Error, Result};

use super::argmax_lowest;

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    pub alpha: f64,
    /// log P(sense), length S.
    pub log_prior: Vec<f64>,
    /// log P(feature present | sense), S x F.
    pub log_p_present: Vec<Vec<f64>>,
    /// log P(feature absent | sense), S x F.
    pub log_p_absent: Vec<Vec<f64>>,
    /// Per sense, the sum of log_p_absent over all features; lets a
    /// prediction touch only the present indices.
    sum_log_absent: Vec<f64>,
}

impl NaiveBayesModel {
    pub fn sense_count(&self) -> usize {
        self.log_prior.len()
    }

    pub fn feature_count(&self) -> usize {
        self.log_p_present.first().map_or(0, Vec::len)
    }

    /// log P(sense, x): prior plus evidence from every feature.
    pub fn log_score(&self, sense: SenseId, x: &SparseBinaryVector) -> f64 {
        let present = &self.log_p_present[sense];
        let absent = &self.log_p_absent[sense];
        let mut score = self.log_prior[sense] + self.sum_log_absent[sense];
        for f in x.iter() {
            score += present[f] - absent[f];
        }
        score
    }

    /// Stored parameter count: priors plus both conditional tables.
    pub fn parameter_count(&self) -> usize {
        let s = self.sense_count();
        s + 2 * s * self.feature_count()
    }

    /// Versioned flat text form.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::from("model naive_bayes v1\n");
        out.push_str(&format!("senses {}\n", self.sense_count()));
        out.push_str(&format!("features {}\n", self.feature_count()));
        out.push_str(&format!("alpha {}\n", self.alpha));
        out.push_str(&format!("prior {}\n", join(&self.log_prior)));
        for s in 0..self.sense_count() {
            out.push_str(&format!("present {s} {}\n", join(&self.log_p_present[s])));
            out.push_str(&format!("absent {s} {}\n", join(&self.log_p_absent[s])));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |detail: &str, line: usize| Error::Parse {
            what: "naive_bayes model",
            line,
            detail: detail.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let mut next = |key: &str| -> Result<(usize, String)> {
            let (i, line) = lines
                .next()
                .ok_or_else(|| bad("unexpected end of file", 0))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| {
                    r.strip_prefix(' ')
                        .or(if r.is_empty() { Some("") } else { None })
                })
                .ok_or_else(|| bad(&format!("expected `{key} ...`"), i + 1))?;
            Ok((i + 1, rest.to_string()))
        };
        let parse_floats = |s: &str, n: usize, line: usize| -> Result<Vec<f64>> {
            let v: Vec<f64> = s
                .split_whitespace()
                .map(|p| p.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad float", line))?;
            if v.len() != n {
                return Err(bad(&format!("expected {n} values, got {}", v.len()), line));
            }
            Ok(v)
        };

        let (l, header) = next("model")?;
        if header != "naive_bayes v1" {
            return Err(bad("unsupported model header", l));
        }
        let (l, s) = next("senses")?;
        let senses: usize = s.trim().parse().map_err(|_| bad("bad count", l))?;
        let (l, f) = next("features")?;
        let features: usize = f.trim().parse().map_err(|_| bad("bad count", l))?;
        let (l, a) = next("alpha")?;
        let alpha: f64 = a.trim().parse().map_err(|_| bad("bad alpha", l))?;
        let (l, p) = next("prior")?;
        let log_prior = parse_floats(&p, senses, l)?;

        let mut log_p_present = Vec::with_capacity(senses);
        let mut log_p_absent = Vec::with_capacity(senses);
        for s in 0..senses {
            let (l, row) = next("present")?;
            let row = row
                .strip_prefix(&format!("{s} "))
                .ok_or_else(|| bad("row out of order", l))?;
            log_p_present.push(parse_floats(row, features, l)?);
            let (l, row) = next("absent")?;
            let row = row
                .strip_prefix(&format!("{s} "))
                .ok_or_else(|| bad("row out of order", l))?;
            log_p_absent.push(parse_floats(row, features, l)?);
        }

        Ok(Self::assemble(
            alpha,
            log_prior,
            log_p_present,
            log_p_absent,
        ))
    }

    fn assemble(
        alpha: f64,
        log_prior: Vec<f64>,
        log_p_present: Vec<Vec<f64>>,
        log_p_absent: Vec<Vec<f64>>,
    ) -> Self {
        let sum_log_absent = log_p_absent.iter().map(|row| row.iter().sum()).collect();
        Self {
            alpha,
            log_prior,
            log_p_present,
            log_p_absent,
            sum_log_absent,
        }
    }
}

/// Estimates the model by smoothed counting:
/// P(s) = (count(s)+α)/(N+αS), P(f|s) = (count(f∧s)+α)/(count(s)+2α).
pub fn nb_train(train: &Dataset, alpha: f64) -> Result<NaiveBayesModel> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    assert!(alpha > 0.0, "smoothing must be positive");
    let s_count = train.sense_count();
    let f_count = train.feature_count();
    let n = train.len() as f64;

    let sense_n = train.sense_histogram();
    let mut feature_n = vec![vec![0usize; f_count]; s_count];
    for ex in &train.examples {
        let row = &mut feature_n[ex.label];
        for f in ex.features.iter() {
            row[f] += 1;
        }
    }

    let log_prior = sense_n
        .iter()
        .map(|&c| ((c as f64 + alpha) / (n + alpha * s_count as f64)).ln())
        .collect();
    let mut log_p_present = vec![vec![0.0; f_count]; s_count];
    let mut log_p_absent = vec![vec![0.0; f_count]; s_count];
    for s in 0..s_count {
        let denom = sense_n[s] as f64 + 2.0 * alpha;
        for f in 0..f_count {
            let p = (feature_n[s][f] as f64 + alpha) / denom;
            log_p_present[s][f] = p.ln();
            log_p_absent[s][f] = (1.0 - p).ln();
        }
    }

    Ok(NaiveBayesModel::assemble(
        alpha,
        log_prior,
        log_p_present,
        log_p_absent,
    ))
}

/// Highest-scoring sense; ties go to the lowest id.
pub fn nb_predict(model: &NaiveBayesModel, x: &SparseBinaryVector) -> SenseId {
    let scores: Vec<f64> = (0..model.sense_count())
        .map(|s| model.log_score(s, x))
        .collect();
    argmax_lowest(&scores)
}
