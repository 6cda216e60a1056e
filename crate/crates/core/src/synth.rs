//! Synthetic concepts with known ground truth.
//!
//! Three families: M-of-N threshold functions, k-term DNF, and a naive
//! Bayes generative model. Each spec carries an oracle labeler, so the
//! representational fit between a concept class and a learner can be
//! measured directly instead of argued about.

use std::sync::Arc;

use rand::seq::index;
use rand::Rng;

use crate::dataset::{
    Dataset, FeatureSpace, LabeledExample, SenseId, SenseLabel, SparseBinaryVector,
};
use crate::rng::{self, tag};
use crate::symbolic::Term;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum Family {
    /// Positive iff at least `m` of the designated features are present.
    MOfN { m: usize, designated: Vec<usize> },
    /// Positive iff any term matches.
    KTermDnf { terms: Vec<Term> },
    /// Latent sense drawn from `priors`, features drawn per-sense from
    /// `rates[sense][feature]`; the oracle label is the exact posterior
    /// argmax, so it is the Bayes-optimal label, not the latent draw.
    NbGenerative {
        priors: Vec<f64>,
        rates: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone)]
pub struct ConceptSpec {
    pub family: Family,
    pub features: usize,
    pub examples: usize,
    /// Probability that a label is replaced by a uniformly random other
    /// sense after oracle labeling. Must be below 0.5.
    pub noise: f64,
    pub seed: u64,
}

fn bad(detail: impl Into<String>) -> Error {
    Error::BadConceptSpec(detail.into())
}

impl ConceptSpec {
    pub fn validate(&self) -> Result<()> {
        if self.features == 0 {
            return Err(bad("feature count must be positive"));
        }
        if self.examples == 0 {
            return Err(bad("example count must be positive"));
        }
        if !(0.0..0.5).contains(&self.noise) {
            return Err(bad(format!("noise rate {} outside [0, 0.5)", self.noise)));
        }
        match &self.family {
            Family::MOfN { m, designated } => {
                if *m == 0 {
                    return Err(bad("m must be at least 1"));
                }
                if *m > designated.len() {
                    return Err(bad(format!(
                        "m = {} exceeds the {} designated features",
                        m,
                        designated.len()
                    )));
                }
                if !designated.windows(2).all(|w| w[0] < w[1]) {
                    return Err(bad("designated features must be strictly ascending"));
                }
                if designated.last().is_some_and(|&f| f >= self.features) {
                    return Err(bad("designated feature index out of range"));
                }
            }
            Family::KTermDnf { terms } => {
                if terms.is_empty() {
                    return Err(bad("DNF needs at least one term"));
                }
                for term in terms {
                    if term.is_empty() {
                        return Err(bad("empty term makes the concept constant true"));
                    }
                    if term.literals.iter().any(|l| l.feature >= self.features) {
                        return Err(bad("term literal out of feature range"));
                    }
                }
            }
            Family::NbGenerative { priors, rates } => {
                if priors.len() < 2 {
                    return Err(bad("generative model needs at least two senses"));
                }
                if priors.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
                    return Err(bad("priors must lie strictly inside (0, 1)"));
                }
                let total: f64 = priors.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(bad(format!("priors sum to {total}, not 1")));
                }
                if rates.len() != priors.len() {
                    return Err(bad("one rate row per sense required"));
                }
                for row in rates {
                    if row.len() != self.features {
                        return Err(bad("rate row length must equal the feature count"));
                    }
                    if row.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
                        return Err(bad("rates must lie strictly inside (0, 1)"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sense_count(&self) -> usize {
        match &self.family {
            Family::MOfN { .. } | Family::KTermDnf { .. } => 2,
            Family::NbGenerative { priors, .. } => priors.len(),
        }
    }

    fn sense_labels(&self) -> Vec<SenseLabel> {
        match &self.family {
            Family::MOfN { .. } | Family::KTermDnf { .. } => vec![
                SenseLabel {
                    id: 0,
                    name: "neg".into(),
                },
                SenseLabel {
                    id: 1,
                    name: "pos".into(),
                },
            ],
            Family::NbGenerative { priors, .. } => (0..priors.len())
                .map(|id| SenseLabel {
                    id,
                    name: format!("s{id}"),
                })
                .collect(),
        }
    }
}

/// Log-posterior scorer for the generative family, shared by labeling
/// and generation so both use identical arithmetic.
struct PosteriorScorer {
    base: Vec<f64>,
    present_shift: Vec<Vec<f64>>,
}

impl PosteriorScorer {
    fn new(priors: &[f64], rates: &[Vec<f64>]) -> Self {
        let base = priors
            .iter()
            .zip(rates)
            .map(|(p, row)| p.ln() + row.iter().map(|r| (1.0 - r).ln()).sum::<f64>())
            .collect();
        let present_shift = rates
            .iter()
            .map(|row| row.iter().map(|r| r.ln() - (1.0 - r).ln()).collect())
            .collect();
        Self {
            base,
            present_shift,
        }
    }

    fn label(&self, x: &SparseBinaryVector) -> SenseId {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (s, base) in self.base.iter().enumerate() {
            let score: f64 = base + x.iter().map(|f| self.present_shift[s][f]).sum::<f64>();
            if score > best_score {
                best = s;
                best_score = score;
            }
        }
        best
    }
}

/// Ground-truth label of `x` under the spec's concept. For the
/// generative family this is the exact posterior argmax (ties to the
/// lowest sense id), which makes the target the Bayes-optimal labeling.
pub fn oracle_label(spec: &ConceptSpec, x: &SparseBinaryVector) -> SenseId {
    match &spec.family {
        Family::MOfN { m, designated } => {
            let hits = designated.iter().filter(|&&f| x.contains(f)).count();
            usize::from(hits >= *m)
        }
        Family::KTermDnf { terms } => usize::from(terms.iter().any(|t| t.matches(x))),
        Family::NbGenerative { priors, rates } => PosteriorScorer::new(priors, rates).label(x),
    }
}

/// Samples a dataset from the spec. Deterministic under the spec's seed;
/// the noise pass draws once per example regardless of the rate, so two
/// specs differing only in noise sample identical feature vectors.
pub fn generate(spec: &ConceptSpec) -> Result<Dataset> {
    spec.validate()?;
    let width = (spec.features - 1).to_string().len();
    let space = Arc::new(FeatureSpace::from_names(
        (0..spec.features)
            .map(|i| format!("f{i:0width$}"))
            .collect(),
    ));
    let senses = Arc::new(spec.sense_labels());
    let scorer = match &spec.family {
        Family::NbGenerative { priors, rates } => Some(PosteriorScorer::new(priors, rates)),
        _ => None,
    };

    let mut rng = rng::stream(spec.seed, &[tag::SYNTH, 1]);
    let mut examples = Vec::with_capacity(spec.examples);
    let mut clean_labels = Vec::with_capacity(spec.examples);
    for _ in 0..spec.examples {
        let present: Vec<usize> = match &spec.family {
            Family::MOfN { .. } | Family::KTermDnf { .. } => {
                (0..spec.features).filter(|_| rng.gen_bool(0.5)).collect()
            }
            Family::NbGenerative { priors, rates } => {
                let mut u: f64 = rng.gen();
                let mut latent = priors.len() - 1;
                for (s, p) in priors.iter().enumerate() {
                    if u < *p {
                        latent = s;
                        break;
                    }
                    u -= p;
                }
                (0..spec.features)
                    .filter(|&f| rng.gen_bool(rates[latent][f]))
                    .collect()
            }
        };
        let x = SparseBinaryVector::from_indices(present);
        let clean = match &scorer {
            Some(sc) => sc.label(&x),
            None => oracle_label(spec, &x),
        };
        clean_labels.push(clean);
        // Both noise draws happen unconditionally so the per-example draw
        // count never depends on the noise rate or its outcome.
        let flip = rng.gen_bool(spec.noise);
        let mut other = rng.gen_range(0..senses.len() - 1);
        if other >= clean {
            other += 1;
        }
        let label = if flip { other } else { clean };
        examples.push(LabeledExample { features: x, label });
    }

    let mut data = Dataset::new(space, Arc::clone(&senses), examples);
    if let Some(&first) = clean_labels.first() {
        if clean_labels.iter().all(|&l| l == first) {
            data.warnings.push(format!(
                "degenerate concept: every sampled example has oracle label '{}'",
                senses[first].name
            ));
        }
    }
    Ok(data)
}

/// M-of-N spec with the N designated features drawn at random. The
/// construction stream is `[SYNTH, 0]`, separate from the sampling
/// stream, so the concept is a function of the seed alone.
pub fn random_m_of_n(
    m: usize,
    n: usize,
    features: usize,
    examples: usize,
    noise: f64,
    seed: u64,
) -> Result<ConceptSpec> {
    if n > features {
        return Err(bad(format!("n = {n} exceeds the {features} features")));
    }
    let mut rng = rng::stream(seed, &[tag::SYNTH, 0]);
    let mut designated = index::sample(&mut rng, features, n).into_vec();
    designated.sort_unstable();
    let spec = ConceptSpec {
        family: Family::MOfN { m, designated },
        features,
        examples,
        noise,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}

/// Random k-term DNF: each term conjoins `literals` distinct features
/// with independently chosen polarity.
pub fn random_dnf(
    terms: usize,
    literals: usize,
    features: usize,
    examples: usize,
    noise: f64,
    seed: u64,
) -> Result<ConceptSpec> {
    if terms == 0 || literals == 0 {
        return Err(bad("need at least one term and one literal per term"));
    }
    if literals > features {
        return Err(bad(format!(
            "term length {literals} exceeds the {features} features"
        )));
    }
    let mut rng = rng::stream(seed, &[tag::SYNTH, 0]);
    let terms: Vec<Term> = (0..terms)
        .map(|_| {
            let mut chosen = index::sample(&mut rng, features, literals).into_vec();
            chosen.sort_unstable();
            Term::new(
                chosen
                    .into_iter()
                    .map(|f| {
                        if rng.gen_bool(0.5) {
                            crate::symbolic::Literal::present(f)
                        } else {
                            crate::symbolic::Literal::absent(f)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let spec = ConceptSpec {
        family: Family::KTermDnf { terms },
        features,
        examples,
        noise,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}

/// Random generative model: near-uniform priors, sparse background
/// feature rates, and a per-sense subset of informative features with
/// boosted rates. Defaults are tuned so bag-of-stems-sized spaces
/// (thousands of features, tens present per example) stay realistic.
pub fn random_generative(
    senses: usize,
    features: usize,
    examples: usize,
    noise: f64,
    seed: u64,
) -> Result<ConceptSpec> {
    if senses < 2 {
        return Err(bad("generative model needs at least two senses"));
    }
    let mut rng = rng::stream(seed, &[tag::SYNTH, 0]);
    let raw: Vec<f64> = (0..senses).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = raw.iter().sum();
    let priors: Vec<f64> = raw.iter().map(|w| w / total).collect();

    const LOW: f64 = 0.002;
    const HIGH: f64 = 0.05;
    let span = (HIGH / LOW).ln();
    let informative = (features / 10).max(1).min(features);
    let mut rates = Vec::with_capacity(senses);
    for _ in 0..senses {
        let mut row: Vec<f64> = (0..features)
            .map(|_| LOW * (rng.gen::<f64>() * span).exp())
            .collect();
        for f in index::sample(&mut rng, features, informative) {
            row[f] = (row[f] * rng.gen_range(2.0..8.0)).min(0.9);
        }
        rates.push(row);
    }
    let spec = ConceptSpec {
        family: Family::NbGenerative { priors, rates },
        features,
        examples,
        noise,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}
