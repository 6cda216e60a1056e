//! Symbolic learners: the three PFOIL rule learners (DNF, CNF, decision
//! list) in [`rules`] and the C4.5-style decision tree in [`tree`], built
//! on shared literal/term machinery and the FOIL information gain.

pub mod rules;
pub mod tree;

pub use rules::{
    cnf_predict, dlist_predict, dnf_predict, pfoil_cnf_train, pfoil_dlist_train, pfoil_dnf_train,
    CnfFormula, DecisionList, DnfFormula, Rule,
};
pub use tree::{dt_predict, dt_train, dt_train_unpruned, DecisionTree};

use crate::dataset::{FeatureSpace, SenseId, SparseBinaryVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Present,
    Absent,
}

/// A single feature test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub feature: usize,
    pub polarity: Polarity,
}

impl Literal {
    pub fn present(feature: usize) -> Self {
        Self {
            feature,
            polarity: Polarity::Present,
        }
    }

    pub fn absent(feature: usize) -> Self {
        Self {
            feature,
            polarity: Polarity::Absent,
        }
    }

    pub fn satisfied_by(&self, x: &SparseBinaryVector) -> bool {
        match self.polarity {
            Polarity::Present => x.contains(self.feature),
            Polarity::Absent => !x.contains(self.feature),
        }
    }

    /// Same feature, opposite polarity.
    pub fn complement(&self) -> Self {
        let polarity = match self.polarity {
            Polarity::Present => Polarity::Absent,
            Polarity::Absent => Polarity::Present,
        };
        Self {
            feature: self.feature,
            polarity,
        }
    }

    fn render(&self, space: &FeatureSpace) -> String {
        match self.polarity {
            Polarity::Present => space.name(self.feature).to_string(),
            Polarity::Absent => format!("~{}", space.name(self.feature)),
        }
    }
}

/// Conjunction of literals. The empty term matches everything.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Term {
    pub literals: Vec<Literal>,
}

impl Term {
    pub fn new(literals: Vec<Literal>) -> Self {
        debug_assert!(
            distinct_features(&literals),
            "feature tested twice in a term"
        );
        Self { literals }
    }

    pub fn matches(&self, x: &SparseBinaryVector) -> bool {
        self.literals.iter().all(|l| l.satisfied_by(x))
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// `a & ~b`; the empty term renders as `TRUE`.
    pub fn render(&self, space: &FeatureSpace) -> String {
        if self.literals.is_empty() {
            return "TRUE".to_string();
        }
        self.literals
            .iter()
            .map(|l| l.render(space))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

/// Disjunction of literals. The empty clause matches nothing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        debug_assert!(
            distinct_features(&literals),
            "feature tested twice in a clause"
        );
        Self { literals }
    }

    pub fn matches(&self, x: &SparseBinaryVector) -> bool {
        self.literals.iter().any(|l| l.satisfied_by(x))
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// `a | ~b`; the empty clause renders as `FALSE`.
    pub fn render(&self, space: &FeatureSpace) -> String {
        if self.literals.is_empty() {
            return "FALSE".to_string();
        }
        self.literals
            .iter()
            .map(|l| l.render(space))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

fn distinct_features(literals: &[Literal]) -> bool {
    let mut feats: Vec<usize> = literals.iter().map(|l| l.feature).collect();
    feats.sort_unstable();
    feats.windows(2).all(|w| w[0] != w[1])
}

/// FOIL information gain for a candidate literal: `p0`/`n0` positives and
/// negatives covered before, `p1`/`n1` after.
///
/// gain = p1 * (log2(p1/(p1+n1)) - log2(p0/(p0+n0))); p1 = 0 gives the
/// never-chosen sentinel -inf.
pub fn foil_gain(p0: usize, n0: usize, p1: usize, n1: usize) -> Result<f64> {
    if p0 == 0 {
        return Err(Error::NoPositives);
    }
    debug_assert!(p1 <= p0 && n1 <= n0, "covered sets only shrink");
    if p1 == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let info = |p: usize, n: usize| (p as f64 / (p + n) as f64).log2();
    Ok(p1 as f64 * (info(p1, n1) - info(p0, n0)))
}

/// Greedy conjunction covering: starting from the empty term, repeatedly
/// add the candidate literal with the highest gain until no covered
/// negative remains. Returns the term and whether it is pure (covers no
/// negative).
///
/// A candidate must keep at least one positive (p1 >= 1) and strictly
/// shrink the covered negatives (n1 < n0). Positive gain implies both, so
/// this admits every literal the gain rule would, plus zero/negative-gain
/// literals that still make progress; without those, concepts like XOR
/// (where every opening literal has exactly zero gain) would be
/// unlearnable. Ties break to the lowest feature index, then present
/// before absent. The term is closed impure only when no candidate makes
/// progress, which on consistent data never happens while negatives
/// remain.
pub fn learn_term(
    pos: &[&SparseBinaryVector],
    neg: &[&SparseBinaryVector],
    candidates: &[usize],
) -> (Term, bool) {
    assert!(!pos.is_empty(), "nothing to cover");
    let mut covered_pos: Vec<&SparseBinaryVector> = pos.to_vec();
    let mut covered_neg: Vec<&SparseBinaryVector> = neg.to_vec();
    let mut literals: Vec<Literal> = Vec::new();

    // Dense feature -> candidate slot lookup for the counting passes.
    let max_feature = candidates.iter().copied().max().unwrap_or(0);
    let mut slot = vec![usize::MAX; max_feature + 1];
    for (i, &f) in candidates.iter().enumerate() {
        slot[f] = i;
    }
    let mut used = vec![false; candidates.len()];

    while !covered_neg.is_empty() {
        let p0 = covered_pos.len();
        let n0 = covered_neg.len();
        if p0 == 0 {
            return (Term::new(literals), false);
        }

        // One pass over the covered examples counts, for every candidate
        // feature, how many positives/negatives have it present.
        let mut pos_present = vec![0usize; candidates.len()];
        for x in &covered_pos {
            for f in x.iter() {
                if f <= max_feature && slot[f] != usize::MAX {
                    pos_present[slot[f]] += 1;
                }
            }
        }
        let mut neg_present = vec![0usize; candidates.len()];
        for x in &covered_neg {
            for f in x.iter() {
                if f <= max_feature && slot[f] != usize::MAX {
                    neg_present[slot[f]] += 1;
                }
            }
        }

        let base_info = (p0 as f64 / (p0 + n0) as f64).log2();
        let mut best: Option<(f64, Literal)> = None;
        for (i, &f) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            for polarity in [Polarity::Present, Polarity::Absent] {
                let (p1, n1) = match polarity {
                    Polarity::Present => (pos_present[i], neg_present[i]),
                    Polarity::Absent => (p0 - pos_present[i], n0 - neg_present[i]),
                };
                if p1 == 0 || n1 >= n0 {
                    continue;
                }
                let gain = p1 as f64 * ((p1 as f64 / (p1 + n1) as f64).log2() - base_info);
                if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                    best = Some((
                        gain,
                        Literal {
                            feature: f,
                            polarity,
                        },
                    ));
                }
            }
        }

        let Some((_, literal)) = best else {
            return (Term::new(literals), false);
        };
        covered_pos.retain(|x| literal.satisfied_by(x));
        covered_neg.retain(|x| literal.satisfied_by(x));
        used[slot[literal.feature]] = true;
        literals.push(literal);
    }

    (Term::new(literals), true)
}

/// Sorted distinct features present in at least one example; the shared
/// candidate pool for every rule learner.
pub(crate) fn occurring_features(examples: &[crate::dataset::LabeledExample]) -> Vec<usize> {
    let mut seen = std::collections::BTreeSet::new();
    for ex in examples {
        seen.extend(ex.features.iter());
    }
    seen.into_iter().collect()
}

/// Shared DNF/CNF test-time conflict resolution: one matching sense wins
/// outright; among several, the one whose formula covered the most
/// training examples (ties to the lowest id); with none, the stored
/// training-majority sense.
pub(crate) fn resolve_matches(
    matched: &[bool],
    training_coverage: &[usize],
    majority: SenseId,
) -> SenseId {
    let mut winner: Option<SenseId> = None;
    for s in 0..matched.len() {
        if !matched[s] {
            continue;
        }
        match winner {
            None => winner = Some(s),
            Some(w) => {
                if training_coverage[s] > training_coverage[w] {
                    winner = Some(s);
                }
            }
        }
    }
    winner.unwrap_or(majority)
}
