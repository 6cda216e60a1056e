//! The PFOIL family: greedy covering learners for per-sense DNF and CNF
//! formulae and for a single first-match decision list.

use crate::dataset::{Dataset, FeatureSpace, SenseId, SenseLabel, SparseBinaryVector};
use crate::error::{Error, Result};

use super::{learn_term, occurring_features, resolve_matches, Clause, Term};

/// One-vs-rest DNF per sense: a sense's formula matches when any of its
/// terms does.
#[derive(Debug, Clone, PartialEq)]
pub struct DnfFormula {
    /// Per sense: learned terms with their end-of-training coverage
    /// (training examples matched by the term).
    pub per_sense: Vec<Vec<(Term, usize)>>,
    /// Training examples matched by each sense's whole formula.
    pub coverage: Vec<usize>,
    /// Training-majority sense, the no-match fallback.
    pub majority: SenseId,
    /// Some term had to close while still covering a negative
    /// (inconsistent training data).
    pub impure: bool,
}

impl DnfFormula {
    pub fn sense_count(&self) -> usize {
        self.per_sense.len()
    }

    /// Does sense `s`'s formula match `x`?
    pub fn matches(&self, s: SenseId, x: &SparseBinaryVector) -> bool {
        self.per_sense[s].iter().any(|(t, _)| t.matches(x))
    }

    /// Total literals across all per-sense formulae: the reported model
    /// size.
    pub fn literal_count(&self) -> usize {
        self.per_sense.iter().flatten().map(|(t, _)| t.len()).sum()
    }

    /// One `IF <term> THEN <sense> (covers N)` line per term.
    pub fn dump(&self, space: &FeatureSpace, senses: &[SenseLabel]) -> String {
        let mut out = String::new();
        for (s, terms) in self.per_sense.iter().enumerate() {
            for (term, covers) in terms {
                out.push_str(&format!(
                    "IF {} THEN {} (covers {})\n",
                    term.render(space),
                    senses[s].name,
                    covers
                ));
            }
        }
        out
    }
}

/// One-vs-rest CNF per sense: a sense's formula matches when every one of
/// its clauses does.
#[derive(Debug, Clone, PartialEq)]
pub struct CnfFormula {
    /// Per sense: learned clauses with the count of training negatives
    /// each one excluded when learned.
    pub per_sense: Vec<Vec<(Clause, usize)>>,
    pub coverage: Vec<usize>,
    pub majority: SenseId,
    pub impure: bool,
}

impl CnfFormula {
    pub fn sense_count(&self) -> usize {
        self.per_sense.len()
    }

    pub fn matches(&self, s: SenseId, x: &SparseBinaryVector) -> bool {
        self.per_sense[s].iter().all(|(c, _)| c.matches(x))
    }

    pub fn literal_count(&self) -> usize {
        self.per_sense.iter().flatten().map(|(c, _)| c.len()).sum()
    }

    /// One `IF <clause> THEN <sense> (excludes N)` line per clause.
    pub fn dump(&self, space: &FeatureSpace, senses: &[SenseLabel]) -> String {
        let mut out = String::new();
        for (s, clauses) in self.per_sense.iter().enumerate() {
            for (clause, excluded) in clauses {
                out.push_str(&format!(
                    "IF {} THEN {} (excludes {})\n",
                    clause.render(space),
                    senses[s].name,
                    excluded
                ));
            }
        }
        out
    }
}

/// An ordered rule in a decision list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub term: Term,
    pub sense: SenseId,
    /// Remaining training examples the rule consumed when installed.
    pub covers: usize,
}

/// First-match rule list with a default sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionList {
    pub rules: Vec<Rule>,
    pub default: SenseId,
}

impl DecisionList {
    pub fn literal_count(&self) -> usize {
        self.rules.iter().map(|r| r.term.len()).sum()
    }

    /// Rule lines in match order, then the default.
    pub fn dump(&self, space: &FeatureSpace, senses: &[SenseLabel]) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            out.push_str(&format!(
                "IF {} THEN {} (covers {})\n",
                rule.term.render(space),
                senses[rule.sense].name,
                rule.covers
            ));
        }
        out.push_str(&format!("DEFAULT {}\n", senses[self.default].name));
        out
    }
}

fn split_by_sense(
    data: &Dataset,
    sense: SenseId,
) -> (Vec<&SparseBinaryVector>, Vec<&SparseBinaryVector>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for ex in &data.examples {
        if ex.label == sense {
            pos.push(&ex.features);
        } else {
            neg.push(&ex.features);
        }
    }
    (pos, neg)
}

/// PFOIL-DNF: for each sense, repeatedly learn a term that covers some of
/// the still-uncovered positives against all negatives, until every
/// positive is covered. A sense with no training examples gets the empty
/// formula (matches nothing).
pub fn pfoil_dnf_train(train: &Dataset) -> Result<DnfFormula> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let candidates = occurring_features(&train.examples);
    let mut per_sense = Vec::with_capacity(train.sense_count());
    let mut impure = false;

    for sense in 0..train.sense_count() {
        let (pos, neg) = split_by_sense(train, sense);
        let mut terms: Vec<(Term, usize)> = Vec::new();
        let mut uncovered = pos;
        while !uncovered.is_empty() {
            let (term, pure) = learn_term(&uncovered, &neg, &candidates);
            impure |= !pure;
            let before = uncovered.len();
            uncovered.retain(|x| !term.matches(x));
            if uncovered.len() == before {
                // learn_term keeps p1 >= 1 at every step, so this is
                // unreachable; kept as the documented abort rather than
                // an infinite covering loop.
                return Err(Error::CoverStalled { sense });
            }
            terms.push((term, 0));
        }
        per_sense.push(terms);
    }

    let mut formula = DnfFormula {
        per_sense,
        coverage: vec![0; train.sense_count()],
        majority: train.majority_sense(),
        impure,
    };
    // End-of-training coverage, for dumps and conflict resolution.
    for s in 0..formula.sense_count() {
        for ex in &train.examples {
            if formula.matches(s, &ex.features) {
                formula.coverage[s] += 1;
            }
        }
        for i in 0..formula.per_sense[s].len() {
            formula.per_sense[s][i].1 = train
                .examples
                .iter()
                .filter(|ex| formula.per_sense[s][i].0.matches(&ex.features))
                .count();
        }
    }
    Ok(formula)
}

/// PFOIL-CNF: the dual construction. While some negative still satisfies
/// every clause learned so far, learn one more clause that all positives
/// satisfy and at least one further negative fails.
///
/// Each clause comes from [`learn_term`] with the roles swapped: a term
/// covering negatives while avoiding positives is complemented literal by
/// literal (de Morgan) into the clause. A sense with no positives gets a
/// single empty clause (matches nothing).
pub fn pfoil_cnf_train(train: &Dataset) -> Result<CnfFormula> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let candidates = occurring_features(&train.examples);
    let mut per_sense = Vec::with_capacity(train.sense_count());
    let mut impure = false;

    for sense in 0..train.sense_count() {
        let (pos, neg) = split_by_sense(train, sense);
        let mut clauses: Vec<(Clause, usize)> = Vec::new();
        let mut remaining = neg;
        while !remaining.is_empty() {
            let (term, pure) = learn_term(&remaining, &pos, &candidates);
            impure |= !pure;
            let clause = Clause::new(term.literals.iter().map(|l| l.complement()).collect());
            let before = remaining.len();
            // Negatives the new clause excludes are exactly those the
            // swapped-role term covered.
            remaining.retain(|x| clause.matches(x));
            let excluded = before - remaining.len();
            if excluded == 0 {
                return Err(Error::CoverStalled { sense });
            }
            clauses.push((clause, excluded));
        }
        per_sense.push(clauses);
    }

    let mut formula = CnfFormula {
        per_sense,
        coverage: vec![0; train.sense_count()],
        majority: train.majority_sense(),
        impure,
    };
    for s in 0..formula.sense_count() {
        formula.coverage[s] = train
            .examples
            .iter()
            .filter(|ex| formula.matches(s, &ex.features))
            .count();
    }
    Ok(formula)
}

/// PFOIL-DLIST: one ordered list over all senses. Each round learns the
/// best term for every sense still present among the remaining examples,
/// installs the purest (then highest-coverage, then lowest-id) candidate
/// as the next rule, and drops everything it matches. The default is the
/// majority sense of the final remainder.
pub fn pfoil_dlist_train(train: &Dataset) -> Result<DecisionList> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let candidates = occurring_features(&train.examples);
    let mut remaining: Vec<&crate::dataset::LabeledExample> = train.examples.iter().collect();
    let mut rules: Vec<Rule> = Vec::new();

    loop {
        let mut histogram = vec![0usize; train.sense_count()];
        for ex in &remaining {
            histogram[ex.label] += 1;
        }
        let present: Vec<SenseId> = (0..train.sense_count())
            .filter(|&s| histogram[s] > 0)
            .collect();
        if present.len() <= 1 {
            let default = present
                .first()
                .copied()
                .unwrap_or_else(|| train.majority_sense());
            return Ok(DecisionList { rules, default });
        }

        // Candidate rule per sense: (purity as matched_same/matched_all,
        // coverage) compared by cross-multiplication to stay exact.
        struct Candidate {
            term: Term,
            sense: SenseId,
            matched_same: usize,
            matched_all: usize,
        }
        let mut best: Option<Candidate> = None;
        for &sense in &present {
            let pos: Vec<&SparseBinaryVector> = remaining
                .iter()
                .filter(|ex| ex.label == sense)
                .map(|ex| &ex.features)
                .collect();
            let neg: Vec<&SparseBinaryVector> = remaining
                .iter()
                .filter(|ex| ex.label != sense)
                .map(|ex| &ex.features)
                .collect();
            let (term, _pure) = learn_term(&pos, &neg, &candidates);
            if term.is_empty() {
                // A catch-all rule is just the default in disguise;
                // skip it and let the default absorb the remainder.
                continue;
            }
            let matched_all = remaining
                .iter()
                .filter(|ex| term.matches(&ex.features))
                .count();
            let matched_same = remaining
                .iter()
                .filter(|ex| ex.label == sense && term.matches(&ex.features))
                .count();
            if matched_all == 0 {
                continue;
            }
            let candidate = Candidate {
                term,
                sense,
                matched_same,
                matched_all,
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    // purity: candidate.same/candidate.all vs b.same/b.all
                    let lhs = candidate.matched_same * b.matched_all;
                    let rhs = b.matched_same * candidate.matched_all;
                    lhs > rhs || (lhs == rhs && candidate.matched_all > b.matched_all)
                }
            };
            if better {
                best = Some(candidate);
            }
        }

        let Some(chosen) = best else {
            // No sense could produce a non-trivial term: remaining
            // examples are mutually indistinguishable. Close with the
            // majority default.
            let mut majority = 0;
            for s in 0..histogram.len() {
                if histogram[s] > histogram[majority] {
                    majority = s;
                }
            }
            return Ok(DecisionList {
                rules,
                default: majority,
            });
        };

        remaining.retain(|ex| !chosen.term.matches(&ex.features));
        rules.push(Rule {
            term: chosen.term,
            sense: chosen.sense,
            covers: chosen.matched_all,
        });
    }
}

/// Evaluates every sense's DNF and resolves conflicts by training
/// coverage, falling back to the training majority.
pub fn dnf_predict(model: &DnfFormula, x: &SparseBinaryVector) -> SenseId {
    let matched: Vec<bool> = (0..model.sense_count())
        .map(|s| model.matches(s, x))
        .collect();
    resolve_matches(&matched, &model.coverage, model.majority)
}

/// CNF counterpart of [`dnf_predict`].
pub fn cnf_predict(model: &CnfFormula, x: &SparseBinaryVector) -> SenseId {
    let matched: Vec<bool> = (0..model.sense_count())
        .map(|s| model.matches(s, x))
        .collect();
    resolve_matches(&matched, &model.coverage, model.majority)
}

/// First matching rule wins; the default catches everything else.
pub fn dlist_predict(list: &DecisionList, x: &SparseBinaryVector) -> SenseId {
    for rule in &list.rules {
        if rule.term.matches(x) {
            return rule.sense;
        }
    }
    list.default
}
