//! Corpus ingestion and preprocessing: tokenize, stem, drop stopwords,
//! vectorize to sparse binary stem features, balance senses, and split
//! train/test under a seeded stream.
//!
//! Datasets are immutable after construction; the feature space and sense
//! inventory are shared behind `Arc` so subsets are cheap and safe to read
//! concurrently.

pub mod io;
pub mod porter;
pub mod text;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::Stream;

pub use io::{load_dataset, parse_corpus, read_dataset, save_dataset, write_dataset};
pub use porter::stem;
pub use text::{stem_tokens, tokenize, Stopwords};

/// Dense sense identifier, `0..S`.
pub type SenseId = usize;

/// A sense of the ambiguous word: dense id plus display name.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SenseLabel {
    pub id: SenseId,
    pub name: String,
}

/// Strictly sorted, deduplicated indices of the features present in an
/// example. Everything not listed is absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseBinaryVector {
    present: Vec<usize>,
}

impl SparseBinaryVector {
    /// Builds from arbitrary indices; sorts and deduplicates.
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { present: indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Number of present features.
    pub fn count_present(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.present.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.present.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.present
    }

    /// Size of the intersection with `other`, by sorted merge.
    pub fn intersection_size(&self, other: &Self) -> usize {
        let (a, b) = (&self.present, &other.present);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Hamming distance: features present in exactly one of the two.
    pub fn hamming(&self, other: &Self) -> usize {
        self.present.len() + other.present.len() - 2 * self.intersection_size(other)
    }
}

/// One disambiguation example: which stems occurred near the target word,
/// and which sense was annotated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub features: SparseBinaryVector,
    pub label: SenseId,
}

/// Bijection between word stems and dense feature indices. Corpus-built
/// spaces assign indices lexicographically by stem.
#[derive(Debug, Default)]
pub struct FeatureSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl FeatureSpace {
    /// Builds from a sorted set of stems; index order is lexicographic.
    pub fn from_stems(stems: BTreeSet<String>) -> Self {
        Self::from_names(stems.into_iter().collect())
    }

    /// Builds from names in the given order (synthetic spaces pick their
    /// own order). Names must be unique.
    pub fn from_names(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect::<HashMap<_, _>>();
        debug_assert_eq!(index.len(), names.len(), "duplicate feature name");
        Self { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, stem: &str) -> Option<usize> {
        self.index.get(stem).copied()
    }
}

/// Labeled examples plus the shared feature space and sense inventory.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub space: Arc<FeatureSpace>,
    pub senses: Arc<Vec<SenseLabel>>,
    pub examples: Vec<LabeledExample>,
    /// Non-fatal notes attached at construction (e.g. a degenerate
    /// synthetic concept). Carried through serialization.
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn new(
        space: Arc<FeatureSpace>,
        senses: Arc<Vec<SenseLabel>>,
        examples: Vec<LabeledExample>,
    ) -> Self {
        debug_assert!(examples
            .iter()
            .all(|e| e.label < senses.len() && e.features.iter().all(|i| i < space.len())));
        Self {
            space,
            senses,
            examples,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn sense_count(&self) -> usize {
        self.senses.len()
    }

    pub fn feature_count(&self) -> usize {
        self.space.len()
    }

    /// Examples per sense, indexed by sense id.
    pub fn sense_histogram(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.senses.len()];
        for ex in &self.examples {
            counts[ex.label] += 1;
        }
        counts
    }

    /// Most frequent sense; ties broken toward the lowest id.
    pub fn majority_sense(&self) -> SenseId {
        let counts = self.sense_histogram();
        let mut best = 0;
        for (s, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = s;
            }
        }
        best
    }

    /// New dataset holding clones of the examples at `positions`, sharing
    /// this dataset's space and senses.
    pub fn select(&self, positions: &[usize]) -> Dataset {
        let examples = positions
            .iter()
            .map(|&p| self.examples[p].clone())
            .collect();
        Dataset {
            space: Arc::clone(&self.space),
            senses: Arc::clone(&self.senses),
            examples,
            warnings: self.warnings.clone(),
        }
    }

    /// First `n` examples, sharing space and senses.
    pub fn head(&self, n: usize) -> Dataset {
        let positions: Vec<usize> = (0..n.min(self.len())).collect();
        self.select(&positions)
    }

    /// FNV-1a over the serialized examples (labels and indices only, not
    /// the stem table). Distinguishes example sets within one space.
    pub fn content_hash(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut eat = |v: u64| {
            for byte in v.to_le_bytes() {
                h = (h ^ u64::from(byte)).wrapping_mul(PRIME);
            }
        };
        eat(self.examples.len() as u64);
        for ex in &self.examples {
            eat(ex.label as u64);
            eat(ex.features.count_present() as u64);
            for i in ex.features.iter() {
                eat(i as u64);
            }
        }
        h
    }
}

/// One line of the raw corpus: annotated sense plus the two context
/// sentences (previous may be empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub sense: String,
    pub previous: String,
    pub current: String,
}

/// Collects every distinct non-stopword stem in the corpus (both context
/// sentences of every record) into a lexicographically indexed space.
pub fn build_feature_space(
    records: &[CorpusRecord],
    stopwords: &Stopwords,
) -> Result<FeatureSpace> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut stems = BTreeSet::new();
    for rec in records {
        for sentence in [&rec.previous, &rec.current] {
            stems.extend(stem_tokens(sentence, stopwords));
        }
    }
    if stems.is_empty() {
        return Err(Error::NoFeatures);
    }
    Ok(FeatureSpace::from_stems(stems))
}

/// Maps the stems of both context sentences into `space`. Stems the space
/// does not know (stopwords, unseen words) are dropped; duplicates across
/// the two sentences collapse to one presence bit.
pub fn vectorize(
    previous_tokens: &[String],
    current_tokens: &[String],
    space: &FeatureSpace,
) -> SparseBinaryVector {
    let indices = previous_tokens
        .iter()
        .chain(current_tokens.iter())
        .filter_map(|t| space.index_of(&stem(t)))
        .collect();
    SparseBinaryVector::from_indices(indices)
}

/// Full preprocessing pipeline: build the space from every record, assign
/// sense ids in order of first appearance, vectorize each record.
pub fn build_dataset(records: &[CorpusRecord], stopwords: &Stopwords) -> Result<Dataset> {
    let space = Arc::new(build_feature_space(records, stopwords)?);

    let mut senses: Vec<SenseLabel> = Vec::new();
    let mut sense_ids: HashMap<&str, SenseId> = HashMap::new();
    for rec in records {
        if !sense_ids.contains_key(rec.sense.as_str()) {
            let id = senses.len();
            sense_ids.insert(&rec.sense, id);
            senses.push(SenseLabel {
                id,
                name: rec.sense.clone(),
            });
        }
    }

    let examples = records
        .iter()
        .map(|rec| LabeledExample {
            features: vectorize(&tokenize(&rec.previous), &tokenize(&rec.current), &space),
            label: sense_ids[rec.sense.as_str()],
        })
        .collect();

    Ok(Dataset::new(space, Arc::new(senses), examples))
}

/// Equalizes sense frequencies: keeps `min` examples of every sense
/// (uniform, without replacement), then shuffles the output order. Both
/// draws come from `rng`.
pub fn balance_senses(data: &Dataset, rng: &mut Stream) -> Result<Dataset> {
    let counts = data.sense_histogram();
    if counts.contains(&0) {
        return Err(Error::EmptyDataset);
    }
    let per_sense = *counts.iter().min().expect("nonempty histogram");

    let mut kept: Vec<usize> = Vec::with_capacity(per_sense * counts.len());
    for sense in 0..data.sense_count() {
        let mut positions: Vec<usize> = data
            .examples
            .iter()
            .enumerate()
            .filter(|(_, ex)| ex.label == sense)
            .map(|(p, _)| p)
            .collect();
        positions.shuffle(rng);
        kept.extend(&positions[..per_sense]);
    }
    kept.shuffle(rng);
    Ok(data.select(&kept))
}

/// Shuffles the example order with `rng` and cuts after `n_train`.
/// Both sides must be nonempty.
pub fn split(data: &Dataset, n_train: usize, rng: &mut Stream) -> Result<(Dataset, Dataset)> {
    if n_train == 0 || n_train >= data.len() {
        return Err(Error::SplitOutOfRange {
            requested: n_train,
            available: data.len(),
        });
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(rng);
    let train = data.select(&order[..n_train]);
    let test = data.select(&order[n_train..]);
    Ok((train, test))
}
