//! Experiment engine: learning curves over nested training subsets,
//! repeated random trials, per-cell CPU timing, model-size accounting,
//! and a pairwise significance matrix.
//!
//! Per trial `t`, the stream `(seed, [TRIAL, t])` shuffles the data into
//! a training pool plus held-out test set. Within a trial, smaller
//! training sets are prefixes of larger ones, so curve noise reflects
//! data quantity rather than resampling. Every classifier in a
//! `(trial, size)` cell sees identical train and test data; the run
//! asserts this by hashing. Cells execute in parallel but results are
//! collected in a fixed order, so reports depend only on the seed.

pub mod report;

use rayon::prelude::*;

use crate::classifier::{self, LearnerKind, LearnerParams};
use crate::dataset::{self, Dataset};
use crate::rng::{self, tag};
use crate::stats::{self, SignificanceResult};
use crate::timing::CpuTimer;
use crate::{Error, Result};

#[derive(Debug, Clone, serde::Serialize)]
pub struct ExperimentConfig {
    pub classifiers: Vec<LearnerKind>,
    /// Strictly ascending training-set sizes.
    pub sizes: Vec<usize>,
    pub trials: usize,
    /// Training-pool size; the rest of the dataset is the test set.
    pub pool: usize,
    pub seed: u64,
    /// Significance level for the t-test matrix.
    pub alpha: f64,
    pub params: LearnerParams,
}

pub const DEFAULT_POOL: usize = 1200;
pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_ALPHA: f64 = 0.05;

/// The standard curve ticks, each capped at the pool size.
pub fn default_sizes(pool: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = [25, 50, 100, 200, 400, 600, 1200]
        .into_iter()
        .map(|s| s.min(pool))
        .collect();
    sizes.dedup();
    sizes
}

impl ExperimentConfig {
    pub fn new(classifiers: Vec<LearnerKind>, seed: u64) -> Self {
        Self {
            classifiers,
            sizes: default_sizes(DEFAULT_POOL),
            trials: DEFAULT_TRIALS,
            pool: DEFAULT_POOL,
            seed,
            alpha: DEFAULT_ALPHA,
            params: LearnerParams::default(),
        }
    }

    pub fn validate(&self, data_len: usize) -> Result<()> {
        let bad = |d: String| Err(Error::BadConfig(d));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sizes.is_empty() {
            return bad("at least one training size required".into());
        }
        if !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return bad("training sizes must be strictly ascending".into());
        }
        let max = *self.sizes.last().unwrap();
        if max > self.pool {
            return bad(format!(
                "size {max} exceeds the training pool ({})",
                self.pool
            ));
        }
        if self.pool >= data_len {
            return bad(format!(
                "pool {} leaves no test examples (dataset has {data_len})",
                self.pool
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if self.params.alpha <= 0.0 {
            return bad("smoothing alpha must be positive".into());
        }
        if self.params.eta <= 0.0 {
            return bad("learning rate must be positive".into());
        }
        if self.params.epochs == 0 || self.params.k == 0 {
            return bad("epochs and k must be at least 1".into());
        }
        Ok(())
    }
}

/// One `(classifier, size, trial)` measurement. `failed` carries the
/// training error when the cell did not complete; its numeric fields
/// are then meaningless and reported as empty in CSV.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TrialRecord {
    pub classifier: LearnerKind,
    pub train_size: usize,
    pub trial: usize,
    pub accuracy: f64,
    pub train_cpu_ms: f64,
    pub test_cpu_ms: f64,
    pub model_size: usize,
    pub failed: Option<String>,
}

/// Dataset provenance persisted alongside results.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DatasetSummary {
    pub content_hash: String,
    pub examples: usize,
    pub features: usize,
    pub senses: usize,
    pub warnings: Vec<String>,
}

impl DatasetSummary {
    fn of(data: &Dataset) -> Self {
        Self {
            content_hash: format!("{:016x}", data.content_hash()),
            examples: data.len(),
            features: data.feature_count(),
            senses: data.sense_count(),
            warnings: data.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurveReport {
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    /// Ordered by (classifier position in config, size, trial).
    pub records: Vec<TrialRecord>,
}

/// Aggregates of the successful trials in one (classifier, size) cell.
#[derive(Debug, Clone, Copy)]
pub struct CellMean {
    pub trials: usize,
    pub accuracy: f64,
    /// Half-width of the 95% confidence interval, when 2+ trials.
    pub ci95: Option<f64>,
    pub train_cpu_ms: f64,
    pub test_cpu_ms: f64,
    pub model_size: f64,
}

impl CurveReport {
    fn cell(&self, kind: LearnerKind, size: usize) -> impl Iterator<Item = &TrialRecord> {
        self.records
            .iter()
            .filter(move |r| r.classifier == kind && r.train_size == size)
    }

    /// Per-trial accuracies in trial order; errors if any trial of the
    /// cell is missing or failed.
    pub fn accuracies(&self, kind: LearnerKind, size: usize) -> Result<Vec<f64>> {
        let mut by_trial = vec![None; self.config.trials];
        for r in self.cell(kind, size) {
            if r.failed.is_none() && r.trial < by_trial.len() {
                by_trial[r.trial] = Some(r.accuracy);
            }
        }
        by_trial
            .into_iter()
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::MissingCell {
                classifier: kind.id().into(),
                size,
            })
    }

    /// Mean over successful trials; `None` when every trial failed.
    pub fn cell_mean(&self, kind: LearnerKind, size: usize) -> Option<CellMean> {
        let ok: Vec<&TrialRecord> = self
            .cell(kind, size)
            .filter(|r| r.failed.is_none())
            .collect();
        if ok.is_empty() {
            return None;
        }
        let accs: Vec<f64> = ok.iter().map(|r| r.accuracy).collect();
        let (accuracy, ci95) = stats::mean_and_interval(&accs).expect("nonempty");
        let n = ok.len() as f64;
        Some(CellMean {
            trials: ok.len(),
            accuracy,
            ci95,
            train_cpu_ms: ok.iter().map(|r| r.train_cpu_ms).sum::<f64>() / n,
            test_cpu_ms: ok.iter().map(|r| r.test_cpu_ms).sum::<f64>() / n,
            model_size: ok.iter().map(|r| r.model_size as f64).sum::<f64>() / n,
        })
    }

    pub fn failures(&self) -> Vec<&TrialRecord> {
        self.records.iter().filter(|r| r.failed.is_some()).collect()
    }
}

/// Runs the full grid. Training errors mark their record as failed and
/// the run continues; the caller decides what failures mean for exit
/// status.
pub fn run_experiment(config: &ExperimentConfig, data: &Dataset) -> Result<CurveReport> {
    config.validate(data.len())?;

    // Per-trial pools and test sets, derived serially so the layout is
    // independent of scheduling.
    struct Trial {
        trains: Vec<Dataset>,
        test: Dataset,
        train_hashes: Vec<u64>,
    }
    let trials: Vec<Trial> = (0..config.trials)
        .map(|t| {
            let mut stream = rng::stream(config.seed, &[tag::TRIAL, t as u64]);
            let (pool, test) = dataset::split(data, config.pool, &mut stream)?;
            let trains: Vec<Dataset> = config.sizes.iter().map(|&s| pool.head(s)).collect();
            let train_hashes = trains.iter().map(Dataset::content_hash).collect();
            Ok(Trial {
                trains,
                test,
                train_hashes,
            })
        })
        .collect::<Result<_>>()?;

    // Job order fixes the record order: classifier, then size, then trial.
    let mut jobs =
        Vec::with_capacity(config.classifiers.len() * config.sizes.len() * config.trials);
    for &kind in &config.classifiers {
        for (si, &size) in config.sizes.iter().enumerate() {
            for t in 0..config.trials {
                jobs.push((kind, si, size, t));
            }
        }
    }

    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(kind, si, size, t)| {
            let trial = &trials[t];
            let train_set = &trial.trains[si];
            // Identical-cell invariant: every classifier of this
            // (trial, size) cell must train on the same data.
            assert_eq!(
                train_set.content_hash(),
                trial.train_hashes[si],
                "cell data diverged for {kind} at size {size}, trial {t}"
            );
            let mut stream = rng::stream(
                config.seed,
                &[tag::LEARNER, t as u64, size as u64, kind.stream_tag()],
            );
            let timer = CpuTimer::start();
            match classifier::train(kind, train_set, &config.params, &mut stream) {
                Ok(model) => {
                    let train_cpu_ms = timer.elapsed_ms();
                    let timer = CpuTimer::start();
                    let accuracy = classifier::accuracy(&model, &trial.test);
                    TrialRecord {
                        classifier: kind,
                        train_size: size,
                        trial: t,
                        accuracy,
                        train_cpu_ms,
                        test_cpu_ms: timer.elapsed_ms(),
                        model_size: model.size(),
                        failed: None,
                    }
                }
                Err(e) => TrialRecord {
                    classifier: kind,
                    train_size: size,
                    trial: t,
                    accuracy: 0.0,
                    train_cpu_ms: timer.elapsed_ms(),
                    test_cpu_ms: 0.0,
                    model_size: 0,
                    failed: Some(e.to_string()),
                },
            }
        })
        .collect();

    Ok(CurveReport {
        config: config.clone(),
        dataset: DatasetSummary::of(data),
        records,
    })
}

/// One pairwise comparison at a fixed training size.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SignificancePair {
    pub train_size: usize,
    pub a: LearnerKind,
    pub b: LearnerKind,
    /// Positive mean difference favors `a`.
    pub mean_diff: f64,
    #[serde(flatten)]
    pub result: SignificanceResult,
}

/// Pairwise paired t-tests over per-trial accuracies at `size`, for all
/// classifier pairs including the diagonal (which comes out t=0, p=1).
/// Needs at least two trials and a complete cell for every classifier.
pub fn significance_matrix(
    report: &CurveReport,
    size: usize,
    alpha: f64,
) -> Result<Vec<SignificancePair>> {
    if report.config.trials < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: report.config.trials,
        });
    }
    if !report.config.sizes.contains(&size) {
        return Err(Error::BadConfig(format!(
            "size {size} was not part of the run"
        )));
    }
    let classifiers = &report.config.classifiers;
    let accs: Vec<Vec<f64>> = classifiers
        .iter()
        .map(|&k| report.accuracies(k, size))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..classifiers.len() {
        for j in i..classifiers.len() {
            let result = stats::paired_t_test(&accs[i], &accs[j], alpha)?;
            let n = accs[i].len() as f64;
            let mean_diff = accs[i]
                .iter()
                .zip(&accs[j])
                .map(|(a, b)| a - b)
                .sum::<f64>()
                / n;
            pairs.push(SignificancePair {
                train_size: size,
                a: classifiers[i],
                b: classifiers[j],
                mean_diff,
                result,
            });
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            classifiers: vec![LearnerKind::NaiveBayes, LearnerKind::Knn],
            sizes: vec![30, 80],
            trials: 2,
            pool: 100,
            seed: 11,
            alpha: 0.05,
            params: LearnerParams::default(),
        }
    }

    fn small_data() -> Dataset {
        let spec = synth::random_m_of_n(2, 5, 12, 160, 0.1, 77).unwrap();
        synth::generate(&spec).unwrap()
    }

    #[test]
    fn record_cardinality_and_order() {
        let report = run_experiment(&small_config(), &small_data()).unwrap();
        assert_eq!(report.records.len(), 2 * 2 * 2);
        let key: Vec<(LearnerKind, usize, usize)> = report
            .records
            .iter()
            .map(|r| (r.classifier, r.train_size, r.trial))
            .collect();
        let mut sorted = key.clone();
        // Config order: naive_bayes before knn, sizes ascending, trials ascending.
        sorted.sort_by_key(|&(k, s, t)| {
            (
                small_config().classifiers.iter().position(|&c| c == k),
                s,
                t,
            )
        });
        assert_eq!(key, sorted);
        assert!(report.failures().is_empty());
    }

    #[test]
    fn nested_subsets_within_a_trial() {
        let config = small_config();
        let data = small_data();
        // Re-derive the trial split exactly as the harness does; the
        // smaller training set must be a prefix of the larger one.
        let mut stream = rng::stream(config.seed, &[tag::TRIAL, 1]);
        let (pool, test) = dataset::split(&data, config.pool, &mut stream).unwrap();
        let small = pool.head(30);
        let large = pool.head(80);
        assert_eq!(small.examples[..], large.examples[..30]);
        assert_eq!(pool.len() + test.len(), data.len());
    }

    #[test]
    fn same_seed_reproduces_everything_but_timing() {
        let config = small_config();
        let data = small_data();
        let a = run_experiment(&config, &data).unwrap();
        let b = run_experiment(&config, &data).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.classifier, y.classifier);
            assert_eq!(x.train_size, y.train_size);
            assert_eq!(x.trial, y.trial);
            assert_eq!(x.accuracy, y.accuracy);
            assert_eq!(x.model_size, y.model_size);
            assert_eq!(x.failed, y.failed);
            assert!(x.train_cpu_ms >= 0.0 && y.train_cpu_ms >= 0.0);
        }
    }

    #[test]
    fn cell_means_match_the_records() {
        let report = run_experiment(&small_config(), &small_data()).unwrap();
        for kind in [LearnerKind::NaiveBayes, LearnerKind::Knn] {
            for &size in &[30, 80] {
                let mean = report.cell_mean(kind, size).unwrap();
                let manual: Vec<f64> = report
                    .records
                    .iter()
                    .filter(|r| r.classifier == kind && r.train_size == size)
                    .map(|r| r.accuracy)
                    .collect();
                let expect = manual.iter().sum::<f64>() / manual.len() as f64;
                assert!((mean.accuracy - expect).abs() < 1e-12);
                assert_eq!(mean.trials, 2);
            }
        }
    }

    #[test]
    fn significance_diagonal_is_null_and_single_trial_errors() {
        let mut config = small_config();
        config.trials = 3;
        let report = run_experiment(&config, &small_data()).unwrap();
        let pairs = significance_matrix(&report, 80, 0.05).unwrap();
        // 2 classifiers: (nb,nb), (nb,knn), (knn,knn).
        assert_eq!(pairs.len(), 3);
        let diag = &pairs[0];
        assert_eq!(diag.a, diag.b);
        assert_eq!(diag.result.t, 0.0);
        assert_eq!(diag.result.p, 1.0);
        assert!(!diag.result.significant);

        config.trials = 1;
        let single = run_experiment(&config, &small_data()).unwrap();
        assert!(matches!(
            significance_matrix(&single, 80, 0.05),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn unknown_size_and_missing_cells_error() {
        let report = run_experiment(&small_config(), &small_data()).unwrap();
        assert!(matches!(
            significance_matrix(&report, 999, 0.05),
            Err(Error::BadConfig(_))
        ));
        // Drop one cell and the matrix must name the gap.
        let mut broken = report.clone();
        broken
            .records
            .retain(|r| !(r.classifier == LearnerKind::Knn && r.train_size == 80 && r.trial == 1));
        match significance_matrix(&broken, 80, 0.05) {
            Err(Error::MissingCell { classifier, size }) => {
                assert_eq!(classifier, "knn");
                assert_eq!(size, 80);
            }
            other => panic!("expected MissingCell, got {other:?}"),
        }
    }

    #[test]
    fn config_validation_rejects_bad_shapes() {
        let data = small_data();
        let ok = small_config();
        assert!(ok.validate(data.len()).is_ok());
        for breakage in [
            |c: &mut ExperimentConfig| c.trials = 0,
            |c: &mut ExperimentConfig| c.sizes = vec![],
            |c: &mut ExperimentConfig| c.sizes = vec![50, 50],
            |c: &mut ExperimentConfig| c.sizes = vec![80, 30],
            |c: &mut ExperimentConfig| c.sizes = vec![30, 150],
            |c: &mut ExperimentConfig| c.pool = 160,
            |c: &mut ExperimentConfig| c.alpha = 0.0,
            |c: &mut ExperimentConfig| c.params.k = 0,
        ] {
            let mut config = small_config();
            breakage(&mut config);
            assert!(config.validate(data.len()).is_err(), "accepted {config:?}");
        }
    }

    #[test]
    fn failed_cells_are_recorded_and_the_run_continues() {
        // k exceeds the smallest training size, so knn fails there but
        // everything else still runs.
        let mut config = small_config();
        config.sizes = vec![2, 30];
        config.params.k = 3;
        let report = run_experiment(&config, &small_data()).unwrap();
        assert_eq!(report.records.len(), 2 * 2 * 2);
        let failed = report.failures();
        assert_eq!(failed.len(), 2, "knn should fail in both trials at size 2");
        assert!(failed
            .iter()
            .all(|r| r.classifier == LearnerKind::Knn && r.train_size == 2));
        assert!(failed[0].failed.as_deref().unwrap().contains("k = 3"));
        // The failed cell poisons the significance matrix at that size only.
        assert!(significance_matrix(&report, 2, 0.05).is_err());
        assert!(significance_matrix(&report, 30, 0.05).is_ok());
    }

    #[test]
    fn default_sizes_cap_at_the_pool() {
        assert_eq!(default_sizes(1200), vec![25, 50, 100, 200, 400, 600, 1200]);
        assert_eq!(default_sizes(300), vec![25, 50, 100, 200, 300]);
        assert_eq!(default_sizes(25), vec![25]);
        assert_eq!(default_sizes(10), vec![10]);
    }
}
