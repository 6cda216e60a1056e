//! Report persistence and rendering for a finished run: three CSVs, a
//! JSON bundle, and the terminal tables used by the `report` command.
//!
//! Emission is a pure function of the in-memory report, so re-emitting
//! writes identical bytes. Failed cells keep their identity columns but
//! leave the measurement columns empty.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::classifier::LearnerKind;
use crate::harness::{
    significance_matrix, CurveReport, DatasetSummary, ExperimentConfig, SignificancePair,
    TrialRecord,
};
use crate::{Error, Result};

pub const RECORDS_FILE: &str = "records.csv";
pub const CURVE_FILE: &str = "curve.csv";
pub const SIGNIFICANCE_FILE: &str = "significance.csv";
pub const RUN_FILE: &str = "run.json";

pub const RECORDS_HEADER: &str =
    "classifier,train_size,trial,accuracy,train_cpu_ms,test_cpu_ms,model_size";
pub const CURVE_HEADER: &str = "classifier,train_size,trials,mean_accuracy,ci95_half_width,\
mean_train_cpu_ms,mean_test_cpu_ms,mean_model_size";
pub const SIGNIFICANCE_HEADER: &str =
    "train_size,classifier_a,classifier_b,mean_diff,t,df,p,significant";

pub fn records_csv(report: &CurveReport) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in &report.records {
        if r.failed.is_some() {
            writeln!(out, "{},{},{},,,,", r.classifier, r.train_size, r.trial).unwrap();
        } else {
            writeln!(
                out,
                "{},{},{},{},{:.3},{:.3},{}",
                r.classifier,
                r.train_size,
                r.trial,
                r.accuracy,
                r.train_cpu_ms,
                r.test_cpu_ms,
                r.model_size
            )
            .unwrap();
        }
    }
    out
}

pub fn curve_csv(report: &CurveReport) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for &kind in &report.config.classifiers {
        for &size in &report.config.sizes {
            match report.cell_mean(kind, size) {
                Some(m) => {
                    let ci = m.ci95.map(|w| w.to_string()).unwrap_or_default();
                    writeln!(
                        out,
                        "{},{},{},{},{ci},{:.3},{:.3},{}",
                        kind,
                        size,
                        m.trials,
                        m.accuracy,
                        m.train_cpu_ms,
                        m.test_cpu_ms,
                        m.model_size
                    )
                    .unwrap();
                }
                None => writeln!(out, "{kind},{size},0,,,,,").unwrap(),
            }
        }
    }
    out
}

/// A size whose significance matrix could not be computed, and why.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SkippedSignificance {
    pub train_size: usize,
    pub reason: String,
}

/// Significance rows for every size where the matrix is computable;
/// incomputable sizes are skipped and reported to the caller.
pub fn significance_csv(report: &CurveReport) -> (String, Vec<SkippedSignificance>) {
    let mut out = String::from(SIGNIFICANCE_HEADER);
    out.push('\n');
    let mut skipped = Vec::new();
    for &size in &report.config.sizes {
        match significance_matrix(report, size, report.config.alpha) {
            Ok(pairs) => {
                for p in pairs {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        p.train_size,
                        p.a,
                        p.b,
                        p.mean_diff,
                        p.result.t,
                        p.result.df,
                        p.result.p,
                        p.result.significant
                    )
                    .unwrap();
                }
            }
            Err(e) => skipped.push(SkippedSignificance {
                train_size: size,
                reason: e.to_string(),
            }),
        }
    }
    (out, skipped)
}

#[derive(serde::Serialize)]
struct Environment {
    package_version: &'static str,
    os: &'static str,
    arch: &'static str,
    threads: usize,
}

#[derive(serde::Serialize)]
struct FailureNote<'a> {
    classifier: LearnerKind,
    train_size: usize,
    trial: usize,
    error: &'a str,
}

#[derive(serde::Serialize)]
struct RunBundle<'a> {
    config: &'a ExperimentConfig,
    dataset: &'a DatasetSummary,
    environment: Environment,
    failures: Vec<FailureNote<'a>>,
    significance_skipped: &'a [SkippedSignificance],
}

pub fn run_json(report: &CurveReport, skipped: &[SkippedSignificance]) -> String {
    let bundle = RunBundle {
        config: &report.config,
        dataset: &report.dataset,
        environment: Environment {
            package_version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads: rayon::current_num_threads(),
        },
        failures: report
            .records
            .iter()
            .filter_map(|r| {
                r.failed.as_deref().map(|error| FailureNote {
                    classifier: r.classifier,
                    train_size: r.train_size,
                    trial: r.trial,
                    error,
                })
            })
            .collect(),
        significance_skipped: skipped,
    };
    let mut text = serde_json::to_string_pretty(&bundle).expect("report serializes");
    text.push('\n');
    text
}

/// Writes records.csv, curve.csv, significance.csv and run.json into
/// `dir`, creating it if needed.
pub fn emit_reports(report: &CurveReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(RECORDS_FILE), records_csv(report))?;
    fs::write(dir.join(CURVE_FILE), curve_csv(report))?;
    let (sig, skipped) = significance_csv(report);
    fs::write(dir.join(SIGNIFICANCE_FILE), sig)?;
    fs::write(dir.join(RUN_FILE), run_json(report, &skipped))?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &'static str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        what,
        line,
        detail: format!("cannot parse '{field}'"),
    })
}

/// Reads a records CSV back into trial records. Failed cells come back
/// with a placeholder message; the original error lives in run.json.
pub fn read_records_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == RECORDS_HEADER => {}
        other => {
            return Err(Error::Parse {
                what: "records csv",
                line: 1,
                detail: format!(
                    "expected header '{RECORDS_HEADER}', found '{}'",
                    other.map(|(_, h)| h).unwrap_or_default()
                ),
            })
        }
    }
    let mut records = Vec::new();
    for (i, row) in lines {
        let line = i + 1;
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                what: "records csv",
                line,
                detail: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let classifier: LearnerKind = fields[0].parse().map_err(|e| Error::Parse {
            what: "records csv",
            line,
            detail: format!("{e}"),
        })?;
        let train_size = parse_field(fields[1], line, "records csv")?;
        let trial = parse_field(fields[2], line, "records csv")?;
        let failed = fields[3].is_empty();
        records.push(TrialRecord {
            classifier,
            train_size,
            trial,
            accuracy: if failed {
                0.0
            } else {
                parse_field(fields[3], line, "records csv")?
            },
            train_cpu_ms: if failed {
                0.0
            } else {
                parse_field(fields[4], line, "records csv")?
            },
            test_cpu_ms: if failed {
                0.0
            } else {
                parse_field(fields[5], line, "records csv")?
            },
            model_size: if failed {
                0
            } else {
                parse_field(fields[6], line, "records csv")?
            },
            failed: failed.then(|| "marked failed in records.csv".to_string()),
        });
    }
    Ok(records)
}

/// Rebuilds enough of a report from bare records to aggregate and test
/// significance. Config fields that records.csv does not carry (seed,
/// pool, hyperparameters) get placeholders and must not be trusted.
pub fn rebuild_report(records: Vec<TrialRecord>, alpha: f64) -> CurveReport {
    let mut classifiers: Vec<LearnerKind> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut trials = 0;
    for r in &records {
        if !classifiers.contains(&r.classifier) {
            classifiers.push(r.classifier);
        }
        if !sizes.contains(&r.train_size) {
            sizes.push(r.train_size);
        }
        trials = trials.max(r.trial + 1);
    }
    sizes.sort_unstable();
    let pool = sizes.last().copied().unwrap_or(0);
    CurveReport {
        config: ExperimentConfig {
            classifiers,
            sizes,
            trials,
            pool,
            seed: 0,
            alpha,
            params: crate::classifier::LearnerParams::default(),
        },
        dataset: DatasetSummary {
            content_hash: "unknown".into(),
            examples: 0,
            features: 0,
            senses: 0,
            warnings: Vec::new(),
        },
        records,
    }
}

/// Mean-accuracy table, classifiers down, sizes across.
pub fn render_curve(report: &CurveReport) -> String {
    let name_width = report
        .config
        .classifiers
        .iter()
        .map(|k| k.id().len())
        .max()
        .unwrap_or(10)
        .max("classifier".len());
    let mut out = format!("{:<name_width$}", "classifier");
    for &size in &report.config.sizes {
        write!(out, " {size:>8}").unwrap();
    }
    out.push('\n');
    for &kind in &report.config.classifiers {
        write!(out, "{:<name_width$}", kind.id()).unwrap();
        for &size in &report.config.sizes {
            match report.cell_mean(kind, size) {
                Some(m) => write!(out, " {:>8.4}", m.accuracy).unwrap(),
                None => write!(out, " {:>8}", "-").unwrap(),
            }
        }
        out.push('\n');
    }
    let failures = report.failures();
    if !failures.is_empty() {
        writeln!(out, "\n{} failed cell(s):", failures.len()).unwrap();
        for r in failures {
            writeln!(
                out,
                "  {} size {} trial {}: {}",
                r.classifier,
                r.train_size,
                r.trial,
                r.failed.as_deref().unwrap_or("unknown")
            )
            .unwrap();
        }
    }
    out
}

fn format_p(p: f64) -> String {
    if p < 1e-4 {
        format!("{p:.1e}")
    } else {
        format!("{p:.4}")
    }
}

/// Off-diagonal significance lines at one size; `*` marks pairs
/// significant at the report's alpha.
pub fn render_significance(pairs: &[SignificancePair], alpha: f64) -> String {
    let mut out = String::new();
    let Some(first) = pairs.first() else {
        return out;
    };
    writeln!(
        out,
        "paired t-tests at size {} (alpha {alpha}, df {}):",
        first.train_size, first.result.df
    )
    .unwrap();
    for p in pairs {
        if p.a == p.b {
            continue;
        }
        writeln!(
            out,
            "  {:<13} vs {:<13} diff {:+.4}  t {:>8.3}  p {:>8}{}",
            p.a.id(),
            p.b.id(),
            p.mean_diff,
            p.result.t,
            format_p(p.result.p),
            if p.result.significant { "  *" } else { "" }
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::LearnerParams;
    use crate::harness::run_experiment;
    use crate::synth;

    fn sample_report() -> CurveReport {
        let spec = synth::random_m_of_n(2, 5, 12, 160, 0.1, 77).unwrap();
        let data = synth::generate(&spec).unwrap();
        let config = ExperimentConfig {
            classifiers: vec![LearnerKind::NaiveBayes, LearnerKind::Knn],
            sizes: vec![30, 80],
            trials: 3,
            pool: 100,
            seed: 11,
            alpha: 0.05,
            params: LearnerParams::default(),
        };
        run_experiment(&config, &data).unwrap()
    }

    #[test]
    fn records_csv_round_trips() {
        let report = sample_report();
        let text = records_csv(&report);
        assert!(text.starts_with(RECORDS_HEADER));
        assert_eq!(text.lines().count(), 1 + report.records.len());
        let back = read_records_csv(&text).unwrap();
        assert_eq!(back.len(), report.records.len());
        for (a, b) in report.records.iter().zip(&back) {
            assert_eq!(a.classifier, b.classifier);
            assert_eq!(a.train_size, b.train_size);
            assert_eq!(a.trial, b.trial);
            // Accuracy uses shortest round-trip formatting.
            assert_eq!(a.accuracy, b.accuracy);
            assert_eq!(a.model_size, b.model_size);
        }
    }

    #[test]
    fn failed_rows_have_empty_measurements() {
        let mut report = sample_report();
        report.records[0].failed = Some("boom".into());
        let text = records_csv(&report);
        let row = text.lines().nth(1).unwrap();
        assert!(row.ends_with(",,,,"), "row was '{row}'");
        let back = read_records_csv(&text).unwrap();
        assert!(back[0].failed.is_some());
        assert!(back[1].failed.is_none());
    }

    #[test]
    fn curve_rows_cover_the_grid() {
        let report = sample_report();
        let text = curve_csv(&report);
        assert!(text.starts_with(CURVE_HEADER));
        assert_eq!(text.lines().count(), 1 + 2 * 2);
    }

    #[test]
    fn significance_rows_cover_every_computable_size() {
        let report = sample_report();
        let (text, skipped) = significance_csv(&report);
        assert!(skipped.is_empty());
        // 2 sizes x 3 pairs (including diagonals).
        assert_eq!(text.lines().count(), 1 + 2 * 3);
    }

    #[test]
    fn empty_classifier_set_gives_header_only_csvs() {
        let spec = synth::random_m_of_n(2, 5, 12, 160, 0.1, 77).unwrap();
        let data = synth::generate(&spec).unwrap();
        let config = ExperimentConfig {
            classifiers: vec![],
            sizes: vec![30],
            trials: 2,
            pool: 100,
            seed: 11,
            alpha: 0.05,
            params: LearnerParams::default(),
        };
        let report = run_experiment(&config, &data).unwrap();
        assert_eq!(records_csv(&report), format!("{RECORDS_HEADER}\n"));
        assert_eq!(curve_csv(&report), format!("{CURVE_HEADER}\n"));
        let (sig, skipped) = significance_csv(&report);
        assert_eq!(sig, format!("{SIGNIFICANCE_HEADER}\n"));
        assert!(skipped.is_empty());
    }

    #[test]
    fn emit_is_reproducible_byte_for_byte() {
        let report = sample_report();
        let dir = tempfile::tempdir().unwrap();
        emit_reports(&report, dir.path()).unwrap();
        let first: Vec<String> = [RECORDS_FILE, CURVE_FILE, SIGNIFICANCE_FILE, RUN_FILE]
            .iter()
            .map(|f| fs::read_to_string(dir.path().join(f)).unwrap())
            .collect();
        emit_reports(&report, dir.path()).unwrap();
        let second: Vec<String> = [RECORDS_FILE, CURVE_FILE, SIGNIFICANCE_FILE, RUN_FILE]
            .iter()
            .map(|f| fs::read_to_string(dir.path().join(f)).unwrap())
            .collect();
        assert_eq!(first, second);
        assert!(first[3].contains("\"content_hash\""));
    }

    #[test]
    fn malformed_records_are_rejected_with_line_numbers() {
        assert!(read_records_csv("nonsense\n").is_err());
        let missing_field = format!("{RECORDS_HEADER}\nnaive_bayes,30,0,0.5,1.0,1.0\n");
        assert!(read_records_csv(&missing_field).is_err());
        let bad_number = format!("{RECORDS_HEADER}\nnaive_bayes,thirty,0,0.5,1.0,1.0,12\n");
        match read_records_csv(&bad_number) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad_classifier = format!("{RECORDS_HEADER}\nid3,30,0,0.5,1.0,1.0,12\n");
        assert!(read_records_csv(&bad_classifier).is_err());
    }

    #[test]
    fn rebuild_recovers_the_grid_shape() {
        let report = sample_report();
        let text = records_csv(&report);
        let rebuilt = rebuild_report(read_records_csv(&text).unwrap(), 0.05);
        assert_eq!(rebuilt.config.classifiers, report.config.classifiers);
        assert_eq!(rebuilt.config.sizes, report.config.sizes);
        assert_eq!(rebuilt.config.trials, report.config.trials);
        // Aggregation after rebuild matches the original.
        let a = report.cell_mean(LearnerKind::Knn, 80).unwrap();
        let b = rebuilt.cell_mean(LearnerKind::Knn, 80).unwrap();
        assert!((a.accuracy - b.accuracy).abs() < 1e-12);
    }

    #[test]
    fn renders_mention_classifiers_and_mark_significance() {
        let report = sample_report();
        let table = render_curve(&report);
        assert!(table.contains("naive_bayes"));
        assert!(table.contains("knn"));
        let pairs = significance_matrix(&report, 80, 0.05).unwrap();
        let text = render_significance(&pairs, 0.05);
        assert!(text.contains("naive_bayes   vs knn"));
        assert!(!text.contains("naive_bayes   vs naive_bayes"));
    }
}
