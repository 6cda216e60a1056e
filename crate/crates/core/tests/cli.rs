//! End-to-end tests of the installed binary.

use std::path::Path;
use std::process::{Command, Output};

fn sensebench(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sensebench"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_lists_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = sensebench(&["--help"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in ["prep", "synth", "run", "report"] {
        assert!(text.contains(sub), "--help missing {sub}");
    }
}

#[test]
fn prep_builds_and_balances_a_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = "\
# two senses, deliberately unbalanced
text\t\tDraw a line under the heading.
text\tThe essay rambles.\tEvery line of the argument fails.
text\t\tRead between the lines.
phone\t\tThe line went dead.
";
    std::fs::write(dir.path().join("corpus.tsv"), corpus).unwrap();

    let out = sensebench(
        &["prep", "--corpus", "corpus.tsv", "--out", "plain.ds"],
        dir.path(),
    );
    assert!(out.status.success(), "prep failed: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("plain.ds")).unwrap();
    assert!(text.starts_with("senses 2\n"));
    assert!(
        text.contains("sense 0 text\n"),
        "sense ids follow first appearance"
    );
    assert!(text.contains("sense 1 phone\n"));
    assert!(text.contains("examples 4\n"));

    let out = sensebench(
        &[
            "prep",
            "--corpus",
            "corpus.tsv",
            "--balance",
            "--seed",
            "3",
            "--out",
            "bal.ds",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "balanced prep failed: {}",
        stderr(&out)
    );
    let balanced = std::fs::read_to_string(dir.path().join("bal.ds")).unwrap();
    assert!(
        balanced.contains("examples 2\n"),
        "balance should keep 1 per sense"
    );
}

#[test]
fn synth_run_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = sensebench(
        &[
            "synth",
            "--family",
            "m-of-n",
            "--m",
            "2",
            "--n",
            "5",
            "--features",
            "25",
            "--examples",
            "160",
            "--noise",
            "0.05",
            "--seed",
            "11",
            "--out",
            "c.ds",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "synth failed: {}", stderr(&out));

    let out = sensebench(
        &[
            "run",
            "--data",
            "c.ds",
            "--classifiers",
            "naive_bayes,perceptron,knn",
            "--sizes",
            "20,60",
            "--trials",
            "3",
            "--pool",
            "100",
            "--seed",
            "5",
            "--out-dir",
            "results",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "run failed: {}", stderr(&out));
    let table = stdout(&out);
    assert!(
        table.contains("naive_bayes"),
        "summary table missing classifiers"
    );

    let results = dir.path().join("results");
    let records = std::fs::read_to_string(results.join("records.csv")).unwrap();
    let mut lines = records.lines();
    assert_eq!(
        lines.next().unwrap(),
        "classifier,train_size,trial,accuracy,train_cpu_ms,test_cpu_ms,model_size"
    );
    assert_eq!(lines.count(), 3 * 2 * 3, "one row per cell");
    let curve = std::fs::read_to_string(results.join("curve.csv")).unwrap();
    assert!(curve.starts_with("classifier,train_size,trials,mean_accuracy,ci95_half_width,"));
    assert!(results.join("significance.csv").exists());
    let run_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(results.join("run.json")).unwrap()).unwrap();
    assert_eq!(run_json["config"]["seed"], 5);
    assert_eq!(run_json["failures"], serde_json::json!([]));

    // Re-render from the stored records without re-running.
    let out = sensebench(
        &["report", "--run-dir", "results", "--sig-at", "60"],
        dir.path(),
    );
    assert!(out.status.success(), "report failed: {}", stderr(&out));
    let rendered = stdout(&out);
    assert!(rendered.contains("naive_bayes"));
    assert!(
        rendered.contains("size 60"),
        "sig table should honor --sig-at"
    );
}

#[test]
fn failed_cells_flip_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = sensebench(
        &[
            "synth",
            "--family",
            "m-of-n",
            "--m",
            "1",
            "--n",
            "3",
            "--features",
            "10",
            "--examples",
            "30",
            "--seed",
            "2",
            "--out",
            "tiny.ds",
        ],
        dir.path(),
    );
    assert!(out.status.success());

    // k = 3 cannot be served by a 2-example training set.
    let out = sensebench(
        &[
            "run",
            "--data",
            "tiny.ds",
            "--classifiers",
            "knn",
            "--sizes",
            "2",
            "--trials",
            "2",
            "--pool",
            "10",
            "--seed",
            "1",
            "--out-dir",
            "res",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "failed cells must exit nonzero");
    let records = std::fs::read_to_string(dir.path().join("res/records.csv")).unwrap();
    assert!(
        records.lines().any(|l| l.starts_with("knn,2,0,,,,")),
        "failed cell keeps identity columns: {records}"
    );
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = sensebench(
        &[
            "synth",
            "--family",
            "m-of-n",
            "--m",
            "1",
            "--n",
            "3",
            "--features",
            "10",
            "--examples",
            "30",
            "--seed",
            "2",
            "--out",
            "tiny.ds",
        ],
        dir.path(),
    );
    assert!(out.status.success());

    let out = sensebench(
        &[
            "run",
            "--data",
            "tiny.ds",
            "--classifiers",
            "bogus",
            "--out-dir",
            "x",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("bogus"),
        "error names the offending id"
    );

    let out = sensebench(
        &[
            "synth",
            "--family",
            "m-of-n",
            "--m",
            "3",
            "--n",
            "5",
            "--features",
            "10",
            "--examples",
            "50",
            "--noise",
            "0.7",
            "--out",
            "x.ds",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "noise 0.7 is out of range");
}
