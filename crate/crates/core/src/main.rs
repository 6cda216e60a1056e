//! Command-line front end: corpus preparation, synthetic sampling, the
//! experiment grid, and report summaries.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sensebench::classifier::LearnerKind;
use sensebench::dataset::{self, Stopwords};
use sensebench::harness::{self, report, ExperimentConfig};
use sensebench::rng::{self, tag};
use sensebench::synth;

#[derive(Parser)]
#[command(
    name = "sensebench",
    version,
    about = "Word-sense disambiguation benchmark toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset from a sense-annotated corpus.
    Prep(PrepArgs),
    /// Sample a dataset from a synthetic concept with known ground truth.
    Synth(SynthArgs),
    /// Run the learning-curve grid and emit reports.
    Run(RunArgs),
    /// Summarize a previously emitted run directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct PrepArgs {
    /// Corpus file: one example per line, `sense<TAB>previous sentence<TAB>target sentence`.
    #[arg(long)]
    corpus: PathBuf,
    /// Stopword list, one entry per line. Defaults to the built-in list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Downsample so every sense occurs equally often.
    #[arg(long)]
    balance: bool,
    /// Seed for the balancing draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Threshold concept: positive iff >= M of N designated features present.
    #[value(name = "m-of-n")]
    MOfN,
    /// k-term DNF over random literals.
    Dnf,
    /// Naive Bayes generative model with Bayes-optimal labels.
    Nb,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// m-of-n: threshold M. dnf: number of terms. nb: number of senses (default 6).
    #[arg(long)]
    m: Option<usize>,
    /// m-of-n: designated count N. dnf: literals per term. nb: unused.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    features: usize,
    #[arg(long)]
    examples: usize,
    /// Label-noise rate in [0, 0.5).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Dataset file written by `prep` or `synth`.
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated classifier ids, or `all`.
    #[arg(long, default_value = "all")]
    classifiers: String,
    /// Comma-separated ascending training sizes. Defaults to
    /// 25,50,100,200,400,600,1200 capped at the pool.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long, default_value_t = harness::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Significance level for the t-test matrix.
    #[arg(long, default_value_t = harness::DEFAULT_ALPHA)]
    alpha: f64,
    /// Training-pool size per trial; the rest of the data is the test set.
    #[arg(long, default_value_t = harness::DEFAULT_POOL)]
    pool: usize,
    /// Directory for records.csv, curve.csv, significance.csv, run.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory previously written by `run`.
    #[arg(long)]
    run_dir: PathBuf,
    /// Training size for the significance matrix (default: largest).
    #[arg(long)]
    sig_at: Option<usize>,
}

fn main() -> ExitCode {
    // Die quietly when stdout closes mid-pipe (e.g. `run ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Prep(args) => prep(args).map(|()| ExitCode::SUCCESS),
        Command::Synth(args) => synth_cmd(args).map(|()| ExitCode::SUCCESS),
        Command::Run(args) => run_cmd(args),
        Command::Report(args) => report_cmd(args).map(|()| ExitCode::SUCCESS),
    }
}

fn describe(data: &dataset::Dataset) -> String {
    format!(
        "{} examples, {} features, {} senses",
        data.len(),
        data.feature_count(),
        data.sense_count()
    )
}

fn print_warnings(data: &dataset::Dataset) {
    for w in &data.warnings {
        eprintln!("warning: {w}");
    }
}

fn prep(args: PrepArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.corpus)
        .with_context(|| format!("reading corpus {}", args.corpus.display()))?;
    let records = dataset::parse_corpus(&text)?;
    let stopwords = match &args.stopwords {
        Some(path) => Stopwords::from_word_list(
            &fs::read_to_string(path)
                .with_context(|| format!("reading stopwords {}", path.display()))?,
        ),
        None => Stopwords::standard(),
    };
    let mut data = dataset::build_dataset(&records, &stopwords)?;
    if args.balance {
        let mut stream = rng::stream(args.seed, &[tag::BALANCE]);
        data = dataset::balance_senses(&data, &mut stream)?;
    }
    dataset::save_dataset(&data, &args.out)?;
    print_warnings(&data);
    println!("wrote {} ({})", args.out.display(), describe(&data));
    Ok(())
}

fn synth_cmd(args: SynthArgs) -> anyhow::Result<()> {
    let need = |v: Option<usize>, what: &str| {
        v.with_context(|| format!("--{what} is required for this family"))
    };
    let spec = match args.family {
        FamilyArg::MOfN => synth::random_m_of_n(
            need(args.m, "m")?,
            need(args.n, "n")?,
            args.features,
            args.examples,
            args.noise,
            args.seed,
        )?,
        FamilyArg::Dnf => synth::random_dnf(
            need(args.m, "m")?,
            need(args.n, "n")?,
            args.features,
            args.examples,
            args.noise,
            args.seed,
        )?,
        FamilyArg::Nb => synth::random_generative(
            args.m.unwrap_or(6),
            args.features,
            args.examples,
            args.noise,
            args.seed,
        )?,
    };
    let data = synth::generate(&spec)?;
    dataset::save_dataset(&data, &args.out)?;
    print_warnings(&data);
    println!("wrote {} ({})", args.out.display(), describe(&data));
    Ok(())
}

fn parse_classifiers(arg: &str) -> anyhow::Result<Vec<LearnerKind>> {
    if arg == "all" {
        return Ok(LearnerKind::ALL.to_vec());
    }
    let mut kinds = Vec::new();
    for part in arg.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty entry in classifier list '{arg}'");
        }
        let kind: LearnerKind = part.parse()?;
        if kinds.contains(&kind) {
            bail!("classifier '{kind}' listed twice");
        }
        kinds.push(kind);
    }
    ensure!(!kinds.is_empty(), "no classifiers given");
    Ok(kinds)
}

fn parse_sizes(arg: &str) -> anyhow::Result<Vec<usize>> {
    arg.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("bad size '{part}' in '{arg}'"))
        })
        .collect()
}

fn run_cmd(args: RunArgs) -> anyhow::Result<ExitCode> {
    let data = dataset::load_dataset(&args.data)
        .with_context(|| format!("loading dataset {}", args.data.display()))?;
    print_warnings(&data);
    let config = ExperimentConfig {
        classifiers: parse_classifiers(&args.classifiers)?,
        sizes: match &args.sizes {
            Some(list) => parse_sizes(list)?,
            None => harness::default_sizes(args.pool),
        },
        trials: args.trials,
        pool: args.pool,
        seed: args.seed,
        alpha: args.alpha,
        params: Default::default(),
    };
    let curve = harness::run_experiment(&config, &data)?;
    report::emit_reports(&curve, &args.out_dir)?;

    println!("{}", report::render_curve(&curve));
    let sig_size = *config.sizes.last().expect("validated nonempty");
    match harness::significance_matrix(&curve, sig_size, config.alpha) {
        Ok(pairs) => print!("{}", report::render_significance(&pairs, config.alpha)),
        Err(e) => println!("significance at size {sig_size} unavailable: {e}"),
    }
    println!("\nreports written to {}", args.out_dir.display());

    let failed = curve.failures().len();
    if failed > 0 {
        eprintln!("{failed} cell(s) failed; see run.json");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

/// Pulls the run's alpha back out of run.json; falls back to the default
/// when the bundle is missing or unreadable.
fn stored_alpha(run_dir: &std::path::Path) -> f64 {
    fs::read_to_string(run_dir.join(report::RUN_FILE))
        .ok()
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|v| v["config"]["alpha"].as_f64())
        .unwrap_or(harness::DEFAULT_ALPHA)
}

fn report_cmd(args: ReportArgs) -> anyhow::Result<()> {
    let path = args.run_dir.join(report::RECORDS_FILE);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let records = report::read_records_csv(&text)?;
    ensure!(!records.is_empty(), "{} holds no records", path.display());
    let alpha = stored_alpha(&args.run_dir);
    let rebuilt = report::rebuild_report(records, alpha);

    println!("{}", report::render_curve(&rebuilt));
    let sig_size = match args.sig_at {
        Some(size) => size,
        None => *rebuilt.config.sizes.last().expect("nonempty records"),
    };
    match harness::significance_matrix(&rebuilt, sig_size, alpha) {
        Ok(pairs) => print!("{}", report::render_significance(&pairs, alpha)),
        Err(e) => println!("significance at size {sig_size} unavailable: {e}"),
    }
    Ok(())
}
