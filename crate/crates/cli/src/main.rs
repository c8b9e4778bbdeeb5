use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tabsynth_core::dataset::{build_dataset, stats, BuildOptions};
use tabsynth_core::eval::{
    build_examples, emit_position_scatter, evaluate, load_annotations, read_ocr_jsonl, ContextOptions,
    FilePredictor, OraclePredictor, Predictor, SearchPredictor,
};
use tabsynth_core::validate::validate_dataset;
use tabsynth_core::{GeneratorConfig, Split};

/// Synthetic financial table images with ground-truth structure and
/// question-answer pairs.
#[derive(Parser)]
#[command(name = "tabsynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset.
    Generate(GenerateArgs),
    /// Check a generated dataset for internal consistency.
    Validate(InArgs),
    /// Corpus statistics.
    Stats(InArgs),
    /// Score span predictions on a split.
    Eval(EvalArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of tables.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    total: u64,
    /// Master seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "TABSYNTH_OUT")]
    out: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "TABSYNTH_WORKERS")]
    workers: Option<usize>,
    /// TOML generator config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated theme weights, one per theme; normalised to sum to 1.
    #[arg(long, value_delimiter = ',')]
    themes: Option<Vec<f64>>,
    /// Also write each table pasted onto an A4 page (default).
    #[arg(long, overrides_with = "no_a4")]
    a4: bool,
    #[arg(long = "no-a4", overrides_with = "a4")]
    no_a4: bool,
}

#[derive(Args)]
struct InArgs {
    /// Dataset directory.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinPredictor {
    Oracle,
    Search,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Train,
    Validation,
    Test,
    All,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// JSON lines of {id, start, end} or {id, start_scores, end_scores}.
    #[arg(long, conflicts_with = "predictor")]
    predictions: Option<PathBuf>,
    #[arg(long, value_enum)]
    predictor: Option<BuiltinPredictor>,
    /// Decode score vectors with the end at or after the start.
    #[arg(long)]
    constrained: bool,
    /// Simulated OCR noise rate applied to ground-truth contexts.
    #[arg(long)]
    corrupt_rate: Option<f64>,
    /// Seed for simulated OCR noise.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON lines of {id, words: [{text, bbox}]} from an OCR engine.
    #[arg(long, conflicts_with = "corrupt_rate")]
    ocr: Option<PathBuf>,
    /// Take boxes relative to the A4 page.
    #[arg(long)]
    a4: bool,
    #[arg(long, value_enum, default_value = "test")]
    split: SplitArg,
    /// Scatter CSV of target against predicted positions.
    #[arg(long)]
    scatter_out: Option<PathBuf>,
    /// SVG rendering of the scatter.
    #[arg(long)]
    scatter_svg: Option<PathBuf>,
    /// Full report with per-example rows.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<bool> {
    let mut config = match &args.config {
        Some(p) => GeneratorConfig::from_toml_file(p)?,
        None => GeneratorConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(weights) = args.themes {
        if weights.len() != config.themes.len() {
            bail!("--themes has {} weights for {} themes", weights.len(), config.themes.len());
        }
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || weights.iter().any(|w| !(*w >= 0.0)) {
            bail!("--themes weights must be non-negative with a positive sum");
        }
        config.theme_weights = weights.iter().map(|w| w / sum).collect();
    }
    let workers = match args.workers {
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let opts = BuildOptions {
        total: args.total,
        workers,
        with_a4: args.a4 || !args.no_a4,
    };
    log::info!("generating {} tables into {} with {workers} workers", args.total, args.out.display());
    let summary = build_dataset(&config, &args.out, &opts)
        .with_context(|| format!("generating into {}", args.out.display()))?;
    print_json(&summary)?;
    Ok(true)
}

fn validate(args: InArgs) -> Result<bool> {
    let report = validate_dataset(&args.input)?;
    for c in &report.checks {
        log::info!("{}: {} ({} checked, {} failed)", c.name, if c.passed { "pass" } else { "FAIL" }, c.checked, c.failure_count);
    }
    print_json(&report)?;
    Ok(report.passed)
}

fn stats_cmd(args: InArgs) -> Result<bool> {
    print_json(&stats(&args.input)?)?;
    Ok(true)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_vec_pretty(value)?).with_context(|| format!("writing {}", path.display()))
}

fn eval(args: EvalArgs) -> Result<bool> {
    let predictor: Box<dyn Predictor> = match (&args.predictions, args.predictor) {
        (Some(p), _) => Box::new(FilePredictor::open(p, args.constrained)?),
        (None, Some(BuiltinPredictor::Oracle)) => Box::new(OraclePredictor),
        (None, Some(BuiltinPredictor::Search)) => Box::new(SearchPredictor),
        (None, None) => bail!("give --predictions or --predictor"),
    };
    let split = match args.split {
        SplitArg::Train => Some(Split::Train),
        SplitArg::Validation => Some(Split::Validation),
        SplitArg::Test => Some(Split::Test),
        SplitArg::All => None,
    };
    let opts = ContextOptions {
        split,
        a4: args.a4,
        corrupt_rate: args.corrupt_rate,
        seed: args.seed,
        ocr: args.ocr.as_deref().map(read_ocr_jsonl).transpose()?,
    };
    let annotations = load_annotations(&args.input, split)?;
    let examples = build_examples(&annotations, &opts)?;
    let report = evaluate(&examples, predictor.as_ref())?;
    if let Some(p) = &args.scatter_out {
        emit_position_scatter(&report, p, args.scatter_svg.as_deref())?;
    } else if args.scatter_svg.is_some() {
        bail!("--scatter-svg needs --scatter-out");
    }
    if let Some(p) = &args.report_out {
        write_json(p, &report)?;
    }
    log::info!("accuracy {:.4} over {} examples", report.accuracy, report.examples);
    print_json(&report.summary())?;
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Validate(a) => validate(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Eval(a) => eval(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
