//! `glint` — train, run, and judge grammatical syntax highlighters.
//!
//! Subcommands cover the full experiment pipeline: `gen` sources, `oracle`
//! reference labels, `split` folds, `snippets` incomplete derivations,
//! `train` models, `highlight` single files, `eval` accuracy tables, and
//! `bench` latency tables.
//!
//! Exit codes: 0 success, 1 usage, 2 data/format, 3 lex/parse.

mod config;
mod emit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use glint_core::eval::{
    evaluate_corpus, time_highlighter, write_accuracy_csv, write_accuracy_summary_csv,
    write_latency_csv, write_latency_summary_csv, AccuracyRow, BenchOutcome,
};
use glint_core::highlighter::{
    BfHighlighter, HighlightError, Highlighter, NeuralHighlighter, RegexHighlighter,
};
use glint_core::minilang::{generate_program, FrontendError, VOCAB_SIZE};
use glint_core::nn::{load_model, save_model, Model, ModelConfig, Sample};
use glint_core::oracle::{
    build_corpus, corpus_stats, read_folds, read_oracle, split_folds, write_folds, write_oracle,
    CorpusSource, OracleRecord,
};
use glint_core::snippet::{sample_snippets, LengthParams, JAVA_LENGTHS};
use glint_core::stats::Summary;
use glint_core::CoverageTask;

#[derive(Parser)]
#[command(name = "glint", version, about = "Learned grammatical syntax highlighting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random source files of the demonstration language.
    Gen {
        /// Number of files to write.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Token-count target per file.
        #[arg(long, default_value_t = 80)]
        budget: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the reference resolver over sources and write an oracle file.
    Oracle {
        /// Directory of source files to label.
        #[arg(long, conflicts_with = "generate")]
        src: Option<PathBuf>,
        /// Generate this many unique records instead of reading a directory.
        #[arg(long = "gen")]
        generate: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 80)]
        budget: usize,
        /// Stop after this many accepted records (directory mode).
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Shuffle an oracle into persisted test/train/validation folds.
    Split {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        folds: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample line snippets from each fold's test set, labels included.
    Snippets {
        #[arg(long)]
        oracle: PathBuf,
        /// Directory holding fold id files.
        #[arg(long)]
        folds: PathBuf,
        #[arg(long, default_value_t = 3)]
        fold_count: usize,
        /// Snippets per fold.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        lengths: LengthArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one model per fold according to a run config.
    Train {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        folds: PathBuf,
        #[arg(long, default_value_t = 3)]
        fold_count: usize,
        /// Flat key=value run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for models and training histories.
        #[arg(long)]
        out: PathBuf,
    },
    /// Highlight one source file to stdout.
    Highlight {
        /// Source file to highlight.
        source: PathBuf,
        #[command(flatten)]
        approach: ApproachArgs,
        #[arg(long, value_parser = ["ansi", "html", "spans"], default_value = "ansi")]
        format: String,
    },
    /// Score approaches against an oracle, writing accuracy CSVs.
    Eval {
        #[arg(long)]
        oracle: PathBuf,
        #[command(flatten)]
        approach: ApproachArgs,
        #[arg(long, value_parser = parse_task)]
        task: CoverageTask,
        /// Restrict to the record ids listed in this file (one per line).
        #[arg(long)]
        ids: Option<PathBuf>,
        /// Per-file accuracy CSV.
        #[arg(long)]
        out: PathBuf,
        /// Summary CSV (mean/sd/min/median/max per approach).
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Measure prediction latency, writing nanosecond CSVs.
    Bench {
        #[arg(long)]
        oracle: PathBuf,
        #[command(flatten)]
        approach: ApproachArgs,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long)]
        ids: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ApproachArgs {
    /// Use the reference (lex/parse/walk) resolver.
    #[arg(long)]
    bf: bool,
    /// Use the pattern-table baseline.
    #[arg(long)]
    regex: bool,
    /// Use a trained model file (repeatable).
    #[arg(long)]
    model: Vec<PathBuf>,
}

#[derive(Args)]
struct LengthArgs {
    #[arg(long, default_value_t = JAVA_LENGTHS.mean)]
    mean: f64,
    #[arg(long, default_value_t = JAVA_LENGTHS.sd)]
    sd: f64,
    #[arg(long, default_value_t = JAVA_LENGTHS.min)]
    min: usize,
    #[arg(long, default_value_t = JAVA_LENGTHS.max)]
    max: usize,
}

fn parse_task(raw: &str) -> Result<CoverageTask, String> {
    CoverageTask::from_name(raw).ok_or_else(|| format!("unknown task {raw:?}; use T1..T4"))
}

/// CLI failure with its exit-code category.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Syntax(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Syntax(_) => 3,
        }
    }

    fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Syntax(_) => "syntax",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Syntax(m) => m,
        }
    }
}

macro_rules! data_errors {
    ($($ty:ty),+ $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Data(e.to_string())
            }
        })+
    };
}

data_errors!(
    std::io::Error,
    glint_core::oracle::FormatError,
    glint_core::oracle::BuildError,
    glint_core::nn::ModelIoError,
    glint_core::nn::ModelError,
    glint_core::eval::EvalError,
    config::ConfigError,
);

impl From<HighlightError> for CliError {
    fn from(e: HighlightError) -> Self {
        match e {
            HighlightError::Frontend(f) => CliError::Syntax(f.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    let line = err.to_string().lines().next().unwrap_or("bad usage").to_string();
                    eprintln!("error: usage: {line}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.category(), e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen { count, seed, budget, out } => cmd_gen(count, seed, budget, &out),
        Command::Oracle { src, generate, seed, budget, target, out } => {
            cmd_oracle(src, generate, seed, budget, target, &out)
        }
        Command::Split { oracle, seed, folds, out } => cmd_split(&oracle, seed, folds, &out),
        Command::Snippets { oracle, folds, fold_count, count, seed, lengths, out } => {
            cmd_snippets(&oracle, &folds, fold_count, count, seed, &lengths, &out)
        }
        Command::Train { oracle, folds, fold_count, config, out } => {
            cmd_train(&oracle, &folds, fold_count, &config, &out)
        }
        Command::Highlight { source, approach, format } => {
            cmd_highlight(&source, &approach, &format)
        }
        Command::Eval { oracle, approach, task, ids, out, summary_out } => {
            cmd_eval(&oracle, &approach, task, ids.as_deref(), &out, summary_out.as_deref())
        }
        Command::Bench { oracle, approach, reps, ids, out, summary_out } => {
            cmd_bench(&oracle, &approach, reps, ids.as_deref(), &out, summary_out.as_deref())
        }
    }
}

fn cmd_gen(count: usize, seed: u64, budget: usize, out: &Path) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    std::fs::create_dir_all(out)?;
    for i in 0..count {
        let source = generate_program(seed + i as u64, budget);
        std::fs::write(out.join(format!("gen{i:06}.mini")), source)?;
    }
    println!("wrote {count} files to {}", out.display());
    Ok(())
}

fn cmd_oracle(
    src: Option<PathBuf>,
    generate: Option<usize>,
    seed: u64,
    budget: usize,
    target: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let (source, target) = match (src, generate) {
        (Some(dir), None) => (CorpusSource::Directory(dir), target),
        (None, Some(count)) => (CorpusSource::Generator { seed, budget }, Some(count)),
        _ => {
            return Err(CliError::Usage(
                "exactly one of --src or --gen is required".into(),
            ))
        }
    };
    let (records, report) = build_corpus(&source, target)?;
    write_oracle(out, &records)?;
    let stats = corpus_stats(&records);
    println!(
        "oracle: {} records ({} skipped, {} duplicate structures) -> {}",
        records.len(),
        report.skipped,
        report.duplicates,
        out.display()
    );
    let row = |name: &str, s: &Summary| {
        println!(
            "{name:12} mean={:.1} sd={:.1} min={:.0} median={:.1} max={:.0}",
            s.mean, s.sd, s.min, s.median, s.max
        );
    };
    row("chars", &stats.chars);
    row("whitespaces", &stats.whitespaces);
    row("lines", &stats.lines);
    row("tokens", &stats.tokens);
    Ok(())
}

fn cmd_split(oracle: &Path, seed: u64, folds: usize, out: &Path) -> Result<(), CliError> {
    let records = read_oracle(oracle)?;
    if records.len() < folds {
        return Err(CliError::Data(format!(
            "{} records cannot fill {folds} folds",
            records.len()
        )));
    }
    let splits = split_folds(&records, folds, seed);
    write_folds(out, &splits)?;
    for s in &splits {
        println!(
            "fold{}: test={} train={} val={}",
            s.fold,
            s.test.len(),
            s.train.len(),
            s.validation.len()
        );
    }
    Ok(())
}

/// Records selected by an id list, in list order.
fn select_records(
    records: &[OracleRecord],
    ids: &[String],
) -> Result<Vec<OracleRecord>, CliError> {
    let by_id: std::collections::HashMap<&str, &OracleRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    ids.iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .map(|&r| r.clone())
                .ok_or_else(|| CliError::Data(format!("id {id:?} not present in the oracle")))
        })
        .collect()
}

fn read_id_file(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn cmd_snippets(
    oracle: &Path,
    folds_dir: &Path,
    fold_count: usize,
    count: usize,
    seed: u64,
    lengths: &LengthArgs,
    out: &Path,
) -> Result<(), CliError> {
    let records = read_oracle(oracle)?;
    let folds = read_folds(folds_dir, fold_count)?;
    let params = LengthParams::new(lengths.mean, lengths.sd, lengths.min, lengths.max);
    std::fs::create_dir_all(out)?;
    for fold in &folds {
        let test = select_records(&records, &fold.test)?;
        let snippets = sample_snippets(&test, count, &params, seed + fold.fold as u64);
        let as_records: Vec<OracleRecord> = snippets
            .into_iter()
            .enumerate()
            .map(|(n, s)| s.into_record(n))
            .collect();
        let path = out.join(format!("snippets_fold{}.orc", fold.fold));
        write_oracle(&path, &as_records)?;
        println!("fold{}: {} snippets -> {}", fold.fold, count, path.display());
    }
    Ok(())
}

fn cmd_train(
    oracle: &Path,
    folds_dir: &Path,
    fold_count: usize,
    config_path: &Path,
    out: &Path,
) -> Result<(), CliError> {
    let cfg = config::load_config(config_path)?;
    let records = read_oracle(oracle)?;
    let folds = read_folds(folds_dir, fold_count)?;
    std::fs::create_dir_all(out)?;

    for fold in &folds {
        let train_recs = select_records(&records, &fold.train)?;
        let val_recs = select_records(&records, &fold.validation)?;
        let train_samples: Vec<Sample> = train_recs
            .iter()
            .map(|r| Sample::from_record(r, cfg.task))
            .collect();
        let val_samples: Vec<Sample> = val_recs
            .iter()
            .map(|r| Sample::from_record(r, cfg.task))
            .collect();

        let fold_seed = cfg.seed + fold.fold as u64;
        let model_cfg = ModelConfig::new(
            VOCAB_SIZE,
            cfg.hidden,
            cfg.bidirectional,
            cfg.task.class_count(),
            fold_seed,
        )?;
        let mut model = Model::from_config(&model_cfg);
        let history =
            glint_core::nn::train(&mut model, &train_samples, &val_samples, &cfg.schedule, fold_seed);

        let stem = format!("{}_{}_f{}", model_cfg.arch(), cfg.task.name(), fold.fold);
        let model_path = out.join(format!("{stem}.glm"));
        save_model(&model_path, &model, cfg.task, fold_seed)?;
        write_history_csv(&out.join(format!("{stem}.history.csv")), &history)?;

        let last = history.epochs.last().expect("schedule has epochs");
        println!(
            "fold{}: {} steps, val token accuracy {:.4} -> {}",
            fold.fold,
            history.optimizer_steps,
            last.val_token_accuracy,
            model_path.display()
        );
    }
    Ok(())
}

fn write_history_csv(path: &Path, history: &glint_core::nn::History) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "epoch,learning_rate,mean_train_loss,val_token_accuracy")?;
    for e in &history.epochs {
        writeln!(
            out,
            "{},{},{:.6},{:.6}",
            e.epoch, e.learning_rate, e.mean_train_loss, e.val_token_accuracy
        )?;
    }
    Ok(())
}

/// Builds the named approaches; order: bf, regex, then models as given.
fn load_approaches(args: &ApproachArgs) -> Result<Vec<(String, Box<dyn Highlighter>)>, CliError> {
    let mut out: Vec<(String, Box<dyn Highlighter>)> = Vec::new();
    if args.bf {
        out.push(("bf".into(), Box::new(BfHighlighter)));
    }
    if args.regex {
        out.push(("regex".into(), Box::new(RegexHighlighter)));
    }
    for path in &args.model {
        let saved = load_model(path)?;
        let neural = NeuralHighlighter::from_saved(saved)?;
        out.push((neural.name().to_string(), Box::new(neural)));
    }
    if out.is_empty() {
        return Err(CliError::Usage(
            "pick at least one approach: --bf, --regex, or --model".into(),
        ));
    }
    Ok(out)
}

fn cmd_highlight(source: &Path, approach: &ApproachArgs, format: &str) -> Result<(), CliError> {
    let approaches = load_approaches(approach)?;
    if approaches.len() != 1 {
        return Err(CliError::Usage("highlight takes exactly one approach".into()));
    }
    let chars = std::fs::read_to_string(source)?;
    let (_, highlighter) = &approaches[0];
    let hetas = highlighter.highlight(&chars)?;
    match format {
        "spans" => print!("{}", emit::emit_spans(&hetas)),
        "html" => print!("{}", emit::emit_html(&chars, &hetas)),
        _ => print!("{}", emit::emit_ansi(&chars, &hetas)),
    }
    Ok(())
}

fn load_eval_records(oracle: &Path, ids: Option<&Path>) -> Result<Vec<OracleRecord>, CliError> {
    let records = read_oracle(oracle)?;
    match ids {
        Some(path) => select_records(&records, &read_id_file(path)?),
        None => Ok(records),
    }
}

fn cmd_eval(
    oracle: &Path,
    approach: &ApproachArgs,
    task: CoverageTask,
    ids: Option<&Path>,
    out: &Path,
    summary_out: Option<&Path>,
) -> Result<(), CliError> {
    let approaches = load_approaches(approach)?;
    let records = load_eval_records(oracle, ids)?;
    if records.is_empty() {
        return Err(CliError::Data("no records to evaluate".into()));
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (name, highlighter) in &approaches {
        let outcome = evaluate_corpus(highlighter.as_ref(), &records, task)?;
        println!(
            "{name} {task}: files={} median={:.4} mean={:.4} min={:.4}",
            outcome.per_file.len(),
            outcome.summary.median,
            outcome.summary.mean,
            outcome.summary.min
        );
        rows.extend(outcome.per_file.into_iter().map(|f| AccuracyRow {
            id: f.id,
            approach: name.clone(),
            task,
            accuracy: f.accuracy,
        }));
        summaries.push((name.clone(), task, outcome.summary));
    }
    write_accuracy_csv(out, &rows)?;
    if let Some(path) = summary_out {
        write_accuracy_summary_csv(path, &summaries)?;
    }
    Ok(())
}

fn cmd_bench(
    oracle: &Path,
    approach: &ApproachArgs,
    reps: usize,
    ids: Option<&Path>,
    out: &Path,
    summary_out: Option<&Path>,
) -> Result<(), CliError> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let approaches = load_approaches(approach)?;
    let records = load_eval_records(oracle, ids)?;
    if records.is_empty() {
        return Err(CliError::Data("no records to benchmark".into()));
    }
    let mut outcomes: Vec<(String, BenchOutcome)> = Vec::new();
    for (name, highlighter) in &approaches {
        let outcome = time_highlighter(highlighter.as_ref(), &records, reps);
        println!(
            "{name}: files={} median={:.1}us mean={:.1}us",
            outcome.per_file.len(),
            outcome.aggregate.median / 1_000.0,
            outcome.aggregate.mean / 1_000.0
        );
        outcomes.push((name.clone(), outcome));
    }
    write_latency_csv(out, &outcomes)?;
    if let Some(path) = summary_out {
        let rows: Vec<(String, Summary)> = outcomes
            .iter()
            .map(|(name, o)| (name.clone(), o.aggregate))
            .collect();
        write_latency_summary_csv(path, &rows)?;
    }
    Ok(())
}
