//! `tensor-verb`: build distributional spaces, construct transitive-verb
//! matrices, score sentence pairs, and run the disambiguation evaluation.
//!
//! Every failure path prints one machine-greppable line to standard error
//! (prefixes E_IO, E_PARSE, E_OOV, E_DEGENERATE, E_USAGE) and exits with a
//! stable code: 2 for I/O, parse and usage errors, 3 for out-of-vocabulary
//! words, 4 for degenerate statistics.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use tensor_verb_core::compose::ModelSpec;
use tensor_verb_core::space::{DEFAULT_BASIS_SIZE, DEFAULT_WINDOW};
use tensor_verb_core::verbs::MatrixMethod;

/// Environment variable capping worker parallelism (0 or unset = auto).
pub const THREADS_VAR: &str = "TENSOR_VERB_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Oov(String),
    Degenerate(String),
}

impl CliError {
    fn prefix(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io(_) => "E_IO",
            CliError::Parse(_) => "E_PARSE",
            CliError::Oov(_) => "E_OOV",
            CliError::Degenerate(_) => "E_DEGENERATE",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Oov(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::Parse(m)
            | CliError::Oov(m)
            | CliError::Degenerate(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tensor-verb",
    version,
    about = "Distributional verb-matrix toolkit: co-occurrence spaces, verb matrices, sentence similarity, disambiguation evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a semantic space from a lemmatized corpus and write it to disk
    BuildSpace(BuildSpaceArgs),
    /// Build verb matrices and write them as cache files
    BuildVerbs(BuildVerbsArgs),
    /// Score one sentence pair under a model
    Similarity(SimilarityArgs),
    /// Score a dataset and report Spearman's rho plus HIGH/LOW means
    Evaluate(EvaluateArgs),
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got {text:?}")),
        Ok(n) => Ok(n),
    }
}

#[derive(Args)]
struct BuildSpaceArgs {
    /// Corpus file: one lemmatized sentence per line, space-separated tokens
    #[arg(long)]
    corpus: PathBuf,

    /// Output path for the space file
    #[arg(long)]
    out: PathBuf,

    /// Number of most-frequent context words to keep as the basis
    #[arg(long, default_value_t = DEFAULT_BASIS_SIZE, value_parser = positive)]
    basis_size: usize,

    /// Symmetric co-occurrence window (tokens on each side)
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = positive)]
    window: usize,

    /// Stoplist file (one word per line) replacing the bundled list
    #[arg(long, conflicts_with = "no_stoplist")]
    stoplist: Option<PathBuf>,

    /// Disable stoplist filtering entirely
    #[arg(long)]
    no_stoplist: bool,

    /// Only count these words (one per line) as targets; contexts are unaffected
    #[arg(long)]
    target_vocab: Option<PathBuf>,
}

#[derive(Args)]
struct BuildVerbsArgs {
    /// Space file produced by build-space
    #[arg(long)]
    space: PathBuf,

    /// Construction method: indirect, zero-diag, one-diag or kron-self
    #[arg(long)]
    method: MatrixMethod,

    /// SVO triples file (required for the indirect method)
    #[arg(long)]
    triples: Option<PathBuf>,

    /// Comma-separated verbs to build; defaults to every verb in the triples file
    #[arg(long, value_delimiter = ',')]
    verbs: Vec<String>,

    /// Directory for the matrix files
    #[arg(long)]
    out_dir: PathBuf,

    /// Ignore the triples count column (each pair counts once)
    #[arg(long)]
    type_counts: bool,
}

#[derive(Args)]
struct SimilarityArgs {
    /// Space file produced by build-space
    #[arg(long)]
    space: PathBuf,

    /// Model: baseline, add, multiply or categorical (see --matrix-method)
    #[arg(long)]
    model: String,

    /// Verb-matrix method for the categorical model
    #[arg(long)]
    matrix_method: Option<MatrixMethod>,

    /// SVO triples file (required for categorical-indirect)
    #[arg(long)]
    triples: Option<PathBuf>,

    /// Directory for cached verb matrices
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Ignore the triples count column (each pair counts once)
    #[arg(long)]
    type_counts: bool,

    /// The two sentences: SUB1 VERB1 OBJ1 [/] SUB2 VERB2 OBJ2
    #[arg(trailing_var_arg = true, num_args = 6..=7)]
    words: Vec<String>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Space file produced by build-space
    #[arg(long)]
    space: PathBuf,

    /// Dataset TSV: annotator, verb, subject, object, landmark, score, band
    #[arg(long)]
    dataset: PathBuf,

    /// Comma-separated models to evaluate (default: all seven)
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelSpec>,

    /// SVO triples file (required when an indirect model is requested)
    #[arg(long)]
    triples: Option<PathBuf>,

    /// per-judgment (each annotator row is one observation) or mean-per-pair
    #[arg(long, default_value = "per-judgment")]
    aggregate: String,

    /// Leave degenerate (zero-norm) scores out of rho and the band means
    #[arg(long)]
    exclude_degenerate: bool,

    /// Write the full machine-readable report here
    #[arg(long)]
    json: Option<PathBuf>,

    /// Directory for cached verb matrices
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Ignore the triples count column (each pair counts once)
    #[arg(long)]
    type_counts: bool,
}

fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be an integer, got {raw:?}")))?;
    if threads == 0 {
        return Ok(()); // auto
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            let _ = err.print();
            return Ok(());
        }
        Err(err) => {
            let summary = err
                .to_string()
                .lines()
                .next()
                .unwrap_or("invalid command line")
                .to_owned();
            eprintln!("E_USAGE: {summary}");
            let _ = err.print();
            std::process::exit(2);
        }
    };

    init_thread_pool()?;

    match cli.command {
        Command::BuildSpace(args) => commands::build_space(args),
        Command::BuildVerbs(args) => commands::build_verbs(args),
        Command::Similarity(args) => commands::similarity(args),
        Command::Evaluate(args) => commands::evaluate(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}: {}", err.prefix(), err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
