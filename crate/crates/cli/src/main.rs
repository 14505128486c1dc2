//! `exfit`: fit queries to labeled data examples from the command line.
//!
//! Documents are read from files (`-` for standard input) and written to
//! standard output. The exit code carries the verdict.

mod config;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exfit_core::Format;

#[derive(Parser)]
#[command(name = "exfit", version, about = "Query-by-example fitting for CQs, UCQs and tree CQs")]
pub struct Cli {
    /// TOML file with default `cap` and `budget` values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output whitespace
    #[arg(long, global = true, value_enum, default_value = "compact")]
    format: OutputFormat,

    /// Size or depth cap for bounded searches and constructions
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Number of search nodes a single invocation may spend
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Compact,
    Pretty,
}

#[derive(Subcommand)]
pub enum Command {
    /// Find a homomorphism from SRC to DST
    Hom { src: PathBuf, dst: PathBuf },
    /// Compute the core of an instance or query
    Core { file: PathBuf },
    /// Direct product of instances sharing schema and arity
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Disjoint union of two instances, identifying distinguished tuples
    Union { left: PathBuf, right: PathBuf },
    /// Decide c-acyclicity
    Cacyclic { file: PathBuf },
    /// Frontier of a query
    Frontier {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "cq")]
        lang: Lang,
    },
    /// Homomorphism dualities
    #[command(subcommand)]
    Dual(DualCommand),
    /// Verify, decide or construct fittings
    #[command(subcommand)]
    Fit(FitCommand),
    /// Greatest simulation between two unary instances over a binary schema
    Sim { src: PathBuf, dst: PathBuf },
    /// Finite unraveling of a unary instance
    Unravel {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Print a named fixture document
    Fixture { name: String },
}

#[derive(Subcommand)]
pub enum DualCommand {
    /// Obstruction dual of a c-acyclic instance
    Single { file: PathBuf },
    /// Decide whether (F, D) is a homomorphism duality
    Check { f: PathBuf, d: PathBuf },
    /// Decide whether D has a finite obstruction set relative to P
    RelativeExists { d: PathBuf, p: PathBuf },
    /// Construct a finite obstruction set for D relative to P
    RelativeConstruct { d: PathBuf, p: PathBuf },
}

#[derive(Subcommand)]
pub enum FitCommand {
    /// Check that a query (or a list of queries, for bases) is a fitting of the given kind
    Verify {
        #[command(flatten)]
        target: FitTarget,
        /// Query document
        #[arg(short = 'q', long = "query")]
        query: PathBuf,
    },
    /// Decide whether a fitting of the given kind exists
    Exists {
        #[command(flatten)]
        target: FitTarget,
    },
    /// Construct a fitting of the given kind
    Construct {
        #[command(flatten)]
        target: FitTarget,
    },
}

#[derive(clap::Args)]
pub struct FitTarget {
    #[arg(long, value_enum, default_value = "cq")]
    lang: Lang,
    #[arg(long, value_enum, default_value = "any")]
    kind: Kind,
    /// Examples document
    #[arg(short = 'e', long = "examples")]
    examples: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lang {
    Cq,
    Ucq,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Any,
    MostSpecific,
    WeaklyMostGeneral,
    Basis,
    Unique,
    MostGeneral,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match config::Settings::load(cli.config.as_deref(), cli.cap, cli.budget) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(run::EXIT_INPUT);
        }
    };
    let format = match cli.format {
        OutputFormat::Compact => Format::Compact,
        OutputFormat::Pretty => Format::Pretty,
    };
    let result = run::execute(&cli.command, &settings);
    if let Some(out) = &result.output {
        let mut stdout = std::io::stdout().lock();
        if let Err(e) = writeln!(stdout, "{}", out.render(format)) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                eprintln!("error: {e}");
                return ExitCode::from(run::EXIT_INPUT);
            }
        }
    }
    if !result.diagnostics.is_empty() {
        eprintln!("{}", result.diagnostics);
    }
    ExitCode::from(result.exit_code())
}
