//! `zsl`: subsequence sums and zero-sum free sequences on the command line.
//!
//! Reports go to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success, 1 a verification found violations, 2 usage error, 3 the group
//! exceeds the order cap.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use zsl::{Error, Group, DEFAULT_ORDER_CAP};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "zsl",
    version,
    about = "Subsequence sums of zero-sum free sequences over finite abelian groups"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Worker threads for enumeration (defaults to available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest group order accepted
    #[arg(long, env = "ZSL_ORDER_CAP", default_value_t = DEFAULT_ORDER_CAP, global = true)]
    order_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Σ(S), f(S), zero-sum freeness and form classification of one sequence
    Analyze {
        /// Group literal, e.g. 2x8 or Z3xZ9
        group: String,
        /// Sequence literal, e.g. "(0,1)^3 (1,1)^2"
        sequence: String,
    },
    /// List zero-sum free sequences in lexicographic order
    Enumerate {
        group: String,
        /// Longest sequence to list (default: no limit)
        #[arg(long)]
        max_length: Option<usize>,
        /// Only squarefree sequences
        #[arg(long)]
        squarefree: bool,
    },
    /// Davenport constant by exhaustive search
    Davenport { group: String },
    /// Minimum f(S) over zero-sum free S of each length
    FgTable {
        group: String,
        /// Largest length r (default: D(G) - 1)
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Classify every zero-sum free S with f(S) <= 2|S| - 1
    Audit { group: String },
    /// Run one registered structural check
    VerifyLemma {
        group: String,
        /// Check id (see --lemma list)
        #[arg(long)]
        lemma: String,
    },
    /// Run every registered check plus the classification audit
    VerifyAll { group: String },
}

/// Failure categories mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Cap(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OrderCapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub struct Outcome {
    pub body: String,
    pub violations: bool,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let workers = cli.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let parse_group = |g: &str| -> Result<Arc<Group>, Failure> {
        Ok(Arc::new(Group::parse_with_cap(g, cli.order_cap)?))
    };
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze { group, sequence } => {
            report::analyze(&parse_group(group)?, sequence, fmt)
        }
        Command::Enumerate {
            group,
            max_length,
            squarefree,
        } => report::enumerate(&parse_group(group)?, *max_length, *squarefree, workers, fmt),
        Command::Davenport { group } => report::davenport(&parse_group(group)?, workers, fmt),
        Command::FgTable { group, max_length } => {
            report::fg_table(&parse_group(group)?, *max_length, workers, fmt)
        }
        Command::Audit { group } => report::audit(&parse_group(group)?, workers, fmt),
        Command::VerifyLemma { group, lemma } => {
            report::verify_lemma(&parse_group(group)?, lemma, workers, fmt)
        }
        Command::VerifyAll { group } => report::verify_all(&parse_group(group)?, workers, fmt),
    }
}

/// Writes the report (or a diagnostic) and returns the exit code.
fn finish(cli: &Cli, result: Result<Outcome, Failure>) -> u8 {
    match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.body),
                None => std::io::stdout().write_all(outcome.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("zsl: cannot write report: {e}");
                return 2;
            }
            u8::from(outcome.violations)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("zsl: {msg}");
            2
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("zsl: {msg} (raise it with --order-cap or ZSL_ORDER_CAP)");
            3
        }
        Err(Failure::Io(e)) => {
            eprintln!("zsl: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    ExitCode::from(finish(&cli, result))
}
