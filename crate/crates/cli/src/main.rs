//! `dicon`: command-line access to the digraph container lab.
//!
//! Every command writes one JSON document (manifest, inputs, results,
//! checks) to standard output or `--out`. Exit codes: 0 success, 1 usage,
//! parse or I/O error, 2 precondition, budget or refusal, 3 verification
//! failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicon::Error;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "dicon", version, about = "Exact computations for digraph containers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// m(H), the density condition and C(H).
    Density {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value = "2")]
        a: String,
    },
    /// The density condition e(H')/v(H') <= a/2 with its densest witness.
    ConditionA {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        a: String,
    },
    /// ex_a(n, H) and the extremal classes.
    Ex {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, alias = "N")]
        n: usize,
        #[arg(long, default_value = "2")]
        a: String,
        #[arg(long, default_value = "full")]
        mode: String,
        /// Also write each witness as an edge-list file into this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        witness_cap: usize,
    },
    /// f*(n, H), the number of labelled H-free digraphs.
    CountFree {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, alias = "N")]
        n: usize,
        /// full, orbits, or auto.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// log2 f*(n, H) against ex_2(n, H).
    Ratio {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, alias = "N")]
        n: usize,
    },
    /// Largest weighted size with at most k copies, for k = 0..=k_max.
    Supersat {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, alias = "N")]
        n: usize,
        #[arg(long, default_value = "2")]
        a: String,
        #[arg(long)]
        k_max: u64,
    },
    /// Build D(N, H) and optionally export it.
    Hypergraph {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long = "N", alias = "n")]
        big_n: usize,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Co-degree profile of D(N, H) at a given tau.
    Codegree {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long = "N", alias = "n")]
        big_n: usize,
        #[arg(long)]
        tau: f64,
        /// average or maximum.
        #[arg(long, default_value = "average")]
        normalization: String,
    },
    /// delta(D(N,H), N^(-1/m)/gamma) <= C(H)*gamma over a range of N.
    VerifyLemma {
        #[arg(long)]
        pattern: PathBuf,
        /// `lo..hi` (inclusive) or a comma-separated list.
        #[arg(long = "N-range", alias = "n-range")]
        range: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value = "average")]
        normalization: String,
    },
    /// Build a container family.
    Containers {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long = "N", alias = "n")]
        big_n: usize,
        #[arg(long)]
        eps: String,
        /// Defaults to N^(-1/m(H)).
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Check coverage and sparsity of an exported family.
    VerifyFamily {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        family: PathBuf,
        /// exhaustive or sampled.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gate, build, verify and measure containers end to end.
    Pipeline {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long = "N", alias = "n")]
        big_n: usize,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-container rows beyond this are summarised only.
        #[arg(long, default_value_t = 1000)]
        max_rows: usize,
        /// Largest N for which ex_a(N, H) is computed exactly (at most 7).
        #[arg(long, default_value_t = 6)]
        ex_limit: usize,
    },
}

/// What a command produced: the document and whether its checks passed.
pub struct Outcome {
    pub doc: Value,
    pub failure: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidParameter(_) | Error::Internal(_) => 1,
        Error::Precondition(_)
        | Error::Budget(_)
        | Error::ConditionAFailed { .. }
        | Error::InfiniteDensity { .. } => 2,
        Error::Verification(_) => 3,
    }
}

fn emit(common: &Common, doc: &Value) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(doc).expect("json values serialise");
    text.push('\n');
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let common = cli.common;
    match commands::run(&cli.command, &common) {
        Ok(outcome) => {
            if let Err(msg) = emit(&common, &outcome.doc) {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Core { error, doc }) => {
            let code = exit_code(&error);
            if code != 1 {
                if let Err(msg) = emit(&common, &doc) {
                    eprintln!("error: {msg}");
                    return ExitCode::from(1);
                }
            }
            eprintln!("error: {}", error.to_string().replace('\n', " "));
            ExitCode::from(code)
        }
    }
}
