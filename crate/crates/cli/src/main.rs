//! `otoc`: compile trace-estimation circuits into correlator instances,
//! synthesize one-clean-qubit circuits, sample them, and verify the whole
//! pipeline against exact oracles.
//!
//! Exit codes: 0 success, 2 verification failure, 3 input or format error,
//! 4 dimension or term cap exceeded.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use thiserror::Error;

mod commands;
mod manifest;
mod verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] otoc_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                otoc_core::Error::CapExceeded { .. }
                | otoc_core::Error::SupportTooLarge(_, _)
                | otoc_core::Error::TermCapExceeded(_, _),
            ) => 4,
            _ => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "otoc", version, about = "One-clean-qubit correlator toolkit")]
struct Cli {
    /// Cap on worker threads; results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a trace-estimation circuit into a 2k-point correlator instance.
    CompileReduction {
        /// Pair count k: any power of two, or 3.
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize the one-clean-qubit circuit for an instance.
    BuildDqc1 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Measure the imaginary part instead of the real part.
        #[arg(long)]
        imag: bool,
        /// Use the single-sided construction even for even k.
        #[arg(long)]
        fallback: bool,
    },
    /// Estimate the correlator of an instance by shot sampling.
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        fail: f64,
        #[arg(long)]
        seed: u64,
        /// Use the exact p0 oracle per term instead of sampling.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample (or exactly evaluate) a one-clean-qubit circuit.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, required_unless_present = "exact")]
        shots: Option<u64>,
        #[arg(long, required_unless_present = "exact")]
        seed: Option<u64>,
        /// Report the exact 0-outcome probability instead of sampling.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a first-order product-formula circuit for a spin chain.
    Trotterize {
        #[arg(long, value_parser = ["ising", "xxz"])]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        #[arg(long, default_value_t = 1.0)]
        field: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure gate and shot throughput on seeded workloads.
    Bench {
        #[arg(long)]
        seed: u64,
    },
    /// Check the reduction tables, exact identities and builder contracts.
    VerifyAppendix {
        #[arg(long)]
        seed: u64,
    },
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::CompileReduction { k, input, out } => {
            commands::compile_reduction(k, &input, &out)?;
            Ok(0)
        }
        Command::BuildDqc1 {
            input,
            out,
            imag,
            fallback,
        } => {
            commands::build_dqc1(&input, &out, imag, fallback)?;
            Ok(0)
        }
        Command::Estimate {
            input,
            eps,
            fail,
            seed,
            exact,
            out,
        } => {
            commands::estimate(&input, eps, fail, seed, exact, &out)?;
            Ok(0)
        }
        Command::Simulate {
            input,
            shots,
            seed,
            exact,
            out,
        } => {
            commands::simulate(&input, shots, seed, exact, &out)?;
            Ok(0)
        }
        Command::Trotterize {
            model,
            n,
            t,
            steps,
            coupling,
            field,
            delta,
            out,
        } => {
            commands::trotterize_cmd(&model, n, t, steps, coupling, field, delta, &out)?;
            Ok(0)
        }
        Command::Bench { seed } => {
            commands::bench(seed)?;
            Ok(0)
        }
        Command::VerifyAppendix { seed } => verify::verify_appendix(seed),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let threads = cli.threads;
    let run = || match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };

    let code = match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
        None => run(),
    };
    std::process::exit(code);
}
