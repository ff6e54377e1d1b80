//! `modroots`: root-string bounds, d-sequences and simple-root reflections
//! for Cartan data read from TOML files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use modroots_core::report::{cmd_bkj, cmd_dseq, cmd_reflect, cmd_selfcheck, cmd_table};
use modroots_core::{
    parse_cartan, CartanDatum, ExitStatus, ParseOptions, ReportDocument, DEFAULT_RATIONAL_SCAN,
};

#[derive(Parser)]
#[command(name = "modroots", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// B_kj by the closed form and by the recursion; fails if they differ.
    Bkj {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        /// Recursion scan length in characteristic 0.
        #[arg(long = "max-m", default_value_t = DEFAULT_RATIONAL_SCAN)]
        max_m: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The sequence d_{-1}, d_0, ..., d_M for the pair (k, j).
    Dseq {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        /// Last index M [default: 2p - 1, or 20 in characteristic 0].
        #[arg(long = "max-m", allow_negative_numbers = true)]
        max_m: Option<i64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// B_kj for every pair k != j.
    Table {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// New simple roots after reflecting in alpha_k.
    ///
    /// The Cartan matrix of the reflected system is not computed, so the
    /// output cannot be fed back in for a second reflection.
    Reflect {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive closed-form versus recursion check over small fields.
    Selfcheck {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        degrees: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Cartan file (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Reject unreduced or non-canonical matrix entries.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Validation(anyhow::Error),
    Core(modroots_core::Error),
}

impl From<modroots_core::Error> for Failure {
    fn from(e: modroots_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Validation(e)
    }
}

fn load(input: &InputArgs) -> Result<CartanDatum, Failure> {
    let text = fs::read_to_string(&input.input)
        .with_context(|| format!("cannot read {}", input.input.display()))?;
    let options = ParseOptions {
        strict: input.strict,
    };
    parse_cartan(&text, options)
        .map_err(|e| Failure::Validation(anyhow::anyhow!("{}:{e}", input.input.display())))
}

fn emit(report: &ReportDocument, output: &OutputArgs) -> Result<(), Failure> {
    let json = report.to_json();
    match &output.output {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitStatus, Failure> {
    let (report, output) = match command {
        Command::Bkj {
            input,
            k,
            j,
            max_m,
            output,
        } => (cmd_bkj(&load(&input)?, k, j, max_m)?, output),
        Command::Dseq {
            input,
            k,
            j,
            max_m,
            output,
        } => {
            let datum = load(&input)?;
            let p = datum.spec().characteristic();
            let max_m = max_m.unwrap_or(if p == 0 { 20 } else { 2 * p as i64 - 1 });
            (cmd_dseq(&datum, k, j, max_m)?, output)
        }
        Command::Table { input, output } => (cmd_table(&load(&input)?)?, output),
        Command::Reflect { input, k, output } => (cmd_reflect(&load(&input)?, k)?, output),
        Command::Selfcheck {
            primes,
            degrees,
            output,
        } => (cmd_selfcheck(&primes, &degrees)?, output),
    };
    emit(&report, &output)?;
    Ok(report.status())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Validation.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let status = match run(cli.command) {
        Ok(status) => status,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitStatus::Validation
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitStatus::from(&e)
        }
    };
    if status == ExitStatus::Inconsistency {
        eprintln!("error: closed form and recursion disagree");
    }
    ExitCode::from(status.code() as u8)
}
