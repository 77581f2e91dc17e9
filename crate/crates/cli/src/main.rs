//! `isoindex`: JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 mathematical failure (the payload is still
//! printed), 2 unreadable or invalid input.

mod commands;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use commands::{CliError, NumericArgs, Outcome};

#[derive(Parser)]
#[command(name = "isoindex", version, about = "Fixed point index sequences of R^3 homeomorphisms")]
struct Cli {
    /// Input JSON file, or `-` for standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Output file, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Seed for the sampled property checks of realized maps.
    #[arg(long, global = true, default_value_t = isoindex_core::realization::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a periodic sequence against the Dold congruences.
    Check,
    /// Coefficients and roots-of-unity form of a sequence, or the sequence of a decomposition.
    Decompose,
    /// Plan a radial homeomorphism realizing a sequence and verify it.
    Realize,
    /// Fixed point index of the n-th iterate from the degree of the displacement.
    IndexNumeric {
        /// Catalog map id; without it a plan is read from the input.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        level: Option<u32>,
        /// Use the inverse map.
        #[arg(long)]
        inverse: bool,
    },
    /// Homology of a complex or pair, with Lefschetz numbers when matrices are given.
    Homology {
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Lefschetz numbers and eigenvalue checks of matrices on homology.
    Lefschetz {
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Growth exponent of a sequence, sample list or symbolic catalog map.
    Growth {
        #[arg(long)]
        map: Option<String>,
        /// Number of terms taken from a periodic or symbolic sequence.
        #[arg(long, default_value_t = 30)]
        terms: u64,
    },
}

fn read_input(path: &str) -> Result<Value, CliError> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text)
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text))
    }
    .map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn write_output(path: &str, payload: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(payload)?;
    text.push('\n');
    let res = if path == "-" {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::fs::write(path, text)
    };
    res.map_err(|source| CliError::Write {
        path: path.to_string(),
        source,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check => commands::check(&read_input(&cli.input)?),
        Command::Decompose => commands::decompose(&read_input(&cli.input)?),
        Command::Realize => commands::realize(&read_input(&cli.input)?, cli.seed),
        Command::IndexNumeric {
            map,
            n,
            epsilon,
            level,
            inverse,
        } => {
            let input = match map {
                Some(_) => None,
                None => Some(read_input(&cli.input)?),
            };
            let args = NumericArgs {
                map: map.as_deref(),
                n: *n,
                epsilon: *epsilon,
                level: *level,
                inverse: *inverse,
                seed: cli.seed,
            };
            commands::index_numeric(&args, input.as_ref())
        }
        Command::Homology { n_max } => commands::homology(&read_input(&cli.input)?, *n_max),
        Command::Lefschetz { n_max } => commands::lefschetz(&read_input(&cli.input)?, *n_max),
        Command::Growth { map, terms } => {
            let input = match map {
                Some(_) => None,
                None => Some(read_input(&cli.input)?),
            };
            commands::growth(input.as_ref(), map.as_deref(), *terms)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|o| write_output(&cli.output, &o.payload).map(|()| o.success));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
