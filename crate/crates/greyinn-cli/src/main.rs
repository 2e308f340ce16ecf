//! `greyinn` — grey prediction and grey-informed neural network forecasting
//! from the command line.

mod commands;
mod config;
mod data;
mod error;
mod svg;

use clap::{Parser, Subcommand};
use config::{CommonArgs, RunConfig};
use error::CliResult;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "greyinn",
    about = "Small-sample time-series forecasting with grey models and grey-informed neural networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model on the training prefix and write fitted values
    Fit(CommonArgs),
    /// Fit and emit forecasts beyond the training prefix
    Forecast(CommonArgs),
    /// Fit on the first train-split points and score forecasts on the rest
    Evaluate(CommonArgs),
    /// Evaluate all five models side by side
    Compare {
        #[command(flatten)]
        args: CommonArgs,
        /// Also emit chart.svg with actual vs predicted lines
        #[arg(long)]
        svg: bool,
    },
    /// Select the fractional order (alpha, beta) by particle swarm search
    SearchOrder(CommonArgs),
    /// Generate a seeded synthetic series CSV
    Synth {
        /// constant, geometric, or noisy-exp
        kind: String,
        /// Base level (first value)
        #[arg(long, default_value_t = 10.0)]
        c: f64,
        /// Growth ratio per step
        #[arg(long, default_value_t = 1.1)]
        q: f64,
        /// Multiplicative noise level (noisy-exp only)
        #[arg(long, default_value_t = 0.02)]
        sigma: f64,
        /// Number of points
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Noise seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Fit(args) => commands::cmd_fit(&RunConfig::resolve(&args)?),
        Command::Forecast(args) => commands::cmd_forecast(&RunConfig::resolve(&args)?),
        Command::Evaluate(args) => commands::cmd_evaluate(&RunConfig::resolve(&args)?),
        Command::Compare { args, svg } => commands::cmd_compare(&RunConfig::resolve(&args)?, svg),
        Command::SearchOrder(args) => commands::cmd_search_order(&RunConfig::resolve(&args)?),
        Command::Synth {
            kind,
            c,
            q,
            sigma,
            n,
            seed,
            out,
        } => commands::cmd_synth(&kind, c, q, sigma, n, seed, &out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
