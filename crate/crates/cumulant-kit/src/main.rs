use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;
use std::str::FromStr;

use cumulant_kit::cli::{
    cmd_compare, cmd_cumulants, cmd_verify, Method, OutputFormat, RunConfig, VerifySuite,
};
use cumulant_kit::Error;

/// Cumulants of probability distributions, by several independent methods.
#[derive(Parser)]
#[command(name = "cumulant-kit", version, about)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute cumulants of a distribution with the selected methods
    Cumulants(RunArgs),
    /// Cross-check methods pairwise against tolerances (exit 1 on failure)
    Compare(RunArgs),
    /// Run a named verification suite: combinatorics, shuffle, hoeffding, mrl
    Verify {
        /// Suite name
        suite: String,
        #[command(flatten)]
        args: VerifyArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Distribution: uniform01 | exponential1 | stdnormal |
    /// twopoint:p,x0,x1 | samples:<path> | grid:<path>
    #[arg(long)]
    dist: String,
    /// Highest cumulant order to report
    #[arg(long, default_value_t = 4)]
    max_order: usize,
    /// Comma-separated subset of moments,truncated,theorem1,factorized,mrl
    #[arg(long, value_delimiter = ',', default_values_t = ["truncated".to_string(), "theorem1".to_string()])]
    methods: Vec<String>,
    /// Tail mass left outside the truncated support
    #[arg(long, default_value_t = 1e-10)]
    eps_tail: f64,
    /// Grid resolution (odd, at least 1001)
    #[arg(long, default_value_t = 20001)]
    grid_points: usize,
    /// Output format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    /// Seed for any Monte Carlo checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for compare
    #[arg(long, default_value_t = 1e-3)]
    rel_tol: f64,
    /// Absolute tolerance for compare (near-zero values)
    #[arg(long, default_value_t = 1e-5)]
    abs_tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1e-10)]
    eps_tail: f64,
    #[arg(long, default_value_t = 20001)]
    grid_points: usize,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run_config_from(args: &RunArgs) -> Result<RunConfig, Error> {
    let methods = args
        .methods
        .iter()
        .map(|m| Method::from_str(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunConfig {
        dist_spec: args.dist.clone(),
        max_order: args.max_order,
        methods,
        eps_tail: args.eps_tail,
        grid_points: args.grid_points,
        output_format: OutputFormat::from_str(&args.format)?,
        seed: args.seed,
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
    })
}

/// Exit codes: 0 success, 1 tolerance failure, 2 usage or parse error,
/// 3 numerical guard.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Guard(_) | Error::OutOfRange { .. } | Error::Model(_) | Error::MemoryBudget { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = CliArgs::parse();
    let outcome = match &cli.command {
        Command::Cumulants(args) => run_config_from(args).and_then(|cfg| cmd_cumulants(&cfg)),
        Command::Compare(args) => run_config_from(args).and_then(|cfg| cmd_compare(&cfg)),
        Command::Verify { suite, args } => VerifySuite::from_str(suite).and_then(|suite| {
            let cfg = RunConfig {
                eps_tail: args.eps_tail,
                grid_points: args.grid_points,
                output_format: OutputFormat::from_str(&args.format)?,
                seed: args.seed,
                ..RunConfig::default()
            };
            cmd_verify(suite, &cfg)
        }),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
