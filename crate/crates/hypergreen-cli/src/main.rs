//! `hypergreen` command-line interface.
//!
//! Exit codes: 0 success, 1 numeric failure (non-convergence or a
//! failed verification check), 2 configuration / parse error.

use clap::{Parser, Subcommand};

use hypergreen_cli::config::RunConfig;
use hypergreen_cli::runner::{self, OutputFormat, RunError};
use hypergreen_cli::verify;

#[derive(Parser)]
#[command(name = "hypergreen", about = "Lauricella-based Dirichlet solver for singular elliptic equations", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path of the TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: String,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Output format.
    #[arg(long, value_name = "FORMAT", default_value = "csv")]
    format: String,
    /// Override of the series relative tolerance.
    #[arg(long, value_name = "X")]
    rel_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate hypergeometric series from the config's [[eval_fa]] items.
    EvalFa {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate kernel quantities from the config's [[eval_q]] items.
    EvalQ {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the Dirichlet problem at the configured probes.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Override of the quadrature level.
        #[arg(long, value_name = "N")]
        level: Option<usize>,
    },
    /// Run the verification suites.
    Verify {
        /// Suite name (hyperfun, kernel, domain, solver, oracle) or `all`.
        #[arg(long, value_name = "SUITE", default_value = "all")]
        suite: String,
        /// Seed of the randomized checks.
        #[arg(long, value_name = "N", default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, RunError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "report" => Ok(OutputFormat::Report),
        other => Err(RunError::Parse(format!(
            "unknown format `{other}` (expected csv or report)"
        ))),
    }
}

fn emit(text: &str, out: &Option<String>) -> Result<(), RunError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Parse(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::EvalFa { common } => {
            let format = parse_format(&common.format)?;
            let cfg = RunConfig::load(&common.config)?;
            let table = runner::run_eval_fa(&cfg, common.rel_tol)?;
            emit(&table.render(format), &common.out)?;
            Ok(0)
        }
        Command::EvalQ { common } => {
            let format = parse_format(&common.format)?;
            let cfg = RunConfig::load(&common.config)?;
            let table = runner::run_eval_q(&cfg, common.rel_tol)?;
            emit(&table.render(format), &common.out)?;
            Ok(0)
        }
        Command::Solve { common, level } => {
            let format = parse_format(&common.format)?;
            let cfg = RunConfig::load(&common.config)?;
            let table = runner::run_solve(&cfg, level, common.rel_tol)?;
            emit(&table.render(format), &common.out)?;
            Ok(0)
        }
        Command::Verify { suite, seed, out } => {
            let names: Vec<&str> = if suite == "all" {
                verify::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut results = Vec::new();
            for name in names {
                results.push((name.to_string(), verify::run_suite(name, seed)?));
            }
            let (text, all_pass) = verify::render_report(&results, seed);
            emit(&text, &out)?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests exit 0; argument errors exit 2.
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
