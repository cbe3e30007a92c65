use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use projlat_cli::fixtures;
use projlat_cli::formats;
use projlat_cli::suites::{run_suites, Suite, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Deterministic check suites and fixtures over finite projection lattices.
#[derive(Parser)]
#[command(name = "projlat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites and emit a JSON report.
    ///
    /// Exits 0 when every check passes, 2 when any check fails, and 1 on
    /// usage or configuration errors.
    Run(RunArgs),
    /// Write one seeded JSON fixture described by an inline spec.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Base seed for all sampling.
    #[arg(long, env = "PROJLAT_SEED", default_value_t = 42)]
    seed: u64,
    /// Suite to run (repeatable); defaults to all eight.
    #[arg(long = "suite", value_name = "NAME")]
    suite: Vec<String>,
    /// Algebra override: inline dims like "3,4" or a JSON file path.
    #[arg(long, value_name = "FILE|DIMS")]
    algebra: Option<String>,
    /// Trial-count override applied to every selected suite.
    #[arg(long, value_name = "N")]
    samples: Option<u64>,
    /// Factor applied to every check tolerance.
    #[arg(long, value_name = "X", default_value_t = 1.0)]
    tol_scale: f64,
    /// Report path; without it the report itself goes to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Base seed for sampled fixtures.
    #[arg(long, env = "PROJLAT_SEED", default_value_t = 42)]
    seed: u64,
    /// Fixture spec, e.g. "halmos-pair a=0.75 n=2" or "random-proj n=5 rank=3".
    #[arg(long, value_name = "SPEC")]
    spec: String,
    /// Output file; defaults to a spec-derived name in the working directory.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Gen(args) => gen(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut config = SuiteConfig::new(args.seed);
    if !args.suite.is_empty() {
        config.suites = args
            .suite
            .iter()
            .map(|name| {
                Suite::parse(name).ok_or_else(|| {
                    let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    anyhow!("unknown suite {name:?}; known suites: {}", known.join(", "))
                })
            })
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(spec) = &args.algebra {
        config.algebra = Some(formats::parse_algebra_arg(spec)?);
    }
    config.samples = args.samples;
    config.tol_scale = args.tol_scale;

    let report = run_suites(&config)?;
    let text = formats::to_json_string(&report);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)
                .with_context(|| format!("writing {}", path.display()))?;
            for check in &report.checks {
                println!(
                    "{} {} (worst {:.3e}, tol {:.3e})",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.check_id,
                    check.worst_residual,
                    check.tolerance
                );
            }
            println!("report written to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let path = fixtures::gen_instance(args.seed, &args.spec, args.out.as_deref())?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
