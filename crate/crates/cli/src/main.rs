use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bosonic_ssr_cli::{emit, list_experiments, run, CliError, Format, Overrides, ScenarioSpec};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "bosonic-ssr",
    version,
    about = "Run bosonic-ssr scenario files"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Args {
    #[command(subcommand)]
    command: Option<Command>,
    /// Scenario file (JSON).
    scenario: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// structured or table.
    #[arg(long, default_value = "table")]
    format: String,
    /// Replace every tolerance of the experiment.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List registered experiments with their parameters and tolerances.
    List,
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(Command::List) = args.command {
        print!("{}", list_experiments());
        return ExitCode::SUCCESS;
    }
    let Some(path) = args.scenario else {
        eprintln!("error: a scenario file or the `list` subcommand is required");
        return ExitCode::from(2);
    };
    let format: Format = match args.format.parse() {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    if let Some(t) = args.tol {
        if !(t.is_finite() && t >= 0.0) {
            eprintln!("error: --tol must be a nonnegative number");
            return ExitCode::from(2);
        }
    }
    let spec = match ScenarioSpec::load(&path) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let report = match run(
        &spec,
        Overrides {
            tol: args.tol,
            seed: args.seed,
        },
    ) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let bytes = emit(&report, format);
    let written = match &args.out {
        Some(out) => std::fs::write(out, &bytes).map_err(|source| CliError::Io {
            path: out.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
