mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use rikit::norms::NormDescriptor;
use serde_json::json;

use args::{Cli, Command, Format};
use commands::Failure;

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("RIKIT_THREADS") else {
        return Ok(());
    };
    let n: usize =
        raw.parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("RIKIT_THREADS={raw} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<rikit::report::ExperimentReport, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::VerifyCounterexample { n_max, k } => commands::verify_counterexample(
            *n_max,
            *k,
            seed,
            json!({ "command": "verify-counterexample", "n_max": n_max, "k": k }),
        ),
        Command::AoceaSearch { k_max, depth, n_max } => commands::aocea_search(
            *k_max,
            *depth,
            *n_max,
            seed,
            json!({ "command": "aocea-search", "k_max": k_max, "depth": depth, "n_max": n_max }),
        ),
        Command::SpanDistance { m, budget, norm } => {
            let d = norm.descriptor(NormDescriptor::Lp { p: 2.0 }).map_err(Failure::Config)?;
            let config =
                json!({ "command": "span-distance", "m": m, "budget": budget, "norm": commands::describe(&d) });
            commands::span_distance(*m, *budget, &d, seed, config)
        }
        Command::PropertySuite { instances } => {
            commands::property(*instances, seed, json!({ "command": "property-suite", "instances": instances }))
        }
        Command::Norm { norm, input } => {
            if norm.kind.is_none() {
                return Err(Failure::Config("--kind is required".into()));
            }
            let d = norm.descriptor(NormDescriptor::L1).map_err(Failure::Config)?;
            let text = std::fs::read_to_string(input)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", input.display())))?;
            let config = json!({ "command": "norm", "norm": d, "input": input.display().to_string() });
            commands::norm_of_file(&text, &d, config)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}\n");
            eprintln!("{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let body = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for a in report.failures() {
        eprintln!("FAIL {}: {} vs {}", a.name, a.lhs, a.rhs);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
