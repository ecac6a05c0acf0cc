//! `rls`: mine robust local subgraphs, run density baselines, generate
//! synthetic graphs and evaluate results.

mod args;
mod baseline;
mod eval;
mod gen;
mod mine;
mod output;
mod stats;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Mine(a) => mine::run(a, cli.json),
        Command::Baseline(a) => baseline::run(a, cli.json),
        Command::Gen(a) => gen::run(a, cli.json),
        Command::Eval(a) => eval::run(a, cli.json),
        Command::Stats(a) => stats::run(a, cli.json),
    }
}

fn report_error(json: bool, kind: &str, message: &str) {
    if json {
        eprintln!("{}", serde_json::json!({ "error": message, "kind": kind }));
    } else {
        eprintln!("error: {message}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
                || !std::env::args().any(|a| a == "--json")
            {
                e.exit();
            }
            report_error(true, "usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.jobs {
        Some(0) => Err(anyhow::anyhow!("--jobs must be at least 1")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(cli.json, "runtime", &format!("{e:#}"));
            ExitCode::FAILURE
        }
    }
}
