use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lefschetz_core::catalog::{catalog_text, ENTRIES};
use lefschetz_core::pipeline::{run_pipeline, Overrides};
use lefschetz_core::report::explain;
use lefschetz_core::scenario::{parse_scenario, ScenarioError};

#[derive(Parser, Debug)]
#[command(name = "lefschetz", version, about = "Exact checks of orbifold atlases, taut metrics and Hard Lefschetz on global quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file, or a built-in scenario as `catalog:<name>`.
    Run {
        target: String,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Tolerance for the floating-point taut checks.
        #[arg(long)]
        tol: Option<f64>,
        /// Sample count for atlas, Seifert and taut checks.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// List built-in scenarios.
    ListCatalog,
    /// Print the scenario text of a built-in scenario.
    Show { name: String },
    /// Describe what a report line checks.
    Explain { check_id: String },
}

fn load(target: &str) -> Result<String, String> {
    match target.strip_prefix("catalog:") {
        Some(name) => catalog_text(name).map_err(|e| e.to_string()),
        None => {
            let path = PathBuf::from(target);
            std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { target, format, tol, samples } => {
            if tol.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
                eprintln!("error: --tol must be a positive number");
                return ExitCode::from(2);
            }
            let text = match load(&target) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let mut scenario = match parse_scenario(&text) {
                Ok(s) => s,
                Err(e) => {
                    match &e {
                        ScenarioError::MissingSection { .. } => eprintln!("rejected: {e}"),
                        _ => eprintln!("error: {target}: {e}"),
                    }
                    return ExitCode::from(2);
                }
            };
            Overrides { tol, samples }.apply(&mut scenario);
            let report = run_pipeline(&scenario);
            match format {
                Format::Human => print!("{}", report.human()),
                Format::Machine => print!("{}", report.machine()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::ListCatalog => {
            let width = ENTRIES.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            for (name, about) in ENTRIES {
                println!("{name:width$}  {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Show { name } => match catalog_text(&name) {
            Ok(t) => {
                print!("{t}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Explain { check_id } => match explain(&check_id) {
            Some(text) => {
                println!("{check_id}: {text}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: no check matches '{check_id}'");
                ExitCode::from(2)
            }
        },
    }
}
