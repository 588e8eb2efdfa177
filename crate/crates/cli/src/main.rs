//! `sim` — scenario runner for the collective-decay library.
//!
//! Three commands: `sim run <config>` executes a key=value config file,
//! `sim preset <name> [key=value]...` runs a named preset with overrides,
//! and `sim list` prints the presets. Every run writes `trajectory.csv`,
//! `report.json`, and `manifest.json` into the output directory (`out=`,
//! default `runs/<scenario>`). Exit codes: 0 on success, 2 for validation
//! and usage errors, 3 for numerical failures.

mod config;
mod output;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use collective_decay::{Error, Result};

use crate::config::Config;

#[derive(Parser)]
#[command(
    name = "sim",
    version,
    about = "Collective-decay scenarios: dark-state storage, squeezed-bath purification, \
             and dispersive-cavity reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a key=value config file
    Run {
        /// Path to the config file; it must contain a `scenario=` line
        config: PathBuf,
    },
    /// Run a named preset, optionally overriding its parameters
    Preset {
        /// Preset name, as shown by `sim list`
        name: String,
        /// key=value overrides applied on top of the preset defaults
        overrides: Vec<String>,
    },
    /// List the available presets
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => Config::from_file(&config).and_then(execute),
        Command::Preset { name, overrides } => {
            Config::from_preset(&name, &overrides).and_then(execute)
        }
        Command::List => {
            print_presets();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sim: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Write to stdout without panicking when the consumer closes the pipe
/// early (`sim ... | head`). Artifacts are on disk before anything is
/// printed, so a closed pipe just ends the run successfully.
fn emit(text: &str) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()) {
        Ok(()) => {}
        Err(e) if e.kind() == ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => {
            eprintln!("sim: cannot write to stdout: {e}");
            std::process::exit(2);
        }
    }
}

fn execute(cfg: Config) -> Result<()> {
    let artifacts = scenarios::run_scenario(&cfg)?;
    let out_dir = PathBuf::from(cfg.str_or("out", &format!("runs/{}", cfg.scenario)));
    output::write_artifacts(&out_dir, &artifacts)?;
    let report = serde_json::to_string_pretty(&artifacts.report)
        .map_err(|e| Error::Parse(format!("serialization: {e}")))?;
    emit(&format!(
        "{}: {} samples -> {}\n{report}\n",
        artifacts.scenario,
        artifacts.rows.len(),
        out_dir.display()
    ));
    Ok(())
}

fn print_presets() {
    let mut text = String::from("presets:\n");
    for (name, note) in scenarios::PRESETS {
        text.push_str(&format!("  {name:<24}{note}\n"));
    }
    emit(&text);
}

/// Validation problems exit with 2, numerical failures with 3, matching
/// the distinction between "the input was wrong" and "the run went wrong".
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::Dimension(_)
        | Error::Normalization(_)
        | Error::Size(_)
        | Error::Site(_)
        | Error::Permutation(_)
        | Error::Subset(_)
        | Error::Physicality(_)
        | Error::Domain(_)
        | Error::Singularity(_) => 2,
        Error::Stiffness(_)
        | Error::Integrity(_)
        | Error::Convergence(_)
        | Error::Extraction(_)
        | Error::Eigenstate(_)
        | Error::Linalg(_) => 3,
    }
}
