mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, missing parameters, unreadable config: exit 1.
    Usage(String),
    /// The parameters are well-formed but the operation is undefined for
    /// them: exit 2.
    Domain(sdic_core::Error),
}

fn common(cmd: &Command) -> &args::Common {
    match cmd {
        Command::Classify { common, .. }
        | Command::VsIc { common }
        | Command::VsZic { common }
        | Command::StrongIc { common }
        | Command::StrongZic { common }
        | Command::Weak { common, .. }
        | Command::Sweep { common, .. }
        | Command::Segment { common, .. }
        | Command::ValidateMc { common, .. } => common,
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SDIC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SDIC_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let out = commands::run(&cli.command)?;
    if let (Some(path), Some(csv)) = (&common(&cli.command).out, &out.csv) {
        std::fs::write(path, csv).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = serde_json::to_string_pretty(&out.json).expect("serializable");
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(e)) => {
            let report = json!({
                "schema_version": sdic_core::sweep::SCHEMA_VERSION,
                "error": e.kind(),
                "message": e.to_string(),
            });
            eprintln!("{report}");
            ExitCode::from(2)
        }
    }
}
