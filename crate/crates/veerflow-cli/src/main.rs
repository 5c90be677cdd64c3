mod batch;
mod cli;
mod commands;
mod input;

use clap::Parser;
use cli::{Cli, Command};
use commands::Output;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use veerflow_core::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wraps a payload with the provenance header.
pub fn document(command: &str, result: Value) -> Value {
    json!({ "veerflow": VERSION, "command": command, "result": result })
}

pub fn error_document(command: &str, e: &Error) -> Value {
    json!({
        "veerflow": VERSION,
        "command": command,
        "error": { "code": e.code(), "exit": e.exit_code(), "message": e.to_string() },
    })
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default() + "\n"
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Info(_) => "info",
        Command::Validate(_) => "validate",
        Command::Graphs { .. } => "graphs",
        Command::Poly { .. } => "poly",
        Command::Cone { .. } => "cone",
        Command::Restrict { .. } => "restrict",
        Command::Growth { .. } => "growth",
        Command::Scan { .. } => "scan",
        Command::Accumulate { .. } => "accumulate",
        Command::Plane { .. } => "plane",
        Command::Resolve { .. } => "resolve",
        Command::Batch { .. } => "batch",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let outcome = match &cli.command {
        Command::Batch { manifest, out } => batch::run(manifest, out).map(Output::Json),
        cmd => commands::execute(cmd, Path::new(".")),
    };
    match outcome {
        Ok(Output::Json(v)) => {
            let _ = std::io::stdout().write_all(render(&document(name, v)).as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            let _ = std::io::stdout().write_all(t.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stderr().write_all(render(&error_document(name, &e)).as_bytes());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
