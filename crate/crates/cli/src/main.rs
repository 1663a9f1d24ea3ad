//! `interlink` command-line entry point.

mod args;
mod commands;
mod failure;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match &cli.command {
        Command::Render(a) => (a.format, commands::render_cmd(a)),
        Command::Lint(a) => (a.format, commands::lint_cmd(a)),
        Command::Stats(a) => (a.format, commands::stats_cmd(a)),
    };
    let code = match result {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = match format {
                Format::Text => out.write_all(report.text.as_bytes()),
                Format::Json => writeln!(out, "{}", pretty(&report.json)),
            };
            report.code
        }
        Err(failure) => {
            match format {
                Format::Text => eprintln!("{failure}"),
                Format::Json => println!("{}", pretty(&failure.to_json())),
            }
            failure.code
        }
    };
    ExitCode::from(code)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}
