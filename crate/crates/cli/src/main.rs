mod args;
mod commands;
mod render;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Outcome;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Connection { .. } => "connection",
        Command::Curvature { .. } => "curvature",
        Command::Ricci { .. } => "ricci",
        Command::Scalar { .. } => "scalar",
        Command::Soliton { .. } => "soliton",
        Command::Crosscheck { .. } => "crosscheck",
        Command::Theorems { .. } => "theorems",
        Command::PaperExample { .. } => "paper-example",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    };
    let (text, code) = match outcome {
        Outcome::Raw(text) => (text, 0),
        Outcome::Written => return ExitCode::SUCCESS,
        Outcome::Document { data, report } => {
            let name = command_name(&cli.command);
            let text = match cli.format {
                Format::Json => render::json(name, &data, &report),
                Format::Table => {
                    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
                    render::table(name, &data, &report, color)
                }
            };
            (text, if report.is_consistent() { 0 } else { 1 })
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
