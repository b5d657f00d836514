//! `rscn`: build, cache, verify and extract the type C_n operators.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 usage error, 3 internal error.

mod cache;
mod config;
mod extract;
mod print;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "rscn", version, about = "Exact and modular checks for the type C_n Ruijsenaars-Schneider operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named check, or `all`, and report pass/fail.
    Verify(verify::VerifyArgs),
    /// Build an operator and print it.
    Print(print::PrintArgs),
    /// Tabulate the coefficients of the spin-shift operator D.
    Extract(extract::ExtractArgs),
}

/// A failure outside the checks themselves.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Internal(e.to_string())
    }
}

/// Writes to stdout; a closed pipe (`rscn print B | head`) is not an error.
pub fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Verify(a) => verify::run(a),
        Command::Print(a) => print::run(a),
        Command::Extract(a) => extract::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
