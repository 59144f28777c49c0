mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// A domain failure, reported as one JSON line on stderr with exit code 1.
#[derive(Debug)]
pub struct AppError {
    pub kind: &'static str,
    pub message: String,
}

impl AppError {
    pub fn new(kind: &'static str, message: impl ToString) -> Self {
        AppError { kind, message: message.to_string() }
    }
}

macro_rules! error_kind {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for AppError {
            fn from(e: $ty) -> Self {
                AppError::new($kind, e)
            }
        })*
    };
}

error_kind! {
    hilbert_hecke::field::FieldError => "field",
    hilbert_hecke::hecke::HeckeError => "hecke",
    hilbert_hecke::measures::MeasureError => "measure",
    hilbert_hecke::kloosterman::KloostermanError => "kloosterman",
    hilbert_hecke::equidist::EquidistError => "equidist",
    std::io::Error => "io",
    serde_json::Error => "json",
    csv::Error => "csv",
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help / --version
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            return fail(AppError::new("threads", e));
        }
    }
    let bytes = match commands::dispatch(&cli) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let written = match &cli.global.out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.into()),
    }
}

fn fail(e: AppError) -> ExitCode {
    let line = serde_json::json!({ "error": e.kind, "message": e.message });
    eprintln!("{line}");
    ExitCode::from(1)
}
