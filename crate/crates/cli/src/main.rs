mod args;
mod commands;
mod output;

use std::process::ExitCode;

use bouncer_core::BouncerError;
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

const EXIT_CONFIG: u8 = 2;
const EXIT_VALIDITY: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;
const EXIT_VERIFY: u8 = 5;

fn exit_code(e: &BouncerError) -> u8 {
    match e {
        BouncerError::Config(_)
        | BouncerError::UnknownStrategy { .. }
        | BouncerError::Domain(_)
        | BouncerError::BasisTooSmall { .. } => EXIT_CONFIG,
        BouncerError::Validity { .. } => EXIT_VALIDITY,
        BouncerError::Convergence { .. }
        | BouncerError::Truncation { .. }
        | BouncerError::Quadrature { .. }
        | BouncerError::NoRoot(_)
        | BouncerError::Eigen(_) => EXIT_CONVERGENCE,
        BouncerError::Consistency(_) => EXIT_VERIFY,
        BouncerError::Io(_) | BouncerError::Csv(_) | BouncerError::Json(_) => 1,
    }
}

/// `BOUNCER_THREADS` caps the global rayon pool.
fn configure_threads() -> Result<(), BouncerError> {
    let Ok(text) = std::env::var("BOUNCER_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| BouncerError::Config(format!("BOUNCER_THREADS must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| BouncerError::Config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Spectrum(a) => commands::cmd_spectrum(a),
        Command::Classical(a) => commands::cmd_classical(a),
        Command::Estimate(a) => commands::cmd_estimate(a),
        Command::Elements(a) => commands::cmd_elements(a),
        Command::Verify(a) => commands::cmd_verify(a),
    });
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => {
            eprintln!("bouncer: verification failed");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => {
            eprintln!("bouncer: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
