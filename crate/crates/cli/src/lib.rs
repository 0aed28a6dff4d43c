//! Command-line front end for `qherm-core`: argument parsing, JSON/CSV
//! reports and the acceptance suite.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fixture;
pub mod output;
pub mod setup;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::json;

use cli::{Cli, Command};
use error::{exit, CliError, CliResult};
use output::{Outcome, Status};
use verify::Suite;

/// Runs one invocation and returns the process exit status.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<u8> {
    let opts = &cli.opts;
    if let Some(n) = opts.parallel {
        if n == 0 {
            return Err(CliError::Usage("--parallel must be at least 1".into()));
        }
        // fails only if a pool already exists, which is fine to keep
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let name = cli.command.name();
    let (outcome, timings, code) = match cli.command {
        Command::Variety { action } => plain(commands::variety(action, opts)?),
        Command::Code { action } => plain(commands::code(action, opts)?),
        Command::Sss { action } => plain(commands::sss(action, opts)?),
        Command::VerifyAll => verify_all(opts)?,
    };
    let mut w: Box<dyn Write> = match &opts.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    output::render(&mut w, &name, opts, &outcome, timings.as_ref())?;
    w.flush()?;
    Ok(code)
}

fn plain(o: Outcome) -> (Outcome, Option<serde_json::Value>, u8) {
    let code = if o.status == Status::Fail {
        exit::FAIL
    } else {
        exit::PASS
    };
    (o, None, code)
}

fn verify_all(opts: &cli::Opts) -> CliResult<(Outcome, Option<serde_json::Value>, u8)> {
    let suite = Suite {
        budget: setup::budget(opts),
        modulus: opts.modulus.clone().map(|m| (opts.q, m)),
    };
    suite.check_modulus()?;
    let results = suite.run(|r| {
        eprintln!(
            "{:<7} {:>2}  {:<28} {:>8.2}s  {}",
            r.status.label(),
            r.id,
            r.title,
            r.millis as f64 / 1000.0,
            r.detail
        );
    });
    let status = if results.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if results.iter().any(|r| r.status == Status::Skipped) {
        Status::Skipped
    } else {
        Status::Pass
    };
    let code = match status {
        Status::Pass => exit::PASS,
        Status::Fail => exit::FAIL,
        Status::Skipped => exit::BUDGET,
    };
    let mut table = output::Table::new(&["criterion", "title", "status", "detail"]);
    for r in &results {
        table.row([
            r.id.to_string(),
            r.title.to_string(),
            r.status.label().to_string(),
            r.detail.clone(),
        ]);
    }
    let timings = json!(results.iter().map(|r| [r.id as u128, r.millis]).collect::<Vec<_>>());
    let outcome = Outcome {
        field: None,
        result: json!({ "criteria": results }),
        table,
        status,
    };
    Ok((outcome, Some(timings), code))
}
