//! zetalab: experiment runner for the numerical laboratory. Parses one
//! subcommand, runs it, and writes a single self-describing record.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 numerical failure or
//! I/O, 3 invariant violation from the verify suite.

mod args;
mod commands;
mod config;
mod record;

use clap::Parser;
use commands::{Failure, Resolved};
use record::{emit_csv, emit_json, Cell, RunRecord};
use std::io::Write;
use std::time::Instant;

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let (job, resolved) = match commands::prepare(cli.command) {
        Ok(p) => p,
        Err(f) => return fail(&f),
    };
    if let Err(f) = init_threads(resolved.threads) {
        return fail(&f);
    }
    let mut completed = match commands::execute(job, &resolved) {
        Ok(c) => c,
        Err(f) => return fail(&f),
    };
    finish_record(&mut completed.record, &resolved, started);
    if let Err(f) = write_record(&completed.record, &resolved) {
        return fail(&f);
    }
    if let Some((code, message)) = completed.verdict {
        eprintln!("{message}");
        return code;
    }
    0
}

fn fail(f: &Failure) -> i32 {
    eprintln!("error: {}", f.message());
    f.code()
}

/// --threads, then ZETALAB_THREADS, then however many cores rayon sees.
fn init_threads(requested: Option<usize>) -> Result<(), Failure> {
    let n = match requested {
        Some(n) => Some(n),
        None => match std::env::var("ZETALAB_THREADS") {
            Ok(raw) => Some(raw.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(
                || Failure::Usage(format!("ZETALAB_THREADS must be a positive integer, got {raw:?}")),
            )?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Numerical(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn finish_record(record: &mut RunRecord, resolved: &Resolved, started: Instant) {
    record.config_entry("deterministic", resolved.deterministic);
    record.meta("library-version", Cell::Text(env!("CARGO_PKG_VERSION").to_string()));
    record.meta(
        "precision",
        Cell::Text(
            match resolved.precision {
                args::Precision::Double => "double",
                args::Precision::Extended => "extended",
            }
            .to_string(),
        ),
    );
    if !resolved.deterministic {
        record.meta("wall-time-s", Cell::Num(started.elapsed().as_secs_f64()));
    }
}

fn write_record(record: &RunRecord, resolved: &Resolved) -> Result<(), Failure> {
    let emit = |w: &mut dyn Write| match resolved.format {
        args::OutFormat::Csv => emit_csv(record, w),
        args::OutFormat::Json => emit_json(record, w),
    };
    match &resolved.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            emit(&mut file).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock).map_err(|e| Failure::Io(format!("cannot write stdout: {e}")))
        }
    }
}
