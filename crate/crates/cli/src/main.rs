mod args;
mod config;
mod report;
mod sweep;
mod verify;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bosonic_lsi::par::Execution;
use clap::Parser;

use args::{Cli, Command, Format};
use config::Resolver;
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bosonic_lsi::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(bosonic_lsi::Error::InvalidParameter { .. }) => 2,
            _ => 1,
        }
    }
}

struct Run {
    report: Report,
    format: Format,
    out: Option<PathBuf>,
}

fn execute(cli: Cli) -> Result<Run, CliError> {
    let file = match &cli.config {
        Some(path) => config::parse_file(path)?,
        None => BTreeMap::new(),
    };
    let mut r = Resolver::new(file);
    let sequential = r.flag("sequential", cli.sequential)?;
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let out_dir: Option<PathBuf> = r
        .optional("out-dir", cli.out_dir.map(|p| p.display().to_string()))?
        .map(PathBuf::from);

    let (command, stem, default_format, checks, table, seed) = match cli.command {
        Command::Alpha(a) => {
            let o = sweep::alpha(a, &mut r)?;
            (
                "alpha".to_string(),
                "alpha".to_string(),
                Format::Csv,
                o.checks,
                Some(o.table),
                o.seed,
            )
        }
        Command::Verify(v) => {
            let name = v.suite.name();
            let (common, plans) = verify::resolve(v, &mut r, exec)?;
            let checks = verify::run_plans(&common, &plans)?;
            (
                format!("verify {name}"),
                format!("verify-{name}"),
                Format::Json,
                checks,
                None,
                Some(common.seed),
            )
        }
        Command::Sweep(s) => {
            let name = s.kind.name();
            let o = sweep::sweep(s, &mut r, exec)?;
            (
                format!("sweep {name}"),
                format!("sweep-{name}"),
                Format::Csv,
                o.checks,
                Some(o.table),
                o.seed,
            )
        }
    };
    let format = r.value("format", cli.format, default_format)?;
    let echo = r.finish(&command)?;
    let report = Report::new(command, echo, seed, checks, table);
    let out = out_dir.map(|d| d.join(format!("{stem}.{}", format.extension())));
    Ok(Run { report, format, out })
}

fn emit(run: &Run) -> Result<(), CliError> {
    let text = match run.format {
        Format::Json => run.report.to_json(),
        Format::Csv => run.report.to_csv(),
    };
    if let Some(path) = &run.out {
        let io = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        std::fs::write(path, &text).map_err(io)?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|source| CliError::Io {
            path: "stdout".into(),
            source,
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = execute(cli).and_then(|run| emit(&run).map(|_| run));
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(run) => {
            let s = &run.report.summary;
            eprintln!(
                "{}: {} passed, {} failed, {} inconclusive; wall-clock {elapsed:.2}s",
                run.report.command, s.passed, s.failed, s.inconclusive
            );
            for c in run.report.checks.iter().filter(|c| !c.pass) {
                eprintln!("  {:?} {}: {}", c.status, c.name, c.note.as_deref().unwrap_or(""));
            }
            ExitCode::from(run.report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
