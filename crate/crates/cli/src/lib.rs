//! The `zlab` command-line tool.

pub mod args;
pub mod cache;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use args::{Cli, Format};
use cache::{CacheEntry, CacheError, SCHEMA_VERSION};
use report::{ReportError, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_CACHE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    CapExhausted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_OK,
            Status::Fail => EXIT_CHECK_FAILED,
            Status::CapExhausted => EXIT_CAP,
        }
    }
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: &'static str,
    pub text: Vec<String>,
    pub table: Table,
    pub status: Status,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] zlab_core::Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Input(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(zlab_core::Error::ResourceCap { .. }) => EXIT_CAP,
            RunError::Cache(_) => EXIT_CACHE,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, RunError> {
    if (cli.from_cache || cli.verify_cache) && cli.cache.is_none() {
        return Err(RunError::Input("--from-cache and --verify-cache need --cache".into()));
    }
    let key = json!({ "command": &cli.command, "seed": cli.seed });
    let version = env!("CARGO_PKG_VERSION");

    let (report, mut code) = if cli.from_cache {
        let path = cli.cache.as_deref().expect("checked above");
        let entry = cache::lookup(path, &key)?;
        if entry.tool_version != version {
            let _ = writeln!(
                err,
                "warning: divergence possible, record written by version {} (now {version})",
                entry.tool_version
            );
        }
        let report = Report {
            name: "cached",
            text: entry.text,
            table: entry.table,
            status: entry.status,
        };
        let code = report.status.exit_code();
        (report, code)
    } else {
        let report = commands::run(&cli.command, cli.seed)?;
        let code = report.status.exit_code();
        (report, code)
    };

    write_report(&report, cli.format, cli.seed, out, err)?;

    if !cli.from_cache {
        if let Some(path) = cli.cache.as_deref() {
            if cli.verify_cache {
                let cached = cache::lookup(path, &key)?;
                if cached.text != report.text || cached.table != report.table || cached.status != report.status {
                    let _ = writeln!(err, "divergence: results differ from the cached record");
                    code = EXIT_CHECK_FAILED;
                } else {
                    let _ = writeln!(err, "cache: results match");
                }
            } else {
                cache::append(
                    path,
                    &CacheEntry {
                        schema_version: SCHEMA_VERSION,
                        tool_version: version.to_string(),
                        key,
                        status: report.status,
                        text: report.text.clone(),
                        table: report.table.clone(),
                    },
                )?;
            }
        }
    }
    Ok(code)
}

fn write_report(report: &Report, format: Format, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Input(format!("write failed: {e}"));
    match format {
        Format::Text => {
            writeln!(out, "# zlab {} seed={seed}", report.name).map_err(io)?;
            for line in &report.text {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Format::Csv | Format::Json => {
            let _ = writeln!(err, "# zlab {} seed={seed}", report.name);
            out.write_all(report.table.render(format)?.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}
