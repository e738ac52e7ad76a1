//! The `iplus` command-line front end.
//!
//! Every subcommand computes everything in memory first, then writes its
//! files and a JSON report `<command>.json` to the output directory, and
//! echoes the report on stdout.

mod args;
mod commands;
mod config;
mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::{Map, Value};

pub use args::{parse_complex, parse_domain, parse_range, parse_rect, Cli, Command};

use crate::output::{json_bytes, write_atomic};

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "IPLUS_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub(crate) enum CliError {
    /// Bad flags, unparsable expressions or inputs: exit 2.
    Usage(String),
    /// Filesystem trouble while reading inputs or writing outputs: exit 1.
    Io(String),
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

/// What a subcommand produced.
pub(crate) struct Outcome {
    pub name: String,
    pub passed: bool,
    pub report: Map<String, Value>,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    pub fn new(name: impl Into<String>, passed: bool, report: Value) -> Self {
        let report = match report {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Self {
            name: name.into(),
            passed,
            report,
            files: Vec::new(),
        }
    }

    pub fn file(mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        self.files.push((name.into(), bytes.into()));
        self
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::apply(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out_dir = resolve_out_dir(cli.out_dir.as_deref());
    let outcome = match commands::dispatch(&cli.command, &out_dir) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_CHECK_FAILED;
        }
    };
    match emit(outcome, &out_dir) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_CHECK_FAILED
        }
    }
}

fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("."),
    }
}

fn emit(outcome: Outcome, out_dir: &Path) -> Result<bool, String> {
    let Outcome {
        name,
        passed,
        mut report,
        files,
    } = outcome;
    report.insert("command".into(), Value::String(name.clone()));
    report.insert("passed".into(), Value::Bool(passed));
    report.insert(
        "version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    let mut names: Vec<Value> = files
        .iter()
        .map(|(n, _)| Value::String(n.clone()))
        .collect();
    let report_name = format!("{name}.json");
    names.push(Value::String(report_name.clone()));
    report.insert("files".into(), Value::Array(names));
    let bytes = json_bytes(&Value::Object(report));

    for (file, data) in &files {
        write_atomic(out_dir, file, data)
            .map_err(|e| format!("writing {}: {e}", out_dir.join(file).display()))?;
    }
    write_atomic(out_dir, &report_name, &bytes)
        .map_err(|e| format!("writing {}: {e}", out_dir.join(&report_name).display()))?;
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(&bytes);
    Ok(passed)
}
