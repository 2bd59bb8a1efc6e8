//! Command-line front end: argument handling, group/file ingestion, reports
//! and manifest replay. `run` is the whole program minus process exit.

pub mod cli;
mod commands;
pub mod manifest;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use clap::Parser;
use sofic_core::catalog::Catalog;
use sofic_core::{FiniteGroup, GroupRef, Permutation};
use thiserror::Error;

use cli::{Cli, Command, Common};
use report::{Limits, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sofic_core::Error),

    #[error("{source_name}:{line}:{column}: {message}")]
    Located {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_limit() => EXIT_LIMIT,
            _ => EXIT_INPUT,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(sofic_core::Error::CapExceeded { .. }) => "cap-exceeded",
            CliError::Core(sofic_core::Error::BudgetExceeded { .. }) => "budget-exceeded",
            CliError::Core(sofic_core::Error::UnknownGroup(_)) => "unknown-group",
            CliError::Core(_) => "invalid-input",
            CliError::Located { .. } => "parse-error",
            CliError::Io { .. } => "io-error",
            CliError::Input(_) => "invalid-input",
        }
    }

    /// Attach a source name to parse errors.
    pub fn located(source_name: impl Into<String>, e: sofic_core::Error) -> CliError {
        match e {
            sofic_core::Error::Parse {
                line,
                column,
                message,
            } => CliError::Located {
                source_name: source_name.into(),
                line,
                column,
                message,
            },
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Shared state for one invocation.
pub struct Context {
    base: PathBuf,
    pub common: Common,
    catalog: OnceLock<Option<Catalog>>,
}

impl Context {
    fn new(base: &Path, common: Common) -> Self {
        Context {
            base: base.to_path_buf(),
            common,
            catalog: OnceLock::new(),
        }
    }

    pub fn limits(&self) -> Limits {
        Limits {
            cap: self.common.cap,
            budget: self.common.budget,
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base.join(path)
        }
    }

    pub fn read(&self, path: &Path) -> CliResult<String> {
        std::fs::read_to_string(self.resolve(path)).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path, contents: &str) -> CliResult<()> {
        std::fs::write(self.resolve(path), contents).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// `--catalog`, else the default catalog when the environment names one
    /// that exists.
    pub fn catalog(&self) -> CliResult<Option<&Catalog>> {
        if let Some(c) = self.catalog.get() {
            return Ok(c.as_ref());
        }
        let path = match &self.common.catalog {
            Some(p) => Some(p.clone()),
            None => Catalog::default_path().filter(|p| p.is_file()),
        };
        let loaded = match path {
            Some(p) => {
                let text = self.read(&p)?;
                let catalog = Catalog::parse(&text, self.common.cap)
                    .map_err(|e| CliError::located(p.display().to_string(), e))?;
                Some(catalog)
            }
            None => None,
        };
        Ok(self.catalog.get_or_init(|| loaded).as_ref())
    }

    pub fn group(&self, name: &str) -> CliResult<GroupRef> {
        match self.catalog()? {
            Some(c) => Ok(c.resolve(name, self.common.cap)?),
            None => Ok(std::sync::Arc::new(sofic_core::catalog::builtin(
                name,
                self.common.cap,
            )?)),
        }
    }

    /// Comma-separated names, else every catalog group.
    pub fn group_list(&self, names: Option<&str>) -> CliResult<Vec<GroupRef>> {
        match names {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .map(|n| self.group(n))
                .collect(),
            None => match self.catalog()? {
                Some(c) if !c.is_empty() => Ok(c.groups().to_vec()),
                _ => Err(CliError::Input(
                    "no groups: pass --groups or --catalog, or set SOFIC_WB_CATALOG_DIR".into(),
                )),
            },
        }
    }

    /// Parse an element of `group` given on the command line as `flag`.
    pub fn element(&self, group: &FiniteGroup, text: &str, flag: &str) -> CliResult<Permutation> {
        let p = Permutation::parse(text, group.degree()).map_err(|e| CliError::located(flag, e))?;
        group.require(&p)?;
        Ok(p)
    }

    pub fn elements(
        &self,
        group: &FiniteGroup,
        texts: &[String],
        flag: &str,
    ) -> CliResult<Vec<Permutation>> {
        texts.iter().map(|t| self.element(group, t, flag)).collect()
    }
}

/// Arguments worth recording: everything except `--jobs` and `--out`, which
/// must not change report bodies.
fn recorded_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--jobs" || a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--jobs=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

pub(crate) fn status_for(exit: i32) -> &'static str {
    match exit {
        EXIT_OK => "ok",
        EXIT_LIMIT => "limit-exceeded",
        _ => "input-error",
    }
}

/// Run with relative paths resolved against the current directory.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let base = std::env::current_dir().unwrap_or_else(|_| PathBuf::from("."));
    run_in(args, &base)
}

/// Run with relative paths resolved against `base`.
pub fn run_in<I, T>(args: I, base: &Path) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let raw: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        exit_code: EXIT_OK,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    exit_code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let strings: Vec<String> = raw
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let ctx = Context::new(base, cli.common.clone());
    let body = || execute(&ctx, &cli.command, &recorded_args(&strings));
    let (report, exit, diagnostics) = match cli.common.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
        {
            Ok(pool) => pool.install(body),
            Err(e) => {
                return Outcome {
                    exit_code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: format!("error: cannot start {jobs} workers: {e}\n"),
                }
            }
        },
        None => body(),
    };
    let text = report.render();
    let mut outcome = Outcome {
        exit_code: exit,
        stdout: String::new(),
        stderr: diagnostics,
    };
    match (&cli.common.out, &cli.command) {
        (Some(_), Command::Replay { .. }) | (None, _) => outcome.stdout = text,
        (Some(path), _) => {
            if let Err(e) = ctx.write(path, &text) {
                outcome.stderr.push_str(&format!("error: {e}\n"));
                outcome.exit_code = EXIT_INPUT;
            }
        }
    }
    outcome
}

/// The report, exit code and diagnostics for one parsed command.
fn execute(ctx: &Context, command: &Command, args: &[String]) -> (Report, i32, String) {
    let mut report = Report::new(command.name(), args, ctx.limits());
    let (exit, diagnostics) = match commands::dispatch(ctx, command, &mut report) {
        Ok(exit) => (exit, String::new()),
        Err(e) => {
            let exit = e.exit_code();
            let error = report.section("error");
            error.insert("kind".into(), e.kind().into());
            error.insert("message".into(), e.to_string().into());
            (exit, format!("error: {e}\n"))
        }
    };
    report.set_status(status_for(exit), exit);
    (report, exit, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jobs_and_out_are_not_recorded() {
        let args: Vec<String> = [
            "length",
            "--jobs",
            "8",
            "--group",
            "A5",
            "--out=r.toml",
            "--perm",
            "(1 2 3)",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(
            recorded_args(&args),
            vec!["length", "--group", "A5", "--perm", "(1 2 3)"]
        );
    }
}
