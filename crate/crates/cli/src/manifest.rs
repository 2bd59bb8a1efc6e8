//! Manifests: pinned lists of invocations replayed into a report directory.
//!
//! ```toml
//! version = "0.1.0"
//!
//! [[run]]
//! name = "length-a5"
//! args = ["length", "--group", "A5", "--perm", "(1 2 3)"]
//! expect_exit = 0
//! ```
//!
//! Relative paths inside `args` are resolved against the manifest's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use toml::Value;

use crate::report::{int, strings, table, Report, VERSION};
use crate::{run_in, CliError, CliResult, Context, EXIT_INPUT, EXIT_LIMIT, EXIT_OK};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    #[serde(default)]
    pub run: Vec<ManifestRun>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRun {
    pub name: String,
    pub args: Vec<String>,
    #[serde(default)]
    pub expect_exit: Option<i32>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, String> {
        let m: Manifest = toml::from_str(text).map_err(|e| e.to_string())?;
        for (i, r) in m.run.iter().enumerate() {
            let ok = !r.name.is_empty()
                && r.name
                    .bytes()
                    .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_');
            if !ok {
                return Err(format!("run {i}: name `{}` must be [A-Za-z0-9_-]+", r.name));
            }
            if m.run[..i].iter().any(|o| o.name == r.name) {
                return Err(format!("run {i}: duplicate name `{}`", r.name));
            }
            if r.args.first().is_some_and(|a| a == "replay") {
                return Err(format!("run {i}: manifests cannot replay manifests"));
            }
        }
        Ok(m)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Exit code of a whole replay: input errors dominate, then limits.
fn combine(a: i32, b: i32) -> i32 {
    if a == EXIT_INPUT || b == EXIT_INPUT {
        EXIT_INPUT
    } else if a == EXIT_LIMIT || b == EXIT_LIMIT {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

pub(crate) fn replay(ctx: &Context, report: &mut Report, path: &Path) -> CliResult<i32> {
    let text = ctx.read(path)?;
    let manifest =
        Manifest::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if manifest.version != VERSION {
        let r = report.section("result");
        r.insert("manifest_version".into(), manifest.version.as_str().into());
        r.insert("aborted".into(), true.into());
        return Err(CliError::Input(format!(
            "manifest version {} does not match tool version {VERSION}; replay aborted",
            manifest.version
        )));
    }
    let out_dir = ctx.common.out.as_ref().map(|d| ctx.resolve(d));
    if let Some(dir) = &out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        })?;
    }
    let base: PathBuf = ctx
        .resolve(path)
        .parent()
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    let mut exit = EXIT_OK;
    let mut rows = Vec::new();
    for run in &manifest.run {
        let mut args = vec!["sofic-wb".to_string()];
        args.extend(run.args.iter().cloned());
        let outcome = run_in(&args, &base);
        let body = outcome.stdout;
        let digest = sha256_hex(body.as_bytes());
        if let Some(dir) = &out_dir {
            let file = dir.join(format!("{}.toml", run.name));
            std::fs::write(&file, &body).map_err(|e| CliError::Io {
                path: file.display().to_string(),
                message: e.to_string(),
            })?;
        }
        let matches = run.expect_exit.is_none_or(|e| e == outcome.exit_code);
        exit = combine(exit, outcome.exit_code);
        if !matches {
            exit = EXIT_INPUT;
        }
        let mut row = table([
            ("name", run.name.as_str().into()),
            ("args", strings(&run.args)),
            ("exit", int(outcome.exit_code)),
            ("sha256", digest.into()),
            ("matches_expectation", matches.into()),
        ]);
        if let Some(e) = run.expect_exit {
            row.as_table_mut()
                .expect("table")
                .insert("expect_exit".into(), int(e));
        }
        rows.push(row);
    }
    let r = report.section("result");
    r.insert("manifest_version".into(), manifest.version.as_str().into());
    r.insert("runs".into(), int(manifest.run.len()));
    r.insert("reports".into(), Value::Array(rows));
    if let Some(dir) = &out_dir {
        // the index is written by the caller as stdout; keep a copy beside the reports
        let mut index = report.clone();
        index.set_status(crate::status_for(exit), exit);
        let file = dir.join("index.toml");
        std::fs::write(&file, index.render()).map_err(|e| CliError::Io {
            path: file.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(exit)
}

pub(crate) fn verify_report(ctx: &Context, report: &mut Report, path: &Path) -> CliResult<i32> {
    let text = ctx.read(path)?;
    let original =
        Report::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let meta = original
        .meta()
        .ok_or_else(|| CliError::Input(format!("{}: no [meta] table", path.display())))?;
    let args: Vec<String> = meta
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Input(format!("{}: meta.args missing", path.display())))?
        .iter()
        .map(|v| v.as_str().map(str::to_owned))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Input(format!("{}: meta.args must be strings", path.display())))?;
    if args
        .first()
        .is_some_and(|a| a == "verify-report" || a == "replay")
    {
        return Err(CliError::Input(
            "only analysis reports can be re-verified".into(),
        ));
    }
    let mut full = vec!["sofic-wb".to_string()];
    full.extend(args.iter().cloned());
    let rerun = run_in(&full, &ctx.resolve(Path::new(".")));
    let fresh = Report::parse(&rerun.stdout)
        .map_err(|e| CliError::Input(format!("re-run produced no report: {e}")))?;
    let reproduced = fresh == original;
    let differing: Vec<String> = ["meta", "result", "certificate", "error"]
        .iter()
        .filter(|s| fresh.get(s) != original.get(s))
        .map(|s| s.to_string())
        .collect();
    let r = report.section("result");
    r.insert("report".into(), path.display().to_string().into());
    r.insert("args".into(), strings(&args));
    r.insert(
        "original_exit".into(),
        meta.get("exit").cloned().unwrap_or(Value::Integer(-1)),
    );
    r.insert("rerun_exit".into(), int(rerun.exit_code));
    r.insert("reproduced".into(), reproduced.into());
    r.insert("differing_sections".into(), strings(&differing));
    Ok(if reproduced { EXIT_OK } else { EXIT_INPUT })
}
