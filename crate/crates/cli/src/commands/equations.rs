use std::path::Path;

use sofic_core::equations::{
    solvable_in, solvable_over_bounded, sys_membership, Embedding, EquationSystem,
    SolvabilityReport, SolveOptions, Verdict,
};
use sofic_core::GroupRef;
use toml::{Table, Value};

use crate::report::{big, int, perms, strings, table, Report};
use crate::{CliError, CliResult, Context, EXIT_LIMIT, EXIT_OK};

fn read_system(ctx: &Context, path: &Path) -> CliResult<EquationSystem> {
    let text = ctx.read(path)?;
    EquationSystem::parse(&text).map_err(|e| CliError::located(path.display().to_string(), e))
}

fn solvability(r: &SolvabilityReport) -> Table {
    let mut t = Table::new();
    t.insert("group".into(), r.group.as_str().into());
    if let Some(h) = &r.overgroup {
        t.insert("overgroup".into(), h.as_str().into());
    }
    t.insert("verdict".into(), r.verdict.as_str().into());
    if let Some(c) = &r.counterexample {
        t.insert("counterexample".into(), perms(c));
    }
    t.insert("search_space".into(), big(r.search_space));
    t.insert("budget".into(), int(r.budget));
    t.insert(
        "constant_tuples_checked".into(),
        int(r.constant_tuples_checked),
    );
    t.insert("assignments_checked".into(), int(r.assignments_checked));
    if let Some(o) = r.orbit_representatives {
        t.insert("orbit_representatives".into(), int(o));
    }
    if !r.witnesses.is_empty() {
        let rows = r
            .witnesses
            .iter()
            .map(|(a, x)| table([("constants", perms(a)), ("variables", perms(x))]))
            .collect();
        t.insert("witnesses".into(), Value::Array(rows));
    }
    t
}

fn exit_for(verdict: Verdict) -> i32 {
    if verdict == Verdict::Unknown {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

pub(crate) fn solve(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    system: &Path,
    witnesses: bool,
    orbits: bool,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let sys = read_system(ctx, system)?;
    let options = SolveOptions {
        budget: ctx.common.budget,
        witnesses,
        orbit_reduction: orbits,
    };
    let r = solvable_in(&g, &sys, options);
    let section = report.section("result");
    section.insert("system".into(), sys.to_text().into());
    section.extend(solvability(&r));
    Ok(exit_for(r.verdict))
}

pub(crate) fn membership(
    ctx: &Context,
    report: &mut Report,
    system: &Path,
    groups: Option<&str>,
) -> CliResult<i32> {
    let sys = read_system(ctx, system)?;
    let catalog = ctx.group_list(groups)?;
    let options = SolveOptions {
        budget: ctx.common.budget,
        ..SolveOptions::default()
    };
    let t = sys_membership(&catalog, &sys, options);
    let section = report.section("result");
    section.insert("system".into(), sys.to_text().into());
    section.insert(
        "catalog".into(),
        strings(&catalog.iter().map(|g| g.name()).collect::<Vec<_>>()),
    );
    let member = match t.member {
        Some(true) => "member",
        Some(false) => "not-member",
        None => "undecided",
    };
    section.insert("membership".into(), member.into());
    if let Some(f) = &t.first_failure {
        section.insert("first_failure".into(), f.as_str().into());
    }
    section.insert(
        "rows".into(),
        Value::Array(
            t.rows
                .iter()
                .map(|r| Value::Table(solvability(r)))
                .collect(),
        ),
    );
    Ok(if t.member.is_none() {
        EXIT_LIMIT
    } else {
        EXIT_OK
    })
}

/// `H:diagonal` or `H:img1;img2;...`.
fn parse_embedding(ctx: &Context, source: &GroupRef, spec: &str) -> CliResult<Embedding> {
    let (name, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::Input(format!(
            "--embed `{spec}`: expected `H:diagonal` or `H:img;img;...`"
        ))
    })?;
    let target = ctx.group(name.trim())?;
    if rest.trim() == "diagonal" {
        if source.degree() == 0 || target.degree() % source.degree() != 0 {
            return Err(CliError::Input(format!(
                "--embed `{spec}`: degree {} is not a multiple of {}",
                target.degree(),
                source.degree()
            )));
        }
        return Ok(Embedding::diagonal(
            source.clone(),
            target.clone(),
            target.degree() / source.degree(),
        )?);
    }
    let images = rest
        .split(';')
        .map(|t| ctx.element(&target, t.trim(), "--embed"))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Embedding::from_generator_images(
        source.clone(),
        target,
        &images,
    )?)
}

pub(crate) fn over(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    system: &Path,
    embed: &[String],
    witnesses: bool,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let sys = read_system(ctx, system)?;
    let embeddings = embed
        .iter()
        .map(|e| parse_embedding(ctx, &g, e))
        .collect::<CliResult<Vec<_>>>()?;
    let options = SolveOptions {
        budget: ctx.common.budget,
        witnesses,
        orbit_reduction: false,
    };
    let r = solvable_over_bounded(&g, &sys, &embeddings, options)?;
    let limited = r.attempts.iter().any(|a| a.verdict == Verdict::Unknown);
    let section = report.section("result");
    section.insert("system".into(), sys.to_text().into());
    section.insert("group".into(), r.group.as_str().into());
    section.insert("verdict".into(), r.verdict.as_str().into());
    if let Some(via) = &r.via {
        section.insert("via".into(), via.as_str().into());
    }
    section.insert(
        "attempts".into(),
        Value::Array(
            r.attempts
                .iter()
                .map(|a| Value::Table(solvability(a)))
                .collect(),
        ),
    );
    Ok(if r.verdict == Verdict::Unknown && limited {
        EXIT_LIMIT
    } else {
        EXIT_OK
    })
}
