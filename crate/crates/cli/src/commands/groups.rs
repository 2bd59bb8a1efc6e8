use std::path::Path;

use sofic_core::group::{consequences as consequence_set, is_n_separated};
use sofic_core::length::{verify_axioms, AxiomViolation, LengthFunction};
use sofic_core::rational::parse_rational;
use sofic_core::Permutation;
use toml::Value;

use crate::cli::LengthChoice;
use crate::report::{self, int, len, perm, perms, rat, Report};
use crate::{CliError, CliResult, Context, EXIT_OK};

pub(crate) fn length(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    text: &str,
    x: &[String],
    n: Option<u32>,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let p = ctx.element(&g, text, "--perm")?;
    let cayley = if x.is_empty() && n.is_none() {
        None
    } else {
        let n = n.ok_or_else(|| {
            CliError::Input("--n is required for the Cayley-conjugation length".into())
        })?;
        let base = ctx.elements(&g, x, "--X")?;
        let f = LengthFunction::cayley_conjugation(g.clone(), &base, n)?;
        Some((base, n, f.value(&p)?.clone()))
    };
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("degree".into(), int(g.degree()));
    r.insert("perm".into(), perm(&p));
    r.insert("moved_points".into(), int(p.moved_points()));
    r.insert("hamming".into(), len(&p.hamming_length()));
    if let Some((base, n, value)) = cayley {
        r.insert("cayley_base".into(), perms(&base));
        r.insert("cayley_n".into(), int(n));
        r.insert("cayley".into(), rat(&value));
    }
    Ok(EXIT_OK)
}

pub(crate) fn consequences(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    x: &[String],
    n: usize,
    summary: bool,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let base = ctx.elements(&g, x, "--X")?;
    let set = consequence_set(&g, &base, n)?;
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("base".into(), perms(&set.base));
    r.insert("depth".into(), int(set.depth));
    r.insert("size".into(), int(set.elements.len()));
    r.insert(
        "layer_sizes".into(),
        report::ints(set.layer_sizes.iter().copied()),
    );
    r.insert("cumulative_size".into(), int(set.cumulative.len()));
    if !summary {
        r.insert("elements".into(), perms(&set.elements));
    }
    Ok(EXIT_OK)
}

pub(crate) fn separate(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    x: &[String],
    y: &[String],
    n: usize,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let xs = ctx.elements(&g, x, "--X")?;
    let ys = ctx.elements(&g, y, "--Y")?;
    let sep = is_n_separated(&g, &ys, &xs, n)?;
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("X".into(), perms(&xs));
    r.insert("Y".into(), perms(&ys));
    r.insert("verdict".into(), sep.verdict.as_str().into());
    r.insert("separation".into(), report::separation(&sep));
    Ok(EXIT_OK)
}

/// Lines `p/q (cycles)`; `#` comments.
fn parse_table(
    ctx: &Context,
    path: &Path,
    degree: usize,
) -> CliResult<Vec<(Permutation, sofic_core::Rational)>> {
    let text = ctx.read(path)?;
    let name = path.display().to_string();
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let lead = line.len() - trimmed.len();
        let (value, rest) = trimmed
            .split_once(char::is_whitespace)
            .unwrap_or((trimmed, ""));
        let located = |column: usize, message: String| CliError::Located {
            source_name: name.clone(),
            line: k + 1,
            column,
            message,
        };
        let v = parse_rational(value).map_err(|e| located(lead + 1, e.to_string()))?;
        let perm_offset = lead + value.len() + 1;
        let p = Permutation::parse(rest, degree)
            .map_err(|e| CliError::located(name.clone(), e.at_line(k + 1, perm_offset)))?;
        entries.push((p, v));
    }
    Ok(entries)
}

fn violation(v: &AxiomViolation) -> Value {
    match v {
        AxiomViolation::Negative { element, value } => report::table([
            ("kind", "negative".into()),
            ("element", perm(element)),
            ("value", rat(value)),
        ]),
        AxiomViolation::IdentityNonzero { value } => {
            report::table([("kind", "identity-nonzero".into()), ("value", rat(value))])
        }
        AxiomViolation::Subadditivity { g, h } => report::table([
            ("kind", "subadditivity".into()),
            ("g", perm(g)),
            ("h", perm(h)),
        ]),
        AxiomViolation::Invariance { g, h } => report::table([
            ("kind", "invariance".into()),
            ("g", perm(g)),
            ("h", perm(h)),
        ]),
    }
}

pub(crate) fn axioms(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    choice: LengthChoice,
    x: &[String],
    n: Option<u32>,
    table: Option<&Path>,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let length = match choice {
        LengthChoice::Hamming => LengthFunction::hamming(g.clone()),
        LengthChoice::Cayley => {
            let n = n.ok_or_else(|| CliError::Input("--length cayley needs --n".into()))?;
            let base = ctx.elements(&g, x, "--X")?;
            LengthFunction::cayley_conjugation(g.clone(), &base, n)?
        }
        LengthChoice::Table => {
            let path =
                table.ok_or_else(|| CliError::Input("--length table needs --table FILE".into()))?;
            let entries = parse_table(ctx, path, g.degree())?;
            LengthFunction::from_table(g.clone(), &entries)?
        }
    };
    let axioms = verify_axioms(&length);
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("order".into(), int(g.order()));
    r.insert("length".into(), length.kind().label().into());
    r.insert("valid".into(), axioms.valid.into());
    r.insert("pairs_checked".into(), int(axioms.pairs_checked));
    r.insert(
        "subadditivity_violations".into(),
        int(axioms.subadditivity_violations),
    );
    r.insert(
        "invariance_violations".into(),
        int(axioms.invariance_violations),
    );
    r.insert(
        "violations".into(),
        Value::Array(axioms.violations.iter().map(violation).collect()),
    );
    Ok(EXIT_OK)
}
