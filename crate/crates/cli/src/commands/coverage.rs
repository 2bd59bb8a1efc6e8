use std::path::Path;

use sofic_core::coverage::{
    empirical_covering_constant, support_cover_sweep, verify_brenner_bound, verify_support_cover,
    SupportCoverReport,
};
use sofic_core::rational::format_rational;
use toml::Value;

use crate::report::{self, int, perm, perms, rat, Report};
use crate::{CliError, CliResult, Context, EXIT_OK};

/// Conjectured sharper constant; recorded next to the measured one, never asserted.
const CONJECTURED_CONSTANT: i64 = 4;

pub(crate) fn brenner(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    x: &[String],
    n: usize,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let xs = ctx.elements(&g, x, "--X")?;
    let b = verify_brenner_bound(&g, &xs, n)?;
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("m".into(), int(b.m));
    r.insert("n".into(), int(b.n));
    r.insert("X".into(), perms(&xs));
    r.insert("epsilon".into(), rat(&b.epsilon));
    r.insert("threshold".into(), rat(&b.threshold));
    r.insert("ball_size".into(), int(b.ball_size));
    r.insert("consequence_size".into(), int(b.consequence_size));
    r.insert("holds".into(), b.holds.into());
    r.insert("violations".into(), perms(&b.violations));
    Ok(EXIT_OK)
}

fn cover_row(c: &SupportCoverReport) -> Value {
    report::table([
        ("x", perm(&c.x)),
        ("class_size", int(c.class_size)),
        ("targets", int(c.targets)),
        ("holds", c.holds.into()),
        ("violations", perms(&c.violations)),
    ])
}

pub(crate) fn support_cover(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    x: Option<&str>,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let rows = match x {
        Some(text) => vec![verify_support_cover(&g, &ctx.element(&g, text, "--X")?)?],
        None => support_cover_sweep(&g)?,
    };
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("holds".into(), rows.iter().all(|c| c.holds).into());
    r.insert(
        "rows".into(),
        Value::Array(rows.iter().map(cover_row).collect()),
    );
    Ok(EXIT_OK)
}

pub(crate) fn covering(
    ctx: &Context,
    report: &mut Report,
    group: &str,
    csv_path: Option<&Path>,
) -> CliResult<i32> {
    let g = ctx.group(group)?;
    let t = empirical_covering_constant(&g)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        w.write_record([
            "x",
            "y",
            "y_class_size",
            "depth",
            "ratio_ceil",
            "constant",
            "within_chaining_bound",
        ])
        .map_err(io)?;
        for row in &t.rows {
            w.write_record([
                row.x.to_string(),
                row.y.to_string(),
                row.y_class_size.to_string(),
                row.depth
                    .map_or_else(|| "unreached".into(), |d| d.to_string()),
                row.ratio_ceil.to_string(),
                row.constant
                    .as_ref()
                    .map_or_else(String::new, format_rational),
                row.within_chaining_bound.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        ctx.write(
            path,
            &String::from_utf8(bytes).expect("csv output is utf-8"),
        )?;
    }
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|row| {
            let mut v = report::table([
                ("x", perm(&row.x)),
                ("y", perm(&row.y)),
                ("y_class_size", int(row.y_class_size)),
                ("ratio_ceil", int(row.ratio_ceil)),
                ("within_chaining_bound", row.within_chaining_bound.into()),
            ]);
            let cell = v.as_table_mut().expect("table");
            if let Some(d) = row.depth {
                cell.insert("depth".into(), int(d));
            }
            if let Some(c) = &row.constant {
                cell.insert("constant".into(), rat(c));
            }
            v
        })
        .collect();
    let r = report.section("result");
    r.insert("group".into(), g.name().into());
    r.insert("m".into(), int(t.m));
    r.insert("pairs_checked".into(), int(t.pairs_checked));
    r.insert(
        "chaining_bound".into(),
        "depth <= 16 * ceil(|y|/|x|)".into(),
    );
    r.insert("chaining_bound_holds".into(), t.chaining_bound_holds.into());
    if let Some(c) = &t.max_constant {
        r.insert("max_constant".into(), rat(c));
    }
    r.insert("conjectured_constant".into(), int(CONJECTURED_CONSTANT));
    r.insert("rows".into(), Value::Array(rows));
    Ok(EXIT_OK)
}
