mod approx;
mod coverage;
mod equations;
mod groups;

use crate::cli::Command;
use crate::report::Report;
use crate::{manifest, CliResult, Context};

/// Fill `report` for `command`; returns the exit code of a computed verdict.
pub(crate) fn dispatch(ctx: &Context, command: &Command, report: &mut Report) -> CliResult<i32> {
    match command {
        Command::Length { group, perm, x, n } => groups::length(ctx, report, group, perm, x, *n),
        Command::Consequences {
            group,
            x,
            n,
            summary,
        } => groups::consequences(ctx, report, group, x, *n, *summary),
        Command::Separate { group, x, y, n } => groups::separate(ctx, report, group, x, y, *n),
        Command::AxiomsCheck {
            group,
            length,
            x,
            n,
            table,
        } => groups::axioms(ctx, report, group, *length, x, *n, table.as_deref()),
        Command::BrennerVerify { group, x, n } => coverage::brenner(ctx, report, group, x, *n),
        Command::SupportCover { group, x } => {
            coverage::support_cover(ctx, report, group, x.as_deref())
        }
        Command::CoveringConstant { group, csv } => {
            coverage::covering(ctx, report, group, csv.as_deref())
        }
        Command::ApproxCheck { cert } => approx::check(ctx, report, cert),
        Command::ApproxSearch {
            presentation,
            n,
            groups,
            prune,
        } => approx::search(ctx, report, presentation, *n, groups.as_deref(), *prune),
        Command::SoficSearch {
            presentation,
            eps,
            groups,
        } => approx::sofic(ctx, report, presentation, eps, groups.as_deref()),
        Command::EqSolve {
            group,
            system,
            witnesses,
            orbits,
        } => equations::solve(ctx, report, group, system, *witnesses, *orbits),
        Command::EqSys { system, groups } => {
            equations::membership(ctx, report, system, groups.as_deref())
        }
        Command::EqOver {
            group,
            system,
            embed,
            witnesses,
        } => equations::over(ctx, report, group, system, embed, *witnesses),
        Command::Replay { manifest } => manifest::replay(ctx, report, manifest),
        Command::VerifyReport { report: path } => manifest::verify_report(ctx, report, path),
    }
}
