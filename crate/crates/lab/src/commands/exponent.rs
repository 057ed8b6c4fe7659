use cocycle_core::uniformity::{cocycle_report, uniformity_verdict, UniformityReport};

use super::Ctx;
use crate::config::ExponentRun;
use crate::error::{LabError, LabResult};
use crate::output::Cell;

pub fn run(cfg: &ExponentRun, ctx: &mut Ctx) -> LabResult<()> {
    let report: UniformityReport = match (&cfg.cocycle, &cfg.family, &cfg.grid) {
        (Some(c), None, None) => {
            let mut c = c.clone();
            c.set_limits(ctx.limits(*c.limits()));
            cocycle_report(&c, &cfg.horizons, cfg.epsilon, &cfg.w)?
        }
        (None, Some(f), Some(grid)) => {
            let f = ctx.family(f);
            uniformity_verdict(&f, grid.points(), &cfg.horizons, cfg.epsilon, &ctx.exec)?
        }
        _ => return Err(LabError::config("give either `cocycle`, or `family` together with `grid`")),
    };
    let rows: Vec<Vec<Cell>> = report
        .trace
        .iter()
        .map(|p| vec![p.n.into(), p.sup_exp.into(), p.min_exp.into(), p.var_over_n.into()])
        .collect();
    ctx.out.csv("trace.csv", &["n", "sup_exp", "min_exp", "var_over_n"], rows)?;
    ctx.out.json("report.json", &report)?;
    Ok(())
}
