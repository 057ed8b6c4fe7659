use cocycle_core::approximation::{approximate_family, discretize_sampling};
use cocycle_core::cocycle::CocycleFamily;
use serde_json::json;

use super::Ctx;
use crate::config::ApproximateRun;
use crate::error::{LabError, LabResult};

pub fn run(cfg: &ApproximateRun, ctx: &mut Ctx) -> LabResult<()> {
    if cfg.family.is_none() && cfg.discretize.is_none() {
        return Err(LabError::config("nothing to do: set family or discretize"));
    }
    if let Some(f) = &cfg.family {
        let family = ctx.family(&f.family);
        let a = approximate_family(&family, f.lo, f.hi, f.epsilon, &f.cover, &ctx.exec)?;
        let rows = a.refinements.iter().map(|&(n, e)| vec![n.into(), e.into()]).collect();
        ctx.out.csv("refinements.csv", &["intervals", "sup_error"], rows)?;
        ctx.out.json(
            "approximation.json",
            &json!({
                "lo": a.lo,
                "hi": a.hi,
                "epsilon": a.epsilon,
                "intervals": a.intervals,
                "nodes": a.family.nodes(),
                "verification": a.verification,
            }),
        )?;
        ctx.out.json("family.json", &CocycleFamily::Blended(a.family))?;
    }
    if let Some(d) = &cfg.discretize {
        let (f, bound) = discretize_sampling(&d.potential, d.radius);
        ctx.out.json("discretized.json", &json!({ "radius": d.radius, "bound": bound, "potential": f }))?;
    }
    Ok(())
}
