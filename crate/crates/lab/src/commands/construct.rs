use cocycle_core::approximation::{construct_uniform_potential, random_generators, ConstructionParams};
use cocycle_core::cocycle::Layer;

use super::Ctx;
use crate::config::{ConstructRun, Generators};
use crate::error::{LabError, LabResult};
use crate::output::Cell;

pub fn run(cfg: &ConstructRun, ctx: &mut Ctx) -> LabResult<()> {
    let generators: Vec<Layer> = match &cfg.generators {
        Generators::RandomRadii(radii) => random_generators(&cfg.subshift, radii, ctx.seed)?,
        Generators::Explicit(fs) => fs
            .iter()
            .map(|f| match (f.layers(), f.tail()) {
                ([l], 0.0) => Ok(l.clone()),
                _ => Err(LabError::config("explicit generators need exactly one layer and no tail")),
            })
            .collect::<LabResult<_>>()?,
    };
    let mut params = ConstructionParams::new(cfg.epsilons.clone(), cfg.grid.clone());
    params.w = cfg.w;
    params.trials = cfg.trials;
    params.delta_start = cfg.delta_start;
    params.delta_min = cfg.delta_min;
    params.seed = ctx.seed;
    params.limits = ctx.limits(params.limits);
    let log = construct_uniform_potential(&cfg.g0, &cfg.subshift, &generators, &params, &ctx.exec)?;

    let rows: Vec<Vec<Cell>> = log
        .stages
        .iter()
        .map(|s| vec![s.stage.into(), s.epsilon.into(), s.delta.into(), s.attempts.len().into(), s.passed.into()])
        .collect();
    ctx.out.csv("schedule.csv", &["stage", "epsilon", "delta", "attempts", "passed"], rows)?;
    let mut rows = Vec::new();
    for s in &log.stages {
        for e in &s.energies {
            rows.push(vec![
                s.stage.into(),
                e.energy.into(),
                e.class.clone().into(),
                e.exponent.into(),
                e.passed.into(),
            ]);
        }
    }
    ctx.out.csv("stage_energies.csv", &["stage", "E", "class", "exponent", "passed"], rows)?;
    if let Some(d) = &log.diagnostic {
        ctx.soft(d.clone());
    }
    ctx.out.json("construction.json", &log)?;
    Ok(())
}
