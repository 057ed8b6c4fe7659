use cocycle_core::uniformity::{avalanche_check, minimal_ell, openness_probe, AvalancheOutcome};
use serde_json::json;

use super::Ctx;
use crate::config::AvalancheRun;
use crate::error::LabResult;

pub fn run(cfg: &AvalancheRun, ctx: &mut Ctx) -> LabResult<()> {
    let mut c = cfg.cocycle.clone();
    c.set_limits(ctx.limits(*c.limits()));
    let ell = match cfg.ell {
        Some(l) => l,
        None => minimal_ell(cfg.lyapunov, cfg.epsilon, &cfg.params)?,
    };
    let outcome = avalanche_check(&c, cfg.lyapunov, ell, cfg.epsilon, &cfg.params, cfg.validation_horizon)?;
    if let AvalancheOutcome::Refused(r) = &outcome {
        ctx.soft(format!("avalanche refused at condition {:?}", r.condition));
    }
    ctx.out.json("certificate.json", &json!({ "ell": ell, "outcome": outcome }))?;
    if let Some(o) = &cfg.openness {
        let report = openness_probe(
            &c,
            cfg.lyapunov,
            ell,
            cfg.epsilon,
            o.epsilon_prime,
            o.delta,
            o.trials,
            ctx.seed,
            &cfg.params,
            &ctx.exec,
        )?;
        if !report.all_passed() {
            ctx.soft(format!("openness: {}/{} trials passed", report.passed, report.trials));
        }
        ctx.out.json("openness.json", &report)?;
    }
    Ok(())
}
