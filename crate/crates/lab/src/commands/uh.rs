use cocycle_core::hyperbolicity::{certify_uh_search, extract_splitting, UhOutcome};
use cocycle_core::subshift::expand_prefix;

use super::Ctx;
use crate::config::UhRun;
use crate::error::{LabError, LabResult};

pub fn run(cfg: &UhRun, ctx: &mut Ctx) -> LabResult<()> {
    let mut c = cfg.cocycle.clone();
    c.set_limits(ctx.limits(*c.limits()));
    let outcome = certify_uh_search(&c, cfg.max_block, &cfg.cone)?;
    if let UhOutcome::Certified(cert) = &outcome {
        let rows = cert.cones.iter().map(|(w, a)| vec![w.as_string().into(), a.start.into(), a.len.into()]).collect();
        ctx.out.csv("cones.csv", &["window", "arc_start", "arc_len"], rows)?;
    }
    ctx.out.json("certificate.json", &outcome)?;

    if let Some(s) = &cfg.splitting {
        let r = c.radius();
        let samples = s.params.samples.max(2);
        let start = s.n + r;
        let config = expand_prefix(c.base(), 2 * (s.n + r) + samples + 1)?;
        match extract_splitting(&c, config.as_bytes(), start, s.n, &s.params) {
            Ok(sample) => {
                let rows = sample.points.iter().map(|p| vec![p.position.into(), p.u.into(), p.s.into()]).collect();
                ctx.out.csv("splitting.csv", &["position", "u", "s"], rows)?;
                ctx.out.json("splitting.json", &sample)?;
            }
            Err(e) if !matches!(LabError::from(e.clone()), LabError::Config(_)) => {
                ctx.soft(format!("splitting: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
