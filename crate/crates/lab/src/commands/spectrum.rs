use cocycle_core::spectrum::{
    approximant_sequence, covering_bound, scan_spectrum, semicontinuity_probe, spectrum_measure,
};
use serde_json::json;

use super::Ctx;
use crate::config::SpectrumRun;
use crate::error::{LabError, LabResult};
use crate::output::Cell;

pub fn run(cfg: &SpectrumRun, ctx: &mut Ctx) -> LabResult<()> {
    let mut did = false;
    if let Some(s) = &cfg.scan {
        let mut params = s.params;
        params.limits = ctx.limits(params.limits);
        let est = scan_spectrum(&cfg.potential, &cfg.subshift, &s.grid, &params, &ctx.exec)?;
        let rows: Vec<Vec<Cell>> = est
            .points
            .iter()
            .map(|p| {
                let id = p.certificate_id.map_or(String::new(), |i| i.to_string());
                vec![p.energy.into(), p.kind.label().into(), p.exponent.into(), id.into()]
            })
            .collect();
        ctx.out.csv("classification.csv", &["E", "class", "exponent", "certificate_id"], rows)?;
        let rows = est.intervals.iter().map(|&(a, b)| vec![a.into(), b.into()]).collect();
        ctx.out.csv("bands.csv", &["band_lo", "band_hi"], rows)?;
        let limited = est.points.iter().filter(|p| p.budget_limited).count();
        if limited > 0 {
            ctx.soft(format!("scan: {limited} energies degraded to candidates by the budget"));
        }
        ctx.out.json("estimate.json", &est)?;
        did = true;
    }
    if let Some(a) = &cfg.approximants {
        let seq = approximant_sequence(&cfg.potential, &cfg.subshift, a.levels)?;
        let mut band_rows = Vec::new();
        for l in &seq {
            for &(lo, hi) in &l.bands.bands {
                band_rows.push(vec![l.level.into(), lo.into(), hi.into()]);
            }
        }
        ctx.out.csv("approximant_bands.csv", &["k", "band_lo", "band_hi"], band_rows)?;
        let rows = seq
            .iter()
            .map(|l| vec![l.level.into(), l.period.into(), l.measure.into(), l.bands.bands.len().into()])
            .collect();
        ctx.out.csv("approximants.csv", &["k", "period", "measure", "bands"], rows)?;
        did = true;
    }
    if let Some(m) = &cfg.measure {
        if m.intervals.iter().any(|&(a, b)| !(a <= b)) || m.intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(LabError::config("measure intervals must be sorted and disjoint"));
        }
        if !(m.epsilon >= 0.0) {
            return Err(LabError::config("measure epsilon must be nonnegative"));
        }
        ctx.out.json(
            "measure.json",
            &json!({
                "measure": spectrum_measure(&m.intervals),
                "covering_bound": covering_bound(&m.intervals, m.epsilon, m.m),
                "epsilon": m.epsilon,
                "m": m.m,
            }),
        )?;
        did = true;
    }
    if let Some(s) = &cfg.semicontinuity {
        let rep = semicontinuity_probe(&cfg.potential, &s.g, &cfg.subshift, s.level)?;
        if !rep.holds {
            ctx.soft(format!("semicontinuity violated by {}", rep.violation));
        }
        ctx.out.json("semicontinuity.json", &rep)?;
        did = true;
    }
    if !did {
        return Err(LabError::config("nothing to do: set scan, approximants, measure or semicontinuity"));
    }
    Ok(())
}
