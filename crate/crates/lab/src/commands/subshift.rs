use cocycle_core::subshift::{boshernitzan_profile_with, expand_prefix_with, factor_set_with, frequency_table_with};
use serde_json::json;

use super::Ctx;
use crate::config::SubshiftRun;
use crate::error::{LabError, LabResult};

pub fn run(cfg: &SubshiftRun, ctx: &mut Ctx) -> LabResult<()> {
    let spec = &cfg.subshift;
    spec.validate(&cfg.limits)?;
    let mut did = false;
    if let Some(len) = cfg.prefix {
        let w = expand_prefix_with(spec, len, &cfg.limits)?;
        ctx.out.json("prefix.json", &json!({ "length": len, "word": w.as_string() }))?;
        did = true;
    }
    if let Some(n) = cfg.factors {
        let lang = factor_set_with(spec, n, &cfg.limits)?;
        let rows = lang.iter().map(|w| vec![w.as_string().into()]).collect();
        ctx.out.csv("factors.csv", &["word"], rows)?;
        ctx.out.json("factors.json", &json!({ "n": n, "count": lang.len(), "exactness": lang.exactness }))?;
        did = true;
    }
    if let Some(f) = &cfg.frequencies {
        let t = frequency_table_with(spec, f.n, f.sample_length, &cfg.limits)?;
        let rows = t.entries.iter().map(|(w, p)| vec![w.as_string().into(), (*p).into()]).collect();
        ctx.out.csv("frequencies.csv", &["word", "frequency"], rows)?;
        did = true;
    }
    if let Some(b) = &cfg.boshernitzan {
        let p = boshernitzan_profile_with(spec, b.n_max, b.sample_length, &cfg.limits)?;
        let rows = p
            .points
            .iter()
            .map(|q| vec![q.n.into(), q.eta.into(), q.min_frequency.into(), q.factors.into(), q.observed.into()])
            .collect();
        ctx.out.csv("boshernitzan.csv", &["n", "eta", "min_frequency", "factors", "observed"], rows)?;
        ctx.out.json(
            "boshernitzan.json",
            &json!({ "limsup_proxy": p.limsup_proxy, "sample_length": p.sample_length, "exactness": p.exactness }),
        )?;
        did = true;
    }
    if !did {
        return Err(LabError::config("nothing to do: set prefix, factors, frequencies or boshernitzan"));
    }
    Ok(())
}
