mod approximate;
mod avalanche;
mod exponent;
mod spectrum;
mod subshift;
mod uh;

mod construct;

use cocycle_core::cocycle::{CocycleFamily, Limits};

use crate::exec::Pool;
use crate::output::OutputDir;

pub use approximate::run as approximate;
pub use avalanche::run as avalanche;
pub use construct::run as construct;
pub use exponent::run as exponent;
pub use spectrum::run as spectrum;
pub use subshift::run as subshift;
pub use uh::run as uh;

/// State shared by one command invocation.
pub struct Ctx {
    pub exec: Pool,
    pub seed: u64,
    /// Overrides the enumeration budget of every cocycle built or loaded.
    pub budget: Option<u64>,
    pub out: OutputDir,
    /// Per-item failures that did not abort the run.
    pub soft_failures: Vec<String>,
}

impl Ctx {
    pub fn limits(&self, mut base: Limits) -> Limits {
        if let Some(b) = self.budget {
            base.budget = b;
        }
        base
    }

    /// The family with the budget override applied, if any.
    pub fn family(&self, f: &CocycleFamily) -> CocycleFamily {
        match self.budget {
            Some(_) => f.clone().with_limits(self.limits(Limits::default())),
            None => f.clone(),
        }
    }

    pub fn soft(&mut self, msg: impl Into<String>) {
        self.soft_failures.push(msg.into());
    }
}
