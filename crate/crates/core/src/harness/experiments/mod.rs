mod decay;
mod domination;
mod local;
mod weighted;

pub use decay::Decay;
pub use domination::Domination;
pub use local::{DiagonalEstimate, TailEstimate};
pub use weighted::{VectorValued, Weighted};

use super::{Experiment, ExperimentConfig, Report, ReportBuilder};
use crate::error::Result;

/// The exponent record alone, one row.
pub struct Indices;

impl Experiment for Indices {
    fn name(&self) -> &'static str {
        "indices"
    }

    fn describe(&self) -> &'static str {
        "critical indices for (n, p0, q0, p, q, delta)"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let mut b = ReportBuilder::new(self.name(), &[], None);
        b.row(Vec::new(), &record);
        if record.below_critical() {
            b.flag("below critical index");
        }
        Ok(b.finish(&record, cfg))
    }
}
