use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::grid::{GridSpec, SampledField};
use crate::harness::config::to_f64;
use crate::harness::inputs::random_bumps;
use crate::harness::{Cell, Experiment, ExperimentConfig, Inputs, Report, ReportBuilder};
use crate::sparse::{bilinear_pairing, build_sparse, sparse_form, SparseConfig};

/// `|<B f, g>| / Lambda_S(f, g)` for random bump sums, swept over grids.
pub struct Domination;

struct Outcome {
    pairing: f64,
    form: f64,
    chosen_c: f64,
    depth: u32,
    cubes: usize,
    root_side: u64,
    certified: bool,
    max_certificate: f64,
    exceptional: Vec<f64>,
}

fn trial(spec: GridSpec, cfg: &ExperimentConfig, sparse: &SparseConfig, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = random_bumps(spec, &mut rng)?;
    let g = random_bumps(spec, &mut rng)?;
    if cfg.inputs == Inputs::ZeroF {
        f = SampledField::zeros(spec);
    }
    let delta = to_f64(cfg.delta);
    let (s, trace) = build_sparse(&f, &g, delta, sparse)?;
    Ok(Outcome {
        pairing: bilinear_pairing(&f, &g, delta)?.norm(),
        form: sparse_form(&s, &f, &g, sparse.p0(), sparse.q0_dual())?,
        chosen_c: trace.max_c(),
        depth: trace.depth(),
        cubes: s.len(),
        root_side: s.root.side_cells,
        certified: s.verify().is_ok(),
        max_certificate: s.certificates.iter().map(|c| c.ratio()).fold(0.0, f64::max),
        exceptional: trace.exceptional_by_level(),
    })
}

impl Experiment for Domination {
    fn name(&self) -> &'static str {
        "dominate"
    }

    fn describe(&self) -> &'static str {
        "sparse bilinear domination ratio over random trials and grids"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let trials = cfg.trial_count(20);
        let mut b = ReportBuilder::new(
            self.name(),
            &[
                "grid_n",
                "trial",
                "seed",
                "pairing",
                "form",
                "ratio",
                "degenerate",
                "chosen_c",
                "depth",
                "cubes",
                "root_cells",
                "certified",
                "max_certificate_ratio",
                "exceptional_by_level",
            ],
            Some("ratio"),
        );
        if record.below_critical() {
            b.flag("below critical index");
        }
        for spec in cfg.grids(16.0, &[256])? {
            let sparse = cfg.sparse_config(&spec)?;
            let outcomes: Vec<Result<Outcome>> = (0..trials)
                .into_par_iter()
                .map(|t| trial(spec, cfg, &sparse, cfg.trial_seed(t)))
                .collect();
            for (t, o) in outcomes.into_iter().enumerate() {
                let o = o?;
                let degenerate = o.form == 0.0 && o.pairing == 0.0;
                let ratio = if degenerate { f64::NAN } else { o.pairing / o.form };
                if !degenerate && !ratio.is_finite() {
                    b.flag("infinite ratio");
                }
                if !o.certified {
                    b.flag("certificate violated");
                }
                let levels: Vec<String> = o.exceptional.iter().map(|x| x.to_string()).collect();
                b.row(
                    vec![
                        Cell::U(spec.points() as u64),
                        Cell::U(t as u64),
                        Cell::U(cfg.trial_seed(t)),
                        Cell::F(o.pairing),
                        Cell::F(o.form),
                        Cell::F(ratio),
                        Cell::B(degenerate),
                        Cell::F(o.chosen_c),
                        Cell::U(o.depth as u64),
                        Cell::U(o.cubes as u64),
                        Cell::U(o.root_side),
                        Cell::B(o.certified),
                        Cell::F(o.max_certificate),
                        Cell::S(levels.join(";")),
                    ],
                    &record,
                );
            }
        }
        Ok(b.finish(&record, cfg))
    }
}
