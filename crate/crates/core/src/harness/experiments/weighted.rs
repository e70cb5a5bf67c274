use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledField};
use crate::harness::config::to_f64;
use crate::harness::inputs::random_bumps;
use crate::harness::{Cell, Experiment, ExperimentConfig, Report, ReportBuilder};
use crate::indices::Side;
use crate::weights::{
    class_exponents, predicted_bound, vector_valued_norm, weighted_operator_ratio, CubeFamily, Weight,
    WeightPreset, RANDOM_CUBES,
};

fn inputs(spec: GridSpec, cfg: &ExperimentConfig, count: usize) -> Result<Vec<SampledField>> {
    (0..count)
        .map(|t| random_bumps(spec, &mut ChaCha8Rng::seed_from_u64(cfg.trial_seed(t))))
        .collect()
}

/// Characteristics, predicted bound and the largest `L^p(w)` operator ratio
/// over the trial inputs, for every preset weight and every `p`.
pub struct Weighted;

struct WeightRow {
    id: String,
    p: usize,
    ap: f64,
    rh: f64,
    alpha: f64,
    predicted: f64,
    empirical: f64,
    admissible: bool,
}

impl Experiment for Weighted {
    fn name(&self) -> &'static str {
        "weights"
    }

    fn describe(&self) -> &'static str {
        "weighted L^p ratios against the predicted characteristic bounds"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let delta = to_f64(cfg.delta);
        let mut sides = Vec::new();
        for &p in &cfg.weight_p {
            let side = Side::of(p).ok_or_else(|| Error::InvalidExponent(format!("p = {p} has no side of 2")))?;
            sides.push((side, class_exponents(p, cfg.p0, side)?));
        }
        let records = cfg.weight_p.iter().map(|&p| cfg.record_at(p)).collect::<Result<Vec<_>>>()?;
        let mut b = ReportBuilder::new(
            self.name(),
            &[
                "weight_id",
                "p",
                "p0",
                "delta",
                "ApChar",
                "RHChar",
                "alpha",
                "predicted",
                "empirical_ratio",
                "grid_n",
                "admissible",
            ],
            Some("empirical_ratio"),
        );
        if record.below_critical() {
            b.flag("below critical index");
        }
        let presets = WeightPreset::suite();
        for spec in cfg.grids(16.0, &[256])? {
            let fs = inputs(spec, cfg, cfg.trial_count(4))?;
            let family = CubeFamily::standard(&spec, RANDOM_CUBES, cfg.seed);
            let rows: Vec<Result<Vec<WeightRow>>> = presets
                .par_iter()
                .map(|preset| {
                    let w = Weight::from_values(spec, &preset.values(&spec), family.clone())?;
                    let mut out = Vec::new();
                    for (i, &p) in cfg.weight_p.iter().enumerate() {
                        let (side, (r, s)) = sides[i];
                        let bound = predicted_bound(&w, p, cfg.p0, side)?;
                        let mut empirical = 0.0f64;
                        for f in &fs {
                            empirical = empirical.max(weighted_operator_ratio(f, &w, to_f64(p), delta)?);
                        }
                        out.push(WeightRow {
                            id: preset.id(),
                            p: i,
                            ap: bound.ap,
                            rh: bound.rh,
                            alpha: bound.alpha,
                            predicted: bound.value,
                            empirical,
                            admissible: preset.in_classes(spec.dim(), to_f64(r), to_f64(s)),
                        });
                    }
                    Ok(out)
                })
                .collect();
            for rows in rows {
                for r in rows? {
                    b.row(
                        vec![
                            Cell::S(r.id),
                            Cell::S(cfg.weight_p[r.p].to_string()),
                            Cell::S(cfg.p0.to_string()),
                            Cell::S(cfg.delta.to_string()),
                            Cell::F(r.ap),
                            Cell::F(r.rh),
                            Cell::F(r.alpha),
                            Cell::F(r.predicted),
                            Cell::F(r.empirical),
                            Cell::U(spec.points() as u64),
                            Cell::B(r.admissible),
                        ],
                        &records[r.p],
                    );
                }
            }
        }
        Ok(b.finish(&record, cfg))
    }
}

/// `L^p(l^q)` ratio of `B^delta` on vectors of random bump sums.
pub struct VectorValued;

const COMPONENTS: usize = 4;

impl Experiment for VectorValued {
    fn name(&self) -> &'static str {
        "vv"
    }

    fn describe(&self) -> &'static str {
        "vector-valued L^p(l^q) operator ratios"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let delta = to_f64(cfg.delta);
        let trials = cfg.trial_count(10);
        let mut b = ReportBuilder::new(
            self.name(),
            &["grid_n", "trial", "seed", "components", "input_norm", "output_norm", "ratio", "admissible"],
            Some("ratio"),
        );
        if !record.admissible_vv {
            b.flag("(p, q) outside |1/p - 1/q| < 1/3");
        }
        for spec in cfg.grids(16.0, &[256])? {
            let reports: Vec<Result<_>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.trial_seed(t));
                    let fs = (0..COMPONENTS)
                        .map(|_| random_bumps(spec, &mut rng))
                        .collect::<Result<Vec<_>>>()?;
                    vector_valued_norm(&fs, cfg.p, cfg.q, delta)
                })
                .collect();
            for (t, r) in reports.into_iter().enumerate() {
                let r = r?;
                b.row(
                    vec![
                        Cell::U(spec.points() as u64),
                        Cell::U(t as u64),
                        Cell::U(cfg.trial_seed(t)),
                        Cell::U(COMPONENTS as u64),
                        Cell::F(r.input_norm),
                        Cell::F(r.output_norm),
                        Cell::F(r.ratio),
                        Cell::B(r.admissible),
                    ],
                    &record,
                );
            }
        }
        Ok(b.finish(&record, cfg))
    }
}
