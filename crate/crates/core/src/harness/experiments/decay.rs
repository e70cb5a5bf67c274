use crate::error::Result;
use crate::harness::config::to_f64;
use crate::harness::{Cell, Experiment, ExperimentConfig, Report, ReportBuilder};
use crate::multiplier::{check_scale, fit_loglog_slope, kernel_profile, radial_envelope, radial_kernel_profile};

/// Spatial decay of `\check{s}_k` from the radial route, with the torus
/// kernel alongside wherever the grid resolves the scale.
pub struct Decay;

const SAMPLES: usize = 12;

fn geometric(lo: f64, hi: f64) -> Vec<f64> {
    (0..SAMPLES)
        .map(|i| lo * (hi / lo).powf(i as f64 / (SAMPLES - 1) as f64))
        .collect()
}

/// Mid range `[2, 2^{-k}/4]` and far range `[4, 64] 2^{-k}`.
pub fn decay_windows(k: i32) -> [(&'static str, f64, f64); 2] {
    let s = 2f64.powi(-k);
    [("mid", 2.0, s / 4.0), ("far", 4.0 * s, 64.0 * s)]
}

impl Experiment for Decay {
    fn name(&self) -> &'static str {
        "decay"
    }

    fn describe(&self) -> &'static str {
        "log-log slopes of the S_k kernel envelope"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let delta = to_f64(cfg.delta);
        let scales = cfg.scales.clone().unwrap_or_else(|| vec![-4, -6, -8]);
        let spec = cfg.grids(128.0, &[1024])?[0];
        let mut b = ReportBuilder::new(
            self.name(),
            &["k", "range", "radius", "envelope", "radial", "grid"],
            None,
        );
        let reference = -(cfg.n_decay as f64);
        b.extra("reference_far_slope", reference);
        for k in scales {
            for (range, lo, hi) in decay_windows(k) {
                let radii = geometric(lo, hi);
                let env = radial_envelope(cfg.dim, k, delta, &radii);
                let radial = radial_kernel_profile(cfg.dim, k, delta, &radii);
                let on_grid = check_scale(&spec, k).is_ok() && hi < spec.side() / 2.0;
                let grid = if on_grid {
                    Some(kernel_profile(&spec, k, delta, &radii)?)
                } else {
                    None
                };
                let slope = fit_loglog_slope(&radii, &env);
                b.extra(format!("{range}_slope_k{k}"), slope);
                match range {
                    "mid" if !(-0.9..=-0.3).contains(&slope) => {
                        b.flag(format!("mid-range slope {slope:.3} outside [-0.9, -0.3] at k = {k}"))
                    }
                    "far" if slope > reference => {
                        b.flag(format!("far-range slope {slope:.3} above {reference} at k = {k}"))
                    }
                    _ => {}
                }
                if let Some(g) = &grid {
                    let peak = radial_kernel_profile(cfg.dim, k, delta, &[0.0])[0];
                    let diff = g
                        .iter()
                        .zip(&radial)
                        .map(|(a, b)| (a - b).abs() / peak)
                        .fold(0.0, f64::max);
                    b.extra(format!("{range}_grid_deviation_k{k}"), diff);
                }
                for i in 0..radii.len() {
                    b.row(
                        vec![
                            Cell::I(k as i64),
                            Cell::S(range.into()),
                            Cell::F(radii[i]),
                            Cell::F(env[i]),
                            Cell::F(radial[i]),
                            Cell::S(grid.as_ref().map_or(String::new(), |g| g[i].to_string())),
                        ],
                        &record,
                    );
                }
            }
        }
        Ok(b.finish(&record, cfg))
    }
}
