//! Ratio sweeps for the two local estimates on `S_k`: the tail bound off
//! `2B_r` and the diagonal bound on `B(x, 3 eps)`.
//!
//! Balls are centred at grid-independent points; averages over `B_r` and
//! `B(x, 2 eps)` include the boundary, the annuli are `2^j r <= |x| < 2^{j+1} r`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledField};
use crate::harness::config::to_f64;
use crate::harness::inputs::{annulus_field, ball_field, distance, mask, region_mean};
use crate::harness::{Cell, Experiment, ExperimentConfig, Report, ReportBuilder};
use crate::indices::{q, rho_n};
use crate::multiplier::{apply_sk, k_min};

/// `rho_n(p0) + 1/20`.
fn rho(cfg: &ExperimentConfig) -> Result<f64> {
    Ok(to_f64(rho_n(cfg.p0, cfg.dim as u32)? + q(1, 20)))
}

fn add(a: &mut SampledField, b: &SampledField) {
    let values: Vec<_> = a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect();
    *a = SampledField::new(*a.spec(), values).expect("finite samples");
}

struct Row {
    lhs: f64,
    rhs: f64,
    label: String,
}

fn emit(
    b: &mut ReportBuilder,
    cfg: &ExperimentConfig,
    spec: &GridSpec,
    t: usize,
    scale: (i32, f64),
    row: Row,
    record: &crate::indices::ExponentRecord,
) {
    let degenerate = row.rhs == 0.0 && row.lhs == 0.0;
    b.row(
        vec![
            Cell::U(spec.points() as u64),
            Cell::U(t as u64),
            Cell::U(cfg.trial_seed(t)),
            Cell::I(scale.0 as i64),
            Cell::F(scale.1),
            Cell::S(row.label),
            Cell::F(row.lhs),
            Cell::F(row.rhs),
            Cell::F(if degenerate { f64::NAN } else { row.lhs / row.rhs }),
            Cell::B(degenerate),
        ],
        record,
    );
}

/// Largest `j` with `2^{j+1} r <= L/2`.
fn top_annulus(side: f64, r: f64) -> u32 {
    let mut j = 0;
    while 2f64.powi(j as i32 + 2) * r <= side / 2.0 {
        j += 1;
    }
    j
}

/// `(k, r)` with `2^k r >= 1`, `k_min <= k <= 0`, `r` a power of two in
/// domain units and at least one annulus inside `L/2`.
pub fn tail_scales(spec: &GridSpec) -> Vec<(i32, f64)> {
    let mut out = Vec::new();
    let mut r = 1.0;
    while top_annulus(spec.side(), r) >= 1 {
        for k in k_min(spec)..=0 {
            if 2f64.powi(k) * r >= 1.0 {
                out.push((k, r));
            }
        }
        r *= 2.0;
    }
    out
}

/// Tail estimate: `S_k(f 1_{(2B_r)^c})` on `B_r` against the annulus
/// averages of `f` weighted by `2^{-jM}`.
pub struct TailEstimate;

fn tail_trial(spec: GridSpec, cfg: &ExperimentConfig, (k, r): (i32, f64), seed: u64, rho: f64) -> Result<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = top_annulus(spec.side(), r);
    let mut annuli: Vec<u32> = (1..=top).filter(|_| rng.gen_bool(0.5)).collect();
    if annuli.is_empty() {
        annuli.push(rng.gen_range(1..=top));
    }
    let origin = [0.0; 3];
    let mut f = SampledField::zeros(spec);
    for &j in &annuli {
        let inner = 2f64.powi(j as i32) * r;
        add(&mut f, &annulus_field(spec, &mut rng, origin, inner, 2.0 * inner));
    }
    // mass inside 2B_r, removed by the cut-off
    if rng.gen_bool(0.5) {
        add(&mut f, &ball_field(spec, &mut rng, origin, 2.0 * r));
    }
    let cut = mask(&f, |x| distance(x, origin) >= 2.0 * r);
    let s = apply_sk(&cut, k, to_f64(cfg.delta))?;
    let lhs = region_mean(&s, |x| distance(x, origin) <= r, |v| v * v).0.sqrt();
    let p0 = to_f64(cfg.p0);
    let m = cfg.m_decay as i32;
    let tail: f64 = (1..=top)
        .map(|j| {
            let lo = 2f64.powi(j as i32) * r;
            let avg = region_mean(&f, |x| (lo..2.0 * lo).contains(&distance(x, origin)), |v| v.powf(p0)).0;
            2f64.powi(-(j as i32) * m) * avg.powf(1.0 / p0)
        })
        .sum();
    let label: Vec<String> = annuli.iter().map(u32::to_string).collect();
    Ok(Row {
        lhs,
        rhs: 2f64.powf(-(k as f64) * rho) * tail,
        label: label.join(";"),
    })
}

impl Experiment for TailEstimate {
    fn name(&self) -> &'static str {
        "prop41"
    }

    fn describe(&self) -> &'static str {
        "S_k off 2B_r against weighted annulus averages"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let rho = rho(cfg)?;
        let trials = cfg.trial_count(54);
        let mut b = ReportBuilder::new(
            self.name(),
            &["grid_n", "trial", "seed", "k", "r", "annuli", "lhs", "rhs", "ratio", "degenerate"],
            Some("ratio"),
        );
        b.extra("rho", rho);
        b.extra("m_decay", cfg.m_decay as f64);
        for spec in cfg.grids(32.0, &[256])? {
            let scales = tail_scales(&spec);
            if scales.is_empty() {
                return Err(Error::NoAdmissibleConfiguration(format!(
                    "no (k, r) with 2^k r >= 1 and 4r <= L/2 at L = {}",
                    spec.side()
                )));
            }
            let rows: Vec<Result<Row>> = (0..trials)
                .into_par_iter()
                .map(|t| tail_trial(spec, cfg, scales[t % scales.len()], cfg.trial_seed(t), rho))
                .collect();
            for (t, row) in rows.into_iter().enumerate() {
                emit(&mut b, cfg, &spec, t, scales[t % scales.len()], row?, &record);
            }
        }
        Ok(b.finish(&record, cfg))
    }
}

/// `(k, eps)` with `eps >= 1`, `2^k eps <= 1`, `k >= k_min` and `5 eps <= L/2`,
/// so that `B(x, 3 eps)` stays clear of its periodic images by `2 eps`.
pub fn diagonal_scales(spec: &GridSpec) -> Vec<(i32, f64)> {
    let mut out = Vec::new();
    let mut eps = 1.0;
    while 5.0 * eps <= spec.side() / 2.0 {
        for k in k_min(spec)..=0 {
            if 2f64.powi(k) * eps <= 1.0 {
                out.push((k, eps));
            }
        }
        eps *= 2.0;
    }
    out
}

/// Diagonal estimate: `S_k(f 1_{B(x, 3 eps)})` on `B(x, 2 eps)` against the
/// `L^{p0}` average of `f` on `B(x, 3 eps)`.
pub struct DiagonalEstimate;

fn diagonal_trial(spec: GridSpec, cfg: &ExperimentConfig, (k, eps): (i32, f64), seed: u64, rho: f64) -> Result<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = [0.0; 3];
    let mut c = [0.0; 3];
    for a in 0..spec.dim() {
        x[a] = rng.gen_range(-1.0..1.0);
        c[a] = x[a] + rng.gen_range(-eps..eps);
    }
    let f = ball_field(spec, &mut rng, c, 3.5 * eps);
    let local = mask(&f, |z| distance(z, x) < 3.0 * eps);
    let s = apply_sk(&local, k, to_f64(cfg.delta))?;
    let lhs = region_mean(&s, |z| distance(z, x) <= 2.0 * eps, |v| v * v).0.sqrt();
    let p0 = to_f64(cfg.p0);
    let avg = region_mean(&f, |z| distance(z, x) < 3.0 * eps, |v| v.powf(p0)).0;
    Ok(Row {
        lhs,
        rhs: 2f64.powf(-(k as f64) * rho) * avg.powf(1.0 / p0),
        label: format!("{:.6};{:.6}", x[0], x[1]),
    })
}

impl Experiment for DiagonalEstimate {
    fn name(&self) -> &'static str {
        "prop42"
    }

    fn describe(&self) -> &'static str {
        "S_k on B(x, 2 eps) of f cut to B(x, 3 eps)"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let record = cfg.record()?;
        let rho = rho(cfg)?;
        let trials = cfg.trial_count(54);
        let mut b = ReportBuilder::new(
            self.name(),
            &["grid_n", "trial", "seed", "k", "eps", "centre", "lhs", "rhs", "ratio", "degenerate"],
            Some("ratio"),
        );
        b.extra("rho", rho);
        for spec in cfg.grids(32.0, &[256])? {
            let scales = diagonal_scales(&spec);
            if scales.is_empty() {
                return Err(Error::NoAdmissibleConfiguration(format!(
                    "no (k, eps) with eps >= 1 and 2^k eps <= 1 at L = {}",
                    spec.side()
                )));
            }
            let rows: Vec<Result<Row>> = (0..trials)
                .into_par_iter()
                .map(|t| diagonal_trial(spec, cfg, scales[t % scales.len()], cfg.trial_seed(t), rho))
                .collect();
            for (t, row) in rows.into_iter().enumerate() {
                emit(&mut b, cfg, &spec, t, scales[t % scales.len()], row?, &record);
            }
        }
        Ok(b.finish(&record, cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_scales_at_side_32() {
        let spec = GridSpec::planar(32.0, 256).unwrap();
        assert_eq!(
            tail_scales(&spec),
            [(0, 1.0), (-1, 2.0), (0, 2.0), (-2, 4.0), (-1, 4.0), (0, 4.0)]
        );
        assert_eq!(diagonal_scales(&spec), [(-2, 1.0), (-1, 1.0), (0, 1.0), (-2, 2.0), (-1, 2.0)]);
        assert_eq!(top_annulus(32.0, 1.0), 3);
        let tiny = GridSpec::planar(4.0, 32).unwrap();
        assert!(tail_scales(&tiny).is_empty());
        let cfg = ExperimentConfig {
            grid_l: Some(4.0),
            grid_n: Some(vec![32]),
            ..Default::default()
        };
        assert!(matches!(TailEstimate.run(&cfg), Err(Error::NoAdmissibleConfiguration(_))));
    }

    #[test]
    fn mass_inside_the_double_ball_is_invisible() {
        let spec = GridSpec::planar(32.0, 256).unwrap();
        let f = ball_field(spec, &mut ChaCha8Rng::seed_from_u64(2), [0.0; 3], 2.0);
        let cut = mask(&f, |x| distance(x, [0.0; 3]) >= 2.0);
        assert!(cut.is_zero());
        let s = apply_sk(&cut, 0, 0.2).unwrap();
        assert_eq!(region_mean(&s, |x| distance(x, [0.0; 3]) <= 1.0, |v| v * v).0, 0.0);
    }

    #[test]
    fn ratio_falls_as_rho_grows() {
        let spec = GridSpec::planar(32.0, 256).unwrap();
        let cfg = ExperimentConfig::default();
        let a = diagonal_trial(spec, &cfg, (-2, 1.0), 9, 0.3).unwrap();
        let b = diagonal_trial(spec, &cfg, (-2, 1.0), 9, 0.5).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert!(a.lhs / a.rhs > b.lhs / b.rhs);
        let t = tail_trial(spec, &cfg, (0, 1.0), 4, 0.3).unwrap();
        assert!(t.lhs > 0.0 && t.rhs > 0.0);
    }
}
