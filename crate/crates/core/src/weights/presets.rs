use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;

/// Named weight constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightPreset {
    Constant { value: f64 },
    /// `max(|x|, dx)^a`.
    Power { a: f64 },
    /// `low` and `high` on alternating cubes of side `cell`.
    Checkerboard { cell: f64, low: f64, high: f64 },
    /// `exp(amplitude * t(x))` with `t` a seeded trigonometric sum, `|t| <= 1`.
    LogTrig { amplitude: f64, band: f64, seed: u64 },
}

impl WeightPreset {
    pub fn id(&self) -> String {
        match self {
            WeightPreset::Constant { value } => format!("constant({value})"),
            WeightPreset::Power { a } => format!("power({a})"),
            WeightPreset::Checkerboard { cell, low, high } => format!("checker({cell};{low};{high})"),
            WeightPreset::LogTrig { amplitude, band, seed } => format!("logtrig({amplitude};{band};{seed})"),
        }
    }

    pub fn values(&self, spec: &GridSpec) -> Vec<f64> {
        let dim = spec.dim();
        let pos = |i: usize| spec.position(i);
        match *self {
            WeightPreset::Constant { value } => vec![value; spec.len()],
            WeightPreset::Power { a } => (0..spec.len())
                .map(|i| {
                    let x = pos(i);
                    let r = (0..dim).map(|k| x[k] * x[k]).sum::<f64>().sqrt();
                    r.max(spec.spacing()).powf(a)
                })
                .collect(),
            WeightPreset::Checkerboard { cell, low, high } => (0..spec.len())
                .map(|i| {
                    let x = pos(i);
                    let parity: i64 = (0..dim)
                        .map(|k| ((x[k] + 0.5 * spec.side()) / cell).floor() as i64)
                        .sum();
                    if parity.rem_euclid(2) == 0 {
                        low
                    } else {
                        high
                    }
                })
                .collect(),
            WeightPreset::LogTrig { amplitude, band, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let terms: Vec<([f64; 3], f64, f64)> = (0..8)
                    .map(|_| {
                        let mut k = [0.0; 3];
                        for x in k.iter_mut().take(dim) {
                            // lattice frequencies keep the weight periodic
                            *x = rng.gen_range(-band..=band).round() / spec.side();
                        }
                        (k, rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-1.0..1.0))
                    })
                    .collect();
                let norm: f64 = terms.iter().map(|t| t.2.abs()).sum::<f64>().max(1e-300);
                (0..spec.len())
                    .map(|i| {
                        let x = pos(i);
                        let t: f64 = terms
                            .iter()
                            .map(|(k, ph, c)| {
                                let arg: f64 = (0..dim).map(|a| k[a] * x[a]).sum();
                                c * (std::f64::consts::TAU * arg + ph).cos()
                            })
                            .sum();
                        (amplitude * t / norm).exp()
                    })
                    .collect()
            }
        }
    }

    /// Whether the continuum weight lies in `A_r` and `RH_s` on `R^dim`.
    /// Bounded presets lie in every class; `|x|^a` needs `-dim/s < a < dim (r - 1)`.
    pub fn in_classes(&self, dim: usize, r: f64, s: f64) -> bool {
        match *self {
            WeightPreset::Power { a } => {
                let n = dim as f64;
                a > -n / s && a < n * (r - 1.0)
            }
            _ => r > 1.0 && s > 1.0,
        }
    }

    /// The shared test suite: constants, power weights inside and outside
    /// `A_2`, checkerboards and smooth random weights.
    pub fn suite() -> Vec<WeightPreset> {
        let mut v = vec![
            WeightPreset::Constant { value: 1.0 },
            WeightPreset::Constant { value: 3.5 },
        ];
        for a in [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 3.0] {
            v.push(WeightPreset::Power { a });
        }
        for (cell, high) in [(0.25, 2.0), (1.0, 2.0), (2.0, 10.0), (0.5, 100.0)] {
            v.push(WeightPreset::Checkerboard { cell, low: 1.0, high });
        }
        for seed in 0..7 {
            v.push(WeightPreset::LogTrig {
                amplitude: 0.5 + seed as f64 * 0.4,
                band: 6.0,
                seed,
            });
        }
        v
    }
}
