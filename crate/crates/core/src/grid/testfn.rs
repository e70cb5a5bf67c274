use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AxisBox, GridSpec, SampledField};
use crate::error::{Error, Result};

/// Families of test functions. Compactly supported kinds vanish identically
/// outside the recorded support box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(-pi |x - c|^2 / width^2)`, cut to zero outside `c +- 4 width`.
    Gaussian { center: [f64; 3], width: f64 },
    /// Smooth bump `amplitude * exp(1 - 1/(1 - |x-c|^2/r^2))` modulated by
    /// `e^{2 pi i x.frequency}`.
    Bump {
        center: [f64; 3],
        radius: f64,
        amplitude: f64,
        frequency: [f64; 3],
    },
    /// Random trigonometric polynomial with lattice frequencies in
    /// `|xi| < band`; with `radius` it is multiplied by a unit bump window.
    RandomTrig {
        center: [f64; 3],
        radius: Option<f64>,
        band: f64,
        terms: usize,
    },
    /// Smoothed indicator of the cube `c +- half_width`, falling to zero over `ramp`.
    IndicatorSmooth {
        center: [f64; 3],
        half_width: f64,
        ramp: f64,
    },
}

impl TestFunction {
    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Gaussian { .. } => "gaussian",
            TestFunction::Bump { .. } => "bump",
            TestFunction::RandomTrig { .. } => "random_trig",
            TestFunction::IndicatorSmooth { .. } => "indicator_smooth",
        }
    }

    /// Declared support box, `None` for unwindowed trigonometric polynomials.
    pub fn support(&self) -> Option<AxisBox> {
        match *self {
            TestFunction::Gaussian { center, width } => Some(AxisBox::cube(center, 4.0 * width)),
            TestFunction::Bump { center, radius, .. } => Some(AxisBox::cube(center, radius)),
            TestFunction::RandomTrig { center, radius, .. } => {
                radius.map(|r| AxisBox::cube(center, r))
            }
            TestFunction::IndicatorSmooth {
                center,
                half_width,
                ramp,
            } => Some(AxisBox::cube(center, half_width + ramp)),
        }
    }
}

fn mollifier(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth unit bump on the open unit ball, `e^{1 - 1/(1 - s^2)}`.
pub(crate) fn unit_bump(s2: f64) -> f64 {
    if s2 < 1.0 {
        (1.0 - 1.0 / (1.0 - s2)).exp()
    } else {
        0.0
    }
}

/// 1 for `t <= 0`, 0 for `t >= 1`, C-infinity in between.
fn ramp_down(t: f64) -> f64 {
    let a = mollifier(1.0 - t);
    let b = mollifier(t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

fn dist_sq(x: &[f64; 3], c: &[f64; 3], dim: usize) -> f64 {
    (0..dim).map(|a| (x[a] - c[a]).powi(2)).sum()
}

pub fn make_test_function(spec: GridSpec, kind: &TestFunction, seed: u64) -> Result<SampledField> {
    let dim = spec.dim();
    let support = kind.support();
    if let Some(s) = &support {
        let quarter = AxisBox::cube([0.0; 3], 0.25 * spec.side() + 1e-12);
        if !quarter.contains_box(s, dim) {
            return Err(Error::SupportOutsideQuarter(format!("{} support {:?}", kind.name(), s)));
        }
    }
    let field = match *kind {
        TestFunction::Gaussian { center, width } => {
            if !(width > 0.0) {
                return Err(Error::InvalidGrid("gaussian width must be positive".into()));
            }
            let b = support.unwrap();
            SampledField::from_fn(spec, |x| {
                if !b.contains_point(&x, dim) {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new((-PI * dist_sq(&x, &center, dim) / (width * width)).exp(), 0.0)
            })
        }
        TestFunction::Bump {
            center,
            radius,
            amplitude,
            frequency,
        } => SampledField::from_fn(spec, |x| {
            let v = unit_bump(dist_sq(&x, &center, dim) / (radius * radius));
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let phase: f64 = (0..dim).map(|a| x[a] * frequency[a]).sum();
            Complex64::from_polar(amplitude * v, 2.0 * PI * phase)
        }),
        TestFunction::RandomTrig {
            center,
            radius,
            band,
            terms,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let kmax = (band * spec.side()).floor() as i64;
            let mut modes = Vec::with_capacity(terms);
            while modes.len() < terms {
                let mut k = [0i64; 3];
                for ka in k.iter_mut().take(dim) {
                    *ka = rng.gen_range(-kmax..=kmax);
                }
                let xi: Vec<f64> = k.iter().map(|&v| v as f64 / spec.side()).collect();
                if xi.iter().map(|v| v * v).sum::<f64>().sqrt() >= band {
                    continue;
                }
                let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                modes.push(([xi[0], xi[1], xi[2]], amp));
            }
            SampledField::from_fn(spec, |x| {
                let window = match radius {
                    Some(r) => unit_bump(dist_sq(&x, &center, dim) / (r * r)),
                    None => 1.0,
                };
                if window == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let s: Complex64 = modes
                    .iter()
                    .map(|(xi, amp)| {
                        let phase: f64 = (0..dim).map(|a| x[a] * xi[a]).sum();
                        amp * Complex64::from_polar(1.0, 2.0 * PI * phase)
                    })
                    .sum();
                s * window
            })
        }
        TestFunction::IndicatorSmooth {
            center,
            half_width,
            ramp,
        } => {
            if !(ramp > 0.0 && half_width > 0.0) {
                return Err(Error::InvalidGrid("indicator_smooth needs positive sizes".into()));
            }
            SampledField::from_fn(spec, |x| {
                let v: f64 = (0..dim)
                    .map(|a| ramp_down(((x[a] - center[a]).abs() - half_width) / ramp))
                    .product();
                Complex64::new(v, 0.0)
            })
        }
    };
    Ok(match support {
        Some(s) => field.with_support(s),
        None => field,
    })
}
