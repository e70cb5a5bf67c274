//! Random inputs. Parameters are drawn in domain units before any sampling,
//! so one seed gives the same function on every grid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{make_test_function, AxisBox, GridSpec, SampledField, TestFunction};

fn point(rng: &mut ChaCha8Rng, dim: usize, lim: f64) -> [f64; 3] {
    let mut c = [0.0; 3];
    for x in c.iter_mut().take(dim) {
        *x = rng.gen_range(-lim..lim);
    }
    c
}

/// One to three modulated bumps inside the central quarter, radii in
/// `[0.5, 2) L/16`, frequencies below 1.2, with the union of their boxes as
/// declared support.
pub fn random_bumps(spec: GridSpec, rng: &mut ChaCha8Rng) -> Result<SampledField> {
    let dim = spec.dim();
    let unit = spec.side() / 16.0;
    let count = rng.gen_range(1..=3);
    let mut values = vec![Complex64::new(0.0, 0.0); spec.len()];
    let mut support = AxisBox::empty();
    for _ in 0..count {
        let radius = rng.gen_range(0.5..2.0) * unit;
        let center = point(rng, dim, spec.side() / 4.0 - radius);
        let frequency = point(rng, dim, 1.2);
        let amplitude = rng.gen_range(0.5..2.0);
        let b = make_test_function(spec, &TestFunction::Bump { center, radius, amplitude, frequency }, 0)?;
        for (v, w) in values.iter_mut().zip(b.values()) {
            *v += w;
        }
        support = support.union(&AxisBox::cube(center, radius), dim);
    }
    Ok(SampledField::new(spec, values)?.with_support(support))
}

/// A few plane waves with `|xi| < band`, evaluated at `x`.
pub struct Waves {
    terms: Vec<([f64; 3], Complex64)>,
}

impl Waves {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, band: f64) -> Self {
        let terms = (0..4)
            .map(|_| {
                let xi = loop {
                    let xi = point(rng, dim, band);
                    if xi.iter().map(|v| v * v).sum::<f64>() < band * band {
                        break xi;
                    }
                };
                let c = Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..TAU));
                (xi, c)
            })
            .collect();
        Self { terms }
    }

    pub fn at(&self, x: [f64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(xi, c)| c * Complex64::from_polar(1.0, TAU * (xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2])))
            .sum()
    }
}

/// `exp(1 - 1/(1 - t^2))` for `|t| < 1`, else 0.
pub fn bump_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

pub fn distance(x: [f64; 3], c: [f64; 3]) -> f64 {
    ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2)).sqrt()
}

/// Random waves under a radial bump living strictly inside the annulus
/// `inner < |x - c| < outer`.
pub fn annulus_field(spec: GridSpec, rng: &mut ChaCha8Rng, center: [f64; 3], inner: f64, outer: f64) -> SampledField {
    let waves = Waves::random(rng, spec.dim(), 1.5);
    let amplitude = rng.gen_range(0.5..2.0);
    let (mid, half) = (0.5 * (inner + outer), 0.5 * (outer - inner));
    SampledField::from_fn(spec, |x| {
        let w = bump_profile((distance(x, center) - mid) / half);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            waves.at(x) * (amplitude * w)
        }
    })
}

/// Random waves under a bump of radius `radius` around `center`.
pub fn ball_field(spec: GridSpec, rng: &mut ChaCha8Rng, center: [f64; 3], radius: f64) -> SampledField {
    let waves = Waves::random(rng, spec.dim(), 1.5);
    SampledField::from_fn(spec, |x| {
        let w = bump_profile(distance(x, center) / radius);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            waves.at(x) * w
        }
    })
}

/// `f` with every sample where `keep` fails set to zero.
pub fn mask(f: &SampledField, keep: impl Fn([f64; 3]) -> bool) -> SampledField {
    let spec = *f.spec();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if keep(spec.position(i)) { *v } else { Complex64::new(0.0, 0.0) })
        .collect();
    SampledField::new(spec, values).expect("finite samples")
}

/// Mean of `phi(|f|)` over the samples where `inside` holds, with the count.
pub fn region_mean(f: &SampledField, inside: impl Fn([f64; 3]) -> bool, phi: impl Fn(f64) -> f64) -> (f64, usize) {
    let spec = f.spec();
    let (mut sum, mut count) = (0.0, 0usize);
    for (i, v) in f.values().iter().enumerate() {
        if inside(spec.position(i)) {
            sum += phi(v.norm());
            count += 1;
        }
    }
    (if count == 0 { 0.0 } else { sum / count as f64 }, count)
}
