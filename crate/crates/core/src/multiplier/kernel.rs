//! Spatial profiles of the kernels `\check{s}_k`.
//!
//! Two routes: the torus kernel sampled on a grid (limited to scales the grid
//! resolves and radii below `L/2`), and the radial inverse Fourier transform of
//! the continuum symbol, computed by panel Gauss-Legendre quadrature.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use super::{bessel_j0, check_scale, kernel_field, LittlewoodPaley, RadialSymbol, TRANSITION};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// `max |\check{s}_k(x)|` over grid points with `||x| - r| <= dx/2`, for each
/// radius, from the torus kernel of `s_k`.
pub fn kernel_profile(spec: &GridSpec, k: i32, delta: f64, radii: &[f64]) -> Result<Vec<f64>> {
    check_scale(spec, k)?;
    let limit = spec.side() / 2.0;
    for &r in radii {
        if !(r > 0.0 && r < limit) {
            return Err(Error::RadiusOutOfRange { radius: r, limit });
        }
    }
    let kern = kernel_field(spec, &LittlewoodPaley { delta, k });
    let dx = spec.spacing();
    let scale = 1.0 / spec.cell_volume();
    let dim = spec.dim();
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let reach = ((r + dx) / dx).ceil() as i64;
        let span = |a: usize| if a < dim { -reach..=reach } else { 0..=0 };
        let mut best = 0.0f64;
        for a in span(0) {
            for b in span(1) {
                for c in span(2) {
                    let rho = dx * ((a * a + b * b + c * c) as f64).sqrt();
                    if (rho - r).abs() <= 0.5 * dx {
                        best = best.max(kern[spec.wrap([a, b, c])].norm() * scale);
                    }
                }
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// Width in `|xi|` of the narrowest feature of `s_k`.
fn feature_width(k: i32) -> f64 {
    0.25 * TRANSITION * 2f64.powi(k)
}

/// Continuum kernel `\check{s}(r)` of a radial symbol in dimension `dim`:
/// `2 int s cos(2 pi r rho)`, `2 pi int s J0(2 pi r rho) rho` or
/// `(2/r) int s sin(2 pi r rho) rho` for `dim = 1, 2, 3`.
pub fn radial_kernel(dim: usize, symbol: &dyn RadialSymbol, feature: f64, r: f64) -> f64 {
    let (a, b) = symbol.radial_support();
    let h = (feature / 4.0).min(0.125 / r.max(1.0));
    let panels = ((b - a) / h).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let rule = GaussLegendre::new(NonZeroUsize::new(8).unwrap());
    let w = 2.0 * PI * r;
    let integrand = |rho: f64| -> f64 {
        let s = symbol.at(rho * rho);
        if s == 0.0 {
            return 0.0;
        }
        match dim {
            1 => 2.0 * s * (w * rho).cos(),
            2 => 2.0 * PI * s * bessel_j0(w * rho) * rho,
            _ => {
                if r == 0.0 {
                    4.0 * PI * s * rho * rho
                } else {
                    2.0 / r * s * (w * rho).sin() * rho
                }
            }
        }
    };
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            rule.integrate(lo, lo + h, integrand)
        })
        .sum()
}

/// `|\check{s}_k(r)|` for each radius, continuum route.
pub fn radial_kernel_profile(dim: usize, k: i32, delta: f64, radii: &[f64]) -> Vec<f64> {
    let sym = LittlewoodPaley { delta, k };
    radii
        .iter()
        .map(|&r| radial_kernel(dim, &sym, feature_width(k), r).abs())
        .collect()
}

/// Envelope `max_{[r, r+1]} |\check{s}_k|`, sampled at 16 points per unit.
pub fn radial_envelope(dim: usize, k: i32, delta: f64, radii: &[f64]) -> Vec<f64> {
    let sym = LittlewoodPaley { delta, k };
    radii
        .iter()
        .map(|&r| {
            (0..16)
                .map(|i| radial_kernel(dim, &sym, feature_width(k), r + i as f64 / 16.0).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
