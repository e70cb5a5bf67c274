//! Radial Fourier multipliers: the Bochner-Riesz symbol `(1 - |xi|^2)_+^delta`,
//! its truncations `B^delta_eps`, and the `L^inf`-normalized Littlewood-Paley
//! pieces `s_k` with `B^delta = sum_{k <= 0} 2^{k delta} S_k`.

mod bessel;
mod kernel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{apply_symbol_table, fft_nd, GridSpec, SampledField};

pub use bessel::bessel_j0;
pub use kernel::{
    fit_loglog_slope, kernel_profile, radial_envelope, radial_kernel, radial_kernel_profile,
};

/// Right edge of the cutoff transitions.
pub const TRANSITION: f64 = 0.01;

fn mollifier(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `H`: 1 on `(-inf, 1]`, 0 on `[1.01, inf)`, smooth and nonincreasing.
pub fn smooth_step(x: f64) -> f64 {
    let a = mollifier(1.0 + TRANSITION - x);
    let b = mollifier(x - 1.0);
    if b == 0.0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// `chi(x) = H(x) - H(2x)`: supported in `[1/2, 1.01]`, 1 on `[0.505, 1]`,
/// and `sum_{k <= 0} chi(2^{-k} x)` telescopes to 1 on `(0, 1]`.
pub fn chi(x: f64) -> f64 {
    smooth_step(x) - smooth_step(2.0 * x)
}

/// 1 on `[0, 1]`, supported in `[-0.01, 1.01]`.
pub fn chi_tilde(t: f64) -> f64 {
    smooth_step(t) * smooth_step(1.0 - t)
}

fn positive_power(t: f64, delta: f64) -> f64 {
    if t > 0.0 {
        if delta == 0.0 {
            1.0
        } else {
            t.powf(delta)
        }
    } else {
        0.0
    }
}

/// Parameters of a member of the multiplier family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    pub delta: f64,
    pub k: i32,
    pub epsilon: f64,
}

/// A radial multiplier `m(|xi|)`, evaluated through `|xi|^2`.
pub trait RadialSymbol: Send + Sync {
    fn name(&self) -> String;

    fn at(&self, xi_sq: f64) -> f64;

    /// Interval of `|xi|` outside of which the symbol vanishes.
    fn radial_support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BochnerRiesz {
    pub delta: f64,
}

impl RadialSymbol for BochnerRiesz {
    fn name(&self) -> String {
        format!("bochner_riesz(delta={})", self.delta)
    }

    fn at(&self, xi_sq: f64) -> f64 {
        positive_power(1.0 - xi_sq, self.delta)
    }
}

/// `(1 - |xi|^2)_+^delta chi~(eps (1 - |xi|^2))`.
#[derive(Debug, Clone, Copy)]
pub struct Truncated {
    pub delta: f64,
    pub epsilon: f64,
}

impl RadialSymbol for Truncated {
    fn name(&self) -> String {
        format!("truncated(delta={}, eps={})", self.delta, self.epsilon)
    }

    fn at(&self, xi_sq: f64) -> f64 {
        let t = 1.0 - xi_sq;
        if t <= 0.0 {
            return 0.0;
        }
        positive_power(t, self.delta) * chi_tilde(self.epsilon * t)
    }

    fn radial_support(&self) -> (f64, f64) {
        let tmax = ((1.0 + TRANSITION) / self.epsilon).min(1.0);
        ((1.0 - tmax).max(0.0).sqrt(), 1.0)
    }
}

/// `s_k(xi) = 2^{-k delta} (1 - |xi|^2)_+^delta chi(2^{-k}(1 - |xi|^2))`.
#[derive(Debug, Clone, Copy)]
pub struct LittlewoodPaley {
    pub delta: f64,
    pub k: i32,
}

impl RadialSymbol for LittlewoodPaley {
    fn name(&self) -> String {
        format!("s_k(delta={}, k={})", self.delta, self.k)
    }

    fn at(&self, xi_sq: f64) -> f64 {
        let t = 1.0 - xi_sq;
        if t <= 0.0 {
            return 0.0;
        }
        let u = t * 2f64.powi(-self.k);
        positive_power(u, self.delta) * chi(u)
    }

    fn radial_support(&self) -> (f64, f64) {
        let scale = 2f64.powi(self.k);
        let tmax = ((1.0 + TRANSITION) * scale).min(1.0);
        let tmin = 0.5 * scale;
        ((1.0 - tmax).max(0.0).sqrt(), (1.0 - tmin).sqrt())
    }
}

/// Symbol sampled on the lattice of `spec`, raw FFT order.
pub fn symbol_table(spec: &GridSpec, symbol: &dyn RadialSymbol) -> Vec<f64> {
    spec.frequency_norms_sq()
        .into_iter()
        .map(|r2| symbol.at(r2))
        .collect()
}

pub fn apply_symbol(f: &SampledField, symbol: &dyn RadialSymbol) -> SampledField {
    apply_symbol_table(f, &symbol_table(f.spec(), symbol))
}

pub fn apply_bochner_riesz(f: &SampledField, delta: f64) -> SampledField {
    apply_symbol(f, &BochnerRiesz { delta })
}

pub fn apply_truncated(f: &SampledField, delta: f64, epsilon: f64) -> SampledField {
    apply_symbol(f, &Truncated { delta, epsilon })
}

/// Coarsest admissible scale index `ceil(log2(8/L))`: the shell
/// `1 - |xi|^2 ~ 2^k` holds a few lattice frequencies.
pub fn k_min(spec: &GridSpec) -> i32 {
    (8.0 / spec.side()).log2().ceil() as i32
}

pub fn check_scale(spec: &GridSpec, k: i32) -> Result<()> {
    if k > 0 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k.to_string(),
            interval: "(-inf, 0]".into(),
        });
    }
    let kmin = k_min(spec);
    if k < kmin {
        return Err(Error::ScaleBelowResolution { k, k_min: kmin });
    }
    Ok(())
}

pub fn apply_sk(f: &SampledField, k: i32, delta: f64) -> Result<SampledField> {
    check_scale(f.spec(), k)?;
    Ok(apply_symbol(f, &LittlewoodPaley { delta, k }))
}

/// Discrete convolution kernel of a multiplier on the torus: `T f = f * K`
/// with `K[d] = N^{-n} sum_m sym(m) e^{2 pi i d.m/N}`, indexed by offset `d`.
pub fn kernel_field(spec: &GridSpec, symbol: &dyn RadialSymbol) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = symbol_table(spec, symbol)
        .into_iter()
        .map(|s| Complex64::new(s, 0.0))
        .collect();
    fft_nd(&mut buf, spec.shape(), true);
    let norm = 1.0 / spec.len() as f64;
    for c in &mut buf {
        *c *= norm;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner_product, lp_norm, make_test_function, TestFunction};

    fn planar(l: f64, n: usize) -> GridSpec {
        GridSpec::planar(l, n).unwrap()
    }

    fn rel_err(a: &SampledField, b: &SampledField) -> f64 {
        lp_norm(&a.sub(b).unwrap(), 2.0, None) / lp_norm(b, 2.0, None)
    }

    #[test]
    fn step_plateaus() {
        assert_eq!(smooth_step(0.5), 1.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert_eq!(smooth_step(1.02), 0.0);
        assert_eq!(smooth_step(1.01), 0.0);
        let mid = smooth_step(1.005);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn step_is_monotone() {
        let mut prev = 1.0;
        for i in 0..=2000 {
            let x = 0.99 + 0.03 * i as f64 / 2000.0;
            let v = smooth_step(x);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn chi_plateau_and_support() {
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(0.3), 0.0);
        assert_eq!(chi(0.5), 0.0);
        assert_eq!(chi(1.01), 0.0);
        for i in 0..=100 {
            let x = 0.51 + 0.48 * i as f64 / 100.0;
            assert_eq!(chi(x), 1.0);
        }
    }

    #[test]
    fn chi_tilde_plateau_and_support() {
        assert_eq!(chi_tilde(0.0), 1.0);
        assert_eq!(chi_tilde(1.0), 1.0);
        assert_eq!(chi_tilde(-0.02), 0.0);
        assert_eq!(chi_tilde(1.02), 0.0);
    }

    #[test]
    fn telescoping_at_spot_values() {
        for x in [0.001, 0.3, 0.999] {
            let s: f64 = (-40..=0).map(|k| chi(2f64.powi(-k) * x)).sum();
            assert!((s - 1.0).abs() < 1e-12, "x = {x}: {s}");
        }
    }

    #[test]
    fn bochner_riesz_eigenfunctions() {
        let spec = planar(16.0, 128);
        // |xi| = 1/2 exactly on the lattice
        let wave = SampledField::plane_wave(spec, [0.5, 0.0, 0.0]);
        for delta in [0.0, 0.2, 1.3] {
            let out = apply_bochner_riesz(&wave, delta);
            let expected = wave.scale(Complex64::new(0.75f64.powf(delta), 0.0));
            assert!(rel_err(&out, &expected) < 1e-12);
        }
        let outside = SampledField::plane_wave(spec, [1.0, 0.0, 0.0]);
        let out = apply_bochner_riesz(&outside, 0.4);
        assert!(lp_norm(&out, 2.0, None) < 1e-12);
    }

    #[test]
    fn delta_zero_is_identity_inside_the_ball() {
        let spec = planar(16.0, 128);
        let f = make_test_function(
            spec,
            &TestFunction::RandomTrig {
                center: [0.0; 3],
                radius: None,
                band: 0.9,
                terms: 20,
            },
            7,
        )
        .unwrap();
        let out = apply_bochner_riesz(&f, 0.0);
        assert!(rel_err(&out, &f) < 1e-12);
    }

    #[test]
    fn truncation_is_inactive_for_small_eps() {
        let spec = planar(16.0, 128);
        let f = make_test_function(
            spec,
            &TestFunction::Bump {
                center: [0.0; 3],
                radius: 2.0,
                amplitude: 1.0,
                frequency: [0.4, 0.1, 0.0],
            },
            0,
        )
        .unwrap();
        for eps in [0.1, 0.5, 1.0 / 1.01] {
            let a = apply_truncated(&f, 0.3, eps);
            let b = apply_bochner_riesz(&f, 0.3);
            assert!(rel_err(&a, &b) < 1e-12);
        }
        let big = apply_truncated(&f, 0.3, 2.0);
        assert!(lp_norm(&big, 2.0, None) <= lp_norm(&f, 2.0, None));
    }

    #[test]
    fn truncated_symbol_is_bounded_by_one() {
        let sym = Truncated {
            delta: 0.2,
            epsilon: 2.0,
        };
        for i in 0..=10_000 {
            let r2 = 1.2 * i as f64 / 10_000.0;
            let v = sym.at(r2);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn sk_eigenvalue_on_plateau() {
        let spec = planar(64.0, 512);
        let k = -2;
        // 1 - |xi|^2 = (3/4) 2^k requires |xi|^2 = 1 - 3/16 = 13/16
        let xi_sq = 1.0 - 0.75 * 2f64.powi(k);
        let sym = LittlewoodPaley { delta: 0.7, k };
        assert!((sym.at(xi_sq) - 0.75f64.powf(0.7)).abs() < 1e-14);
        // plane wave on a lattice frequency with 1 - |xi|^2 = 2^{k+1} is killed
        let xi = (1.0 - 2f64.powi(k + 1)).sqrt();
        assert_eq!(sym.at(xi * xi), 0.0);
        // lattice wave: (48/64, 32/64) has |xi|^2 = 0.8125 = 13/16
        let wave = SampledField::plane_wave(spec, [0.75, 0.5, 0.0]);
        let out = apply_sk(&wave, k, 0.7).unwrap();
        let expected = wave.scale(Complex64::new(0.75f64.powf(0.7), 0.0));
        assert!(rel_err(&out, &expected) < 1e-12);
    }

    #[test]
    fn sk_rejects_unresolved_scales() {
        let spec = planar(16.0, 128);
        assert_eq!(k_min(&spec), -1);
        let f = SampledField::zeros(spec);
        assert!(matches!(
            apply_sk(&f, -2, 0.5),
            Err(Error::ScaleBelowResolution { k: -2, k_min: -1 })
        ));
        assert!(apply_sk(&f, -1, 0.5).is_ok());
    }

    #[test]
    fn sk_symbol_bound() {
        for k in [-6, -3, 0] {
            let sym = LittlewoodPaley { delta: 0.8, k };
            for i in 0..=20_000 {
                let r2 = i as f64 / 20_000.0;
                assert!(sym.at(r2).abs() <= 1.01f64.powf(0.8) + 1e-15);
            }
        }
    }

    #[test]
    fn bochner_riesz_is_self_adjoint() {
        let spec = planar(16.0, 128);
        let mk = |seed| {
            make_test_function(
                spec,
                &TestFunction::RandomTrig {
                    center: [0.0; 3],
                    radius: Some(3.0),
                    band: 1.5,
                    terms: 10,
                },
                seed,
            )
            .unwrap()
        };
        for seed in 0..5 {
            let f = mk(seed);
            let g = mk(seed + 100);
            let a = inner_product(&apply_bochner_riesz(&f, 0.3), &g).unwrap();
            let b = inner_product(&f, &apply_bochner_riesz(&g, 0.3)).unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn kernel_field_reproduces_multiplier() {
        let spec = planar(16.0, 128);
        let f = make_test_function(
            spec,
            &TestFunction::Bump {
                center: [0.0; 3],
                radius: 1.0,
                amplitude: 1.0,
                frequency: [0.0; 3],
            },
            0,
        )
        .unwrap();
        let sym = BochnerRiesz { delta: 0.5 };
        let kern = kernel_field(&spec, &sym);
        let out = apply_symbol(&f, &sym);
        let z = spec.flat([64, 70, 0]);
        let mut s = Complex64::new(0.0, 0.0);
        for t in 0..spec.len() {
            let v = f.values()[t];
            if v.norm() > 0.0 {
                let mz = spec.multi(z);
                let mt = spec.multi(t);
                s += v * kern[spec.wrap([
                    mz[0] as i64 - mt[0] as i64,
                    mz[1] as i64 - mt[1] as i64,
                    0,
                ])];
            }
        }
        assert!((s - out.values()[z]).norm() < 1e-12);
    }
}
