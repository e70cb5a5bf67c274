use super::*;
use crate::grid::{make_test_function, AxisBox, TestFunction};
use crate::multiplier::{apply_bochner_riesz, apply_truncated};

fn small() -> GridSpec {
    GridSpec::planar(8.0, 64).unwrap()
}

fn bump(spec: GridSpec) -> SampledField {
    make_test_function(
        spec,
        &TestFunction::Bump {
            center: [0.4, -0.3, 0.0],
            radius: 1.2,
            amplitude: 1.0,
            frequency: [0.6, 0.2, 0.0],
        },
        0,
    )
    .unwrap()
}

fn d2(a: [i64; 3], b: [i64; 3]) -> i64 {
    (0..2).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum()
}

/// Average of `|h|^q` over the closed ball `|z - y| <= r` (periodic).
fn ball_average(spec: &GridSpec, h: &SampledField, y: [i64; 3], r: i64, q: f64) -> f64 {
    let mut s = 0.0;
    let mut c = 0;
    for i in -r..=r {
        for j in -r..=r {
            if i * i + j * j <= r * r {
                s += h.values()[spec.wrap([y[0] + i, y[1] + j, 0])].norm().powf(q);
                c += 1;
            }
        }
    }
    s / c as f64
}

/// Exhaustive evaluation: every radius, every centre `y` with `|x - y| < eps`,
/// operator applied on the whole torus.
fn oracle(f: &SampledField, delta: f64, q0: f64, eps_set: &[f64], x: [i64; 3], masked: bool) -> f64 {
    let spec = *f.spec();
    let mut best = 0.0f64;
    for &eps in eps_set {
        let r = (eps / spec.spacing()).round() as i64;
        let input = if masked {
            let vals = (0..spec.len())
                .map(|i| {
                    let m = spec.multi(i);
                    let t = [m[0] as i64, m[1] as i64, 0];
                    if d2(t, x) < 9 * r * r {
                        Complex64::new(0.0, 0.0)
                    } else {
                        f.values()[i]
                    }
                })
                .collect();
            SampledField::new(spec, vals).unwrap()
        } else {
            f.clone()
        };
        let h = apply_truncated(&input, delta, eps);
        for i in -r..=r {
            for j in -r..=r {
                if i * i + j * j < r * r {
                    let y = [x[0] + i, x[1] + j, 0];
                    best = best.max(ball_average(&spec, &h, y, r, q0));
                }
            }
        }
    }
    best.powf(1.0 / q0)
}

fn region(lo: [i64; 2], len: usize) -> IndexBox {
    IndexBox {
        lo: [lo[0], lo[1], 0],
        len: [len, len, 1],
    }
}

#[test]
fn config_validation() {
    let spec = small();
    assert!(MaximalConfig::new(&spec, 0.5, 2.0).is_err());
    assert!(MaximalConfig::new(&spec, 1.2, 7.0).is_err());
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    assert_eq!(cfg.eps_set, vec![0.5, 1.0, 2.0]);
    let mut bad = cfg.clone();
    bad.eps_set = vec![1.0, 0.5];
    assert!(bad.validate().is_err());
}

#[test]
fn exhaustive_star_and_starstar_match_the_oracle() {
    let spec = small();
    let f = bump(spec);
    let mut cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap().exhaustive();
    cfg.eps_set = vec![0.125, 0.25, 0.5];
    let m = Maximal::new(spec, 0.3, cfg.clone()).unwrap();
    // inside the support, at its edge, and well outside
    for lo in [[34, 29], [40, 22], [12, 50]] {
        let reg = region(lo, 2);
        let t = m.evaluate(&f, &reg, &cfg.eps_set);
        for (i, x) in reg.iter().enumerate() {
            let s = oracle(&f, 0.3, 2.0, &cfg.eps_set, x, true);
            let ss = oracle(&f, 0.3, 2.0, &cfg.eps_set, x, false);
            assert!((t.star[i] - s).abs() <= 1e-10 * ss.max(1e-300), "{x:?}: {} vs {s}", t.star[i]);
            assert!((t.starstar[i] - ss).abs() <= 1e-10 * ss, "{x:?}: {} vs {ss}", t.starstar[i]);
        }
    }
}

#[test]
fn oracle_agreement_with_q0_above_two() {
    let spec = small();
    let f = bump(spec);
    let mut cfg = MaximalConfig::new(&spec, 1.2, 3.0).unwrap().exhaustive();
    cfg.eps_set = vec![0.25];
    let m = Maximal::new(spec, 0.5, cfg.clone()).unwrap();
    let reg = region([36, 30], 1);
    let t = m.evaluate(&f, &reg, &cfg.eps_set);
    let s = oracle(&f, 0.5, 3.0, &cfg.eps_set, [36, 30, 0], true);
    assert!((t.star[0] - s).abs() <= 1e-10 * s);
}

#[test]
fn hl_matches_brute_force_on_a_ball_indicator() {
    let spec = small();
    let r = 0.5;
    let f = SampledField::from_fn(spec, |x| {
        Complex64::new(if x[0] * x[0] + x[1] * x[1] < r * r { 1.0 } else { 0.0 }, 0.0)
    })
    .with_support(AxisBox::cube([0.0; 3], r));
    let p0 = 1.2;
    let m = hl_maximal(&f, p0).unwrap();
    let eps_set = default_eps_set(&spec);
    // grid point at distance 2r from the origin
    let x = [32 + 8, 32, 0];
    let mut brute = 0.0f64;
    for &eps in &eps_set {
        let rc = (eps / spec.spacing()).round() as i64;
        brute = brute.max(ball_average(&spec, &f, x, rc, p0).powf(1.0 / p0));
    }
    let v = m.values()[spec.wrap(x)].re;
    assert!((v - brute).abs() < 1e-12, "{v} vs {brute}");
    assert!(v > 0.0 && v <= 1.0);
}

#[test]
fn hl_of_a_constant() {
    let spec = small();
    let f = SampledField::constant(spec, Complex64::new(1.0, 0.0));
    let m = hl_maximal(&f, 1.5).unwrap();
    assert!(m.values().iter().all(|v| (v.re - 1.0).abs() < 1e-12));
}

#[test]
fn star_vanishes_when_the_mask_swallows_the_support() {
    let spec = small();
    let f = make_test_function(
        spec,
        &TestFunction::Bump {
            center: [0.0; 3],
            radius: 0.3,
            amplitude: 1.0,
            frequency: [0.0; 3],
        },
        0,
    )
    .unwrap();
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    let m = Maximal::new(spec, 0.3, cfg.clone()).unwrap();
    let reg = region([32, 32], 1);
    let t = m.evaluate(&f, &reg, &cfg.eps_set);
    assert_eq!(t.star[0], 0.0);
    assert!(t.starstar[0] > 0.0);
}

#[test]
fn zero_input_gives_zero() {
    let spec = small();
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    let z = SampledField::zeros(spec);
    for v in br_starstar(&z, 0.3, &cfg).unwrap().values() {
        assert_eq!(v.re, 0.0);
    }
}

#[test]
fn positive_homogeneity() {
    let spec = small();
    let f = bump(spec);
    let c = Complex64::new(-1.5, 2.0);
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    let m = Maximal::new(spec, 0.3, cfg.clone()).unwrap();
    let reg = region([28, 28], 6);
    let a = m.evaluate(&f, &reg, &cfg.eps_set);
    let b = m.evaluate(&f.scale(c), &reg, &cfg.eps_set);
    // the masked term is a difference of two convolutions, so rounding is
    // relative to the unmasked scale
    let scale = b.starstar.iter().chain(&b.hl).fold(0.0f64, |m, v| m.max(*v));
    for i in 0..reg.count() {
        for (u, v) in [(a.star[i], b.star[i]), (a.starstar[i], b.starstar[i]), (a.hl[i], b.hl[i])] {
            assert!((v - c.norm() * u).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn refinement_never_decreases() {
    let spec = small();
    let f = bump(spec);
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    let full = cfg.clone().exhaustive();
    let thin = Maximal::new(spec, 0.3, cfg.clone()).unwrap();
    let all = Maximal::new(spec, 0.3, full.clone()).unwrap();
    let reg = region([30, 30], 4);
    let coarse = all.evaluate(&f, &reg, &cfg.eps_set[..1]);
    let fine = all.evaluate(&f, &reg, &cfg.eps_set);
    let thinned = thin.evaluate(&f, &reg, &cfg.eps_set);
    for i in 0..reg.count() {
        assert!(fine.starstar[i] >= coarse.starstar[i]);
        assert!(fine.star[i] >= coarse.star[i]);
        assert!(fine.hl[i] >= coarse.hl[i]);
        assert!(fine.starstar[i] >= thinned.starstar[i]);
    }
}

#[test]
fn starstar_dominates_bochner_riesz_up_to_small_ball_slack() {
    let spec = GridSpec::planar(16.0, 256).unwrap();
    let f = bump(spec);
    let cfg = MaximalConfig::new(&spec, 1.2, 2.0).unwrap();
    let ss = br_starstar(&f, 0.3, &cfg).unwrap();
    let b = apply_bochner_riesz(&f, 0.3);
    let peak = b.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (u, v) in b.values().iter().zip(ss.values()) {
        assert!(u.norm() <= v.re + 0.05 * peak);
    }
}

#[test]
fn weak_type_constant_of_a_step() {
    // values 2 on 3 cells of volume 0.5 and 1 on 5 more: sup is at lambda < 1
    let v = [2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0];
    let c = weak_type_constant(&v, 0.5, 1.0, 1.0).unwrap();
    assert!((c - 4.0).abs() < 1e-12);
    assert!(weak_type_constant(&v, 0.5, 0.0, 1.0).is_err());
}
