//! Muckenhoupt and reverse Hoelder characteristics over a fixed finite cube
//! family, weighted operator norms and vector-valued norms.
//!
//! A [`Weight`] is `base^power` with `base` normalized to maximum 1. The
//! characteristics are invariant under `w -> c w`, constants have base
//! identically 1, and `w^s`, `1/w` share their base (and its cached power
//! sums) with `w`.

mod presets;
mod rect;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{lp_norm, GridSpec, IndexBox, SampledField};
use crate::indices::{admissible_vv, alpha_exponent, conjugate, Side, Q};
use crate::multiplier::apply_bochner_riesz;

pub use presets::WeightPreset;
use rect::{Reduce, RectTable};

/// Grid cubes over which characteristic suprema are taken: every aligned
/// dyadic cube of the grid, then seeded random cubes.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFamily {
    dim: usize,
    n: usize,
    cubes: Vec<IndexBox>,
    dyadic: usize,
}

impl CubeFamily {
    pub fn dyadic(spec: &GridSpec) -> Self {
        let (dim, n) = (spec.dim(), spec.points());
        let mut cubes = Vec::new();
        for level in 0..=n.trailing_zeros() {
            let side = n >> level;
            let per = 1usize << level;
            let mut blocks = IndexBox::unit();
            for a in 0..dim {
                blocks.len[a] = per;
            }
            for b in blocks.iter() {
                let mut c = IndexBox::unit();
                for a in 0..dim {
                    c.lo[a] = b[a] * side as i64;
                    c.len[a] = side;
                }
                cubes.push(c);
            }
        }
        let dyadic = cubes.len();
        Self { dim, n, cubes, dyadic }
    }

    /// Dyadic cubes plus `random` cubes with uniform side in `[1, N]` and
    /// uniform position inside the grid.
    pub fn standard(spec: &GridSpec, random: usize, seed: u64) -> Self {
        let mut fam = Self::dyadic(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random {
            let side = rng.gen_range(1..=fam.n);
            let mut c = IndexBox::unit();
            for a in 0..fam.dim {
                c.lo[a] = rng.gen_range(0..=fam.n - side) as i64;
                c.len[a] = side;
            }
            fam.cubes.push(c);
        }
        fam
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cubes(&self) -> &[IndexBox] {
        &self.cubes
    }

    fn reduce(&self, t: &RectTable) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.cubes.len());
        for (i, c) in self.cubes.iter().enumerate() {
            if i < self.dyadic {
                let side = c.len[0];
                let mut idx = [0usize; 3];
                for a in 0..self.dim {
                    idx[a] = c.lo[a] as usize / side;
                }
                out.push(t.dyadic(side.trailing_zeros() as usize, idx));
            } else {
                out.push(t.query(c));
            }
        }
        out
    }
}

/// Default number of random cubes added to the dyadic family.
pub const RANDOM_CUBES: usize = 10_000;

#[derive(Debug)]
struct Shared {
    spec: GridSpec,
    base: Vec<f64>,
    family: CubeFamily,
    /// Per-cube averages of `base^e`, keyed by the bits of `e`.
    means: Mutex<HashMap<u64, Arc<Vec<f64>>>>,
    /// Per-cube min and max of `base`.
    extrema: OnceLock<(Vec<f64>, Vec<f64>)>,
}

/// A strictly positive weight with its cube family.
#[derive(Debug, Clone)]
pub struct Weight {
    shared: Arc<Shared>,
    power: f64,
    cache: Arc<Mutex<HashMap<(u8, u64), f64>>>,
}

impl Weight {
    /// From positive finite real values, normalized by their maximum.
    pub fn from_values(spec: GridSpec, values: &[f64], family: CubeFamily) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::GridMismatch);
        }
        if family.n != spec.points() || family.dim != spec.dim() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidExponent("weight must be finite and strictly positive".into()));
        }
        let top = values.iter().cloned().fold(0.0, f64::max);
        Ok(Self {
            shared: Arc::new(Shared {
                spec,
                base: values.iter().map(|v| v / top).collect(),
                family,
                means: Mutex::default(),
                extrema: OnceLock::new(),
            }),
            power: 1.0,
            cache: Arc::default(),
        })
    }

    /// From a field with zero imaginary part and positive real part.
    pub fn from_field(f: &SampledField, family: CubeFamily) -> Result<Self> {
        if f.values().iter().any(|v| v.im != 0.0) {
            return Err(Error::InvalidExponent("weight field must be real".into()));
        }
        let re: Vec<f64> = f.values().iter().map(|v| v.re).collect();
        Self::from_values(*f.spec(), &re, family)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.shared.spec
    }

    pub fn family(&self) -> &CubeFamily {
        &self.shared.family
    }

    /// `w^s`, sharing the base and its caches.
    pub fn pow(&self, s: f64) -> Self {
        Self {
            shared: self.shared.clone(),
            power: self.power * s,
            cache: Arc::default(),
        }
    }

    pub fn reciprocal(&self) -> Self {
        self.pow(-1.0)
    }

    /// Samples of the weight (up to the normalizing factor).
    pub fn values(&self) -> Vec<f64> {
        self.shared.base.iter().map(|b| b.powf(self.power)).collect()
    }

    pub fn field(&self) -> SampledField {
        let v = self.values().into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        SampledField::new(self.shared.spec, v).expect("weights are finite")
    }

    /// Per-cube `avg_Q w^e`.
    pub fn means(&self, e: f64) -> Arc<Vec<f64>> {
        let t = self.power * e;
        let sh = &self.shared;
        if let Some(m) = sh.means.lock().unwrap().get(&t.to_bits()) {
            return m.clone();
        }
        let powered: Vec<f64> = sh.base.iter().map(|b| b.powf(t)).collect();
        let table = RectTable::new(&powered, sh.spec.dim(), sh.spec.points(), Reduce::Sum);
        let sums = sh.family.reduce(&table);
        let m: Vec<f64> = sums
            .iter()
            .zip(&sh.family.cubes)
            .map(|(s, c)| s / c.count() as f64)
            .collect();
        let m = Arc::new(m);
        sh.means.lock().unwrap().insert(t.to_bits(), m.clone());
        m
    }

    fn base_extrema(&self) -> &(Vec<f64>, Vec<f64>) {
        let sh = &self.shared;
        sh.extrema.get_or_init(|| {
            let (dim, n) = (sh.spec.dim(), sh.spec.points());
            let lo = sh.family.reduce(&RectTable::new(&sh.base, dim, n, Reduce::Min));
            let hi = sh.family.reduce(&RectTable::new(&sh.base, dim, n, Reduce::Max));
            (lo, hi)
        })
    }

    /// Per-cube `(min w, max w)`.
    pub fn extrema(&self) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.base_extrema();
        let p = self.power;
        let f = |v: &Vec<f64>| v.iter().map(|b| b.powf(p)).collect::<Vec<f64>>();
        if p >= 0.0 {
            (f(lo), f(hi))
        } else {
            (f(hi), f(lo))
        }
    }

    fn memo(&self, kind: u8, x: f64, make: impl FnOnce() -> f64) -> f64 {
        if let Some(v) = self.cache.lock().unwrap().get(&(kind, x.to_bits())) {
            return *v;
        }
        let v = make();
        self.cache.lock().unwrap().insert((kind, x.to_bits()), v);
        v
    }
}

fn sup(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::NEG_INFINITY, f64::max)
}

/// `sup_Q (avg_Q w)(avg_Q w^{1-p'})^{p-1}` over the family.
pub fn ap_characteristic(w: &Weight, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidExponent(format!("A_p needs p > 1 (got {p}); use a1_characteristic")));
    }
    Ok(w.memo(0, p, || {
        let dual = p / (p - 1.0);
        let a = w.means(1.0);
        let b = w.means(1.0 - dual);
        sup(a.iter().zip(b.iter()).map(|(x, y)| x * y.powf(p - 1.0)))
    }))
}

/// `sup_Q (avg_Q w)(max_Q w^{-1})`.
pub fn a1_characteristic(w: &Weight) -> f64 {
    w.memo(1, 0.0, || {
        let a = w.means(1.0);
        let (lo, _) = w.extrema();
        sup(a.iter().zip(&lo).map(|(x, m)| x / m))
    })
}

/// `sup_Q (avg_Q w^s)^{1/s} / avg_Q w`.
pub fn rh_characteristic(w: &Weight, s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::InvalidExponent(format!("RH_s needs s > 1 (got {s})")));
    }
    Ok(w.memo(2, s, || {
        let a = w.means(1.0);
        let b = w.means(s);
        sup(a.iter().zip(b.iter()).map(|(x, y)| y.powf(1.0 / s) / x))
    }))
}

/// `sup_Q (max_Q w) / avg_Q w`.
pub fn rh_inf_characteristic(w: &Weight) -> f64 {
    w.memo(3, 0.0, || {
        let a = w.means(1.0);
        let (_, hi) = w.extrema();
        sup(a.iter().zip(&hi).map(|(x, m)| m / x))
    })
}

/// Exponent standing in for `A_infinity`.
pub const A_INF_EXPONENT: f64 = 1024.0;

/// `[w]_{A_{1024}}`, the stand-in for `[w]_{A_infinity}`.
pub fn a_inf_characteristic(w: &Weight) -> f64 {
    ap_characteristic(w, A_INF_EXPONENT).expect("exponent above one")
}

/// Relative allowance for floating-point rounding when two sides of an
/// inequality evaluate the same per-cube quantity.
pub const ROUNDING: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    /// `[w^s]_{A_{1+s(q-1)}}`.
    pub lhs: f64,
    /// `[w]_{A_q}^s [w]_{RH_s}^s`.
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `[w^s]_{A_{1+s(q-1)}} <= [w]_{A_q}^s [w]_{RH_s}^s` on the
/// weight's family; `q = 1` uses `A_1`.
pub fn check_ap_rh_product(w: &Weight, q: f64, s: f64) -> Result<ProductCheck> {
    if !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!("q = {q} < 1")));
    }
    let ws = w.pow(s);
    let (lhs, aq) = if q == 1.0 {
        (a1_characteristic(&ws), a1_characteristic(w))
    } else {
        (ap_characteristic(&ws, 1.0 + s * (q - 1.0))?, ap_characteristic(w, q)?)
    };
    let rhs = aq.powf(s) * rh_characteristic(w, s)?.powf(s);
    Ok(ProductCheck {
        lhs,
        rhs,
        // equality is attained whenever one cube maximizes both factors
        holds: lhs <= rhs * (1.0 + ROUNDING),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictedBound {
    /// `[w]_{A_{p/p0}}` below 2, `[w]_{A_{p/2}}` above.
    pub ap: f64,
    /// `[w]_{RH_{(2/p)'}}` below 2, `[w]_{RH_{(p0'/p)'}}` above.
    pub rh: f64,
    pub alpha: f64,
    /// `(ap rh)^alpha`; the unspecified constant is taken as 1.
    pub value: f64,
}

fn to_f64(q: Q) -> f64 {
    q.to_f64().expect("finite rational")
}

/// `(r, s)` such that the bound for `p` assumes `w` in both `A_r` and `RH_s`.
pub fn class_exponents(p: Q, p0: Q, side: Side) -> Result<(Q, Q)> {
    alpha_exponent(p, p0, side)?;
    let two = Q::from_integer(2);
    let (a_exp, rh_exp) = match side {
        Side::Below2 => (p / p0, conjugate(two / p)),
        Side::Above2 => {
            let p0d = conjugate(p0).expect("p0 > 1");
            (p / two, conjugate(p0d / p))
        }
    };
    Ok((a_exp, rh_exp.expect("exponent above one inside the admissible range")))
}

/// Predicted `L^p(w)` bound of `B^delta` for `p` on one side of 2.
pub fn predicted_bound(w: &Weight, p: Q, p0: Q, side: Side) -> Result<PredictedBound> {
    let alpha = to_f64(alpha_exponent(p, p0, side)?);
    let (a_exp, rh_exp) = class_exponents(p, p0, side)?;
    let ap = ap_characteristic(w, to_f64(a_exp))?;
    let rh = rh_characteristic(w, to_f64(rh_exp))?;
    Ok(PredictedBound {
        ap,
        rh,
        alpha,
        value: (ap * rh).powf(alpha),
    })
}

/// `||B^delta f||_{L^p(w)} / ||f||_{L^p(w)}`.
pub fn weighted_operator_ratio(f: &SampledField, w: &Weight, p: f64, delta: f64) -> Result<f64> {
    if f.spec() != w.spec() {
        return Err(Error::GridMismatch);
    }
    let wv = w.values();
    let den = lp_norm(f, p, Some(&wv));
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator("weighted operator ratio"));
    }
    Ok(lp_norm(&apply_bochner_riesz(f, delta), p, Some(&wv)) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorReport {
    pub input_norm: f64,
    pub output_norm: f64,
    pub ratio: f64,
    /// `|1/p - 1/q| < 1/3` with `p, q in [6/5, 6]`.
    pub admissible: bool,
}

/// `||(sum_i |h_i|^q)^{1/q}||_p` for `h_i = f_i` and `h_i = B^delta f_i`.
pub fn vector_valued_norm(fs: &[SampledField], p: Q, q: Q, delta: f64) -> Result<VectorReport> {
    let first = fs.first().ok_or(Error::ZeroDenominator("empty function list"))?;
    let spec = *first.spec();
    if fs.iter().any(|f| f.spec() != &spec) {
        return Err(Error::GridMismatch);
    }
    let (pf, qf) = (to_f64(p), to_f64(q));
    let mixed = |hs: &[SampledField]| -> f64 {
        let mut acc = vec![0.0f64; spec.len()];
        for h in hs {
            for (a, v) in acc.iter_mut().zip(h.values()) {
                *a += v.norm().powf(qf);
            }
        }
        let s = SampledField::new(
            spec,
            acc.into_iter().map(|a| Complex64::new(a.powf(1.0 / qf), 0.0)).collect(),
        )
        .expect("finite");
        lp_norm(&s, pf, None)
    };
    let input_norm = mixed(fs);
    if !(input_norm > 0.0) {
        return Err(Error::ZeroDenominator("vector-valued norm"));
    }
    let outs: Vec<SampledField> = fs.iter().map(|f| apply_bochner_riesz(f, delta)).collect();
    let output_norm = mixed(&outs);
    Ok(VectorReport {
        input_norm,
        output_norm,
        ratio: output_norm / input_norm,
        admissible: admissible_vv(p, q),
    })
}

/// `[w^3]_{A_2}^{1/6} [w^3 + w^{-3}]_{A_infinity}^{1/2}` with `A_infinity`
/// replaced by `A_{1024}`; the family of `w` is reused.
pub fn mixed_bound(w: &Weight) -> Result<f64> {
    let w3 = w.pow(3.0);
    let a2 = ap_characteristic(&w3, 2.0)?;
    let sum: Vec<f64> = w3.values().iter().map(|v| v + 1.0 / v).collect();
    let s = Weight::from_values(*w.spec(), &sum, w.family().clone())?;
    Ok(a2.powf(1.0 / 6.0) * a_inf_characteristic(&s).powf(0.5))
}
