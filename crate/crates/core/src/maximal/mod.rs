//! Discrete maximal operators: the `L^{p0}` Hardy-Littlewood maximal function
//! `M_{p0}`, the maximal truncation `B^{delta,*}` and its unmasked companion
//! `B^{delta,**}`.
//!
//! The suprema over `eps > 0` and `|x - y| < eps` run over a finite set of
//! radii and over (optionally thinned) grid points `y`, so every value is a
//! lower bound of its continuum counterpart. All balls are periodic.

mod stencil;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::window::Window;
use crate::grid::{GridSpec, IndexBox, SampledField};
use crate::multiplier::{kernel_field, symbol_table, Truncated};

pub use stencil::{closed_ball, open_ball, thinned_ball};

/// How many points `x` get their own evaluation of `B^{delta,*}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Anchors {
    /// Every grid point.
    Full,
    /// One point per block of side `max(1, floor(per_radius * eps/dx))`
    /// cells; the block shares its value.
    Lattice { per_radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalConfig {
    pub p0: f64,
    pub q0: f64,
    /// Radii in domain units, increasing.
    pub eps_set: Vec<f64>,
    /// Cap on the number of centres `y` per ball; `None` enumerates them all.
    pub thin_to: Option<usize>,
    pub anchors: Anchors,
}

/// `{2^m dx : m = 2, ..., log2(N/4)}`.
pub fn default_eps_set(spec: &GridSpec) -> Vec<f64> {
    let top = (spec.points() / 4).trailing_zeros();
    (2..=top)
        .map(|m| (1u64 << m) as f64 * spec.spacing())
        .collect()
}

impl MaximalConfig {
    pub fn new(spec: &GridSpec, p0: f64, q0: f64) -> Result<Self> {
        let cfg = Self {
            p0,
            q0,
            eps_set: default_eps_set(spec),
            thin_to: Some(64),
            anchors: Anchors::Lattice { per_radius: 1.0 },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Exhaustive variant for oracle comparisons.
    pub fn exhaustive(mut self) -> Self {
        self.thin_to = None;
        self.anchors = Anchors::Full;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p0 >= 1.0) {
            return Err(Error::InvalidExponent(format!("p0 = {} < 1", self.p0)));
        }
        if !(2.0..=6.0).contains(&self.q0) {
            return Err(Error::InvalidExponent(format!("q0 = {} not in [2, 6]", self.q0)));
        }
        if self.eps_set.is_empty() {
            return Err(Error::InvalidGrid("empty radius set".into()));
        }
        if self.eps_set[0] <= 0.0 || self.eps_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("radii must be positive and increasing".into()));
        }
        if let Anchors::Lattice { per_radius } = self.anchors {
            if !(per_radius > 0.0) {
                return Err(Error::InvalidGrid("anchor spacing must be positive".into()));
            }
        }
        Ok(())
    }
}

/// The three maximal functions on the cells of a region, in
/// [`IndexBox::iter`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalTerms {
    pub region: IndexBox,
    pub hl: Vec<f64>,
    pub star: Vec<f64>,
    pub starstar: Vec<f64>,
}

impl MaximalTerms {
    pub fn total(&self) -> Vec<f64> {
        (0..self.hl.len())
            .map(|i| self.hl[i] + self.star[i] + self.starstar[i])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Which {
    hl: bool,
    star: bool,
    starstar: bool,
}

type Cache<K> = Mutex<HashMap<K, Arc<Vec<Complex64>>>>;

fn cached<K: std::hash::Hash + Eq>(
    cache: &Cache<K>,
    key: K,
    make: impl FnOnce() -> Vec<Complex64>,
) -> Arc<Vec<Complex64>> {
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(make());
    cache.lock().unwrap().insert(key, v.clone());
    v
}

/// Evaluator bound to one grid, smoothness and configuration. Kernel
/// transforms are cached and shared by every call.
pub struct Maximal {
    spec: GridSpec,
    delta: f64,
    cfg: MaximalConfig,
    torus_kernels: Cache<u64>,
    kernel_hats: Cache<(u64, usize)>,
    ball_hats: Cache<(u64, usize)>,
}

/// `B_eps f` around the region, plus the ball averages of `|B_eps f|^q0`.
struct Smoothed {
    window: Window,
    g: Vec<Complex64>,
    a: Vec<Complex64>,
}

impl Maximal {
    pub fn new(spec: GridSpec, delta: f64, cfg: MaximalConfig) -> Result<Self> {
        cfg.validate()?;
        if delta < 0.0 {
            return Err(Error::InvalidExponent(format!("delta = {delta} < 0")));
        }
        Ok(Self {
            spec,
            delta,
            cfg,
            torus_kernels: Mutex::default(),
            kernel_hats: Mutex::default(),
            ball_hats: Mutex::default(),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn config(&self) -> &MaximalConfig {
        &self.cfg
    }

    fn radius_cells(&self, eps: f64) -> f64 {
        eps / self.spec.spacing()
    }

    /// Transformed truncated-operator kernel in a window of side `size`.
    fn kernel_hat(&self, eps: f64, size: usize) -> Arc<Vec<Complex64>> {
        let sym = Truncated {
            delta: self.delta,
            epsilon: eps,
        };
        cached(&self.kernel_hats, (eps.to_bits(), size), || {
            if size == self.spec.points() {
                symbol_table(&self.spec, &sym)
                    .into_iter()
                    .map(|s| Complex64::new(s, 0.0))
                    .collect()
            } else {
                let torus = cached(&self.torus_kernels, eps.to_bits(), || {
                    kernel_field(&self.spec, &sym)
                });
                let w = Window::new(&self.spec, [0; 3], size);
                w.forward(w.fold_kernel(&self.spec, &torus))
            }
        })
    }

    /// Transformed normalized closed-ball indicator.
    fn ball_hat(&self, r: f64, w: &Window) -> Arc<Vec<Complex64>> {
        cached(&self.ball_hats, (r.to_bits(), w.size), || {
            let offs = closed_ball(self.spec.dim(), r);
            w.forward(w.offsets_kernel(&offs, 1.0 / offs.len() as f64))
        })
    }

    fn window_values(&self, w: &Window, f: &SampledField, power: Option<f64>) -> Vec<Complex64> {
        let keep = IndexBox {
            lo: w.origin,
            len: w.shape(),
        };
        let mut data = w.extract(&self.spec, f.values(), &keep);
        if let Some(p) = power {
            for v in &mut data {
                *v = Complex64::new(v.norm().powf(p), 0.0);
            }
        }
        data
    }

    fn smoothed(&self, f: &SampledField, src: &IndexBox, region: &IndexBox, eps: f64) -> Smoothed {
        let dim = self.spec.dim();
        let r = self.radius_cells(eps);
        let target = region.grow(2 * r.ceil() as i64 + 1, dim);
        let window = Window::for_convolution(&self.spec, src, &target);
        let mut g = window.forward(self.window_values(&window, f, None));
        window.convolve_transformed(&mut g, &self.kernel_hat(eps, window.size));
        let q0 = self.cfg.q0;
        let p: Vec<Complex64> = g
            .iter()
            .map(|v| Complex64::new(v.norm().powf(q0), 0.0))
            .collect();
        let a = window.convolve(p, &self.ball_hat(r, &window));
        Smoothed { window, g, a }
    }

    fn average_at(&self, s: &Smoothed, y: [i64; 3]) -> f64 {
        s.window
            .local(y)
            .map(|k| s.a[k].re.max(0.0))
            .expect("ball centre inside the window")
    }

    /// `M_{p0}`, `B^{delta,*}` and `B^{delta,**}` of `f` at the cells of
    /// `region`, with the supremum over `eps` restricted to `eps_set`.
    pub fn evaluate(&self, f: &SampledField, region: &IndexBox, eps_set: &[f64]) -> MaximalTerms {
        self.run(
            f,
            region,
            eps_set,
            Which {
                hl: true,
                star: true,
                starstar: true,
            },
        )
    }

    fn run(&self, f: &SampledField, region: &IndexBox, eps_set: &[f64], which: Which) -> MaximalTerms {
        let n = region.count();
        let mut out = MaximalTerms {
            region: *region,
            hl: vec![0.0; n],
            star: vec![0.0; n],
            starstar: vec![0.0; n],
        };
        let src = f.support_cells();
        if src.is_empty() || f.is_zero() || n == 0 {
            return out;
        }
        let dim = self.spec.dim();
        for &eps in eps_set {
            let r = self.radius_cells(eps);
            if which.hl {
                let w = Window::covering(&self.spec, &region.grow(r.ceil() as i64, dim));
                let data = self.window_values(&w, f, Some(self.cfg.p0));
                let avg = w.convolve(data, &self.ball_hat(r, &w));
                for (i, x) in region.iter().enumerate() {
                    let v = avg[w.local(x).unwrap()].re.max(0.0).powf(1.0 / self.cfg.p0);
                    out.hl[i] = out.hl[i].max(v);
                }
            }
            if !(which.star || which.starstar) {
                continue;
            }
            let s = self.smoothed(f, &src, region, eps);
            let ys = thinned_ball(dim, r, self.cfg.thin_to);
            let inv_q = 1.0 / self.cfg.q0;
            let unmasked = |x: [i64; 3]| -> f64 {
                ys.iter()
                    .map(|d| self.average_at(&s, add(x, *d)))
                    .fold(0.0, f64::max)
                    .powf(inv_q)
            };
            if which.starstar {
                for (i, x) in region.iter().enumerate() {
                    out.starstar[i] = out.starstar[i].max(unmasked(x));
                }
            }
            if which.star {
                let stride = match self.cfg.anchors {
                    Anchors::Full => 1,
                    Anchors::Lattice { per_radius } => ((per_radius * r).floor() as usize).max(1),
                };
                let values = self.star_blocks(f, &src, region, eps, stride, &s, &ys, &unmasked);
                for (o, v) in out.star.iter_mut().zip(values) {
                    *o = o.max(v);
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn star_blocks(
        &self,
        f: &SampledField,
        src: &IndexBox,
        region: &IndexBox,
        eps: f64,
        stride: usize,
        s: &Smoothed,
        ys: &[[i64; 3]],
        unmasked: &dyn Fn([i64; 3]) -> f64,
    ) -> Vec<f64> {
        let dim = self.spec.dim();
        let mut blocks = IndexBox::unit();
        for a in 0..dim {
            blocks.len[a] = region.len[a].div_ceil(stride);
        }
        let mut values = vec![0.0; region.count()];
        for b in blocks.iter() {
            let mut block = IndexBox::unit();
            let mut anchor = [0i64; 3];
            for a in 0..dim {
                let lo = region.lo[a] + b[a] * stride as i64;
                let hi = (lo + stride as i64).min(region.lo[a] + region.len[a] as i64);
                block.lo[a] = lo;
                block.len[a] = (hi - lo) as usize;
                anchor[a] = lo + ((stride / 2) as i64).min(hi - lo - 1);
            }
            let v = self.star_at(f, src, eps, anchor, s, ys, unmasked);
            for x in block.iter() {
                values[flat_in(region, x)] = v;
            }
        }
        values
    }

    /// Inner supremum of `B^{delta,*}` at `x` for one radius:
    /// `B_eps(f 1_{B(x,3eps)^c}) = B_eps f - B_eps(f 1_{B(x,3eps)})`.
    #[allow(clippy::too_many_arguments)]
    fn star_at(
        &self,
        f: &SampledField,
        src: &IndexBox,
        eps: f64,
        x: [i64; 3],
        s: &Smoothed,
        ys: &[[i64; 3]],
        unmasked: &dyn Fn([i64; 3]) -> f64,
    ) -> f64 {
        let dim = self.spec.dim();
        let r = self.radius_cells(eps);
        let r3 = 3.0 * r;
        let inside = |t: [i64; 3]| stencil::dist_sq(x, t, dim) < stencil::strict(r3);
        let reach = r3.ceil() as i64;
        let mut mask_box = IndexBox::unit();
        for a in 0..dim {
            mask_box.lo[a] = x[a] - reach;
            mask_box.len[a] = (2 * reach + 1) as usize;
        }
        let local = mask_box.intersect(src, dim);
        let hits = local.iter().filter(|t| inside(*t)).count();
        if hits == 0 {
            return unmasked(x);
        }
        if stencil::corners(src, dim).all(inside) {
            return 0.0;
        }
        let mut target = IndexBox::unit();
        let reach2 = 2 * r.ceil() as i64 + 1;
        for a in 0..dim {
            target.lo[a] = x[a] - reach2;
            target.len[a] = (2 * reach2 + 1) as usize;
        }
        let w = Window::for_convolution(&self.spec, &local, &target);
        let mut data = vec![Complex64::new(0.0, 0.0); w.len()];
        for t in local.iter().filter(|t| inside(*t)) {
            data[w.local(t).unwrap()] = f.values()[self.spec.wrap(t)];
        }
        let l = w.convolve(data, &self.kernel_hat(eps, w.size));
        let ball = closed_ball(dim, r);
        let q0 = self.cfg.q0;
        let mut best = 0.0f64;
        for d in ys {
            let y = add(x, *d);
            let mut acc = 0.0;
            for e in &ball {
                let z = add(y, *e);
                let gz = s.g[s.window.local(z).unwrap()];
                let lz = l[w.local(z).unwrap()];
                acc += (gz - lz).norm().powf(q0);
            }
            best = best.max(acc / ball.len() as f64);
        }
        best.powf(1.0 / q0)
    }

    /// `B^delta f` at the cells of `region` (torus-exact), computed in a
    /// window holding the support of `f` and the region.
    pub fn bochner_riesz_on(&self, f: &SampledField, region: &IndexBox) -> Vec<Complex64> {
        let src = f.support_cells();
        if src.is_empty() || region.is_empty() {
            return vec![Complex64::new(0.0, 0.0); region.count()];
        }
        let w = Window::for_convolution(&self.spec, &src, region);
        let data = w.extract(&self.spec, f.values(), &src);
        // any eps <= 1/1.01 gives the untruncated symbol
        let out = w.convolve(data, &self.kernel_hat(0.5, w.size));
        region.iter().map(|x| out[w.local(x).unwrap()]).collect()
    }

    fn field(&self, values: Vec<f64>) -> SampledField {
        SampledField::from_parts(
            self.spec,
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            None,
        )
    }

    fn whole(&self, f: &SampledField, which: Which) -> Result<MaximalTerms> {
        if f.spec() != &self.spec {
            return Err(Error::GridMismatch);
        }
        let region = IndexBox::whole(&self.spec);
        Ok(self.run(f, &region, &self.cfg.eps_set, which))
    }

    pub fn hl(&self, f: &SampledField) -> Result<SampledField> {
        let t = self.whole(f, Which { hl: true, star: false, starstar: false })?;
        Ok(self.field(t.hl))
    }

    pub fn star(&self, f: &SampledField) -> Result<SampledField> {
        let t = self.whole(f, Which { hl: false, star: true, starstar: false })?;
        Ok(self.field(t.star))
    }

    pub fn starstar(&self, f: &SampledField) -> Result<SampledField> {
        let t = self.whole(f, Which { hl: false, star: false, starstar: true })?;
        Ok(self.field(t.starstar))
    }
}

fn add(x: [i64; 3], d: [i64; 3]) -> [i64; 3] {
    [x[0] + d[0], x[1] + d[1], x[2] + d[2]]
}

fn flat_in(region: &IndexBox, x: [i64; 3]) -> usize {
    let l = [
        (x[0] - region.lo[0]) as usize,
        (x[1] - region.lo[1]) as usize,
        (x[2] - region.lo[2]) as usize,
    ];
    (l[0] * region.len[1] + l[1]) * region.len[2] + l[2]
}

/// `M_{p0} f` on the whole grid over the default radii.
pub fn hl_maximal(f: &SampledField, p0: f64) -> Result<SampledField> {
    let cfg = MaximalConfig::new(f.spec(), p0, 2.0)?;
    Maximal::new(*f.spec(), 0.0, cfg)?.hl(f)
}

pub fn br_star(f: &SampledField, delta: f64, cfg: &MaximalConfig) -> Result<SampledField> {
    Maximal::new(*f.spec(), delta, cfg.clone())?.star(f)
}

pub fn br_starstar(f: &SampledField, delta: f64, cfg: &MaximalConfig) -> Result<SampledField> {
    Maximal::new(*f.spec(), delta, cfg.clone())?.starstar(f)
}

/// `sup_lambda lambda |{v > lambda}|^{1/p0} / ||f||_{p0}`, exact over
/// `lambda` for grid functions.
pub fn weak_type_constant(values: &[f64], cell_volume: f64, f_norm: f64, p0: f64) -> Result<f64> {
    if !(f_norm > 0.0) {
        return Err(Error::ZeroDenominator("weak-type constant"));
    }
    let mut v: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    let best = v
        .iter()
        .enumerate()
        .map(|(k, &x)| x * ((k + 1) as f64 * cell_volume).powf(1.0 / p0))
        .fold(0.0, f64::max);
    Ok(best / f_norm)
}

#[cfg(test)]
mod tests;
