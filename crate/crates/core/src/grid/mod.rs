//! Discrete function model on a periodic cube `[-L/2, L/2)^n`.
//!
//! Sample `j` along an axis sits at `x_j = L (j/N - 1/2)`. Fourier
//! coefficients follow the continuum convention
//! `f^(xi) = int f(x) e^{-2 pi i x.xi} dx`, discretized by a Riemann sum, so
//! `sum |f^|^2 L^{-n} = sum |f|^2 dx^n` (Parseval) holds to rounding.

mod fft;
mod io;
mod testfn;
pub(crate) mod window;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use fft::fft_nd;
pub use io::{read_field, write_field};
pub use testfn::{make_test_function, TestFunction};

/// Largest supported dimension; inactive axes have length one.
pub const MAX_DIM: usize = 3;

/// Periodic sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    side: f64,
    points: usize,
}

impl GridSpec {
    /// Validates `N >= 8`, `N` a power of two, `L > 0` and a Nyquist frequency
    /// `N/(2L)` above 2 so the unit frequency ball is resolved.
    pub fn new(dim: usize, side: f64, points: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N = {points} must be a power of two >= 8"
            )));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {side} must be positive")));
        }
        let nyquist = points as f64 / (2.0 * side);
        if nyquist <= 2.0 {
            return Err(Error::InvalidGrid(format!(
                "Nyquist frequency N/(2L) = {nyquist} must exceed 2"
            )));
        }
        Ok(Self { dim, side, points })
    }

    pub fn planar(side: f64, points: usize) -> Result<Self> {
        Self::new(2, side, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> [usize; 3] {
        let mut s = [1; 3];
        for a in s.iter_mut().take(self.dim) {
            *a = self.points;
        }
        s
    }

    pub fn coordinate(&self, j: i64) -> f64 {
        -0.5 * self.side + j as f64 * self.spacing()
    }

    /// Signed wavenumber of spectral index `m`.
    pub fn wavenumber(&self, m: usize) -> i64 {
        let n = self.points as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    pub fn frequency(&self, m: usize) -> f64 {
        self.wavenumber(m) as f64 / self.side
    }

    pub fn flat(&self, idx: [usize; 3]) -> usize {
        let s = self.shape();
        (idx[0] * s[1] + idx[1]) * s[2] + idx[2]
    }

    pub fn multi(&self, flat: usize) -> [usize; 3] {
        let s = self.shape();
        [flat / (s[1] * s[2]), (flat / s[2]) % s[1], flat % s[2]]
    }

    /// Flat index of a (possibly out of range) cell index, wrapped periodically.
    pub fn wrap(&self, idx: [i64; 3]) -> usize {
        let n = self.points as i64;
        let mut w = [0usize; 3];
        for a in 0..self.dim {
            w[a] = idx[a].rem_euclid(n) as usize;
        }
        self.flat(w)
    }

    pub fn position(&self, flat: usize) -> [f64; 3] {
        let m = self.multi(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coordinate(m[a] as i64);
        }
        x
    }

    /// `|xi|^2` at every spectral index, in raw FFT order.
    pub fn frequency_norms_sq(&self) -> Vec<f64> {
        let freq: Vec<f64> = (0..self.points).map(|m| self.frequency(m)).collect();
        (0..self.len())
            .map(|i| {
                let m = self.multi(i);
                (0..self.dim).map(|a| freq[m[a]] * freq[m[a]]).sum()
            })
            .collect()
    }

    /// Cell index range `[lo, hi)` of grid points with `a <= x < b`, unclipped.
    pub fn index_range(&self, a: f64, b: f64) -> (i64, i64) {
        let h = self.spacing();
        let off = 0.5 * self.side;
        let lo = ((a + off) / h - 1e-9).ceil() as i64;
        let hi = ((b + off) / h - 1e-9).ceil() as i64;
        (lo, hi.max(lo))
    }

    /// Sample indices inside `region`, clipped to the domain.
    pub fn cells_in(&self, region: &AxisBox) -> IndexBox {
        let mut ib = IndexBox::unit();
        for a in 0..self.dim {
            let (lo, hi) = self.index_range(region.lo[a], region.hi[a]);
            let lo = lo.clamp(0, self.points as i64);
            let hi = hi.clamp(0, self.points as i64);
            ib.lo[a] = lo;
            ib.len[a] = (hi - lo).max(0) as usize;
        }
        ib
    }
}

/// Axis-aligned half-open box `[lo, hi)` in physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl AxisBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self { lo, hi }
    }

    pub fn empty() -> Self {
        Self {
            lo: [0.0; 3],
            hi: [0.0; 3],
        }
    }

    /// Cube of half-width `half` around `center`; only the first `dim` axes
    /// are meaningful.
    pub fn cube(center: [f64; 3], half: f64) -> Self {
        let mut b = Self::empty();
        for a in 0..3 {
            b.lo[a] = center[a] - half;
            b.hi[a] = center[a] + half;
        }
        b
    }

    pub fn is_empty(&self, dim: usize) -> bool {
        (0..dim).any(|a| self.hi[a] <= self.lo[a])
    }

    pub fn volume(&self, dim: usize) -> f64 {
        (0..dim).map(|a| (self.hi[a] - self.lo[a]).max(0.0)).product()
    }

    pub fn center(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for a in 0..3 {
            c[a] = 0.5 * (self.lo[a] + self.hi[a]);
        }
        c
    }

    /// Concentric dilate by `factor`.
    pub fn dilate(&self, factor: f64) -> Self {
        let c = self.center();
        let mut b = *self;
        for a in 0..3 {
            let half = 0.5 * (self.hi[a] - self.lo[a]) * factor;
            b.lo[a] = c[a] - half;
            b.hi[a] = c[a] + half;
        }
        b
    }

    pub fn intersect(&self, other: &AxisBox) -> Self {
        let mut b = *self;
        for a in 0..3 {
            b.lo[a] = self.lo[a].max(other.lo[a]);
            b.hi[a] = self.hi[a].min(other.hi[a]);
        }
        b
    }

    pub fn union(&self, other: &AxisBox, dim: usize) -> Self {
        if self.is_empty(dim) {
            return *other;
        }
        if other.is_empty(dim) {
            return *self;
        }
        let mut b = *self;
        for a in 0..3 {
            b.lo[a] = self.lo[a].min(other.lo[a]);
            b.hi[a] = self.hi[a].max(other.hi[a]);
        }
        b
    }

    pub fn contains_box(&self, other: &AxisBox, dim: usize) -> bool {
        other.is_empty(dim)
            || (0..dim).all(|a| self.lo[a] <= other.lo[a] && other.hi[a] <= self.hi[a])
    }

    pub fn contains_point(&self, x: &[f64; 3], dim: usize) -> bool {
        (0..dim).all(|a| self.lo[a] <= x[a] && x[a] < self.hi[a])
    }
}

/// Box of grid indices `lo + [0, len)` per axis (inactive axes: `lo = 0`, `len = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexBox {
    pub lo: [i64; 3],
    pub len: [usize; 3],
}

impl IndexBox {
    pub fn unit() -> Self {
        Self {
            lo: [0; 3],
            len: [1; 3],
        }
    }

    pub fn whole(spec: &GridSpec) -> Self {
        Self {
            lo: [0; 3],
            len: spec.shape(),
        }
    }

    pub fn count(&self) -> usize {
        self.len.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Expand by `margin` cells on every active axis.
    pub fn grow(&self, margin: i64, dim: usize) -> Self {
        let mut b = *self;
        for a in 0..dim {
            b.lo[a] -= margin;
            b.len[a] = (self.len[a] as i64 + 2 * margin).max(0) as usize;
        }
        b
    }

    pub fn contains(&self, idx: [i64; 3], dim: usize) -> bool {
        (0..dim).all(|a| idx[a] >= self.lo[a] && idx[a] < self.lo[a] + self.len[a] as i64)
    }

    /// Bounding box of two boxes.
    pub fn hull(&self, other: &IndexBox, dim: usize) -> Self {
        if other.is_empty() {
            return *self;
        }
        if self.is_empty() {
            return *other;
        }
        let mut b = *self;
        for a in 0..dim {
            let lo = self.lo[a].min(other.lo[a]);
            let hi = (self.lo[a] + self.len[a] as i64).max(other.lo[a] + other.len[a] as i64);
            b.lo[a] = lo;
            b.len[a] = (hi - lo) as usize;
        }
        b
    }

    pub fn intersect(&self, other: &IndexBox, dim: usize) -> Self {
        let mut b = *self;
        for a in 0..dim {
            let lo = self.lo[a].max(other.lo[a]);
            let hi = (self.lo[a] + self.len[a] as i64).min(other.lo[a] + other.len[a] as i64);
            b.lo[a] = lo;
            b.len[a] = (hi - lo).max(0) as usize;
        }
        b
    }

    pub fn max_extent(&self, dim: usize) -> usize {
        (0..dim).map(|a| self.len[a]).max().unwrap_or(1)
    }

    /// Iterate over the cell indices in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = [i64; 3]> + '_ {
        let len = self.len;
        let lo = self.lo;
        (0..self.count()).map(move |k| {
            let i2 = k % len[2];
            let i1 = (k / len[2]) % len[1];
            let i0 = k / (len[1] * len[2]);
            [lo[0] + i0 as i64, lo[1] + i1 as i64, lo[2] + i2 as i64]
        })
    }
}

/// Complex samples of a function on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    spec: GridSpec,
    values: Vec<Complex64>,
    support: Option<AxisBox>,
}

impl SampledField {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                spec.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self {
            spec,
            values,
            support: None,
        })
    }

    /// Internal constructor for values produced by our own transforms.
    pub(crate) fn from_parts(spec: GridSpec, values: Vec<Complex64>, support: Option<AxisBox>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        Self {
            spec,
            values,
            support,
        }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self::from_parts(
            spec,
            vec![Complex64::new(0.0, 0.0); spec.len()],
            Some(AxisBox::empty()),
        )
    }

    pub fn constant(spec: GridSpec, c: Complex64) -> Self {
        Self::from_parts(spec, vec![c; spec.len()], None)
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let values = (0..spec.len()).map(|i| f(spec.position(i))).collect();
        Self::from_parts(spec, values, None)
    }

    /// `e^{2 pi i x.xi}`.
    pub fn plane_wave(spec: GridSpec, xi: [f64; 3]) -> Self {
        let dim = spec.dim();
        Self::from_fn(spec, |x| {
            let phase: f64 = (0..dim).map(|a| x[a] * xi[a]).sum();
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
        })
    }

    /// Indicator of `region` (half-open) with that region as declared support.
    pub fn indicator(spec: GridSpec, region: &AxisBox) -> Self {
        let dim = spec.dim();
        let mut f = Self::from_fn(spec, |x| {
            if region.contains_point(&x, dim) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        f.support = Some(*region);
        f
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Declared support box: samples are exactly zero outside it.
    pub fn support(&self) -> Option<&AxisBox> {
        self.support.as_ref()
    }

    pub fn with_support(mut self, support: AxisBox) -> Self {
        self.support = Some(support);
        self
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(
            self.spec,
            self.values.iter().map(|v| v * c).collect(),
            self.support,
        )
    }

    /// `f * 1_region`; the declared support shrinks accordingly.
    pub fn restrict(&self, region: &AxisBox) -> Self {
        let dim = self.spec.dim();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if region.contains_point(&self.spec.position(i), dim) {
                    *v
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let support = match self.support {
            Some(s) => s.intersect(region),
            None => *region,
        };
        Self::from_parts(self.spec, values, Some(support))
    }

    /// `f * 1_{region^c}`; the declared support is kept.
    pub fn exclude(&self, region: &AxisBox) -> Self {
        let dim = self.spec.dim();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if region.contains_point(&self.spec.position(i), dim) {
                    Complex64::new(0.0, 0.0)
                } else {
                    *v
                }
            })
            .collect();
        Self::from_parts(self.spec, values, self.support)
    }

    pub fn sub(&self, other: &SampledField) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_parts(self.spec, values, None))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// Index box of the declared support, or of the whole grid.
    pub fn support_cells(&self) -> IndexBox {
        match &self.support {
            Some(s) if s.is_empty(self.spec.dim()) => IndexBox {
                lo: [0; 3],
                len: [0; 3],
            },
            Some(s) => self.spec.cells_in(s),
            None => IndexBox::whole(&self.spec),
        }
    }
}

/// Fourier coefficients on the frequency lattice `(1/L) Z^n`, raw FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    spec: GridSpec,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient at signed wavenumbers `k` (frequency `k/L`).
    pub fn at(&self, k: [i64; 3]) -> Complex64 {
        self.coefficients[self.spec.wrap(k)]
    }

    /// `sum |c|^2 (1/L)^n`.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.spec.volume()
    }
}

fn checkerboard_sign(spec: &GridSpec, i: usize) -> f64 {
    let m = spec.multi(i);
    if (m[0] + m[1] + m[2]) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn forward_transform(f: &SampledField) -> SpectralField {
    let spec = *f.spec();
    let mut buf = f.values.clone();
    fft_nd(&mut buf, spec.shape(), false);
    let dv = spec.cell_volume();
    for (i, c) in buf.iter_mut().enumerate() {
        *c *= dv * checkerboard_sign(&spec, i);
    }
    SpectralField {
        spec,
        coefficients: buf,
    }
}

pub fn inverse_transform(s: &SpectralField) -> SampledField {
    let spec = s.spec;
    let mut buf = s.coefficients.clone();
    for (i, c) in buf.iter_mut().enumerate() {
        *c *= checkerboard_sign(&spec, i);
    }
    fft_nd(&mut buf, spec.shape(), true);
    let scale = 1.0 / spec.volume();
    for c in &mut buf {
        *c *= scale;
    }
    SampledField::from_parts(spec, buf, None)
}

/// Multiply by a real symbol given at each raw spectral index.
pub(crate) fn apply_symbol_table(f: &SampledField, symbol: &[f64]) -> SampledField {
    let spec = *f.spec();
    let mut buf = f.values.clone();
    fft_nd(&mut buf, spec.shape(), false);
    let norm = 1.0 / spec.len() as f64;
    for (c, s) in buf.iter_mut().zip(symbol) {
        *c *= s * norm;
    }
    fft_nd(&mut buf, spec.shape(), true);
    SampledField::from_parts(spec, buf, None)
}

/// `( (1/|R|) int_{R cap domain} |f|^p )^{1/p}` with the full `|R|` in the
/// denominator and the integrand extended by zero outside the domain.
pub fn cube_average(f: &SampledField, region: &AxisBox, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(format!("average exponent {p} < 1")));
    }
    let spec = f.spec();
    let dim = spec.dim();
    let vol = region.volume(dim);
    if !(vol > 0.0) {
        return Err(Error::InvalidExponent("region has zero volume".into()));
    }
    let domain = AxisBox::cube([0.0; 3], 0.5 * spec.side());
    if region.intersect(&domain).is_empty(dim) {
        return Err(Error::EmptyIntersection);
    }
    let cells = spec.cells_in(region);
    let total: f64 = cells
        .iter()
        .map(|idx| f.values[spec.wrap(idx)].norm().powf(p))
        .sum();
    Ok((total * spec.cell_volume() / vol).powf(1.0 / p))
}

/// `(int |f|^p w)^{1/p}` by Riemann sum; `p = inf` gives the grid maximum of `|f|`.
pub fn lp_norm(f: &SampledField, p: f64, weight: Option<&[f64]>) -> f64 {
    if p.is_infinite() {
        return f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let dv = f.spec().cell_volume();
    let total: f64 = match weight {
        None => f.values.iter().map(|v| v.norm().powf(p)).sum(),
        Some(w) => f
            .values
            .iter()
            .zip(w)
            .map(|(v, w)| v.norm().powf(p) * w)
            .sum(),
    };
    (total * dv).powf(1.0 / p)
}

/// `int f conj(g) dx`.
pub fn inner_product(f: &SampledField, g: &SampledField) -> Result<Complex64> {
    if f.spec() != g.spec() {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s * f.spec().cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(spec: GridSpec, seed: u64) -> SampledField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..spec.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledField::new(spec, values).unwrap()
    }

    #[test]
    fn grid_constructor_rejects_bad_parameters() {
        assert!(GridSpec::planar(16.0, 100).is_err());
        assert!(GridSpec::planar(16.0, 4).is_err());
        assert!(GridSpec::planar(-1.0, 64).is_err());
        // Nyquist 64/32 = 2 is not enough
        assert!(GridSpec::planar(16.0, 64).is_err());
        assert!(GridSpec::planar(16.0, 128).is_ok());
    }

    #[test]
    fn plane_wave_has_single_coefficient() {
        let spec = GridSpec::planar(16.0, 64 * 2).unwrap();
        let f = SampledField::plane_wave(spec, [3.0 / 16.0, -5.0 / 16.0, 0.0]);
        let s = forward_transform(&f);
        let peak = s.at([3, -5, 0]);
        assert!((peak.norm() - spec.volume()).abs() < 1e-9 * spec.volume());
        let rest: f64 = s
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != spec.wrap([3, -5, 0]))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(rest < 1e-9);
    }

    #[test]
    fn constant_transforms_to_zero_frequency() {
        let spec = GridSpec::planar(8.0, 64).unwrap();
        let f = SampledField::constant(spec, Complex64::new(2.0, 0.0));
        let s = forward_transform(&f);
        assert!((s.at([0, 0, 0]).re - 2.0 * spec.volume()).abs() < 1e-9);
        let others = s.coefficients()[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(others < 1e-9);
    }

    #[test]
    fn roundtrip_and_parseval_on_random_fields() {
        let spec = GridSpec::planar(8.0, 64).unwrap();
        for seed in 0..100 {
            let f = random_field(spec, seed);
            let s = forward_transform(&f);
            let l2sq = lp_norm(&f, 2.0, None).powi(2);
            assert!((s.energy() - l2sq).abs() <= 1e-10 * l2sq);
            let back = inverse_transform(&s);
            let err = lp_norm(&back.sub(&f).unwrap(), 2.0, None);
            assert!(err / l2sq.sqrt() < 1e-12);
        }
    }

    #[test]
    fn roundtrip_in_one_and_three_dimensions() {
        for dim in [1, 3] {
            let spec = GridSpec::new(dim, 4.0, 32).unwrap();
            let f = random_field(spec, 9);
            let back = inverse_transform(&forward_transform(&f));
            let err = lp_norm(&back.sub(&f).unwrap(), 2.0, None);
            assert!(err < 1e-12 * lp_norm(&f, 2.0, None));
        }
    }

    #[test]
    fn cube_average_of_constant_and_indicator() {
        let spec = GridSpec::planar(16.0, 128).unwrap();
        let h = spec.spacing();
        let q0 = AxisBox::cube([0.0; 3], 4.0 * h);
        let c = SampledField::constant(spec, Complex64::new(-3.0, 0.0));
        assert!((cube_average(&c, &q0, 1.7).unwrap() - 3.0).abs() < 1e-12);
        let ind = SampledField::indicator(spec, &q0);
        let six = q0.dilate(6.0);
        assert!((cube_average(&ind, &six, 1.0).unwrap() - 1.0 / 36.0).abs() < 1e-15);
        assert!((cube_average(&ind, &q0, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_average_outside_domain_is_an_error() {
        let spec = GridSpec::planar(16.0, 128).unwrap();
        let f = SampledField::constant(spec, Complex64::new(1.0, 0.0));
        let far = AxisBox::new([20.0, 20.0, 0.0], [21.0, 21.0, 0.0]);
        assert!(matches!(cube_average(&f, &far, 1.0), Err(Error::EmptyIntersection)));
    }

    #[test]
    fn cube_average_spilling_outside_keeps_full_measure() {
        let spec = GridSpec::planar(16.0, 128).unwrap();
        let f = SampledField::constant(spec, Complex64::new(1.0, 0.0));
        // half of this box lies beyond x = 8
        let spill = AxisBox::new([6.0, -1.0, 0.0], [10.0, 1.0, 0.0]);
        assert!((cube_average(&f, &spill, 1.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lp_norm_of_unit_modulus_fields() {
        let spec = GridSpec::planar(16.0, 128).unwrap();
        let one = SampledField::constant(spec, Complex64::new(1.0, 0.0));
        assert!((lp_norm(&one, 2.0, None) - 16.0).abs() < 1e-12);
        let wave = SampledField::plane_wave(spec, [0.25, 0.5, 0.0]);
        for p in [1.0, 2.0, 3.5] {
            let a = lp_norm(&wave, p, None);
            let b = lp_norm(&one, p, None);
            assert!((a - b).abs() < 1e-10 * b);
        }
        assert!((lp_norm(&wave, f64::INFINITY, None) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norms_are_translation_invariant() {
        let spec = GridSpec::planar(8.0, 64).unwrap();
        let f = random_field(spec, 3);
        let shifted: Vec<Complex64> = (0..spec.len())
            .map(|i| {
                let m = spec.multi(i);
                f.values()[spec.wrap([m[0] as i64 + 5, m[1] as i64 - 7, 0])]
            })
            .collect();
        let g = SampledField::new(spec, shifted).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let a = lp_norm(&f, p, None);
            let b = lp_norm(&g, p, None);
            assert!((a - b).abs() < 1e-12 * a);
        }
    }
}
