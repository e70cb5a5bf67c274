//! Periodic sub-windows of the grid and FFT convolution on them.
//!
//! A window of side `P` (a 7-smooth length, at most `N`) reproduces the torus
//! convolution `sum_t g(t) K(z - t)` at a target `z` as long as every source
//! `t` satisfies `z - t in (-P/2, P/2]` on each axis. A window of side `N` is
//! the torus itself.

use num_complex::Complex64;

use super::{fft_nd, GridSpec, IndexBox};

/// Smallest integer `>= n` without prime factors above 7.
pub(crate) fn next_smooth(n: usize) -> usize {
    (n..)
        .find(|&m| {
            let mut m = m;
            for p in [2, 3, 5, 7] {
                while m % p == 0 {
                    m /= p;
                }
            }
            m == 1
        })
        .expect("smooth numbers are unbounded")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Window {
    pub origin: [i64; 3],
    pub size: usize,
    dim: usize,
    n: usize,
}

impl Window {
    /// Window of side at least `min_size`, anchored at `lo`.
    pub fn new(spec: &GridSpec, lo: [i64; 3], min_size: usize) -> Self {
        let n = spec.points();
        let size = if min_size >= n { n } else { next_smooth(min_size.max(2)).min(n) };
        let origin = if size == n { [0; 3] } else { lo };
        Self {
            origin,
            size,
            dim: spec.dim(),
            n,
        }
    }

    /// Window in which the linear convolution of sources in `source` is exact
    /// at every target in `target`.
    pub fn for_convolution(spec: &GridSpec, source: &IndexBox, target: &IndexBox) -> Self {
        let dim = spec.dim();
        let hull = source.hull(target, dim);
        Self::new(spec, hull.lo, 2 * hull.max_extent(dim))
    }

    /// Window that holds `region` without wrap-around.
    pub fn covering(spec: &GridSpec, region: &IndexBox) -> Self {
        Self::new(spec, region.lo, region.max_extent(spec.dim()))
    }

    pub fn shape(&self) -> [usize; 3] {
        let mut s = [1; 3];
        for a in s.iter_mut().take(self.dim) {
            *a = self.size;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    fn flat_local(&self, l: [usize; 3]) -> usize {
        let s = self.shape();
        (l[0] * s[1] + l[1]) * s[2] + l[2]
    }

    fn multi_local(&self, k: usize) -> [usize; 3] {
        let s = self.shape();
        [k / (s[1] * s[2]), (k / s[2]) % s[1], k % s[2]]
    }

    /// Local flat index of a global cell index, if it lies in the window.
    pub fn local(&self, idx: [i64; 3]) -> Option<usize> {
        let mut l = [0usize; 3];
        for a in 0..self.dim {
            let d = (idx[a] - self.origin[a]).rem_euclid(self.n as i64) as usize;
            if d >= self.size {
                return None;
            }
            l[a] = d;
        }
        Some(self.flat_local(l))
    }

    /// Copy the samples of `values` lying in `keep` into a window array.
    pub fn extract(&self, spec: &GridSpec, values: &[Complex64], keep: &IndexBox) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for idx in keep.iter() {
            if let Some(k) = self.local(idx) {
                out[k] = values[spec.wrap(idx)];
            }
        }
        out
    }

    /// Place a torus kernel (indexed by offset) into the window with offsets
    /// folded into `(-P/2, P/2]`.
    pub fn fold_kernel(&self, spec: &GridSpec, kernel: &[Complex64]) -> Vec<Complex64> {
        let half = self.size / 2;
        (0..self.len())
            .map(|k| {
                let l = self.multi_local(k);
                let mut d = [0i64; 3];
                for a in 0..self.dim {
                    d[a] = if l[a] <= half {
                        l[a] as i64
                    } else {
                        l[a] as i64 - self.size as i64
                    };
                }
                kernel[spec.wrap(d)]
            })
            .collect()
    }

    /// Window array holding `weight` at each of `offsets` (folded mod P).
    pub fn offsets_kernel(&self, offsets: &[[i64; 3]], weight: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for d in offsets {
            let mut l = [0usize; 3];
            for a in 0..self.dim {
                l[a] = d[a].rem_euclid(self.size as i64) as usize;
            }
            out[self.flat_local(l)] += weight;
        }
        out
    }

    pub fn forward(&self, mut data: Vec<Complex64>) -> Vec<Complex64> {
        fft_nd(&mut data, self.shape(), false);
        data
    }

    /// Circular convolution of window data with a transformed kernel.
    pub fn convolve(&self, data: Vec<Complex64>, kernel_hat: &[Complex64]) -> Vec<Complex64> {
        let mut buf = self.forward(data);
        self.convolve_transformed(&mut buf, kernel_hat);
        buf
    }

    /// As [`Window::convolve`] but starting from already transformed data; the
    /// buffer is overwritten with the physical-side result.
    pub fn convolve_transformed(&self, buf: &mut [Complex64], kernel_hat: &[Complex64]) {
        let norm = 1.0 / self.len() as f64;
        for (c, k) in buf.iter_mut().zip(kernel_hat) {
            *c *= k * norm;
        }
        fft_nd(buf, self.shape(), true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct(spec: &GridSpec, g: &[Complex64], kernel: &[Complex64], z: [i64; 3]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for t in IndexBox::whole(spec).iter() {
            let v = g[spec.wrap(t)];
            if v.norm() > 0.0 {
                s += v * kernel[spec.wrap([z[0] - t[0], z[1] - t[1], z[2] - t[2]])];
            }
        }
        s
    }

    #[test]
    fn smooth_lengths() {
        assert_eq!(next_smooth(11), 12);
        assert_eq!(next_smooth(41), 42);
        assert_eq!(next_smooth(64), 64);
        assert_eq!(next_smooth(121), 125);
    }

    #[test]
    fn windowed_convolution_matches_torus_sum() {
        let spec = GridSpec::planar(2.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kernel: Vec<Complex64> = (0..spec.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let source = IndexBox {
            lo: [20, 30, 0],
            len: [5, 7, 1],
        };
        let mut g = vec![Complex64::new(0.0, 0.0); spec.len()];
        for t in source.iter() {
            g[spec.wrap(t)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        let target = IndexBox {
            lo: [18, 26, 0],
            len: [4, 4, 1],
        };
        let w = Window::for_convolution(&spec, &source, &target);
        assert!(w.size < spec.points());
        let khat = w.forward(w.fold_kernel(&spec, &kernel));
        let out = w.convolve(w.extract(&spec, &g, &source), &khat);
        for z in target.iter() {
            let a = out[w.local(z).unwrap()];
            let b = direct(&spec, &g, &kernel, z);
            assert!((a - b).norm() < 1e-12, "{z:?}");
        }
    }
}
