//! Reductions over grid boxes from tables of dyadic rectangles.
//!
//! Every axis interval `[lo, lo + len)` splits into at most `2 log2 N`
//! aligned dyadic intervals, so a box is a disjoint union of products of
//! them. Sums therefore only ever add nonnegative terms, with no prefix-sum
//! cancellation.

use crate::grid::IndexBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Reduce {
    Sum,
    Min,
    Max,
}

impl Reduce {
    fn identity(self) -> f64 {
        match self {
            Reduce::Sum => 0.0,
            Reduce::Min => f64::INFINITY,
            Reduce::Max => f64::NEG_INFINITY,
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Reduce::Sum => a + b,
            Reduce::Min => a.min(b),
            Reduce::Max => a.max(b),
        }
    }
}

/// `tables[levels]` holds the reduction over every aligned rectangle with
/// side `2^levels[a]` on axis `a`.
#[derive(Debug, Clone)]
pub(crate) struct RectTable {
    dim: usize,
    n: usize,
    depth: usize,
    op: Reduce,
    tables: Vec<Vec<f64>>,
}

impl RectTable {
    pub fn new(values: &[f64], dim: usize, n: usize, op: Reduce) -> Self {
        let depth = n.trailing_zeros() as usize + 1;
        let count = depth.pow(dim as u32);
        let mut tables: Vec<Vec<f64>> = vec![Vec::new(); count];
        tables[0] = values.to_vec();
        for key in 1..count {
            let levels = Self::levels_of(key, dim, depth);
            // grow along the first axis with a nonzero level
            let axis = (0..dim).find(|&a| levels[a] > 0).unwrap();
            let mut prev = levels;
            prev[axis] -= 1;
            let src = &tables[Self::key_of(prev, dim, depth)];
            let src_shape = Self::shape(prev, dim, n);
            let shape = Self::shape(levels, dim, n);
            let mut out = vec![0.0; shape.iter().product()];
            for (k, o) in out.iter_mut().enumerate() {
                let mut idx = unflat(k, &shape);
                idx[axis] *= 2;
                let a = src[flat(idx, &src_shape)];
                idx[axis] += 1;
                let b = src[flat(idx, &src_shape)];
                *o = op.apply(a, b);
            }
            tables[key] = out;
        }
        Self {
            dim,
            n,
            depth,
            op,
            tables,
        }
    }

    fn levels_of(mut key: usize, dim: usize, depth: usize) -> [usize; 3] {
        let mut l = [0; 3];
        for x in l.iter_mut().take(dim) {
            *x = key % depth;
            key /= depth;
        }
        l
    }

    fn key_of(levels: [usize; 3], dim: usize, depth: usize) -> usize {
        (0..dim).rev().fold(0, |k, a| k * depth + levels[a])
    }

    fn shape(levels: [usize; 3], dim: usize, n: usize) -> [usize; 3] {
        let mut s = [1; 3];
        for a in 0..dim {
            s[a] = n >> levels[a];
        }
        s
    }

    /// Reduction over an aligned cube of side `2^level` with block index `index`.
    pub fn dyadic(&self, level: usize, index: [usize; 3]) -> f64 {
        let levels = [level; 3];
        let shape = Self::shape(levels, self.dim, self.n);
        self.tables[Self::key_of(levels, self.dim, self.depth)][flat(index, &shape)]
    }

    /// Reduction over a box inside `[0, n)^dim`.
    pub fn query(&self, b: &IndexBox) -> f64 {
        let parts: Vec<Vec<(usize, usize)>> = (0..self.dim)
            .map(|a| dyadic_split(b.lo[a] as usize, b.len[a]))
            .collect();
        let mut acc = self.op.identity();
        let mut choice = [0usize; 3];
        loop {
            let mut levels = [0; 3];
            let mut idx = [0; 3];
            for a in 0..self.dim {
                let (l, i) = parts[a][choice[a]];
                levels[a] = l;
                idx[a] = i;
            }
            let shape = Self::shape(levels, self.dim, self.n);
            acc = self.op.apply(acc, self.tables[Self::key_of(levels, self.dim, self.depth)][flat(idx, &shape)]);
            let mut a = 0;
            loop {
                if a == self.dim {
                    return acc;
                }
                choice[a] += 1;
                if choice[a] < parts[a].len() {
                    break;
                }
                choice[a] = 0;
                a += 1;
            }
        }
    }
}

/// `[lo, lo + len)` as aligned dyadic intervals `(level, index)`.
fn dyadic_split(mut lo: usize, len: usize) -> Vec<(usize, usize)> {
    let hi = lo + len;
    let mut out = Vec::new();
    while lo < hi {
        let mut l = if lo == 0 { usize::BITS as usize - 1 } else { lo.trailing_zeros() as usize };
        while lo + (1 << l) > hi {
            l -= 1;
        }
        out.push((l, lo >> l));
        lo += 1 << l;
    }
    out
}

fn flat(idx: [usize; 3], shape: &[usize; 3]) -> usize {
    (idx[0] * shape[1] + idx[1]) * shape[2] + idx[2]
}

fn unflat(k: usize, shape: &[usize; 3]) -> [usize; 3] {
    [k / (shape[1] * shape[2]), (k / shape[2]) % shape[1], k % shape[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_covers_the_interval() {
        for lo in 0..40 {
            for len in 0..40 {
                let parts = dyadic_split(lo, len);
                let mut x = lo;
                for (l, i) in parts {
                    assert_eq!(i << l, x);
                    x += 1 << l;
                }
                assert_eq!(x, lo + len);
            }
        }
    }

    #[test]
    fn queries_match_direct_reduction() {
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let sum = RectTable::new(&v, 2, n, Reduce::Sum);
        let max = RectTable::new(&v, 2, n, Reduce::Max);
        for _ in 0..200 {
            let s = rng.gen_range(1..=n);
            let b = IndexBox {
                lo: [rng.gen_range(0..=n - s) as i64, rng.gen_range(0..=n - s) as i64, 0],
                len: [s, rng.gen_range(1..=n), 1],
            };
            let b = IndexBox {
                len: [b.len[0], b.len[1].min(n - b.lo[1] as usize), 1],
                ..b
            };
            let direct: Vec<f64> = b.iter().map(|x| v[x[0] as usize * n + x[1] as usize]).collect();
            let s_direct: f64 = direct.iter().sum();
            assert!((sum.query(&b) - s_direct).abs() < 1e-12 * s_direct.max(1.0));
            assert_eq!(max.query(&b), direct.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        }
        assert_eq!(sum.dyadic(4, [0; 3]), sum.query(&IndexBox { lo: [0; 3], len: [16, 16, 1] }));
    }
}
