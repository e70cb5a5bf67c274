use serde::{Deserialize, Serialize};

use crate::grid::{AxisBox, GridSpec, IndexBox};

/// Root of a dyadic mesh: a grid-aligned cube of `2^m` cells per side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootCube {
    pub dim: usize,
    /// First cell on each active axis.
    pub lo: [i64; 3],
    pub side_cells: u64,
}

/// Cube of `D(Q0)` with address `(level, index)`, `index in {0..2^level-1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub index: [u64; 3],
}

impl RootCube {
    pub fn cube(&self) -> DyadicCube {
        DyadicCube {
            level: 0,
            index: [0; 3],
        }
    }

    pub fn max_level(&self) -> u32 {
        self.side_cells.trailing_zeros()
    }

    pub fn side_cells(&self, q: &DyadicCube) -> u64 {
        self.side_cells >> q.level
    }

    /// `|Q|` in cells; exact.
    pub fn measure(&self, q: &DyadicCube) -> u128 {
        (self.side_cells(q) as u128).pow(self.dim as u32)
    }

    pub fn cells(&self, q: &DyadicCube) -> IndexBox {
        let s = self.side_cells(q);
        let mut b = IndexBox::unit();
        for a in 0..self.dim {
            b.lo[a] = self.lo[a] + (q.index[a] * s) as i64;
            b.len[a] = s as usize;
        }
        b
    }

    pub fn side(&self, spec: &GridSpec, q: &DyadicCube) -> f64 {
        self.side_cells(q) as f64 * spec.spacing()
    }

    /// Physical box of `Q`, half-open, edges halfway between samples.
    pub fn geometry(&self, spec: &GridSpec, q: &DyadicCube) -> AxisBox {
        let c = self.cells(q);
        let h = spec.spacing();
        let mut b = AxisBox::empty();
        for a in 0..self.dim {
            b.lo[a] = spec.coordinate(c.lo[a]) - 0.5 * h;
            b.hi[a] = spec.coordinate(c.lo[a] + c.len[a] as i64) - 0.5 * h;
        }
        b
    }

    /// `6Q`: concentric dilate by 6.
    pub fn dilate6(&self, spec: &GridSpec, q: &DyadicCube) -> AxisBox {
        self.geometry(spec, q).dilate(6.0)
    }
}

impl DyadicCube {
    pub fn parent(&self) -> Option<DyadicCube> {
        (self.level > 0).then(|| DyadicCube {
            level: self.level - 1,
            index: self.index.map(|i| i / 2),
        })
    }

    /// The `2^n` children.
    pub fn children(&self, dim: usize) -> Vec<DyadicCube> {
        (0..1u64 << dim)
            .map(|mask| {
                let mut index = self.index;
                for (a, i) in index.iter_mut().enumerate().take(dim) {
                    *i = 2 * *i + (mask >> a & 1);
                }
                DyadicCube {
                    level: self.level + 1,
                    index,
                }
            })
            .collect()
    }

    /// `self` contains `other` (not necessarily strictly).
    pub fn contains(&self, other: &DyadicCube) -> bool {
        other.level >= self.level && {
            let shift = other.level - self.level;
            (0..3).all(|a| other.index[a] >> shift == self.index[a])
        }
    }
}
