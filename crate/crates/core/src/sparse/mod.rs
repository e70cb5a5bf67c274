//! Stopping-time construction of sparse collections.
//!
//! Starting from a root cube `Q0` whose dilate `6Q0` holds the supports, each
//! node `Q` evaluates `B^{delta,*} f + B^{delta,**} f + M_{p0} f` on its cells,
//! thresholds at `C (avg_{6Q} |f|^{p0})^{1/p0}` with `C` doubled until the
//! exceptional set covers at most half of `Q`, selects the maximal dyadic
//! subcubes of that set and recurses on `f 1_{6Q_j}`.

mod certificate;
mod cube;
mod form;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{cube_average, GridSpec, IndexBox, SampledField};
use crate::maximal::{Maximal, MaximalConfig};

pub use certificate::{Certificate, SparseCollection};
pub use cube::{DyadicCube, RootCube};
pub use form::{bilinear_pairing, off_diagonal_check, sparse_form, write_collection_csv, OffDiagonalReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseConfig {
    pub maximal: MaximalConfig,
    pub c_init: f64,
    pub c_max: f64,
    /// Smallest selectable cube side, in cells.
    pub floor_cells: u64,
    /// At a node `Q`, radii above `scale_cap * side(Q)` are skipped.
    pub scale_cap: Option<f64>,
}

impl SparseConfig {
    pub fn new(spec: &GridSpec, p0: f64, q0: f64) -> Result<Self> {
        Ok(Self {
            maximal: MaximalConfig::new(spec, p0, q0)?,
            c_init: 8.0,
            c_max: (1u64 << 20) as f64,
            floor_cells: 4,
            scale_cap: Some(6.0),
        })
    }

    pub fn p0(&self) -> f64 {
        self.maximal.p0
    }

    /// `q0'`, the exponent of the `g` averages.
    pub fn q0_dual(&self) -> f64 {
        let q0 = self.maximal.q0;
        q0 / (q0 - 1.0)
    }

    fn radii(&self, side: f64) -> Vec<f64> {
        let eps = &self.maximal.eps_set;
        match self.scale_cap {
            None => eps.clone(),
            Some(cap) => {
                let kept: Vec<f64> = eps.iter().copied().filter(|e| *e <= cap * side).collect();
                if kept.is_empty() {
                    eps[..1].to_vec()
                } else {
                    kept
                }
            }
        }
    }
}

/// Smallest centred grid-aligned cube of `2^m` cells per side (`m >= 2`)
/// whose dilate `6Q0` contains the declared supports of `f` and `g` and lies
/// in the domain. Identically zero fields are ignored.
pub fn root_cube(f: &SampledField, g: &SampledField) -> Result<RootCube> {
    let spec = *f.spec();
    if g.spec() != &spec {
        return Err(Error::GridMismatch);
    }
    let dim = spec.dim();
    let mut hull: Option<IndexBox> = None;
    for h in [f, g] {
        if h.is_zero() {
            continue;
        }
        let s = h.support().ok_or(Error::SupportsTooLarge)?;
        let cells = spec.cells_in(s);
        if cells.is_empty() {
            continue;
        }
        hull = Some(match hull {
            None => cells,
            Some(b) => b.hull(&cells, dim),
        });
    }
    let n = spec.points() as u64;
    let mut m = 2;
    while 3 * (1u64 << m) <= n / 2 {
        let root = centred(&spec, 1 << m);
        let six = spec.cells_in(&root.dilate6(&spec, &root.cube()));
        if hull.map_or(true, |h| h.intersect(&six, dim) == h) {
            return Ok(root);
        }
        m += 1;
    }
    Err(Error::SupportsTooLarge)
}

fn centred(spec: &GridSpec, side_cells: u64) -> RootCube {
    let lo = (spec.points() / 2) as i64 - (side_cells / 2) as i64;
    let mut lo3 = [0; 3];
    for l in lo3.iter_mut().take(spec.dim()) {
        *l = lo;
    }
    RootCube {
        dim: spec.dim(),
        lo: lo3,
        side_cells,
    }
}

/// Outcome of thresholding at one node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalSet {
    /// `(avg_{6Q} |f|^{p0})^{1/p0}`.
    pub f_average: f64,
    pub c: f64,
    pub threshold: f64,
    /// Cells of `Q` in `E`.
    pub exceptional_cells: u64,
    /// Maximal dyadic subcubes of `E` no smaller than the floor.
    pub cubes: Vec<DyadicCube>,
    /// Cells of `E` left uncovered by `cubes` (below the floor).
    pub absorbed_cells: u64,
}

/// `E = {x in Q : B* f + B** f + M_{p0} f > C avg}` on the cells of `q`, with
/// `f` assumed supported in `6Q`.
pub fn exceptional_set(
    f: &SampledField,
    root: &RootCube,
    q: &DyadicCube,
    engine: &Maximal,
    cfg: &SparseConfig,
) -> Result<ExceptionalSet> {
    let spec = *f.spec();
    let six = root.dilate6(&spec, q);
    let f_average = cube_average(f, &six, cfg.p0())?;
    let mut out = ExceptionalSet {
        f_average,
        c: cfg.c_init,
        threshold: cfg.c_init * f_average,
        exceptional_cells: 0,
        cubes: Vec::new(),
        absorbed_cells: 0,
    };
    if f_average == 0.0 {
        return Ok(out);
    }
    let region = root.cells(q);
    let total = engine
        .evaluate(f, &region, &cfg.radii(root.side(&spec, q)))
        .total();
    let measure = root.measure(q);
    let mut c = cfg.c_init;
    let count = loop {
        let t = c * f_average;
        let count = total.iter().filter(|v| **v > t).count() as u64;
        if 2 * count as u128 <= measure {
            break count;
        }
        c *= 2.0;
        if c > cfg.c_max {
            return Err(Error::ThresholdFailure { c });
        }
    };
    out.c = c;
    out.threshold = c * f_average;
    out.exceptional_cells = count;
    let in_e: Vec<bool> = total.iter().map(|v| *v > out.threshold).collect();
    out.cubes = maximal_cubes(root, q, &region, &in_e, cfg.floor_cells);
    let covered: u128 = out.cubes.iter().map(|c| root.measure(c)).sum();
    out.absorbed_cells = count - covered as u64;
    Ok(out)
}

/// Maximal dyadic subcubes of `q` (strictly smaller, side at least `floor`)
/// whose cells all lie in the set.
fn maximal_cubes(root: &RootCube, q: &DyadicCube, region: &IndexBox, in_set: &[bool], floor: u64) -> Vec<DyadicCube> {
    let dim = root.dim;
    let side = root.side_cells(q);
    if side < 2 * floor.max(1) {
        return Vec::new();
    }
    // relative depth of the smallest admissible subcube
    let depth = (side / floor.max(1)).ilog2();
    let per_axis = 1usize << depth;
    let fine = side as usize / per_axis;
    let flat = |l: [usize; 3], n: usize| -> usize {
        let mut k = 0;
        for &x in l.iter().take(dim) {
            k = k * n + x;
        }
        k
    };
    let mut counts = vec![vec![0u64; per_axis.pow(dim as u32)]];
    for (x, inside) in region.iter().zip(in_set) {
        if *inside {
            let mut l = [0usize; 3];
            for a in 0..dim {
                l[a] = (x[a] - region.lo[a]) as usize / fine;
            }
            counts[0][flat(l, per_axis)] += 1;
        }
    }
    // counts[i] holds the level with 2^(depth - i) cubes per axis
    for i in 1..=depth as usize {
        let n = per_axis >> i;
        let mut c = vec![0u64; n.pow(dim as u32)];
        let prev = &counts[i - 1];
        for (k, v) in prev.iter().enumerate() {
            let mut l = unflat(k, 2 * n, dim);
            for x in l.iter_mut().take(dim) {
                *x /= 2;
            }
            c[flat(l, n)] += v;
        }
        counts.push(c);
    }
    let full = |rel: u32, k: usize| -> bool {
        let cells = ((side >> rel) as u128).pow(dim as u32);
        counts[(depth - rel) as usize][k] as u128 == cells
    };
    let mut out = Vec::new();
    for rel in 1..=depth {
        let n = 1usize << rel;
        for k in 0..n.pow(dim as u32) {
            if !full(rel, k) {
                continue;
            }
            let l = unflat(k, n, dim);
            let parent_full = rel > 1 && {
                let mut p = l;
                for x in p.iter_mut().take(dim) {
                    *x /= 2;
                }
                full(rel - 1, flat(p, n / 2))
            };
            if parent_full {
                continue;
            }
            let mut index = [0u64; 3];
            for a in 0..dim {
                index[a] = (q.index[a] << rel) + l[a] as u64;
            }
            out.push(DyadicCube {
                level: q.level + rel,
                index,
            });
        }
    }
    out.sort();
    out
}

fn unflat(mut k: usize, n: usize, dim: usize) -> [usize; 3] {
    let mut l = [0usize; 3];
    for a in (0..dim).rev() {
        l[a] = k % n;
        k /= n;
    }
    l
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectedCube {
    pub cube: DyadicCube,
    /// `|int_{Q_j} B^delta(f 1_{(6Q_j)^c}) conj(g)|` with `f` the node input.
    pub off_diagonal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeTrace {
    pub cube: DyadicCube,
    pub cube_cells: u128,
    pub f_average: f64,
    pub c: f64,
    pub threshold: f64,
    pub exceptional_cells: u64,
    pub absorbed_cells: u64,
    pub selected: Vec<SelectedCube>,
}

impl NodeTrace {
    pub fn exceptional_fraction(&self) -> f64 {
        self.exceptional_cells as f64 / self.cube_cells as f64
    }
}

/// Nodes in processing order: by generation, then by cube address.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTrace {
    pub root: RootCube,
    pub nodes: Vec<NodeTrace>,
}

impl SelectionTrace {
    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.cube.level).max().unwrap_or(0)
    }

    /// Largest chosen constant.
    pub fn max_c(&self) -> f64 {
        self.nodes.iter().map(|n| n.c).fold(0.0, f64::max)
    }

    /// Largest `|E|/|Q|` among the nodes of each level.
    pub fn exceptional_by_level(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.depth() as usize + 1];
        for n in &self.nodes {
            let l = n.cube.level as usize;
            out[l] = out[l].max(n.exceptional_fraction());
        }
        out
    }
}

/// One node of the recursion: threshold, selection and the off-diagonal
/// pieces of the split `B f 1_{Q_j} = B(f 1_{6Q_j}) 1_{Q_j} + B(f 1_{(6Q_j)^c}) 1_{Q_j}`.
fn process_node(
    f: &SampledField,
    g: &SampledField,
    root: &RootCube,
    q: &DyadicCube,
    engine: &Maximal,
    cfg: &SparseConfig,
) -> Result<NodeTrace> {
    let spec = *f.spec();
    let e = exceptional_set(f, root, q, engine, cfg)?;
    let dv = spec.cell_volume();
    let selected = if e.cubes.is_empty() {
        Vec::new()
    } else {
        let region = root.cells(q);
        let whole = engine.bochner_riesz_on(f, &region);
        e.cubes
            .iter()
            .map(|qj| {
                let cells = root.cells(qj);
                let local = engine.bochner_riesz_on(&f.restrict(&root.dilate6(&spec, qj)), &cells);
                let s: Complex64 = cells
                    .iter()
                    .zip(local)
                    .map(|(x, l)| {
                        let k = flat_in(&region, x);
                        (whole[k] - l) * g.values()[spec.wrap(x)].conj()
                    })
                    .sum();
                SelectedCube {
                    cube: *qj,
                    off_diagonal: (s * dv).norm(),
                }
            })
            .collect()
    };
    Ok(NodeTrace {
        cube: *q,
        cube_cells: root.measure(q),
        f_average: e.f_average,
        c: e.c,
        threshold: e.threshold,
        exceptional_cells: e.exceptional_cells,
        absorbed_cells: e.absorbed_cells,
        selected,
    })
}

fn flat_in(region: &IndexBox, x: [i64; 3]) -> usize {
    let mut k = 0;
    for a in 0..3 {
        k = k * region.len[a] + (x[a] - region.lo[a]) as usize;
    }
    k
}

/// Runs the stopping time from the root cube of `(f, g)`. Nodes of one level
/// are independent and evaluated in parallel; the output order is fixed.
pub fn build_sparse(
    f: &SampledField,
    g: &SampledField,
    delta: f64,
    cfg: &SparseConfig,
) -> Result<(SparseCollection, SelectionTrace)> {
    let root = root_cube(f, g)?;
    let engine = Maximal::new(*f.spec(), delta, cfg.maximal.clone())?;
    build_with(f, g, &root, &engine, cfg)
}

pub(crate) fn build_with(
    f: &SampledField,
    g: &SampledField,
    root: &RootCube,
    engine: &Maximal,
    cfg: &SparseConfig,
) -> Result<(SparseCollection, SelectionTrace)> {
    let spec = *f.spec();
    let mut nodes = Vec::new();
    let mut frontier = vec![root.cube()];
    while !frontier.is_empty() {
        frontier.sort();
        let level: Vec<NodeTrace> = frontier
            .par_iter()
            .map(|q| {
                let fq = f.restrict(&root.dilate6(&spec, q));
                process_node(&fq, g, root, q, engine, cfg)
            })
            .collect::<Result<_>>()?;
        frontier = level
            .iter()
            .flat_map(|n| n.selected.iter().map(|s| s.cube))
            .collect();
        nodes.extend(level);
    }
    let cubes = nodes.iter().map(|n| n.cube).collect();
    let trace = SelectionTrace { root: *root, nodes };
    Ok((SparseCollection::from_cubes(*root, cubes), trace))
}
