use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::{process_node, root_cube, SparseCollection, SparseConfig};
use crate::error::Result;
use crate::grid::{cube_average, inner_product, SampledField};
use crate::maximal::Maximal;
use crate::multiplier::apply_bochner_riesz;

/// `sum_{Q in S} (avg_{6Q} |f|^{p0})^{1/p0} (avg_{6Q} |g|^{q})^{1/q} |Q|`.
pub fn sparse_form(s: &SparseCollection, f: &SampledField, g: &SampledField, p0: f64, q0_dual: f64) -> Result<f64> {
    let spec = *f.spec();
    let dv = spec.cell_volume();
    let mut total = 0.0;
    for q in &s.cubes {
        let six = s.root.dilate6(&spec, q);
        let a = cube_average(f, &six, p0)?;
        if a == 0.0 {
            continue;
        }
        let b = cube_average(g, &six, q0_dual)?;
        total += a * b * s.root.measure(q) as f64 * dv;
    }
    Ok(total)
}

/// `<B^delta f, g> = int B^delta f conj(g)`.
pub fn bilinear_pairing(f: &SampledField, g: &SampledField, delta: f64) -> Result<Complex64> {
    inner_product(&apply_bochner_riesz(f, delta), g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffDiagonalReport {
    /// `sum_j |int_{Q_j} B^delta(f 1_{(6Q_j)^c}) conj(g)|`.
    pub lhs: f64,
    /// `(avg_{6Q0} |f|^{p0})^{1/p0} (avg_{6Q0} |g|^{q0'})^{1/q0'} |Q0|`.
    pub rhs: f64,
    /// `lhs / rhs`, zero when both vanish.
    pub ratio: f64,
    pub selected: usize,
    pub c: f64,
}

/// Both sides of the off-diagonal estimate at the top node.
pub fn off_diagonal_check(f: &SampledField, g: &SampledField, delta: f64, cfg: &SparseConfig) -> Result<OffDiagonalReport> {
    let spec = *f.spec();
    let root = root_cube(f, g)?;
    let engine = Maximal::new(spec, delta, cfg.maximal.clone())?;
    let q0 = root.cube();
    let six = root.dilate6(&spec, &q0);
    let f = f.restrict(&six);
    let node = process_node(&f, g, &root, &q0, &engine, cfg)?;
    let lhs: f64 = node.selected.iter().map(|s| s.off_diagonal).sum();
    let rhs = cube_average(&f, &six, cfg.p0())?
        * cube_average(g, &six, cfg.q0_dual())?
        * root.measure(&q0) as f64
        * spec.cell_volume();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(OffDiagonalReport {
        lhs,
        rhs,
        ratio,
        selected: node.selected.len(),
        c: node.c,
    })
}

/// `level,ix,iy,side,certificate_ratio` (plus `iz` in three dimensions).
pub fn write_collection_csv<W: Write>(out: W, s: &SparseCollection, side_of_root: f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let three = s.root.dim == 3;
    let mut header = vec!["level", "ix", "iy"];
    if three {
        header.push("iz");
    }
    header.extend(["side", "certificate_ratio"]);
    w.write_record(&header)?;
    for (q, cert) in s.cubes.iter().zip(&s.certificates) {
        let mut row = vec![q.level.to_string(), q.index[0].to_string(), q.index[1].to_string()];
        if three {
            row.push(q.index[2].to_string());
        }
        row.push(format!("{}", side_of_root / (1u64 << q.level) as f64));
        row.push(format!("{}", cert.ratio()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
