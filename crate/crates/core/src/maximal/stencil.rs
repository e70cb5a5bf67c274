//! Integer offset sets for balls measured in cells.

use crate::grid::IndexBox;

fn tol(r2: f64) -> f64 {
    1e-9 * r2.max(1.0)
}

/// Threshold for `|d|^2 < r^2`.
pub(crate) fn strict(r: f64) -> f64 {
    r * r - tol(r * r)
}

pub(crate) fn dist_sq(x: [i64; 3], t: [i64; 3], dim: usize) -> f64 {
    (0..dim).map(|a| ((x[a] - t[a]) * (x[a] - t[a])) as f64).sum()
}

pub(crate) fn corners(b: &IndexBox, dim: usize) -> impl Iterator<Item = [i64; 3]> + '_ {
    (0..1usize << dim).map(move |mask| {
        let mut c = b.lo;
        for a in 0..dim {
            if mask >> a & 1 == 1 {
                c[a] += b.len[a] as i64 - 1;
            }
        }
        c
    })
}

fn ball(dim: usize, r: f64, keep: impl Fn(f64) -> bool) -> Vec<[i64; 3]> {
    let reach = r.ceil() as i64;
    let span = |a: usize| if a < dim { -reach..=reach } else { 0..=0 };
    let mut out = Vec::new();
    for i in span(0) {
        for j in span(1) {
            for k in span(2) {
                if keep(dist_sq([i, j, k], [0; 3], 3)) {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

/// Offsets with `|d| <= r`; boundary ties included.
pub fn closed_ball(dim: usize, r: f64) -> Vec<[i64; 3]> {
    let lim = r * r + tol(r * r);
    ball(dim, r, |d2| d2 <= lim)
}

/// Offsets with `|d| < r`.
pub fn open_ball(dim: usize, r: f64) -> Vec<[i64; 3]> {
    let lim = strict(r);
    ball(dim, r, |d2| d2 < lim)
}

/// [`open_ball`] restricted to the sublattice `s Z^n` with the smallest `s`
/// leaving at most `cap` offsets. The centre is always kept.
pub fn thinned_ball(dim: usize, r: f64, cap: Option<usize>) -> Vec<[i64; 3]> {
    let all = open_ball(dim, r);
    let Some(cap) = cap else { return all };
    let mut s = 1i64;
    loop {
        let kept: Vec<[i64; 3]> = all
            .iter()
            .copied()
            .filter(|d| d.iter().all(|c| c % s == 0))
            .collect();
        if kept.len() <= cap.max(1) {
            return kept;
        }
        s += 1;
    }
}
