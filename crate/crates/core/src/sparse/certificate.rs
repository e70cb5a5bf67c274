use std::collections::HashMap;

use serde::Serialize;

use super::cube::{DyadicCube, RootCube};

/// `sum_{Q in ch_S(P)} |Q|` against `|P|`, both in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub covered: u128,
    pub measure: u128,
}

impl Certificate {
    /// `sum |Q| <= |P| / 2`, decided in integers.
    pub fn holds(&self) -> bool {
        2 * self.covered <= self.measure
    }

    pub fn ratio(&self) -> f64 {
        self.covered as f64 / self.measure as f64
    }
}

/// A finite set of cubes of one dyadic mesh together with `ch_S(P)`, the
/// maximal elements of the set strictly inside each `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseCollection {
    pub root: RootCube,
    pub cubes: Vec<DyadicCube>,
    pub children: Vec<Vec<usize>>,
    pub certificates: Vec<Certificate>,
}

fn children_map(cubes: &[DyadicCube]) -> Vec<Vec<usize>> {
    let index: HashMap<DyadicCube, usize> = cubes.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let mut children = vec![Vec::new(); cubes.len()];
    for (i, q) in cubes.iter().enumerate() {
        let mut up = q.parent();
        while let Some(p) = up {
            if let Some(&j) = index.get(&p) {
                children[j].push(i);
                break;
            }
            up = p.parent();
        }
    }
    children
}

impl SparseCollection {
    /// Builds the children map and certificates from the cubes alone.
    /// Duplicates are dropped, first occurrence kept.
    pub fn from_cubes(root: RootCube, cubes: Vec<DyadicCube>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let cubes: Vec<DyadicCube> = cubes.into_iter().filter(|q| seen.insert(*q)).collect();
        let children = children_map(&cubes);
        let certificates = cubes
            .iter()
            .zip(&children)
            .map(|(p, ch)| Certificate {
                covered: ch.iter().map(|&i| root.measure(&cubes[i])).sum(),
                measure: root.measure(p),
            })
            .collect();
        Self {
            root,
            cubes,
            children,
            certificates,
        }
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn depth(&self) -> u32 {
        self.cubes.iter().map(|q| q.level).max().unwrap_or(0)
    }

    /// Recomputes the children map and certificates and checks every
    /// certificate, disjointness and containment. Returns the first failure.
    pub fn verify(&self) -> Result<(), String> {
        let fresh = Self::from_cubes(self.root, self.cubes.clone());
        if fresh != *self {
            return Err("stored children or certificates disagree with the cubes".into());
        }
        for (p, (ch, cert)) in self.children.iter().zip(&self.certificates).enumerate() {
            let parent = &self.cubes[p];
            for (k, &a) in ch.iter().enumerate() {
                let qa = &self.cubes[a];
                if !parent.contains(qa) || qa == parent {
                    return Err(format!("{qa:?} is not strictly inside {parent:?}"));
                }
                for &b in &ch[k + 1..] {
                    let qb = &self.cubes[b];
                    if qa.contains(qb) || qb.contains(qa) {
                        return Err(format!("{qa:?} and {qb:?} overlap"));
                    }
                }
            }
            if !cert.holds() {
                return Err(format!(
                    "{parent:?}: children cover {}/{} cells",
                    cert.covered, cert.measure
                ));
            }
        }
        Ok(())
    }
}
