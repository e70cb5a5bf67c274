use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::indices::{parse_ratio, provider_by_name, q, ExponentRecord, Q};
use crate::maximal::MaximalConfig;
use crate::sparse::SparseConfig;

/// Radius and centre sampling for the maximal operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsPolicy {
    /// Anchors one radius apart, at most 64 centres per ball.
    Thinned,
    /// Every grid point, every centre.
    Exhaustive,
}

/// What the domination sweep feeds the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inputs {
    Random,
    /// `f = 0`, the degenerate control.
    ZeroF,
}

/// Parameters shared by every experiment. Unset grid fields and trial counts
/// fall back to per-experiment defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub grid_l: Option<f64>,
    pub grid_n: Option<Vec<usize>>,
    pub delta: Q,
    pub p0: Q,
    pub q0: Q,
    pub p: Q,
    pub q: Q,
    pub trials: Option<usize>,
    pub seed: u64,
    pub eps_policy: EpsPolicy,
    pub c_init: f64,
    /// Doubling of `C` past this value is a threshold failure.
    pub c_max: f64,
    pub recursion_floor: u64,
    /// Radii above `scale_cap * side(Q)` are skipped at a node.
    pub scale_cap: Option<f64>,
    /// Reference decay exponent for the far range of the kernels.
    pub n_decay: u32,
    /// Annulus weight `2^{-jM}` in the tail estimate.
    pub m_decay: u32,
    /// Scales `k` for the decay diagnostics.
    pub scales: Option<Vec<i32>>,
    /// `p` values for the weighted sweep.
    pub weight_p: Vec<Q>,
    pub provider: Option<String>,
    pub inputs: Inputs,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            grid_l: None,
            grid_n: None,
            delta: q(1, 5),
            p0: q(6, 5),
            q0: q(2, 1),
            p: q(8, 5),
            q: q(5, 2),
            trials: None,
            seed: 7,
            eps_policy: EpsPolicy::Thinned,
            c_init: 8.0,
            c_max: (1u64 << 20) as f64,
            recursion_floor: 4,
            scale_cap: Some(6.0),
            n_decay: 3,
            m_decay: 2,
            scales: None,
            weight_p: vec![q(8, 5), q(5, 2)],
            provider: None,
            inputs: Inputs::Random,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let out: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Parse(format!("empty list `{value}`")));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: cannot read `{value}`")))
}

fn show_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn to_f64(x: Q) -> f64 {
    x.to_f64().expect("finite rational")
}

impl ExperimentConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", no + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dim" => self.dim = parse_num(key, value)?,
            "grid_l" => self.grid_l = Some(parse_num(key, value)?),
            "grid_n" => self.grid_n = Some(parse_list(value, |s| parse_num(key, s))?),
            "delta" => self.delta = parse_ratio(value)?,
            "p0" => self.p0 = parse_ratio(value)?,
            "q0" => self.q0 = parse_ratio(value)?,
            "p" => self.p = parse_ratio(value)?,
            "q" => self.q = parse_ratio(value)?,
            "trials" => {
                let t: usize = parse_num(key, value)?;
                if t == 0 {
                    return Err(Error::Parse("trials must be at least 1".into()));
                }
                self.trials = Some(t);
            }
            "seed" => self.seed = parse_num(key, value)?,
            "eps_policy" => {
                self.eps_policy = match value {
                    "thinned" => EpsPolicy::Thinned,
                    "exhaustive" => EpsPolicy::Exhaustive,
                    _ => return Err(Error::Unknown { kind: "eps_policy", name: value.into() }),
                }
            }
            "c_init" => self.c_init = parse_num(key, value)?,
            "c_max" => self.c_max = parse_num(key, value)?,
            "recursion_floor" => self.recursion_floor = parse_num(key, value)?,
            "scale_cap" => {
                self.scale_cap = if value == "none" { None } else { Some(parse_num(key, value)?) }
            }
            "n_decay" => self.n_decay = parse_num(key, value)?,
            "m_decay" => self.m_decay = parse_num(key, value)?,
            "scales" => self.scales = Some(parse_list(value, |s| parse_num(key, s))?),
            "weight_p" => self.weight_p = parse_list(value, parse_ratio)?,
            "provider" => self.provider = Some(value.to_string()),
            "inputs" => {
                self.inputs = match value {
                    "random" => Inputs::Random,
                    "zero_f" => Inputs::ZeroF,
                    _ => return Err(Error::Unknown { kind: "inputs", name: value.into() }),
                }
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(Error::Unknown { kind: "config key", name: key.into() }),
        }
        Ok(())
    }

    /// Every key with its current value, in the file syntax. Unset optional
    /// fields are omitted.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![("dim", self.dim.to_string())];
        if let Some(l) = self.grid_l {
            v.push(("grid_l", l.to_string()));
        }
        if let Some(n) = &self.grid_n {
            v.push(("grid_n", show_list(n)));
        }
        v.extend([
            ("delta", self.delta.to_string()),
            ("p0", self.p0.to_string()),
            ("q0", self.q0.to_string()),
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
        ]);
        if let Some(t) = self.trials {
            v.push(("trials", t.to_string()));
        }
        v.push(("seed", self.seed.to_string()));
        v.push((
            "eps_policy",
            match self.eps_policy {
                EpsPolicy::Thinned => "thinned",
                EpsPolicy::Exhaustive => "exhaustive",
            }
            .into(),
        ));
        v.push(("c_init", self.c_init.to_string()));
        v.push(("c_max", self.c_max.to_string()));
        v.push(("recursion_floor", self.recursion_floor.to_string()));
        v.push(("scale_cap", self.scale_cap.map_or("none".into(), |c| c.to_string())));
        v.push(("n_decay", self.n_decay.to_string()));
        v.push(("m_decay", self.m_decay.to_string()));
        if let Some(s) = &self.scales {
            v.push(("scales", show_list(s)));
        }
        v.push(("weight_p", show_list(&self.weight_p)));
        if let Some(p) = &self.provider {
            v.push(("provider", p.clone()));
        }
        v.push((
            "inputs",
            match self.inputs {
                Inputs::Random => "random",
                Inputs::ZeroF => "zero_f",
            }
            .into(),
        ));
        v.push(("output_dir", self.output_dir.display().to_string()));
        v
    }

    pub fn to_text(&self) -> String {
        self.entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn side(&self, default: f64) -> f64 {
        self.grid_l.unwrap_or(default)
    }

    pub fn points(&self, default: &[usize]) -> Vec<usize> {
        self.grid_n.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn trial_count(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn grids(&self, side: f64, points: &[usize]) -> Result<Vec<GridSpec>> {
        self.points(points)
            .into_iter()
            .map(|n| GridSpec::new(self.dim, self.side(side), n))
            .collect()
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed ^ trial as u64
    }

    pub fn provider_name(&self) -> &str {
        match &self.provider {
            Some(p) => p,
            None if self.dim == 2 => "dim2_solved",
            None => "assume_conjecture",
        }
    }

    /// The record for `(dim, p0, q0, p, q, delta)`.
    pub fn record(&self) -> Result<ExponentRecord> {
        self.record_at(self.p)
    }

    pub fn record_at(&self, p: Q) -> Result<ExponentRecord> {
        let provider = provider_by_name(self.provider_name())?;
        ExponentRecord::new(self.dim as u32, self.p0, self.q0, p, self.q, self.delta, provider.as_ref())
    }

    pub fn sparse_config(&self, spec: &GridSpec) -> Result<SparseConfig> {
        let mut maximal = MaximalConfig::new(spec, to_f64(self.p0), to_f64(self.q0))?;
        if self.eps_policy == EpsPolicy::Exhaustive {
            maximal = maximal.exhaustive();
        }
        let mut cfg = SparseConfig::new(spec, to_f64(self.p0), to_f64(self.q0))?;
        cfg.maximal = maximal;
        cfg.c_init = self.c_init;
        cfg.c_max = self.c_max;
        cfg.floor_cells = self.recursion_floor;
        cfg.scale_cap = self.scale_cap;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_lists_and_rationals() {
        let cfg = ExperimentConfig::parse(
            "# sweep\n grid_n = 256, 512\ndelta = 0.01 # control\np0=6/5\nscale_cap = none\nscales=-4,-6\n",
        )
        .unwrap();
        assert_eq!(cfg.grid_n, Some(vec![256, 512]));
        assert_eq!(cfg.delta, q(1, 100));
        assert_eq!(cfg.scale_cap, None);
        assert_eq!(cfg.scales, Some(vec![-4, -6]));
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["trials = 0", "grid_n = 256,x", "colour = red", "delta", "eps_policy = all"] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let cfg = ExperimentConfig { seed: 0xdead_beef, ..Default::default() };
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| cfg.trial_seed(t)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
