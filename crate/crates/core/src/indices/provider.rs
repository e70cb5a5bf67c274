use super::{delta_critical, Q};
use crate::error::{Error, Result};

/// Policy for `delta~(p)`, the smoothness at which `S_k`-type pieces are
/// bounded on `L^p` with the expected loss.
pub trait DeltaTilde: Send + Sync {
    fn name(&self) -> &'static str;

    fn delta_tilde(&self, p: Q, n: u32) -> Result<Q>;

    /// Whether values for dimension `n` rest on the Bochner-Riesz conjecture.
    fn conjectural(&self, n: u32) -> bool;
}

/// `delta~ = delta` in the plane, where the conjecture is a theorem.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dim2Solved;

impl DeltaTilde for Dim2Solved {
    fn name(&self) -> &'static str {
        "dim2_solved"
    }

    fn delta_tilde(&self, p: Q, n: u32) -> Result<Q> {
        if n != 2 {
            return Err(Error::ProviderDimension {
                provider: self.name(),
                n,
            });
        }
        delta_critical(p, n)
    }

    fn conjectural(&self, _n: u32) -> bool {
        false
    }
}

/// `delta~ = delta` in every dimension; conjectural for `n >= 3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AssumeConjecture;

impl DeltaTilde for AssumeConjecture {
    fn name(&self) -> &'static str {
        "assume_conjecture"
    }

    fn delta_tilde(&self, p: Q, n: u32) -> Result<Q> {
        delta_critical(p, n)
    }

    fn conjectural(&self, n: u32) -> bool {
        n >= 3
    }
}

pub fn provider_names() -> &'static [&'static str] {
    &["dim2_solved", "assume_conjecture"]
}

pub fn provider_by_name(name: &str) -> Result<Box<dyn DeltaTilde>> {
    match name {
        "dim2_solved" => Ok(Box::new(Dim2Solved)),
        "assume_conjecture" => Ok(Box::new(AssumeConjecture)),
        _ => Err(Error::Unknown {
            kind: "delta~ provider",
            name: name.into(),
        }),
    }
}
