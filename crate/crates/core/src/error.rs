use std::io;

use thiserror::Error;

/// Errors raised by the laboratory.
///
/// The harness maps [`Error::is_threshold_failure`] to its own exit code; every
/// other variant is a precondition or I/O failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("empty intersection: region does not meet the sampled domain")]
    EmptyIntersection,
    #[error("requested support exceeds the central quarter of the domain: {0}")]
    SupportOutsideQuarter(String),
    #[error("scale below grid resolution: k = {k} is finer than k_min = {k_min}")]
    ScaleBelowResolution { k: i32, k_min: i32 },
    #[error("radius {radius} is not in (0, {limit}); periodization corrupts tails")]
    RadiusOutOfRange { radius: f64, limit: f64 },
    #[error("supports too large for domain")]
    SupportsTooLarge,
    #[error("threshold failure: C = {c} exceeded the limit without |E| <= |Q0|/2")]
    ThresholdFailure { c: f64 },
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("{what} = {value} outside admissible interval {interval}")]
    OutOfRange {
        what: &'static str,
        value: String,
        interval: String,
    },
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("provider {provider} is only valid for n = 2 (got n = {n})")]
    ProviderDimension { provider: &'static str, n: u32 },
    #[error("no admissible configuration: {0}")]
    NoAdmissibleConfiguration(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_threshold_failure(&self) -> bool {
        matches!(self, Error::ThresholdFailure { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
