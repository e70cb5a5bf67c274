//! `brlab` is a desk-scale laboratory for the Bochner-Riesz multiplier
//! `(1 - |xi|^2)_+^delta` on a periodic grid.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`] samples functions on a torus and provides the Fourier contract,
//!   norms, cube averages and test-function generators.
//! * [`multiplier`] holds the radial symbols (full, truncated and the
//!   Littlewood-Paley pieces `S_k`) and kernel diagnostics.
//! * [`maximal`] discretizes the Hardy-Littlewood maximal function and the two
//!   maximal Bochner-Riesz operators that drive the stopping time.
//! * [`sparse`] builds sparse collections of dyadic cubes and evaluates the
//!   sparse bilinear form.
//! * [`weights`] computes Muckenhoupt and reverse Hoelder characteristics.
//! * [`indices`] is exact rational arithmetic for the critical exponents.
//! * [`harness`] runs named experiments and writes CSV/JSON reports.

pub mod error;
pub mod grid;
pub mod harness;
pub mod indices;
pub mod maximal;
pub mod multiplier;
pub mod sparse;
pub mod weights;

pub use error::{Error, Result};
pub use grid::{AxisBox, GridSpec, SampledField, SpectralField};
