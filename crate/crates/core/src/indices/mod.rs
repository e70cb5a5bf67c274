//! Critical exponents in exact rational arithmetic.

mod provider;
mod table;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use provider::{provider_by_name, provider_names, AssumeConjecture, DeltaTilde, Dim2Solved};
pub use table::{parse_ratio, record_csv, record_text};
pub(crate) use table::fields as record_fields;

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn max(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

fn out_of_range(what: &'static str, value: Q, interval: &str) -> Error {
    Error::OutOfRange {
        what,
        value: value.to_string(),
        interval: interval.into(),
    }
}

/// Hoelder conjugate `p / (p - 1)`; `None` for `p = 1`.
pub fn conjugate(p: Q) -> Option<Q> {
    let d = p - Q::one();
    (!d.is_zero()).then(|| p / d)
}

/// `delta(p) = max{n |1/p - 1/2| - 1/2, 0}`.
pub fn delta_critical(p: Q, n: u32) -> Result<Q> {
    if p <= Q::one() {
        return Err(out_of_range("p", p, "(1, inf)"));
    }
    let half = q(1, 2);
    let v = Q::from(n as i64) * (p.recip() - half).abs() - half;
    Ok(max(v, Q::zero()))
}

/// `p1 = 2(3/2 - 1/p0)`.
pub fn p1_of(p0: Q) -> Result<Q> {
    if !(p0 > Q::one() && p0 < q(2, 1)) {
        return Err(out_of_range("p0", p0, "(1, 2)"));
    }
    let p1 = q(3, 1) - q(2, 1) / p0;
    assert!(p1 > Q::one() && p1 < q(2, 1));
    Ok(p1)
}

/// `theta` with `1/2 = theta/inf + (1 - theta)/p1`.
pub fn theta_of(p1: Q) -> Q {
    Q::one() - p1 / q(2, 1)
}

/// `rho_n(p0) = max{n(1/p0 - 1/2) - 1/2, (n-1)/2 (1/p0 - 1/2)}`.
pub fn rho_n(p0: Q, n: u32) -> Result<Q> {
    if !(p0 >= Q::one() && p0 <= q(2, 1)) {
        return Err(out_of_range("p0", p0, "[1, 2]"));
    }
    let n_q = Q::from(n as i64);
    let t = p0.recip() - q(1, 2);
    let restriction = n_q * t - q(1, 2);
    let kakeya = (n_q - Q::one()) / q(2, 1) * t;
    let by_max = max(restriction, kakeya);
    let tomas_stein = q(2 * (n as i64 + 1), n as i64 + 3);
    let piecewise = if p0 >= tomas_stein {
        kakeya
    } else {
        restriction
    };
    assert_eq!(by_max, piecewise);
    Ok(by_max)
}

/// `nu_2(p0) = (1/p0 - 1/2)/2`.
pub fn nu2(p0: Q) -> Q {
    (p0.recip() - q(1, 2)) / q(2, 1)
}

fn delta_bar_2_branch(p0: Q, low: bool) -> Q {
    let nu = nu2(p0);
    if low {
        nu + (Q::one() - q(2, 1) * nu).recip() - q(3, 2)
    } else {
        nu
    }
}

/// Two-dimensional critical index, piecewise in `p0` with the break at 6/5.
pub fn delta_bar_2(p0: Q) -> Result<Q> {
    if !(p0 >= Q::one() && p0 <= q(2, 1)) {
        return Err(out_of_range("p0", p0, "[1, 2]"));
    }
    let brk = q(6, 5);
    assert_eq!(delta_bar_2_branch(brk, true), delta_bar_2_branch(brk, false));
    Ok(delta_bar_2_branch(p0, p0 <= brk))
}

/// Result of the index chain `p0 -> p1 -> theta -> delta_bar_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBar {
    pub p1: Q,
    pub theta: Q,
    pub delta_tilde: Q,
    pub value: Q,
    /// `max{n(1/p0 - 1/2) - 1/2, value}`: the smoothness the maximal
    /// operators need.
    pub constraint: Q,
    pub conjectural: bool,
}

/// `delta_bar_n(p0) = delta~(p1) + (n-1)/2 (1/p0 - 1/2)`.
pub fn delta_bar(p0: Q, n: u32, provider: &dyn DeltaTilde) -> Result<DeltaBar> {
    let p1 = p1_of(p0)?;
    let delta_tilde = provider.delta_tilde(p1, n)?;
    let n_q = Q::from(n as i64);
    let t = p0.recip() - q(1, 2);
    let value = delta_tilde + (n_q - Q::one()) / q(2, 1) * t;
    let constraint = max(n_q * t - q(1, 2), value);
    let rho = rho_n(p0, n)?;
    assert!(value >= rho, "delta_bar {value} < rho {rho}");
    Ok(DeltaBar {
        p1,
        theta: theta_of(p1),
        delta_tilde,
        value,
        constraint,
        conjectural: provider.conjectural(n),
    })
}

/// `p0, q0 in [6/5, 6]` and `1/p0 - 1/q0 <= 1/3`.
pub fn admissible_pair(p0: Q, q0: Q) -> bool {
    let range = |x: Q| x >= q(6, 5) && x <= q(6, 1);
    range(p0) && range(q0) && p0.recip() - q0.recip() <= q(1, 3)
}

/// `(p, q) in [6/5, 6]^2` and `|1/p - 1/q| < 1/3`.
pub fn admissible_vv(p: Q, q_: Q) -> bool {
    let range = |x: Q| x >= q(6, 5) && x <= q(6, 1);
    range(p) && range(q_) && (p.recip() - q_.recip()).abs() < q(1, 3)
}

/// Which side of 2 a weighted estimate lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below2,
    Above2,
}

impl Side {
    pub fn of(p: Q) -> Option<Side> {
        if p < q(2, 1) {
            Some(Side::Below2)
        } else if p > q(2, 1) {
            Some(Side::Above2)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Below2 => "below2",
            Side::Above2 => "above2",
        }
    }
}

/// Admissible open interval of `p` for the weighted bound on `side`.
pub fn side_interval(p0: Q, side: Side) -> Result<(Q, Q)> {
    if !(p0 > Q::one() && p0 < q(2, 1)) {
        return Err(out_of_range("p0", p0, "(1, 2)"));
    }
    Ok(match side {
        Side::Below2 => (p0, q(2, 1)),
        Side::Above2 => (q(2, 1), conjugate(p0).expect("p0 > 1")),
    })
}

/// Exponent of the weighted bound: `max{1/(p - p0), 1/(2 - p)}` below 2 and
/// `max{1/(p - 2), (p0' - 2)/(p0' - p)}` above 2.
pub fn alpha_exponent(p: Q, p0: Q, side: Side) -> Result<Q> {
    let (lo, hi) = side_interval(p0, side)?;
    if !(p > lo && p < hi) {
        return Err(out_of_range("p", p, &format!("({lo}, {hi})")));
    }
    Ok(match side {
        Side::Below2 => max((p - p0).recip(), (q(2, 1) - p).recip()),
        Side::Above2 => {
            let pc = hi;
            max((p - q(2, 1)).recip(), (pc - q(2, 1)) / (pc - p))
        }
    })
}

/// Every critical index for one `(n, p0, q0, p, q, delta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentRecord {
    pub n: u32,
    pub p0: Q,
    pub q0: Q,
    pub p: Q,
    pub q: Q,
    pub delta: Q,
    pub delta_p: Q,
    pub p1: Q,
    pub theta: Q,
    pub rho: Q,
    pub delta_bar: Q,
    pub nu2: Q,
    pub delta_bar2: Option<Q>,
    pub alpha_below: Option<Q>,
    pub alpha_above: Option<Q>,
    pub admissible_pair: bool,
    pub admissible_vv: bool,
    pub provider: &'static str,
    pub conjectural: bool,
}

impl ExponentRecord {
    pub fn new(
        n: u32,
        p0: Q,
        q0: Q,
        p: Q,
        q_: Q,
        delta: Q,
        provider: &dyn DeltaTilde,
    ) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(out_of_range("n", Q::from(n as i64), "{1, 2, 3}"));
        }
        if delta < Q::zero() {
            return Err(out_of_range("delta", delta, "[0, inf)"));
        }
        let bar = delta_bar(p0, n, provider)?;
        let alpha = |side| alpha_exponent(p, p0, side).ok();
        Ok(Self {
            n,
            p0,
            q0,
            p,
            q: q_,
            delta,
            delta_p: delta_critical(p, n)?,
            p1: bar.p1,
            theta: bar.theta,
            rho: rho_n(p0, n)?,
            delta_bar: bar.value,
            nu2: nu2(p0),
            delta_bar2: (n == 2).then(|| delta_bar_2(p0)).transpose()?,
            alpha_below: alpha(Side::Below2),
            alpha_above: alpha(Side::Above2),
            admissible_pair: admissible_pair(p0, q0),
            admissible_vv: admissible_vv(p, q_),
            provider: provider.name(),
            conjectural: bar.conjectural,
        })
    }

    /// The smoothness threshold runs are compared against.
    pub fn critical(&self) -> Q {
        self.delta_bar2.unwrap_or(self.delta_bar)
    }

    pub fn below_critical(&self) -> bool {
        self.delta <= self.critical()
    }
}
