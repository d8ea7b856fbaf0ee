//! Closed-form convergence bounds and the constants they are built from.
//!
//! Everything here is a pure function of its inputs. Bounds are evaluated in
//! `f64` (they are loose by orders of magnitude); the non-trivial-event budget
//! is exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantization::{QState, Rational};
use crate::randwalk::p0;

/// A bound evaluated at concrete inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: Vec<(String, f64)>,
    pub value: f64,
    pub source: String,
}

impl BoundReport {
    pub fn new(name: &str, inputs: &[(&str, f64)], value: f64, source: &str) -> Self {
        BoundReport {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            source: source.to_string(),
        }
    }
}

/// Meeting time of the natural walk on a fixed graph: `2n·H_sf − n`.
pub fn bound_prop1(n: usize, h_sf_max: f64) -> f64 {
    2.0 * n as f64 * h_sf_max - n as f64
}

/// Worst-case simple-walk hitting time over graphs on `n` nodes: `4n³/27`.
pub fn bound_hsf_cubic(n: usize) -> f64 {
    4.0 * (n as f64).powi(3) / 27.0
}

/// Expected AF convergence time: `(n²J²/8)·((8/27)n³ − 1)`.
pub fn bound_thm2(n: usize, j0: u64) -> f64 {
    let (n, j) = (n as f64, j0 as f64);
    n * n * j * j / 8.0 * (8.0 / 27.0 * n.powi(3) - 1.0)
}

/// Mixing horizon of the time-varying chain: the least integer strictly
/// greater than `b·(8n⁶·ln(√2·n) + 1)`.
pub fn t1(n: usize, b: u64) -> u64 {
    let x = t1_real(n, b);
    x.floor() as u64 + 1
}

/// `b·(8n⁶·ln(√2·n) + 1)` before rounding.
pub fn t1_real(n: usize, b: u64) -> f64 {
    let nf = n as f64;
    b as f64 * (8.0 * nf.powi(6) * (std::f64::consts::SQRT_2 * nf).ln() + 1.0)
}

/// Meeting time on a `b`-periodically connected schedule: `4n·t1(n, b)`.
pub fn bound_prop2(n: usize, b: u64) -> f64 {
    4.0 * n as f64 * t1(n, b) as f64
}

/// Expected AS convergence time: `½·b·J²·n²·(16n⁷ + 1)`.
pub fn bound_thm6(n: usize, b: u64, j0: u64) -> f64 {
    let (n, j) = (n as f64, j0 as f64);
    0.5 * b as f64 * j * j * n * n * (16.0 * n.powi(7) + 1.0)
}

/// AF convergence on a fresh `G(n, p)` per tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArBound {
    /// `n·J²/(16·p0)`, from the exact meeting time `1/(2p0)`.
    pub exact: f64,
    /// `n²(n−1)J²/(32p)`, the published relaxation via `p0 ≥ 2p/(n(n−1))`.
    pub relaxed: f64,
    /// `n²(n−1)J²/(16p)`, the same relaxation via `p0 ≥ p/(n(n−1))`, which always holds.
    pub relaxed_sound: f64,
}

pub fn bound_ar(n: usize, p: f64, j0: u64) -> Result<ArBound> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("bound_ar needs 0 < p <= 1, got {p}")));
    }
    let q = p0(n, p)?;
    let (nf, j2) = (n as f64, (j0 * j0) as f64);
    Ok(ArBound {
        exact: nf * j2 / (16.0 * q),
        relaxed: nf * nf * (nf - 1.0) * j2 / (32.0 * p),
        relaxed_sound: nf * nf * (nf - 1.0) * j2 / (16.0 * p),
    })
}

/// Upper bounds on the number of non-trivial averages from `x0`, in units of `Δ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NontrivialBudget {
    /// `V_{x̄}(x0)/2`.
    pub exact: Rational,
    /// `n·J²/8`.
    pub relaxed: Rational,
}

pub fn nontrivial_budget(x0: &QState) -> NontrivialBudget {
    let j = x0.spread_j() as i128;
    let budget = NontrivialBudget {
        exact: x0.lyapunov_about_mean() / Rational::from_integer(2),
        relaxed: Rational::new(x0.n() as i128 * j * j, 8),
    };
    debug_assert!(budget.exact <= budget.relaxed);
    budget
}
