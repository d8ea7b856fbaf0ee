//! Uniform quantizer and integer-unit network states.
//!
//! A state entry `k` at node `i` stands for the real value `u_min + k·Δ`.
//! Means and Lyapunov values are exact rationals in units of `Δ` and `Δ²`.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Range `[u_min, u_max]` split into `L = 2^r` levels of width `Δ = (u_max - u_min) / 2^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct QuantizerSpec {
    u_min: f64,
    u_max: f64,
    r: u32,
}

#[derive(Deserialize)]
struct RawSpec {
    u_min: f64,
    u_max: f64,
    r: u32,
}

impl TryFrom<RawSpec> for QuantizerSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        QuantizerSpec::new(raw.u_min, raw.u_max, raw.r)
    }
}

impl QuantizerSpec {
    pub fn new(u_min: f64, u_max: f64, r: u32) -> Result<Self> {
        if !(u_min.is_finite() && u_max.is_finite()) || u_max <= u_min {
            return Err(Error::param(format!(
                "quantizer range needs u_min < u_max, got [{u_min}, {u_max}]"
            )));
        }
        if r == 0 || r > 40 {
            return Err(Error::param(format!("bits per sample must be in 1..=40, got {r}")));
        }
        Ok(QuantizerSpec { u_min, u_max, r })
    }

    /// Spec with `Δ = 1` and `u_min = 0`, so values equal units.
    pub fn unit(r: u32) -> Result<Self> {
        QuantizerSpec::new(0.0, (1u64 << r) as f64, r)
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn bits(&self) -> u32 {
        self.r
    }

    /// Number of levels `L = 2^r`.
    pub fn levels(&self) -> u64 {
        1u64 << self.r
    }

    pub fn delta(&self) -> f64 {
        (self.u_max - self.u_min) / self.levels() as f64
    }

    /// Level `ω_{k+1} = u_min + k·Δ` for a 0-based index `k < L`.
    pub fn level(&self, k: u64) -> f64 {
        self.value_of(k as i64)
    }

    /// Real value of an integer unit count.
    pub fn value_of(&self, units: i64) -> f64 {
        self.u_min + units as f64 * self.delta()
    }

    /// 0-based index of `Q(u)`. `u = u_max` maps to the top level.
    pub fn quantize_index(&self, u: f64) -> Result<u64> {
        if !(self.u_min..=self.u_max).contains(&u) {
            return Err(Error::Range {
                value: u,
                min: self.u_min,
                max: self.u_max,
            });
        }
        let q = (u - self.u_min) / self.delta();
        // snap values a rounding error below a level boundary onto that level
        let k = (q + 1e-9 * q.abs().max(1.0)).floor() as u64;
        Ok(k.min(self.levels() - 1))
    }

    /// `Q(u) = ω_i` for `u ∈ [ω_i, ω_{i+1})`.
    pub fn quantize(&self, u: f64) -> Result<f64> {
        Ok(self.level(self.quantize_index(u)?))
    }
}

/// Network state as integer units of `Δ` above `u_min`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct QState {
    #[serde(skip)]
    top: i64,
    spec: QuantizerSpecKey,
    units: Vec<i64>,
}

// QuantizerSpec holds floats; this wrapper gives QState a total Eq.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(transparent)]
struct QuantizerSpecKey(QuantizerSpec);

impl PartialEq for QuantizerSpecKey {
    fn eq(&self, other: &Self) -> bool {
        self.0.u_min.to_bits() == other.0.u_min.to_bits()
            && self.0.u_max.to_bits() == other.0.u_max.to_bits()
            && self.0.r == other.0.r
    }
}

impl Eq for QuantizerSpecKey {}

#[derive(Deserialize)]
struct RawState {
    spec: QuantizerSpec,
    units: Vec<i64>,
}

impl TryFrom<RawState> for QState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        QState::new(raw.units, raw.spec)
    }
}

impl QState {
    /// Validates `0 <= k <= L` for every entry.
    pub fn new(units: Vec<i64>, spec: QuantizerSpec) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::param("state vector is empty"));
        }
        let top = spec.levels() as i64;
        if let Some((i, &k)) = units.iter().enumerate().find(|(_, &k)| k < 0 || k > top) {
            return Err(Error::param(format!(
                "unit {k} at node {i} outside [0, {top}]"
            )));
        }
        Ok(QState {
            top,
            spec: QuantizerSpecKey(spec),
            units,
        })
    }

    /// Converts real values that must already be multiples of `Δ` above `u_min`.
    pub fn from_values(values: &[f64], spec: QuantizerSpec) -> Result<Self> {
        let delta = spec.delta();
        let units = values
            .iter()
            .map(|&v| {
                let k = (v - spec.u_min) / delta;
                let rounded = k.round();
                if (k - rounded).abs() > 1e-9 {
                    Err(Error::param(format!("value {v} is not a multiple of Δ={delta}")))
                } else {
                    Ok(rounded as i64)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        QState::new(units, spec)
    }

    pub fn spec(&self) -> &QuantizerSpec {
        &self.spec.0
    }

    pub fn units(&self) -> &[i64] {
        &self.units
    }

    pub fn n(&self) -> usize {
        self.units.len()
    }

    /// Largest admissible unit count, `L`.
    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn values(&self) -> Vec<f64> {
        self.units.iter().map(|&k| self.spec.0.value_of(k)).collect()
    }

    pub fn sum_units(&self) -> i64 {
        self.units.iter().sum()
    }

    /// Exact mean in units of `Δ` above `u_min`.
    pub fn mean_units(&self) -> Rational {
        Rational::new(self.sum_units() as i128, self.n() as i128)
    }

    /// Mean as a real value.
    pub fn mean(&self) -> f64 {
        let m = self.mean_units();
        self.spec.0.u_min + (*m.numer() as f64 / *m.denom() as f64) * self.spec.0.delta()
    }

    /// `V_α(x) = Σ (x_i − α)²` in units of `Δ²`, with `α` in units of `Δ`.
    pub fn lyapunov(&self, alpha_units: Rational) -> Rational {
        self.units
            .iter()
            .map(|&k| {
                let d = Rational::from_integer(k as i128) - alpha_units;
                d * d
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// `V` about the state's own mean.
    pub fn lyapunov_about_mean(&self) -> Rational {
        self.lyapunov(self.mean_units())
    }

    /// `J(x) = (max − min) / Δ`.
    pub fn spread_j(&self) -> u64 {
        let max = self.units.iter().max().copied().unwrap_or(0);
        let min = self.units.iter().min().copied().unwrap_or(0);
        (max - min) as u64
    }

    /// Distinct unit values with their multiplicities, ascending.
    pub fn distribution(&self) -> Vec<(i64, usize)> {
        let mut sorted = self.units.clone();
        sorted.sort_unstable();
        let mut out: Vec<(i64, usize)> = Vec::new();
        for k in sorted {
            match out.last_mut() {
                Some((v, c)) if *v == k => *c += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    /// Moves `delta` units from `from` to `to`. Callers keep both ends in range.
    pub(crate) fn transfer(&mut self, from: usize, to: usize, delta: i64) {
        self.units[from] -= delta;
        self.units[to] += delta;
    }
}
