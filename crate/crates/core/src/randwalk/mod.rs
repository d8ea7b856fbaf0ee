//! Random walks on graphs: transition matrices, exact hitting and meeting
//! times through absorbing-chain solves, and Monte-Carlo estimators.
//!
//! Matrices follow the gossip clock: a walk on `N` nodes moves only when its
//! node is activated (probability `1/N` per tick), so the natural walks carry
//! self-loop mass of at least `1 − 1/N`.

mod hitting;
mod mc;
mod product;
mod psi;

pub use hitting::{hitting_matrix, hitting_times_exact, max_hitting_time, reversibility_check, Reversibility};
pub use mc::{meeting_time_mc, McEstimate, WalkRule};
pub use product::{
    meeting_time_exact, meeting_time_exact_with, meeting_time_schedule, product_chain, theta_trajectory, token_pair_chain,
    ChainKind, MeetingTimes, ProductChain, ScheduleMeeting, ScheduleMeetingOptions, MAX_PRODUCT_NODES,
};
pub use psi::psi_convergence_exact;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

const ROW_TOL: f64 = 1e-12;

/// Row-stochastic matrix `P` with `P[i][j] = P(X(t+1) = j | X(t) = i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    p: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Validates squareness, entries in `[0, 1]` and unit row sums (within `1e-12`).
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.nrows() != p.ncols() || p.nrows() == 0 {
            return Err(Error::param(format!(
                "transition matrix must be square and non-empty, got {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        if let Some(v) = p.iter().find(|v| !(-ROW_TOL..=1.0 + ROW_TOL).contains(*v)) {
            return Err(Error::Numerical(format!("entry {v} outside [0,1]")));
        }
        for (i, row) in p.row_iter().enumerate() {
            let s = row.sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::Numerical(format!("row {i} sums to {s}")));
            }
        }
        Ok(TransitionMatrix { p })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n()).all(|i| (0..i).all(|j| (self.p[(i, j)] - self.p[(j, i)]).abs() <= tol))
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.p.column_iter().all(|c| (c.sum() - 1.0).abs() <= tol)
    }

    /// Row-major CSV with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.p.row_iter() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad matrix entry `{v}`")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix CSV is not square".into()));
        }
        TransitionMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Positive-probability successors of `i` other than `i` itself.
    pub(crate) fn successors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.p
            .row(i)
            .iter()
            .enumerate()
            .filter(move |&(j, &v)| j != i && v > 0.0)
            .map(|(j, &v)| (j, v))
            .collect::<Vec<_>>()
            .into_iter()
    }
}

fn with_diagonal(n: usize, mut off: impl FnMut(usize, usize) -> f64) -> Result<TransitionMatrix> {
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            if i != j {
                let v = off(i, j);
                p[(i, j)] = v;
                row += v;
            }
        }
        p[(i, i)] = 1.0 - row;
    }
    TransitionMatrix::new(p)
}

fn require_walkable(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::param("walk matrices need n >= 2"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Natural walk of one gossip token on a fixed graph:
/// `p_ii = 1 − 1/N`, `p_ij = 1/(N·|N_i|)` for neighbors.
pub fn p_af(g: &Graph) -> Result<TransitionMatrix> {
    require_walkable(g)?;
    let n = g.n();
    with_diagonal(n, |i, j| {
        if g.has_edge(i, j) {
            1.0 / (n as f64 * g.degree(i) as f64)
        } else {
            0.0
        }
    })
}

/// Simple walk: `p_ii = 0`, `p_ij = 1/|N_i|`.
pub fn p_sf(g: &Graph) -> Result<TransitionMatrix> {
    require_walkable(g)?;
    let mut p = DMatrix::zeros(g.n(), g.n());
    for i in 0..g.n() {
        let d = g.degree(i) as f64;
        for &j in g.neighbors(i) {
            p[(i, j)] = 1.0 / d;
        }
    }
    TransitionMatrix::new(p)
}

/// Switching-graph walk: `p_ij = 1/(N·max(|N_i|, |N_j|))` on edges, isolated nodes stay put.
/// The result is symmetric and doubly stochastic.
pub fn p_as(g: &Graph) -> Result<TransitionMatrix> {
    let n = g.n();
    if n < 2 {
        return Err(Error::param("walk matrices need n >= 2"));
    }
    with_diagonal(n, |i, j| {
        if g.has_edge(i, j) {
            1.0 / (n as f64 * g.degree(i).max(g.degree(j)) as f64)
        } else {
            0.0
        }
    })
}

/// Probability that a given directed edge `(i, j)` carries the exchange of one
/// tick when a fresh `G(n, p)` is drawn each tick:
/// `p0 = (1/N) Σ_{m=0}^{N−2} p/(m+1) · C(N−2, m) p^m (1−p)^{N−2−m}`.
pub fn p0(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param(format!("p0 needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0,1]")));
    }
    let k = n - 2;
    let mut binom = 1.0f64;
    let mut sum = 0.0;
    for m in 0..=k {
        if m > 0 {
            binom *= (k - m + 1) as f64 / m as f64;
        }
        sum += p / (m + 1) as f64 * binom * p.powi(m as i32) * (1.0 - p).powi((k - m) as i32);
    }
    Ok(sum / n as f64)
}

/// Walk equivalent to AF on per-tick `G(n, p)`: `p_ij = p0`, `p_ii = 1 − (N−1)·p0`.
pub fn p_ar(n: usize, p: f64) -> Result<TransitionMatrix> {
    if p <= 0.0 {
        return Err(Error::param("p_ar needs p > 0; G(n,0) never connects"));
    }
    let q = p0(n, p)?;
    with_diagonal(n, |_, _| q)
}
