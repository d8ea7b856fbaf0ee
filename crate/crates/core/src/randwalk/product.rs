//! Two walks at once: the chain on node pairs and its first visit to the
//! diagonal `Θ = {(k, k)}`.
//!
//! Pair `(i, j)` has index `i·N + j`. Two joint-move rules are provided:
//!
//! - [`ChainKind::Independent`]: both walks step every tick, `q = P ⊗ P`.
//! - [`ChainKind::Interleaved`]: at most one walk steps per tick (each is the
//!   active one with its own `1/N` clock), `q = P ⊗ I + I ⊗ P − I`. This is
//!   the two-token process of the gossip clock, and the one meeting times use.

use nalgebra::{DMatrix, DVector};

use super::hitting::solve_checked;
use super::TransitionMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::schedule::{GraphSchedule, ScheduleKind};

/// Largest base graph for which pair chains are built (`N² ≤ 3600` states).
pub const MAX_PRODUCT_NODES: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Independent,
    Interleaved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductChain {
    base_n: usize,
    kind: ChainKind,
    q: DMatrix<f64>,
    absorbed: bool,
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_PRODUCT_NODES {
        return Err(Error::Resource(format!(
            "pair chain on {n} nodes exceeds the {MAX_PRODUCT_NODES}-node limit"
        )));
    }
    Ok(())
}

/// Independent-walk product chain `q_{(i1,i2)(j1,j2)} = p_{i1 j1} · p_{i2 j2}`.
pub fn product_chain(pm: &TransitionMatrix) -> Result<ProductChain> {
    guard(pm.n())?;
    Ok(ProductChain {
        base_n: pm.n(),
        kind: ChainKind::Independent,
        q: pm.matrix().kronecker(pm.matrix()),
        absorbed: false,
    })
}

/// Pair chain of two tokens sharing one clock: `q = P ⊗ I + I ⊗ P − I`.
pub fn token_pair_chain(pm: &TransitionMatrix) -> Result<ProductChain> {
    guard(pm.n())?;
    let n = pm.n();
    let eye = DMatrix::<f64>::identity(n, n);
    let q = pm.matrix().kronecker(&eye) + eye.kronecker(pm.matrix()) - DMatrix::identity(n * n, n * n);
    if q.iter().any(|&v| v < -1e-12) {
        return Err(Error::param(
            "interleaved pair chain needs p_aa + p_bb >= 1 for all a, b",
        ));
    }
    Ok(ProductChain {
        base_n: n,
        kind: ChainKind::Interleaved,
        q,
        absorbed: false,
    })
}

impl ProductChain {
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn is_absorbed(&self) -> bool {
        self.absorbed
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.base_n + j
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        (k / self.base_n, k % self.base_n)
    }

    pub fn get(&self, from: (usize, usize), to: (usize, usize)) -> f64 {
        self.q[(self.index(from.0, from.1), self.index(to.0, to.1))]
    }

    /// Replaces every `Θ` row with the matching unit row.
    pub fn absorb(mut self) -> Self {
        let n = self.base_n;
        for k in 0..n {
            let r = self.index(k, k);
            self.q.row_mut(r).fill(0.0);
            self.q[(r, r)] = 1.0;
        }
        self.absorbed = true;
        self
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.q.row_iter().map(|r| (r.sum() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn max_column_sum_error(&self) -> f64 {
        self.q.column_iter().map(|c| (c.sum() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Expected meeting times for every start pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MeetingTimes {
    /// `M(i, j)`, zero on the diagonal.
    pub per_pair: DMatrix<f64>,
    pub max: f64,
    pub argmax: (usize, usize),
}

impl MeetingTimes {
    fn from_matrix(per_pair: DMatrix<f64>) -> Self {
        let n = per_pair.nrows();
        let mut argmax = (0, 0);
        let mut max = 0.0;
        for i in 0..n {
            for j in 0..n {
                if per_pair[(i, j)] > max {
                    max = per_pair[(i, j)];
                    argmax = (i, j);
                }
            }
        }
        MeetingTimes { per_pair, max, argmax }
    }
}

/// Exact meeting times of two tokens on a fixed walk, by solving
/// `(I − Q_transient) m = 1` over the off-diagonal pairs of the interleaved chain.
pub fn meeting_time_exact(pm: &TransitionMatrix) -> Result<MeetingTimes> {
    meeting_time_exact_with(pm, ChainKind::Interleaved)
}

/// [`meeting_time_exact`] under either joint-move rule.
pub fn meeting_time_exact_with(pm: &TransitionMatrix, kind: ChainKind) -> Result<MeetingTimes> {
    let n = pm.n();
    guard(n)?;
    let transient: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let m = transient.len();
    if m == 0 {
        return Ok(MeetingTimes::from_matrix(DMatrix::zeros(n, n)));
    }
    // off-diagonal pair (a, b) -> row; a·(n-1) + b - [b > a]
    let row_of = |a: usize, b: usize| a * (n - 1) + if b > a { b - 1 } else { b };

    let mut system = DMatrix::<f64>::identity(m, m);
    for (r, &(a, b)) in transient.iter().enumerate() {
        match kind {
            ChainKind::Interleaved => {
                system[(r, r)] -= pm.get(a, a) + pm.get(b, b) - 1.0;
                for (k, p) in pm.successors(a) {
                    if k != b {
                        system[(r, row_of(k, b))] -= p;
                    }
                }
                for (k, p) in pm.successors(b) {
                    if k != a {
                        system[(r, row_of(a, k))] -= p;
                    }
                }
            }
            ChainKind::Independent => {
                for k in 0..n {
                    let pa = pm.get(a, k);
                    if pa == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        if l != k {
                            system[(r, row_of(k, l))] -= pa * pm.get(b, l);
                        }
                    }
                }
            }
        }
    }
    let sol = solve_checked(system, DVector::from_element(m, 1.0))
        .map_err(|e| match e {
            Error::Numerical(msg) => Error::Numerical(format!("{msg}; tokens may never meet")),
            other => other,
        })?;
    let mut per_pair = DMatrix::zeros(n, n);
    for (r, &(a, b)) in transient.iter().enumerate() {
        per_pair[(a, b)] = sol[r];
    }
    Ok(MeetingTimes::from_matrix(per_pair))
}

/// One tick of the pair distribution `w` (an `N×N` matrix over pairs).
/// With `absorbed`, mass on the diagonal is held in place.
pub(crate) fn pair_step(w: &DMatrix<f64>, p: &DMatrix<f64>, kind: ChainKind, absorbed: bool) -> DMatrix<f64> {
    let moving = if absorbed {
        let mut off = w.clone();
        off.fill_diagonal(0.0);
        off
    } else {
        w.clone()
    };
    let mut next = match kind {
        ChainKind::Independent => p.transpose() * &moving * p,
        ChainKind::Interleaved => p.transpose() * &moving + &moving * p - &moving,
    };
    if absorbed {
        for k in 0..w.nrows() {
            next[(k, k)] += w[(k, k)];
        }
    }
    next
}

/// `ϑ_Θ(t)` for `t = 0..=ticks`, starting from pair `start` at tick 0, with the walk
/// matrix at tick `t` built from `schedule.graph_at(t)`.
pub fn theta_trajectory<F>(
    schedule: &GraphSchedule,
    walk: F,
    start: (usize, usize),
    ticks: u64,
    kind: ChainKind,
    absorbed: bool,
) -> Result<Vec<f64>>
where
    F: Fn(&Graph) -> Result<TransitionMatrix>,
{
    let n = schedule.n();
    guard(n)?;
    if start.0 >= n || start.1 >= n {
        return Err(Error::param("start pair out of range"));
    }
    let phases = PhaseMatrices::new(schedule, &walk)?;
    let mut w = DMatrix::zeros(n, n);
    w[(start.0, start.1)] = 1.0;
    let mut out = Vec::with_capacity(ticks as usize + 1);
    out.push(w.trace());
    for t in 0..ticks {
        let p = phases.at(schedule, &walk, t)?;
        w = pair_step(&w, &p, kind, absorbed);
        out.push(w.trace());
    }
    Ok(out)
}

/// Walk matrices per tick, cached over one period when the schedule has one.
struct PhaseMatrices {
    cached: Option<Vec<DMatrix<f64>>>,
}

impl PhaseMatrices {
    fn new<F>(schedule: &GraphSchedule, walk: &F) -> Result<Self>
    where
        F: Fn(&Graph) -> Result<TransitionMatrix>,
    {
        let cached = match schedule.kind() {
            ScheduleKind::Generator { .. } => None,
            _ => {
                let period = schedule.period().unwrap_or(1) as u64;
                Some(
                    (0..period)
                        .map(|t| walk(&schedule.graph_at(t)).map(|m| m.matrix().clone()))
                        .collect::<Result<_>>()?,
                )
            }
        };
        Ok(PhaseMatrices { cached })
    }

    fn at<F>(&self, schedule: &GraphSchedule, walk: &F, t: u64) -> Result<DMatrix<f64>>
    where
        F: Fn(&Graph) -> Result<TransitionMatrix>,
    {
        match &self.cached {
            Some(ms) => Ok(ms[(t % ms.len() as u64) as usize].clone()),
            None => Ok(walk(&schedule.graph_at(t))?.matrix().clone()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScheduleMeetingOptions {
    /// Stop once the estimated remaining survival mass is below this.
    pub tail_tol: f64,
    pub max_ticks: u64,
    pub kind: ChainKind,
}

impl Default for ScheduleMeetingOptions {
    fn default() -> Self {
        ScheduleMeetingOptions {
            tail_tol: 1e-9,
            max_ticks: 50_000_000,
            kind: ChainKind::Interleaved,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleMeeting {
    /// `max_s M_s(i, j)` over the start times that were evaluated.
    pub per_pair: DMatrix<f64>,
    pub max: f64,
    /// Start times evaluated: one full period, or only `0` for generator schedules.
    pub start_times: Vec<u64>,
    /// `true` when `start_times` covers every phase, so `max` is the sup over start times.
    pub sup_over_start: bool,
    /// Estimated survival mass left out of the sums.
    pub truncation: f64,
    pub ticks: u64,
}

/// Meeting times on a time-varying walk, as `Σ_t P(not met by t)` accumulated
/// from the absorbed pair chain until the remaining tail is below `tail_tol`.
pub fn meeting_time_schedule<F>(
    schedule: &GraphSchedule,
    walk: F,
    opts: ScheduleMeetingOptions,
) -> Result<ScheduleMeeting>
where
    F: Fn(&Graph) -> Result<TransitionMatrix>,
{
    let n = schedule.n();
    guard(n)?;
    let phases = PhaseMatrices::new(schedule, &walk)?;
    let (starts, sup) = match schedule.period() {
        Some(p) => ((0..p as u64).collect::<Vec<_>>(), true),
        None => (vec![0], false),
    };
    let period = schedule.period().unwrap_or(1) as u64;

    let mut best = DMatrix::<f64>::zeros(n, n);
    let mut worst_truncation = 0.0f64;
    let mut max_ticks_used = 0;
    for &s in &starts {
        // one N×N survival distribution per off-diagonal start pair
        let mut dists: Vec<((usize, usize), DMatrix<f64>)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .map(|(a, b)| {
                let mut w = DMatrix::zeros(n, n);
                w[(a, b)] = 1.0;
                ((a, b), w)
            })
            .collect();
        let mut totals = vec![0.0f64; dists.len()];
        let mut history: Vec<f64> = Vec::new();
        let mut t = 0u64;
        let truncation = loop {
            let mut max_survival = 0.0f64;
            for (k, (_, w)) in dists.iter().enumerate() {
                let surv = w.sum();
                totals[k] += surv;
                max_survival = max_survival.max(surv);
            }
            history.push(max_survival);
            if max_survival == 0.0 {
                break 0.0;
            }
            if t >= period && t.is_multiple_of(period) {
                let prev = history[(t - period) as usize];
                let ratio = max_survival / prev;
                if ratio < 1.0 {
                    // geometric tail over whole periods, bounded by period · S(t)/(1 − r)
                    let tail = period as f64 * max_survival / (1.0 - ratio);
                    if tail < opts.tail_tol {
                        break tail;
                    }
                }
            }
            if t >= opts.max_ticks {
                return Err(Error::NonConvergent {
                    ticks: t,
                    remaining: max_survival,
                });
            }
            let p = phases.at(schedule, &walk, s + t)?;
            for (_, w) in dists.iter_mut() {
                let mut next = pair_step(w, &p, opts.kind, false);
                next.fill_diagonal(0.0);
                *w = next;
            }
            t += 1;
        };
        for (k, ((a, b), _)) in dists.iter().enumerate() {
            best[(*a, *b)] = best[(*a, *b)].max(totals[k]);
        }
        worst_truncation = worst_truncation.max(truncation);
        max_ticks_used = max_ticks_used.max(t);
    }
    let mt = MeetingTimes::from_matrix(best);
    Ok(ScheduleMeeting {
        per_pair: mt.per_pair,
        max: mt.max,
        start_times: starts,
        sup_over_start: sup,
        truncation: worst_truncation,
        ticks: max_ticks_used,
    })
}
