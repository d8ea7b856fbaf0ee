//! Asynchronous quantized gossip steps and runs to quantized consensus.
//!
//! Time is counted in ticks of the global clock. Each tick activates one
//! node chosen uniformly at random; the active node may pick a neighbor and
//! the pair exchanges `δ` units, the larger value giving to the smaller one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quantization::{QState, Rational};
use crate::schedule::GraphSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Fixed graph: the active node picks a neighbor uniformly.
    #[serde(rename = "AF")]
    Af,
    /// Switching graph: neighbor `j` is picked with probability `1/max(|N_i|, |N_j|)`.
    #[serde(rename = "AS")]
    As,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Af => "AF",
            Algorithm::As => "AS",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AF" => Ok(Algorithm::Af),
            "AS" => Ok(Algorithm::As),
            other => Err(Error::param(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Noop,
    /// Values differed by exactly one unit and were swapped.
    Trivial,
    /// Values differed by two or more units.
    Nontrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TickEvent {
    pub t: u64,
    pub active: usize,
    pub partner: Option<usize>,
    pub delta_units: u64,
    pub kind: EventKind,
}

/// Units exchanged for a pre-update difference of `d` units: `⌈d/2⌉`.
///
/// Even `d` lands both nodes on the exact average; odd `d` leaves them one
/// unit apart in swapped order (`d = 1` is a pure swap).
pub fn compute_delta(d_units: u64) -> u64 {
    d_units.div_ceil(2)
}

/// Applies the pairwise update between `i` and `j`.
pub fn exchange(x: &mut QState, i: usize, j: usize) -> (u64, EventKind) {
    let (xi, xj) = (x.units()[i], x.units()[j]);
    let d = xi.abs_diff(xj);
    let delta = compute_delta(d);
    let kind = match d {
        0 => EventKind::Noop,
        1 => EventKind::Trivial,
        _ => EventKind::Nontrivial,
    };
    if delta > 0 {
        let (hi, lo) = if xi >= xj { (i, j) } else { (j, i) };
        x.transfer(hi, lo, delta as i64);
    }
    (delta, kind)
}

fn finish(x: &mut QState, t: u64, active: usize, partner: Option<usize>) -> TickEvent {
    match partner {
        None => TickEvent {
            t,
            active,
            partner: None,
            delta_units: 0,
            kind: EventKind::Noop,
        },
        Some(j) => {
            let (delta_units, kind) = exchange(x, active, j);
            TickEvent {
                t,
                active,
                partner: Some(j),
                delta_units,
                kind,
            }
        }
    }
}

/// Draws the partner of `i` under the AF rule.
pub fn af_partner<R: Rng + ?Sized>(g: &Graph, i: usize, rng: &mut R) -> Option<usize> {
    let nb = g.neighbors(i);
    if nb.is_empty() {
        None
    } else {
        Some(nb[rng.random_range(0..nb.len())])
    }
}

/// Draws the partner of `i` under the AS rule; `None` covers both an isolated
/// node and the residual probability `1 − Σ_j 1/max(|N_i|, |N_j|)`.
pub fn as_partner<R: Rng + ?Sized>(g: &Graph, i: usize, rng: &mut R) -> Option<usize> {
    let nb = g.neighbors(i);
    if nb.is_empty() {
        return None;
    }
    // uniform neighbor, accepted with prob |N_i|/max(|N_i|,|N_j|): overall 1/max
    let j = nb[rng.random_range(0..nb.len())];
    let di = nb.len();
    let m = di.max(g.degree(j));
    (rng.random_range(0..m) < di).then_some(j)
}

/// One AF tick on a fixed graph. An isolated active node does nothing.
pub fn af_step<R: Rng + ?Sized>(x: &mut QState, g: &Graph, t: u64, rng: &mut R) -> TickEvent {
    debug_assert_eq!(x.n(), g.n());
    let i = rng.random_range(0..g.n());
    let j = af_partner(g, i, rng);
    finish(x, t, i, j)
}

/// One AS tick on the graph in force at tick `t`.
pub fn as_step<R: Rng + ?Sized>(x: &mut QState, g_t: &Graph, t: u64, rng: &mut R) -> TickEvent {
    debug_assert_eq!(x.n(), g_t.n());
    let i = rng.random_range(0..g_t.n());
    let j = as_partner(g_t, i, rng);
    finish(x, t, i, j)
}

/// The consensus band `W(x(0))` in units: `[lo, hi]` with `hi − lo ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsensusTarget {
    pub lo: i64,
    pub hi: i64,
}

impl ConsensusTarget {
    /// Exact consensus when the mean is a whole unit, otherwise `{⌊mean⌋, ⌊mean⌋ + 1}`.
    pub fn from_mean(mean_units: Rational) -> Self {
        let lo = mean_units.floor().to_integer() as i64;
        if mean_units.is_integer() {
            ConsensusTarget { lo, hi: lo }
        } else {
            ConsensusTarget { lo, hi: lo + 1 }
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        (self.lo..=self.hi).contains(&k)
    }
}

/// True iff `x ∈ W(x(0))` for an initial mean `xbar0` (units of `Δ`).
pub fn has_converged(x: &QState, xbar0: Rational) -> bool {
    let target = ConsensusTarget::from_mean(xbar0);
    x.units().iter().all(|&k| target.contains(k))
}

mod ratio_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::quantization::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of one trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub graph_desc: String,
    pub seed: u64,
    /// Convergence tick, `None` on timeout.
    pub t_con: Option<u64>,
    pub timeout: bool,
    pub nontrivial: u64,
    pub trivial: u64,
    pub noop: u64,
    /// `J(x(0))`.
    pub j0: u64,
    /// `V_{x̄(0)}(x(0))` in units of `Δ²`.
    #[serde(with = "ratio_text")]
    pub v0: Rational,
    pub final_state: QState,
}

impl RunRecord {
    /// Conservation against the initial state and the non-trivial budget
    /// `nontrivial ≤ V₀/(2Δ²)`.
    pub fn check_invariants(&self, x0: &QState) -> Result<()> {
        if self.final_state.sum_units() != x0.sum_units() {
            return Err(Error::Numerical(format!(
                "seed {}: sum changed from {} to {}",
                self.seed,
                x0.sum_units(),
                self.final_state.sum_units()
            )));
        }
        if Rational::from_integer(2 * self.nontrivial as i128) > self.v0 {
            return Err(Error::Numerical(format!(
                "seed {}: {} non-trivial averages exceed budget V0/2 = {}",
                self.seed,
                self.nontrivial,
                self.v0 / Rational::from_integer(2)
            )));
        }
        if let Some(t) = self.t_con {
            if t != self.nontrivial + self.trivial + self.noop {
                return Err(Error::Numerical(format!(
                    "seed {}: tallies do not add up to t_con={t}",
                    self.seed
                )));
            }
        }
        Ok(())
    }
}

/// Runs until `x ∈ W(x(0))` or `max_ticks`, seeding a fresh generator from `seed`.
pub fn run(
    alg: Algorithm,
    schedule: &GraphSchedule,
    x0: &QState,
    seed: u64,
    max_ticks: u64,
) -> Result<RunRecord> {
    run_observed(alg, schedule, x0, seed, max_ticks, |_, _| {})
}

/// [`run`] with a callback after every tick, seeing the event and the updated state.
pub fn run_observed<F>(
    alg: Algorithm,
    schedule: &GraphSchedule,
    x0: &QState,
    seed: u64,
    max_ticks: u64,
    mut observe: F,
) -> Result<RunRecord>
where
    F: FnMut(&TickEvent, &QState),
{
    if schedule.n() != x0.n() {
        return Err(Error::param(format!(
            "state has {} nodes, schedule has {}",
            x0.n(),
            schedule.n()
        )));
    }
    if alg == Algorithm::Af && schedule.is_constant() && !schedule.graph_at(0).is_connected() {
        return Err(Error::Disconnected);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = x0.clone();
    let target = ConsensusTarget::from_mean(x0.mean_units());
    let mut outside = x.units().iter().filter(|&&k| !target.contains(k)).count();
    let mut tallies = [0u64; 3];
    let mut t = 0u64;

    while outside > 0 && t < max_ticks {
        let g = schedule.graph_at(t);
        let i = rng.random_range(0..g.n());
        let partner = match alg {
            Algorithm::Af => af_partner(&g, i, &mut rng),
            Algorithm::As => as_partner(&g, i, &mut rng),
        };
        let before = partner.map(|j| (x.units()[i], x.units()[j]));
        let ev = finish(&mut x, t, i, partner);
        if let (Some(j), Some((bi, bj))) = (partner, before) {
            // only the two touched entries can change band membership
            let was = usize::from(!target.contains(bi)) + usize::from(!target.contains(bj));
            let now = usize::from(!target.contains(x.units()[i]))
                + usize::from(!target.contains(x.units()[j]));
            outside = outside + now - was;
        }
        tallies[ev.kind as usize] += 1;
        observe(&ev, &x);
        t += 1;
    }

    let converged = outside == 0;
    Ok(RunRecord {
        algorithm: alg,
        n: x0.n(),
        graph_desc: schedule.label().to_string(),
        seed,
        t_con: converged.then_some(t),
        timeout: !converged,
        noop: tallies[EventKind::Noop as usize],
        trivial: tallies[EventKind::Trivial as usize],
        nontrivial: tallies[EventKind::Nontrivial as usize],
        j0: x0.spread_j(),
        v0: x0.lyapunov_about_mean(),
        final_state: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantization::QuantizerSpec;

    fn st(units: &[i64]) -> QState {
        QState::new(units.to_vec(), QuantizerSpec::unit(4).unwrap()).unwrap()
    }

    #[test]
    fn delta_rule() {
        assert_eq!(compute_delta(0), 0);
        assert_eq!(compute_delta(1), 1);
        assert_eq!(compute_delta(2), 1);
        assert_eq!(compute_delta(3), 2);
        assert_eq!(compute_delta(10), 5);
        assert_eq!(compute_delta(11), 6);
    }

    #[test]
    fn delta_three_averages_and_swaps() {
        let mut x = st(&[5, 2]);
        let v_before = x.lyapunov_about_mean();
        let (delta, kind) = exchange(&mut x, 0, 1);
        assert_eq!((delta, kind), (2, EventKind::Nontrivial));
        assert_eq!(x.units(), &[3, 4]);
        assert_eq!(v_before - x.lyapunov_about_mean(), Rational::from_integer(4));
    }

    #[test]
    fn post_difference_parity() {
        for a in 0..=16i64 {
            for b in 0..=16i64 {
                let mut x = st(&[a, b]);
                exchange(&mut x, 0, 1);
                let post = (x.units()[0] - x.units()[1]).abs();
                let d = (a - b).abs();
                assert_eq!(post, d % 2, "a={a} b={b}");
                assert_eq!(x.sum_units(), a + b);
            }
        }
    }

    #[test]
    fn two_node_exact_average_is_forced() {
        let g = Graph::path(2).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut x = st(&[0, 2]);
            let ev = af_step(&mut x, &g, 0, &mut rng);
            assert_eq!(x.units(), &[1, 1]);
            assert_eq!(ev.kind, EventKind::Nontrivial);
        }
    }

    #[test]
    fn equal_values_are_noop() {
        let g = Graph::complete(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = st(&[7, 7, 7, 7]);
        let ev = af_step(&mut x, &g, 0, &mut rng);
        assert_eq!(ev.kind, EventKind::Noop);
        assert_eq!(x.units(), &[7, 7, 7, 7]);
    }

    #[test]
    fn adjacent_values_swap() {
        let g = Graph::path(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut x = st(&[0, 1]);
        let ev = af_step(&mut x, &g, 0, &mut rng);
        assert_eq!(x.units(), &[1, 0]);
        assert_eq!(ev.kind, EventKind::Trivial);
        assert_eq!(ev.delta_units, 1);
    }

    #[test]
    fn as_on_empty_graph_is_noop() {
        let g = Graph::empty(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut x = st(&[0, 4, 8, 12, 16]);
        for t in 0..100 {
            let ev = as_step(&mut x, &g, t, &mut rng);
            assert_eq!(ev.kind, EventKind::Noop);
            assert_eq!(ev.partner, None);
        }
        assert_eq!(x.units(), &[0, 4, 8, 12, 16]);
    }

    #[test]
    fn as_leaf_of_star_partner_rate() {
        // leaf degree 1, center degree 2: partner with prob 1/2
        let g = Graph::star(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let hits = (0..draws).filter(|_| as_partner(&g, 1, &mut rng) == Some(0)).count();
        let p_hat = hits as f64 / draws as f64;
        let se = (0.25f64 / draws as f64).sqrt();
        assert!((p_hat - 0.5).abs() <= 3.0 * se, "p_hat={p_hat}");
    }

    #[test]
    fn as_matches_af_on_regular_graph() {
        let g = Graph::cycle(6).unwrap();
        let draws = 60_000;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut af = [0usize; 6];
        let mut as_ = [0usize; 6];
        for _ in 0..draws {
            af[af_partner(&g, 2, &mut rng).unwrap()] += 1;
            if let Some(j) = as_partner(&g, 2, &mut rng) {
                as_[j] += 1;
            }
        }
        // regular graph: AS never declines, both rules are uniform on {1, 3}
        assert_eq!(as_.iter().sum::<usize>(), draws);
        for j in [1, 3] {
            let (a, b) = (af[j] as f64 / draws as f64, as_[j] as f64 / draws as f64);
            let se = (2.0 * 0.25 / draws as f64).sqrt();
            assert!((a - b).abs() <= 3.0 * se, "j={j}: {a} vs {b}");
        }
    }

    #[test]
    fn convergence_band() {
        assert!(has_converged(&st(&[1, 1, 1]), Rational::from_integer(1)));
        assert!(has_converged(&st(&[0, 1]), Rational::new(1, 2)));
        assert!(!has_converged(&st(&[0, 1, 1, 2]), Rational::from_integer(1)));
        assert!(has_converged(&st(&[2, 3, 3]), Rational::new(8, 3)));
        assert!(!has_converged(&st(&[2, 4, 2]), Rational::new(8, 3)));
    }

    #[test]
    fn run_from_converged_state() {
        let s = GraphSchedule::constant(Graph::cycle(4).unwrap());
        let rec = run(Algorithm::Af, &s, &st(&[3, 4, 3, 4]), 7, 1000).unwrap();
        assert_eq!(rec.t_con, Some(0));
        assert!(!rec.timeout);
    }

    #[test]
    fn run_two_nodes_one_tick() {
        let s = GraphSchedule::constant(Graph::path(2).unwrap());
        for seed in 0..50 {
            let rec = run(Algorithm::Af, &s, &st(&[0, 2]), seed, 100).unwrap();
            assert_eq!(rec.t_con, Some(1));
            assert_eq!(rec.nontrivial, 1);
        }
    }

    #[test]
    fn run_timeout_is_a_record() {
        let s = GraphSchedule::constant(Graph::empty(3));
        let rec = run(Algorithm::As, &s, &st(&[0, 1, 2]), 1, 500).unwrap();
        assert!(rec.timeout);
        assert_eq!(rec.t_con, None);
        assert_eq!(rec.noop, 500);
    }

    #[test]
    fn af_rejects_disconnected_fixed_graph() {
        let s = GraphSchedule::constant(Graph::empty(3));
        assert!(matches!(
            run(Algorithm::Af, &s, &st(&[0, 1, 2]), 1, 10),
            Err(Error::Disconnected)
        ));
        let s = GraphSchedule::constant(Graph::path(4).unwrap());
        assert!(run(Algorithm::Af, &s, &st(&[0, 1, 2]), 1, 10).is_err());
    }

    #[test]
    fn run_replays_and_respects_invariants() {
        let s = GraphSchedule::constant(Graph::lollipop(7, 5).unwrap());
        let x0 = st(&[0, 16, 3, 9, 9, 1, 12]);
        let a = run(Algorithm::Af, &s, &x0, 99, 1_000_000).unwrap();
        let b = run(Algorithm::Af, &s, &x0, 99, 1_000_000).unwrap();
        assert_eq!(a, b);
        assert!(!a.timeout);
        a.check_invariants(&x0).unwrap();
        assert!(has_converged(&a.final_state, x0.mean_units()));
    }

    #[test]
    fn band_stays_absorbing() {
        let g = Graph::star(5).unwrap();
        let x0 = st(&[0, 5, 9, 2, 4]);
        let xbar = x0.mean_units();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut x = x0.clone();
        let mut entered = false;
        for t in 0..20_000 {
            as_step(&mut x, &g, t, &mut rng);
            let inside = has_converged(&x, xbar);
            assert!(!entered || inside, "left W at tick {t}");
            entered |= inside;
        }
        assert!(entered);
    }

    #[test]
    fn record_json_round_trip() {
        let s = GraphSchedule::constant(Graph::cycle(5).unwrap()).with_label("cycle(5)");
        let x0 = st(&[0, 3, 5, 1, 1]);
        let rec = run(Algorithm::As, &s, &x0, 4, 100_000).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        let back: RunRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }
}
