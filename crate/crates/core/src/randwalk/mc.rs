//! Monte-Carlo meeting times of two tokens sharing the gossip clock.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{af_partner, as_partner};
use crate::error::{Error, Result};
use crate::schedule::GraphSchedule;
use crate::seeds::{sub_seed, trial_seed};

/// How a token leaves its node when that node is activated.
const GRAPH_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkRule {
    /// To a uniform neighbor.
    Af,
    /// To neighbor `j` with probability `1/max(|N_i|, |N_j|)`, else stays.
    As,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// Sample mean; capped trials contribute `max_ticks`, so the mean is a lower bound when `capped > 0`.
    pub mean: f64,
    pub se: f64,
    pub trials: usize,
    pub capped: usize,
}

/// Estimates the meeting time from `start` by simulating both tokens.
///
/// Each tick activates one uniform node; a token on the active node moves by
/// `rule` on `schedule.graph_at(t)`. The tokens meet when they share a node.
/// Generator schedules are reseeded per trial, so each trial sees its own
/// graph sequence.
pub fn meeting_time_mc(
    schedule: &GraphSchedule,
    rule: WalkRule,
    start: (usize, usize),
    trials: usize,
    seed: u64,
    max_ticks: u64,
) -> Result<McEstimate> {
    let n = schedule.n();
    if start.0 >= n || start.1 >= n {
        return Err(Error::param("start pair out of range"));
    }
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let samples: Vec<(u64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| one_trial(schedule, rule, start, trial_seed(seed, k), max_ticks))
        .collect();
    let capped = samples.iter().filter(|s| s.1).count();
    let m = trials as f64;
    let mean = samples.iter().map(|s| s.0 as f64).sum::<f64>() / m;
    let var = if trials > 1 {
        samples.iter().map(|s| (s.0 as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        se: (var / m).sqrt(),
        trials,
        capped,
    })
}

fn one_trial(schedule: &GraphSchedule, rule: WalkRule, start: (usize, usize), seed: u64, max_ticks: u64) -> (u64, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule = schedule.reseeded(sub_seed(seed, GRAPH_STREAM));
    let n = schedule.n();
    let (mut a, mut b) = start;
    let mut t = 0;
    while a != b {
        if t >= max_ticks {
            return (t, true);
        }
        let i = rng.random_range(0..n);
        if i == a || i == b {
            let g = schedule.graph_at(t);
            let next = match rule {
                WalkRule::Af => af_partner(&g, i, &mut rng),
                WalkRule::As => as_partner(&g, i, &mut rng),
            };
            if let Some(k) = next {
                if i == a {
                    a = k;
                } else {
                    b = k;
                }
            }
        }
        t += 1;
    }
    (t, false)
}

#[cfg(test)]
mod tests {
    use super::super::{meeting_time_exact, p_af, p_as};
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn agrees_with_exact_solve() {
        let g = Graph::lollipop(5, 3).unwrap();
        let s = GraphSchedule::constant(g.clone());
        for (rule, pm) in [(WalkRule::Af, p_af(&g).unwrap()), (WalkRule::As, p_as(&g).unwrap())] {
            let exact = meeting_time_exact(&pm).unwrap().per_pair[(0, 4)];
            let est = meeting_time_mc(&s, rule, (0, 4), 20_000, 7, 1_000_000).unwrap();
            assert_eq!(est.capped, 0);
            assert!((est.mean - exact).abs() < 4.0 * est.se, "{rule:?}: {} vs {exact}", est.mean);
        }
    }

    #[test]
    fn same_start_is_zero_and_seeded_runs_repeat() {
        let s = GraphSchedule::constant(Graph::path(4).unwrap());
        assert_eq!(meeting_time_mc(&s, WalkRule::Af, (2, 2), 10, 1, 100).unwrap().mean, 0.0);
        let a = meeting_time_mc(&s, WalkRule::Af, (0, 3), 50, 9, 10_000).unwrap();
        let b = meeting_time_mc(&s, WalkRule::Af, (0, 3), 50, 9, 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_is_reported() {
        let s = GraphSchedule::constant(Graph::empty(3));
        let est = meeting_time_mc(&s, WalkRule::As, (0, 1), 5, 0, 50).unwrap();
        assert_eq!(est.capped, 5);
        assert_eq!(est.mean, 50.0);
    }
}
