use serde::{Deserialize, Serialize};

use crate::bounds::bound_prop1;
use crate::dynamics::Algorithm;
use crate::error::Result;
use crate::graph::Graph;
use crate::randwalk::{
    max_hitting_time, meeting_time_exact, meeting_time_mc, p_af, p_as, p_sf, psi_convergence_exact, WalkRule,
};
use crate::schedule::GraphSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub start: (usize, usize),
    pub mean: f64,
    pub se: f64,
    pub trials: usize,
    pub capped: usize,
}

/// Hitting and meeting times of one fixed graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkAnalysis {
    pub n: usize,
    pub h_sf_max: f64,
    pub h_af_max: f64,
    pub meeting_af_max: f64,
    pub meeting_af_argmax: (usize, usize),
    pub meeting_as_max: f64,
    /// `2n·H_sf − n`.
    pub bound_prop1: f64,
    /// Exact `E[T_con]` from `Ψ` with the low value at `psi_pair.0`, high at `psi_pair.1`.
    pub psi_pair: (usize, usize),
    pub psi_af: f64,
    pub psi_as: f64,
    pub mc_af: Option<McSummary>,
    pub mc_as: Option<McSummary>,
}

/// Exact walk quantities on a connected graph; with `mc = Some((trials, seed))`
/// the meeting time from the AF worst pair is also simulated under both rules.
pub fn walk_analysis(g: &Graph, psi_pair: (usize, usize), mc: Option<(usize, u64)>) -> Result<WalkAnalysis> {
    let af = p_af(g)?;
    let h_sf_max = max_hitting_time(&p_sf(g)?)?;
    let m_af = meeting_time_exact(&af)?;
    let m_as = meeting_time_exact(&p_as(g)?)?;
    let psi_af = psi_convergence_exact(g, Algorithm::Af)?[(psi_pair.0, psi_pair.1)];
    let psi_as = psi_convergence_exact(g, Algorithm::As)?[(psi_pair.0, psi_pair.1)];
    let (mc_af, mc_as) = match mc {
        None => (None, None),
        Some((trials, seed)) => {
            let s = GraphSchedule::constant(g.clone());
            let cap = (1000.0 * m_as.max.max(m_af.max)).ceil() as u64 + 1000;
            let sim = |rule| -> Result<McSummary> {
                let e = meeting_time_mc(&s, rule, m_af.argmax, trials, seed, cap)?;
                Ok(McSummary {
                    start: m_af.argmax,
                    mean: e.mean,
                    se: e.se,
                    trials: e.trials,
                    capped: e.capped,
                })
            };
            (Some(sim(WalkRule::Af)?), Some(sim(WalkRule::As)?))
        }
    };
    Ok(WalkAnalysis {
        n: g.n(),
        h_sf_max,
        h_af_max: max_hitting_time(&af)?,
        meeting_af_max: m_af.max,
        meeting_af_argmax: m_af.argmax,
        meeting_as_max: m_as.max,
        bound_prop1: bound_prop1(g.n(), h_sf_max),
        psi_pair,
        psi_af,
        psi_as,
        mc_af,
        mc_as,
    })
}
