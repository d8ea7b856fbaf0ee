//! Declarative experiments: a TOML config names the algorithm, topology,
//! quantizer, initial state and trial count; [`run_experiment`] runs the
//! trials in parallel, summarizes them and compares the mean convergence
//! time with the matching closed-form bound.
//!
//! ```toml
//! algorithm = "AF"          # AF | AS | AR-analysis
//! trials = 1000
//! seed = 7
//!
//! [graph]
//! kind = "lollipop"         # path | cycle | star | complete | empty | lollipop | gnp | edges
//! n = 7
//!
//! [initial]
//! kind = "psi"              # psi | uniform-random | explicit
//! ```

mod config;
mod emit;
mod presets;
mod stats;
mod walks;

pub use config::{ConfigAlgorithm, ExperimentConfig, GraphSpec, InitialSpec, OutputKind, Topology};
pub use emit::{emit, fmt_float, read_json, records_csv, summary_csv, Format, RECORD_COLUMNS};
pub use presets::{preset_lollipop_m0, preset_psi, preset_scaled_schedule};
pub use stats::SummaryStats;
pub use walks::{walk_analysis, McSummary, WalkAnalysis};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_ar, bound_thm2, bound_thm6, BoundReport};
use crate::dynamics::{run, Algorithm, ConsensusTarget, RunRecord};
use crate::error::{Error, Result};
use crate::quantization::Rational;
use crate::schedule::ScheduleKind;
use crate::seeds::{sub_seed, trial_seed};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QGOSSIP_OUT_DIR";

/// A bound next to the measured quantity it constrains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub report: BoundReport,
    /// The measured side, already shifted down by `3·SE` where a mean is involved.
    pub measured: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub summary: SummaryStats,
    pub bounds: Vec<BoundCheck>,
    pub walks: Option<WalkAnalysis>,
    pub warnings: Vec<String>,
}

impl ExperimentResult {
    pub fn violations(&self) -> Vec<&BoundCheck> {
        self.bounds.iter().filter(|b| !b.holds).collect()
    }

    /// `Err(BoundViolation)` if any bound check failed.
    pub fn check(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            return Ok(());
        }
        let detail = v
            .iter()
            .map(|b| format!("{}: measured {} > {}", b.report.name, b.measured, b.report.value))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::BoundViolation { count: v.len(), detail })
    }
}

/// Runs every trial of `cfg`. Bound violations are reported in the result,
/// not as an error; see [`ExperimentResult::check`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let schedule = cfg.schedule()?;
    let n = schedule.n();
    let alg = match cfg.algorithm {
        ConfigAlgorithm::As => Algorithm::As,
        _ => Algorithm::Af,
    };
    let mut warnings = Vec::new();
    if alg == Algorithm::Af && !matches!(schedule.kind(), ScheduleKind::Generator { .. }) {
        if !schedule.is_constant() {
            warnings.push("AF on a switching schedule; the fixed-graph bound does not apply".into());
        } else if !schedule.graph_at(0).is_connected() {
            return Err(Error::Disconnected);
        }
    }
    if alg == Algorithm::As {
        match schedule.period() {
            Some(p) => {
                let b = cfg.graph.b;
                if !schedule.check_periodic_connectivity(b, b + p as u64)? {
                    warnings.push(format!("schedule is not periodically connected with B={b}"));
                }
            }
            None => warnings.push("no connectivity window for a per-tick random schedule".into()),
        }
    }

    let records = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|k| {
            let seed = trial_seed(cfg.seed, k);
            let x0 = cfg.initial_state(seed)?;
            let sched = schedule.reseeded(sub_seed(seed, config::SCHEDULE_STREAM));
            let rec = run(alg, &sched, &x0, seed, cfg.max_ticks)?;
            rec.check_invariants(&x0)?;
            Ok(rec)
        })
        .collect::<Result<Vec<RunRecord>>>()?;

    let summary = SummaryStats::from_records(&records);
    if summary.timeouts > 0 {
        warnings.push(format!("{} trial(s) hit max_ticks={}", summary.timeouts, cfg.max_ticks));
    }

    let mut bounds = Vec::new();
    if cfg.outputs.contains(&OutputKind::Bounds) && summary.count > 0 {
        let j = records.iter().map(|r| r.j0).max().unwrap_or(0);
        let measured = summary.mean - 3.0 * summary.se;
        let nf = n as f64;
        let jf = j as f64;
        let bound = match (cfg.algorithm, schedule.kind()) {
            (ConfigAlgorithm::ArAnalysis, _) | (ConfigAlgorithm::Af, ScheduleKind::Generator { .. }) => {
                let p = match &cfg.graph.topology {
                    Topology::Gnp { p, .. } => *p,
                    _ => unreachable!("generator schedules come from gnp"),
                };
                let ar = bound_ar(n, p, j)?;
                Some(BoundReport::new(
                    "ar_exact",
                    &[("n", nf), ("p", p), ("j", jf), ("relaxed", ar.relaxed), ("relaxed_sound", ar.relaxed_sound)],
                    ar.exact,
                    "random graphs: E[T_con] <= N J^2 / (16 p0)",
                ))
            }
            (ConfigAlgorithm::Af, ScheduleKind::Constant(_)) => Some(BoundReport::new(
                "thm2",
                &[("n", nf), ("j", jf)],
                bound_thm2(n, j),
                "fixed graph: E[T_con] <= N^2 J^2/8 (8/27 N^3 - 1)",
            )),
            (ConfigAlgorithm::As, ScheduleKind::Generator { .. }) | (ConfigAlgorithm::Af, _) => None,
            (ConfigAlgorithm::As, _) => Some(BoundReport::new(
                "thm6",
                &[("n", nf), ("b", cfg.graph.b as f64), ("j", jf)],
                bound_thm6(n, cfg.graph.b, j),
                "switching graph: E[T_con] <= B J^2 N^2 (16 N^7 + 1) / 2",
            )),
        };
        if let Some(report) = bound {
            bounds.push(BoundCheck {
                holds: measured <= report.value,
                measured,
                report,
            });
        }
        if summary.timeouts == 0 && summary.count > 1 {
            bounds.push(markov_tail(&records, summary.mean));
        }
    }

    let walks = if cfg.outputs.contains(&OutputKind::Walks) {
        match schedule.kind() {
            ScheduleKind::Constant(g) if g.is_connected() => {
                let pair = match &cfg.initial {
                    InitialSpec::Psi { low, high } => (low.unwrap_or(0), high.unwrap_or(n - 1)),
                    _ => (0, n - 1),
                };
                Some(walk_analysis(g, pair, None)?)
            }
            _ => {
                warnings.push("walk analysis needs a connected fixed graph; skipped".into());
                None
            }
        }
    } else {
        None
    };

    Ok(ExperimentResult {
        records,
        summary,
        bounds,
        walks,
        warnings,
    })
}

/// Markov's inequality: `P(T > 2·E[T]) <= 1/2`, checked with `3·SE` slack on the fraction.
fn markov_tail(records: &[RunRecord], mean: f64) -> BoundCheck {
    let m = records.len() as f64;
    let f = records.iter().filter(|r| r.t_con.is_some_and(|t| t as f64 > 2.0 * mean)).count() as f64 / m;
    let limit = 0.5 + 3.0 * (f * (1.0 - f) / m).sqrt();
    BoundCheck {
        report: BoundReport::new("markov_tail", &[("trials", m)], limit, "P(T > 2E[T]) <= 1/2"),
        measured: f,
        holds: f <= limit,
    }
}

/// Record checks that need no initial state: tallies, non-trivial budget and,
/// for converged runs, that the final state sits in the band of its own mean
/// (the mean is conserved, so that band is the initial one).
pub(crate) fn recheck_record(r: &RunRecord) -> Result<()> {
    let fail = |what: &str| Err(Error::Numerical(format!("record seed {}: {what}", r.seed)));
    if r.timeout == r.t_con.is_some() {
        return fail("timeout flag disagrees with t_con");
    }
    if let Some(t) = r.t_con {
        if t != r.nontrivial + r.trivial + r.noop {
            return fail("event tallies do not add up to t_con");
        }
        let target = ConsensusTarget::from_mean(r.final_state.mean_units());
        if !r.final_state.units().iter().all(|&k| target.contains(k)) {
            return fail("final state is outside the consensus band");
        }
    }
    if Rational::from_integer(2 * r.nontrivial as i128) > r.v0 {
        return fail("non-trivial count exceeds V0/2");
    }
    Ok(())
}
