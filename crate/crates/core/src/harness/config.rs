use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::presets::{preset_lollipop_m0, preset_psi, preset_scaled_schedule};
use crate::error::{Error, Result};
use crate::graph::{build_named, sample_connected_gnp, Graph, NamedKind};
use crate::quantization::{QState, QuantizerSpec};
use crate::schedule::GraphSchedule;
use crate::seeds::sub_seed;

/// Stream ids under the master seed.
pub(crate) const GRAPH_STREAM: u64 = 1;
/// Stream ids under a trial seed.
pub(crate) const SCHEDULE_STREAM: u64 = 1;
pub(crate) const INITIAL_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigAlgorithm {
    #[serde(rename = "AF")]
    Af,
    #[serde(rename = "AS")]
    As,
    /// AF on a fresh `G(n, p)` every tick, compared with the random-graph bound.
    #[serde(rename = "AR-analysis")]
    ArAnalysis,
}

impl fmt::Display for ConfigAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigAlgorithm::Af => "AF",
            ConfigAlgorithm::As => "AS",
            ConfigAlgorithm::ArAnalysis => "AR-analysis",
        })
    }
}

impl FromStr for ConfigAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AF" => Ok(ConfigAlgorithm::Af),
            "AS" => Ok(ConfigAlgorithm::As),
            "AR" | "AR-ANALYSIS" => Ok(ConfigAlgorithm::ArAnalysis),
            other => Err(Error::param(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Topology {
    Path { n: usize },
    Cycle { n: usize },
    Star { n: usize },
    Complete { n: usize },
    Empty { n: usize },
    /// Clique size defaults to `⌊(2n+1)/3⌋`.
    Lollipop { n: usize, m: Option<usize> },
    /// One connected sample drawn from the master seed, or a fresh draw every tick.
    Gnp {
        n: usize,
        p: f64,
        #[serde(default)]
        per_tick: bool,
    },
    Edges { n: usize, edges: Vec<(usize, usize)> },
}

impl Topology {
    pub fn n(&self) -> usize {
        match self {
            Topology::Path { n }
            | Topology::Cycle { n }
            | Topology::Star { n }
            | Topology::Complete { n }
            | Topology::Empty { n }
            | Topology::Lollipop { n, .. }
            | Topology::Gnp { n, .. }
            | Topology::Edges { n, .. } => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(flatten)]
    pub topology: Topology,
    /// Stretch factor: the graph is present every `b`-th tick and empty otherwise.
    #[serde(default = "one")]
    pub b: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialSpec {
    /// Low value on `low` (default 0), high on `high` (default `n-1`).
    Psi { low: Option<usize>, high: Option<usize> },
    /// Units uniform on `0..=L`, optionally resampled until `J` equals `target_j`.
    UniformRandom { target_j: Option<u64> },
    Explicit { units: Vec<i64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    TCon,
    Events,
    Bounds,
    Walks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: ConfigAlgorithm,
    pub graph: GraphSpec,
    #[serde(default = "default_quantizer")]
    pub quantizer: QuantizerSpec,
    pub initial: InitialSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_ticks")]
    pub max_ticks: u64,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

fn default_quantizer() -> QuantizerSpec {
    QuantizerSpec::unit(4).expect("valid")
}

fn default_trials() -> usize {
    1000
}

fn default_max_ticks() -> u64 {
    10_000_000
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::TCon, OutputKind::Events, OutputKind::Bounds]
}

const CONNECTED_SAMPLE_TRIES: usize = 10_000;
const TARGET_J_TRIES: usize = 100_000;

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ExperimentConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.graph.topology.n()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::param("trials must be >= 1"));
        }
        if self.graph.b < 1 {
            return Err(Error::param("b must be >= 1"));
        }
        let per_tick = matches!(self.graph.topology, Topology::Gnp { per_tick: true, .. });
        if self.algorithm == ConfigAlgorithm::ArAnalysis && !per_tick {
            return Err(Error::param("AR-analysis needs graph kind gnp with per_tick = true"));
        }
        if per_tick && self.graph.b != 1 {
            return Err(Error::param("per-tick G(n,p) cannot be stretched"));
        }
        if let InitialSpec::Explicit { units } = &self.initial {
            if units.len() != self.n() {
                return Err(Error::param(format!(
                    "explicit state has {} entries for {} nodes",
                    units.len(),
                    self.n()
                )));
            }
        }
        Ok(())
    }

    /// The schedule shared by all trials. Per-tick generators are reseeded per trial.
    pub fn schedule(&self) -> Result<GraphSchedule> {
        let t = &self.graph.topology;
        let named = |kind, n, m| build_named(kind, n, m);
        let g = match t {
            Topology::Path { n } => named(NamedKind::Path, *n, None)?,
            Topology::Cycle { n } => named(NamedKind::Cycle, *n, None)?,
            Topology::Star { n } => named(NamedKind::Star, *n, None)?,
            Topology::Complete { n } => named(NamedKind::Complete, *n, None)?,
            Topology::Empty { n } => named(NamedKind::Empty, *n, None)?,
            Topology::Lollipop { n, m: Some(m) } => named(NamedKind::Lollipop, *n, Some(*m))?,
            Topology::Lollipop { n, m: None } => preset_lollipop_m0(*n)?,
            Topology::Gnp { n, p, per_tick: true } => {
                return GraphSchedule::generator(*n, *p, sub_seed(self.seed, GRAPH_STREAM));
            }
            Topology::Gnp { n, p, per_tick: false } => {
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(self.seed, GRAPH_STREAM));
                sample_connected_gnp(*n, *p, &mut rng, CONNECTED_SAMPLE_TRIES)?
            }
            Topology::Edges { n, edges } => Graph::from_edges(*n, edges.iter().copied())?,
        };
        let label = self.graph_label(&g);
        Ok(preset_scaled_schedule(g, self.graph.b)?.with_label(label))
    }

    fn graph_label(&self, g: &Graph) -> String {
        let base = match &self.graph.topology {
            Topology::Path { n } => format!("path({n})"),
            Topology::Cycle { n } => format!("cycle({n})"),
            Topology::Star { n } => format!("star({n})"),
            Topology::Complete { n } => format!("complete({n})"),
            Topology::Empty { n } => format!("empty({n})"),
            Topology::Lollipop { n, m } => {
                let m = m.unwrap_or((2 * n + 1) / 3);
                format!("lollipop({n};{m})")
            }
            Topology::Gnp { n, p, .. } => format!("gnp({n};{p};edges={})", g.edge_count()),
            Topology::Edges { n, .. } => format!("edges({n};{})", g.edge_count()),
        };
        if self.graph.b > 1 {
            format!("{base}/b={}", self.graph.b)
        } else {
            base
        }
    }

    /// Initial state of the trial with seed `trial_seed`.
    pub fn initial_state(&self, trial_seed: u64) -> Result<QState> {
        let n = self.n();
        let units = match &self.initial {
            InitialSpec::Psi { low, high } => preset_psi(n, low.unwrap_or(0), high.unwrap_or(n - 1))?,
            InitialSpec::Explicit { units } => units.clone(),
            InitialSpec::UniformRandom { target_j } => {
                let top = self.quantizer.levels() as i64;
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(trial_seed, INITIAL_STREAM));
                let mut draw = || -> Vec<i64> { (0..n).map(|_| rng.random_range(0..=top)).collect() };
                match target_j {
                    None => draw(),
                    Some(j) => {
                        if *j as i64 > top || (*j > 0 && n < 2) {
                            return Err(Error::param(format!("target J={j} is not reachable")));
                        }
                        (0..TARGET_J_TRIES)
                            .map(|_| draw())
                            .find(|u| (u.iter().max().unwrap() - u.iter().min().unwrap()) as u64 == *j)
                            .ok_or_else(|| Error::Resource(format!("no state with J={j} in {TARGET_J_TRIES} draws")))?
                    }
                }
            }
        };
        QState::new(units, self.quantizer)
    }
}
