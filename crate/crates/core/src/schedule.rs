//! Time-varying topologies.

use std::borrow::Cow;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::graph::{sample_gnp_with, Graph};

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleKind {
    /// The same graph at every tick.
    Constant(Graph),
    /// `graphs[t % graphs.len()]` at tick `t`.
    Periodic(Vec<Graph>),
    /// A fresh `G(n, p)` at every tick, drawn from stream `t` of a seeded generator.
    Generator { p: f64, seed: u64 },
}

/// The communication graph as a function of the tick index.
///
/// Tick `t` uses `graph_at(t)` to move the state from `x(t)` to `x(t+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSchedule {
    n: usize,
    kind: ScheduleKind,
    label: String,
}

impl GraphSchedule {
    pub fn constant(g: Graph) -> Self {
        GraphSchedule {
            n: g.n(),
            label: format!("constant(n={},m={})", g.n(), g.edge_count()),
            kind: ScheduleKind::Constant(g),
        }
    }

    pub fn periodic(graphs: Vec<Graph>) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::param("periodic schedule needs at least one graph"))?;
        let n = first.n();
        if graphs.iter().any(|g| g.n() != n) {
            return Err(Error::param("periodic schedule graphs differ in node count"));
        }
        Ok(GraphSchedule {
            n,
            label: format!("periodic(n={n},P={})", graphs.len()),
            kind: ScheduleKind::Periodic(graphs),
        })
    }

    pub fn generator(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("G(n,p) needs n >= 2, got {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("edge probability {p} outside [0,1]")));
        }
        Ok(GraphSchedule {
            n,
            label: format!("gnp(n={n},p={p})"),
            kind: ScheduleKind::Generator { p, seed },
        })
    }

    /// Replaces the human-readable description carried into run records.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same schedule with a new generator seed; other kinds are returned unchanged.
    pub fn reseeded(&self, seed: u64) -> Self {
        let mut out = self.clone();
        if let ScheduleKind::Generator { seed: s, .. } = &mut out.kind {
            *s = seed;
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Period of the schedule; `None` for generator schedules.
    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            ScheduleKind::Constant(_) => Some(1),
            ScheduleKind::Periodic(gs) => Some(gs.len()),
            ScheduleKind::Generator { .. } => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, ScheduleKind::Constant(_))
    }

    pub fn graph_at(&self, t: u64) -> Cow<'_, Graph> {
        match &self.kind {
            ScheduleKind::Constant(g) => Cow::Borrowed(g),
            ScheduleKind::Periodic(gs) => Cow::Borrowed(&gs[(t % gs.len() as u64) as usize]),
            ScheduleKind::Generator { p, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(t);
                Cow::Owned(sample_gnp_with(self.n, *p, &mut rng).expect("validated at construction"))
            }
        }
    }

    /// Union of the graphs over ticks `start..start+len`.
    pub fn window_union(&self, start: u64, len: u64) -> Graph {
        let mut out = Graph::empty(self.n);
        for t in start..start + len {
            for (i, j) in self.graph_at(t).edges() {
                out.add_edge(i, j).expect("same node count");
            }
        }
        out
    }

    /// True iff every window of `b` consecutive ticks starting in `0..=horizon-b`
    /// has a connected union. Periodic schedules check one period of window starts.
    pub fn check_periodic_connectivity(&self, b: u64, horizon: u64) -> Result<bool> {
        if b < 1 {
            return Err(Error::param("window length B must be >= 1"));
        }
        if horizon < b {
            return Err(Error::param(format!("horizon {horizon} shorter than B={b}")));
        }
        let last_start = horizon - b;
        let starts = match &self.kind {
            ScheduleKind::Constant(g) => return Ok(g.is_connected()),
            ScheduleKind::Periodic(gs) => last_start.min(gs.len() as u64 - 1),
            ScheduleKind::Generator { .. } => last_start,
        };
        Ok((0..=starts).all(|t| self.window_union(t, b).is_connected()))
    }
}
