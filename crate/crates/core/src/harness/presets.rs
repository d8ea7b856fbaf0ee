use crate::error::{Error, Result};
use crate::graph::{build_named, Graph, NamedKind};
use crate::schedule::GraphSchedule;

/// `Ψ` units: `0` at `low`, `2` at `high`, `1` elsewhere.
pub fn preset_psi(n: usize, low: usize, high: usize) -> Result<Vec<i64>> {
    if n < 3 {
        return Err(Error::param(format!("the Ψ pattern needs n >= 3, got {n}")));
    }
    if low >= n || high >= n || low == high {
        return Err(Error::param(format!("Ψ positions ({low}, {high}) invalid for n={n}")));
    }
    let mut u = vec![1; n];
    u[low] = 0;
    u[high] = 2;
    Ok(u)
}

/// Lollipop with clique size `m0 = ⌊(2n+1)/3⌋`.
pub fn preset_lollipop_m0(n: usize) -> Result<Graph> {
    if n < 4 {
        return Err(Error::param(format!("lollipop preset needs n >= 4, got {n}")));
    }
    build_named(NamedKind::Lollipop, n, Some((2 * n + 1) / 3))
}

/// `g` at ticks divisible by `b`, the empty graph otherwise.
pub fn preset_scaled_schedule(g: Graph, b: u64) -> Result<GraphSchedule> {
    if b < 1 {
        return Err(Error::param("b must be >= 1"));
    }
    if b == 1 {
        return Ok(GraphSchedule::constant(g));
    }
    let n = g.n();
    let mut graphs = vec![g];
    graphs.extend(std::iter::repeat_n(Graph::empty(n), b as usize - 1));
    GraphSchedule::periodic(graphs)
}
