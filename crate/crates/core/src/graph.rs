//! Undirected simple graphs on nodes `0..n`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected graph without self-loops or parallel edges.
///
/// Neighbor lists are kept sorted, so two graphs with the same edge set
/// compare equal regardless of insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedKind {
    Path,
    Cycle,
    Star,
    Complete,
    Lollipop,
    Empty,
}

impl FromStr for NamedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "path" => Ok(NamedKind::Path),
            "cycle" => Ok(NamedKind::Cycle),
            "star" => Ok(NamedKind::Star),
            "complete" => Ok(NamedKind::Complete),
            "lollipop" => Ok(NamedKind::Lollipop),
            "empty" => Ok(NamedKind::Empty),
            other => Err(Error::param(format!("unknown graph kind `{other}`"))),
        }
    }
}

impl fmt::Display for NamedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NamedKind::Path => "path",
            NamedKind::Cycle => "cycle",
            NamedKind::Star => "star",
            NamedKind::Complete => "complete",
            NamedKind::Lollipop => "lollipop",
            NamedKind::Empty => "empty",
        };
        f.write_str(s)
    }
}

impl Graph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Inserts the undirected edge `{i, j}`. Re-inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::param(format!(
                "edge ({i},{j}) out of range for n={}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::param(format!("self-loop at node {i}")));
        }
        if let Err(pos) = self.adj[i].binary_search(&j) {
            self.adj[i].insert(pos, j);
            let pos = self.adj[j].binary_search(&i).unwrap_err();
            self.adj[j].insert(pos, i);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Edge-set union of graphs sharing one node count.
    pub fn union<'a, I>(graphs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Graph>,
    {
        let mut iter = graphs.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::param("union of an empty list"))?;
        let mut out = first.clone();
        for g in iter {
            if g.n != out.n {
                return Err(Error::param(format!(
                    "node count mismatch in union: {} vs {}",
                    out.n, g.n
                )));
            }
            for (i, j) in g.edges() {
                out.add_edge(i, j)?;
            }
        }
        Ok(out)
    }

    /// Writes the edge-list text format: `n` on the first line, then one `i j` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j) in self.edges() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    /// Parses the edge-list text format. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing node count line".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad node count `{header}`")))?;
        let mut g = Graph::empty(n);
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("expected `i j`, got `{line}`")));
            };
            let i = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad node `{a}`")))?;
            let j = b
                .parse()
                .map_err(|_| Error::Parse(format!("bad node `{b}`")))?;
            g.add_edge(i, j)
                .map_err(|e| Error::Parse(format!("line `{line}`: {e}")))?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        build_named(NamedKind::Path, n, None)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        build_named(NamedKind::Cycle, n, None)
    }

    pub fn star(n: usize) -> Result<Self> {
        build_named(NamedKind::Star, n, None)
    }

    pub fn complete(n: usize) -> Result<Self> {
        build_named(NamedKind::Complete, n, None)
    }

    pub fn lollipop(n: usize, m: usize) -> Result<Self> {
        build_named(NamedKind::Lollipop, n, Some(m))
    }
}

/// Builds a named graph.
///
/// The lollipop is a clique on `0..m` with a path `m-1, m, ..., n-1` hanging
/// off clique node `m-1`; node 0 sits in the clique away from the path and
/// node `n-1` is the far end. The star is centered at node 0. A cycle on
/// two nodes is the single edge.
pub fn build_named(kind: NamedKind, n: usize, m: Option<usize>) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!("{kind} needs n >= 2, got {n}")));
    }
    let mut g = Graph::empty(n);
    match kind {
        NamedKind::Empty => {}
        NamedKind::Path => {
            for i in 0..n - 1 {
                g.add_edge(i, i + 1)?;
            }
        }
        NamedKind::Cycle => {
            for i in 0..n {
                let j = (i + 1) % n;
                if i != j {
                    g.add_edge(i, j)?;
                }
            }
        }
        NamedKind::Star => {
            for i in 1..n {
                g.add_edge(0, i)?;
            }
        }
        NamedKind::Complete => {
            for i in 0..n {
                for j in i + 1..n {
                    g.add_edge(i, j)?;
                }
            }
        }
        NamedKind::Lollipop => {
            let m = m.ok_or_else(|| Error::param("lollipop needs a clique size m"))?;
            if m < 2 || m > n {
                return Err(Error::param(format!(
                    "lollipop clique size must satisfy 2 <= m <= n, got m={m}, n={n}"
                )));
            }
            for i in 0..m {
                for j in i + 1..m {
                    g.add_edge(i, j)?;
                }
            }
            for i in m - 1..n - 1 {
                g.add_edge(i, i + 1)?;
            }
        }
    }
    Ok(g)
}

/// Erdős–Rényi `G(n, p)` from a fresh seeded generator.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_gnp_with(n, p, &mut rng)
}

/// Erdős–Rényi `G(n, p)`: each unordered pair is an edge independently with probability `p`.
pub fn sample_gnp_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!("G(n,p) needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0,1]")));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            // one draw per pair, even at p = 0 or 1, so the stream layout is fixed
            if rng.random::<f64>() < p {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Rejection-samples a connected `G(n, p)`; gives up after `max_tries`.
pub fn sample_connected_gnp<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
    max_tries: usize,
) -> Result<Graph> {
    for _ in 0..max_tries {
        let g = sample_gnp_with(n, p, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Resource(format!(
        "no connected G({n},{p}) sample in {max_tries} tries"
    )))
}
