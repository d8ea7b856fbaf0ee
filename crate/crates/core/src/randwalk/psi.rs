//! Exact convergence time of the gossip dynamics from a `Ψ` state.
//!
//! A `Ψ` state has one node at `c − 1`, one at `c + 1` and the rest at `c`.
//! Every exchange between a `c` node and the low (high) node is a swap that
//! moves the low (high) value along the edge; the exchange between the two
//! odd nodes ends the run. The dynamics therefore reduce to a chain on the
//! ordered pair (low node, high node), absorbed on contact.

use nalgebra::{DMatrix, DVector};

use super::hitting::solve_checked;
use super::MAX_PRODUCT_NODES;
use crate::dynamics::Algorithm;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `E[T_con]` from the `Ψ` state with the low value on `a` and the high value
/// on `b`, for every `a ≠ b` (zero on the diagonal).
pub fn psi_convergence_exact(g: &Graph, alg: Algorithm) -> Result<DMatrix<f64>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::param("need n >= 2"));
    }
    if n > MAX_PRODUCT_NODES {
        return Err(Error::Resource(format!(
            "pair chain on {n} nodes exceeds the {MAX_PRODUCT_NODES}-node limit"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    // probability that one tick activates i and pairs it with j
    let w = |i: usize, j: usize| -> f64 {
        if !g.has_edge(i, j) {
            return 0.0;
        }
        let d = match alg {
            Algorithm::Af => g.degree(i),
            Algorithm::As => g.degree(i).max(g.degree(j)),
        };
        1.0 / (n * d) as f64
    };
    let edge = |i: usize, j: usize| w(i, j) + w(j, i);

    let row_of = |a: usize, b: usize| a * (n - 1) + if b > a { b - 1 } else { b };
    let m = n * (n - 1);
    let mut system = DMatrix::<f64>::identity(m, m);
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            let r = row_of(a, b);
            let mut leave = edge(a, b);
            for &k in g.neighbors(a).iter().filter(|&&k| k != b) {
                let p = edge(a, k);
                system[(r, row_of(k, b))] -= p;
                leave += p;
            }
            for &k in g.neighbors(b).iter().filter(|&&k| k != a) {
                let p = edge(b, k);
                system[(r, row_of(a, k))] -= p;
                leave += p;
            }
            system[(r, r)] -= 1.0 - leave;
        }
    }
    let sol = solve_checked(system, DVector::from_element(m, 1.0))?;
    let mut out = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            out[(a, b)] = sol[row_of(a, b)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::run;
    use crate::quantization::{QState, QuantizerSpec};
    use crate::schedule::GraphSchedule;
    use crate::seeds::trial_seed;

    #[test]
    fn complete_graph_needs_the_one_edge() {
        for n in 3..9 {
            let t = psi_convergence_exact(&Graph::complete(n).unwrap(), Algorithm::Af).unwrap();
            assert!((t.max() - (n * (n - 1)) as f64 / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn matches_simulated_dynamics() {
        let g = Graph::lollipop(5, 3).unwrap();
        let s = GraphSchedule::constant(g.clone());
        for alg in [Algorithm::Af, Algorithm::As] {
            let exact = psi_convergence_exact(&g, alg).unwrap()[(0, 4)];
            let x0 = QState::new(vec![0, 1, 1, 1, 2], QuantizerSpec::unit(2).unwrap()).unwrap();
            let trials = 20_000;
            let ts: Vec<f64> = (0..trials)
                .map(|k| run(alg, &s, &x0, trial_seed(11, k), 1_000_000).unwrap().t_con.unwrap() as f64)
                .collect();
            let mean = ts.iter().sum::<f64>() / trials as f64;
            let se = (ts.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0)).sqrt()
                / (trials as f64).sqrt();
            assert!((mean - exact).abs() < 4.0 * se, "{alg}: {mean} vs {exact}");
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(psi_convergence_exact(&g, Algorithm::As), Err(Error::Disconnected)));
    }
}
