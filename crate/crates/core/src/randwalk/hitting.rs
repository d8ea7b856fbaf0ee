use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::TransitionMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;

const RESIDUAL_TOL: f64 = 1e-10;

/// Solves `A h = b` by LU and checks the relative residual.
pub(crate) fn solve_checked(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let lu = a.clone().lu();
    let h = lu
        .solve(&b)
        .ok_or_else(|| Error::Numerical("singular absorbing system".into()))?;
    let residual = (&a * &h - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    if !residual.is_finite() || residual > RESIDUAL_TOL {
        return Err(Error::Numerical(format!("relative residual {residual:e}")));
    }
    Ok(h)
}

/// Expected first-passage times into `target` from every state.
///
/// Solves `h_i = 0` on the target and `h_i = 1 + Σ_k p_ik h_k` elsewhere.
pub fn hitting_times_exact(pm: &TransitionMatrix, target: &[usize]) -> Result<Vec<f64>> {
    let n = pm.n();
    if target.is_empty() || target.iter().any(|&t| t >= n) {
        return Err(Error::param("target set must be non-empty and in range"));
    }
    let mut in_target = vec![false; n];
    for &t in target {
        in_target[t] = true;
    }

    // backward reachability: states with a positive-probability path into the target
    let mut reaches = in_target.clone();
    let mut queue: VecDeque<usize> = target.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for (u, r) in reaches.iter_mut().enumerate() {
            if !*r && pm.get(u, v) > 0.0 {
                *r = true;
                queue.push_back(u);
            }
        }
    }
    if let Some(u) = reaches.iter().position(|r| !r) {
        return Err(Error::UnboundedHittingTime(u));
    }

    let transient: Vec<usize> = (0..n).filter(|&i| !in_target[i]).collect();
    let mut h = vec![0.0; n];
    if transient.is_empty() {
        return Ok(h);
    }
    let m = transient.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (r, &i) in transient.iter().enumerate() {
        for (c, &j) in transient.iter().enumerate() {
            a[(r, c)] -= pm.get(i, j);
        }
    }
    let sol = solve_checked(a, DVector::from_element(m, 1.0))?;
    for (k, &i) in transient.iter().enumerate() {
        h[i] = sol[k];
    }
    Ok(h)
}

/// `H[(i, j)]`: expected time for a walk from `i` to first reach `j` (zero on the diagonal).
pub fn hitting_matrix(pm: &TransitionMatrix) -> Result<DMatrix<f64>> {
    let n = pm.n();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let h = hitting_times_exact(pm, &[j])?;
        for i in 0..n {
            out[(i, j)] = h[i];
        }
    }
    Ok(out)
}

/// `max_{i,j} H(i, j)`.
pub fn max_hitting_time(pm: &TransitionMatrix) -> Result<f64> {
    Ok(hitting_matrix(pm)?.max())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reversibility {
    pub reversible: bool,
    /// Candidate stationary vector `π_i ∝ |N_i|`, normalized to sum 1.
    pub stationary: Vec<f64>,
}

/// Checks `Pᵀπ = π` and detailed balance `π_i p_ij = π_j p_ji` (to `1e-12`)
/// for the degree-proportional vector of `g`.
pub fn reversibility_check(pm: &TransitionMatrix, g: &Graph) -> Reversibility {
    reversibility_against(pm, &degree_weights(g))
}

fn degree_weights(g: &Graph) -> Vec<f64> {
    let nmax = g.max_degree().max(1) as f64;
    (0..g.n()).map(|i| g.degree(i) as f64 / nmax).collect()
}

/// Same check against caller-supplied weights.
pub(crate) fn reversibility_against(pm: &TransitionMatrix, weights: &[f64]) -> Reversibility {
    let n = pm.n();
    let total: f64 = weights.iter().sum();
    let pi: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let tol = 1e-12;
    let stationary_ok = (0..n).all(|j| {
        let s: f64 = (0..n).map(|i| pi[i] * pm.get(i, j)).sum();
        (s - pi[j]).abs() <= tol
    });
    let balance_ok = (0..n)
        .all(|i| (0..n).all(|j| (pi[i] * pm.get(i, j) - pi[j] * pm.get(j, i)).abs() <= tol));
    Reversibility {
        reversible: stationary_ok && balance_ok,
        stationary: pi,
    }
}
