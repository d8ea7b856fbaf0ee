//! Diagonal mass ϑ_Θ(t) of two independent walks on a stretched path, with and
//! without absorption.
//!
//! cargo run --release --example diagonal_mass -- [n] [b]

use qgossip::bounds::t1;
use qgossip::graph::Graph;
use qgossip::harness::preset_scaled_schedule;
use qgossip::randwalk::{p_as, theta_trajectory, ChainKind};

fn main() -> qgossip::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3, |a| a.parse().expect("n"));
    let b: u64 = args.next().map_or(1, |a| a.parse().expect("b"));
    let s = preset_scaled_schedule(Graph::path(n)?, b)?;
    let horizon = t1(n, b);
    let free = theta_trajectory(&s, p_as, (0, n - 1), horizon, ChainKind::Independent, false)?;
    let held = theta_trajectory(&s, p_as, (0, n - 1), horizon, ChainKind::Independent, true)?;

    println!("path({n}), b={b}, t1={horizon}, threshold 1/(2n) = {:.4}", 1.0 / (2 * n) as f64);
    println!("{:>8} {:>10} {:>10}", "t", "free", "absorbed");
    let mut t = 1u64;
    while t <= horizon {
        println!("{t:>8} {:>10.6} {:>10.6}", free[t as usize], held[t as usize]);
        t *= 2;
    }
    println!("{horizon:>8} {:>10.6} {:>10.6}", free[horizon as usize], held[horizon as usize]);
    Ok(())
}
