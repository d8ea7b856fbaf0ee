//! AF gossip on a fixed lollipop graph from the Ψ state.
//!
//! cargo run --release --example af_fixed_graph -- [n] [trials]

use qgossip::bounds::{bound_thm2, nontrivial_budget};
use qgossip::dynamics::{run, run_observed, Algorithm};
use qgossip::harness::{preset_lollipop_m0, preset_psi, SummaryStats};
use qgossip::randwalk::{meeting_time_exact, p_af, psi_convergence_exact};
use qgossip::seeds::trial_seed;
use qgossip::{GraphSchedule, QState, QuantizerSpec};

fn main() -> qgossip::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(7), |a| a.parse()).expect("n");
    let trials: u64 = args.next().map_or(Ok(5000), |a| a.parse()).expect("trials");

    let g = preset_lollipop_m0(n)?;
    let x0 = QState::new(preset_psi(n, 0, n - 1)?, QuantizerSpec::unit(4)?)?;
    let schedule = GraphSchedule::constant(g.clone());

    // one trajectory, tick by tick
    let rec = run_observed(Algorithm::Af, &schedule, &x0, 1, 1_000_000, |ev, x| {
        if ev.delta_units > 0 {
            println!("t={:<4} {}<->{:<2} {:?}  {:?}", ev.t, ev.active, ev.partner.unwrap(), ev.kind, x.units());
        }
    })?;
    println!("converged at t={} after {} non-trivial averages\n", rec.t_con.unwrap(), rec.nontrivial);

    let records: Vec<_> = (0..trials)
        .map(|k| run(Algorithm::Af, &schedule, &x0, trial_seed(7, k), 10_000_000))
        .collect::<qgossip::Result<_>>()?;
    let s = SummaryStats::from_records(&records);
    let m = meeting_time_exact(&p_af(&g)?)?.per_pair[(0, n - 1)];
    let psi = psi_convergence_exact(&g, Algorithm::Af)?[(0, n - 1)];
    let budget = nontrivial_budget(&x0);

    println!("lollipop({n}) from Ψ, {trials} trials");
    println!("  mean t_con         {:.3} ± {:.3}", s.mean, s.se);
    println!("  exact Ψ chain      {psi:.3}");
    println!("  meeting time M     {m:.3}");
    println!("  bound              {:.1}", bound_thm2(n, x0.spread_j()));
    println!("  non-trivial budget {} (relaxed {})", budget.exact, budget.relaxed);
    Ok(())
}
