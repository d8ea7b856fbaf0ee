//! AS gossip on a graph that only exists every b-th tick.
//!
//! cargo run --release --example as_switching -- [b]

use qgossip::bounds::{bound_prop2, bound_thm6};
use qgossip::dynamics::{run, Algorithm};
use qgossip::harness::{preset_lollipop_m0, preset_psi, preset_scaled_schedule, SummaryStats};
use qgossip::randwalk::{meeting_time_schedule, p_as, ScheduleMeetingOptions};
use qgossip::seeds::trial_seed;
use qgossip::{QState, QuantizerSpec};

fn main() -> qgossip::Result<()> {
    let b: u64 = std::env::args().nth(1).map_or(Ok(3), |a| a.parse()).expect("b");
    let n = 7;
    let x0 = QState::new(preset_psi(n, 0, n - 1)?, QuantizerSpec::unit(4)?)?;
    let trials = 2000;

    println!("{:>3} {:>10} {:>8} {:>12} {:>10} {:>10}", "b", "mean t_con", "se", "exact M", "M bound", "T bound");
    for b in [1, b] {
        let s = preset_scaled_schedule(preset_lollipop_m0(n)?, b)?;
        println!("  B-connected with B={b}: {}", s.check_periodic_connectivity(b, 4 * b)?);
        let records: Vec<_> = (0..trials)
            .map(|k| run(Algorithm::As, &s, &x0, trial_seed(b, k), 10_000_000))
            .collect::<qgossip::Result<_>>()?;
        let st = SummaryStats::from_records(&records);
        let m = meeting_time_schedule(&s, p_as, ScheduleMeetingOptions::default())?;
        println!(
            "{b:>3} {:>10.2} {:>8.2} {:>12.3} {:>10.3e} {:>10.3e}",
            st.mean,
            st.se,
            m.max,
            bound_prop2(n, b),
            bound_thm6(n, b, 2)
        );
    }
    Ok(())
}
