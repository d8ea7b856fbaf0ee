//! AF on a fresh G(n, p) every tick: edge rate p0, meeting time 1/(2p0), and the bound.
//!
//! cargo run --release --example random_graph

use qgossip::bounds::bound_ar;
use qgossip::randwalk::{meeting_time_exact, meeting_time_mc, p0, p_ar, WalkRule};
use qgossip::GraphSchedule;

fn main() -> qgossip::Result<()> {
    println!(
        "{:>3} {:>5} {:>10} {:>10} {:>16} {:>10} {:>10}",
        "n", "p", "p0", "1/(2p0)", "MC meeting", "T exact", "T relaxed"
    );
    for n in [4, 6, 10] {
        for p in [0.2, 0.5, 1.0] {
            let q = p0(n, p)?;
            let exact = meeting_time_exact(&p_ar(n, p)?)?.max;
            let s = GraphSchedule::generator(n, p, 17)?;
            let mc = meeting_time_mc(&s, WalkRule::Af, (0, 1), 4000, 3, 10_000_000)?;
            let bound = bound_ar(n, p, 2)?;
            println!(
                "{n:>3} {p:>5} {q:>10.5} {exact:>10.2} {:>9.2} ± {:<4.2} {:>10.1} {:>10.1}",
                mc.mean, mc.se, bound.exact, bound.relaxed
            );
        }
    }
    Ok(())
}
