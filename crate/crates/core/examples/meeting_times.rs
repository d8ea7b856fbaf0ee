//! Exact hitting and meeting times on the small named graphs.
//!
//! cargo run --release --example meeting_times

use qgossip::bounds::{bound_hsf_cubic, bound_prop1};
use qgossip::dynamics::Algorithm;
use qgossip::graph::{build_named, NamedKind};
use qgossip::randwalk::{
    hitting_matrix, meeting_time_exact, p_af, p_as, p_sf, product_chain, psi_convergence_exact,
    reversibility_check,
};

fn main() -> qgossip::Result<()> {
    println!(
        "{:<16} {:>8} {:>8} {:>9} {:>9} {:>9} {:>9} {:>6}",
        "graph", "H_sf", "4n³/27", "M_af", "2nH-n", "M_as", "E[T_Ψ]", "rev"
    );
    for n in [4, 6, 8] {
        let graphs = [
            ("path", build_named(NamedKind::Path, n, None)?),
            ("star", build_named(NamedKind::Star, n, None)?),
            ("cycle", build_named(NamedKind::Cycle, n, None)?),
            ("lollipop", build_named(NamedKind::Lollipop, n, Some((2 * n + 1) / 3))?),
        ];
        for (name, g) in graphs {
            let af = p_af(&g)?;
            let h = hitting_matrix(&p_sf(&g)?)?.max();
            let m_af = meeting_time_exact(&af)?;
            let m_as = meeting_time_exact(&p_as(&g)?)?;
            let (a, b) = m_af.argmax;
            let psi = psi_convergence_exact(&g, Algorithm::Af)?[(a, b)];
            println!(
                "{:<16} {h:>8.2} {:>8.2} {:>9.2} {:>9.2} {:>9.2} {psi:>9.2} {:>6}",
                format!("{name}({n})"),
                bound_hsf_cubic(n),
                m_af.max,
                bound_prop1(n, h),
                m_as.max,
                reversibility_check(&af, &g).reversible
            );
        }
    }

    let pc = product_chain(&p_af(&build_named(NamedKind::Path, 3, None)?)?)?;
    println!("\nproduct chain of path(3): {} states, max row-sum error {:.1e}", pc.q().nrows(), pc.max_row_sum_error());
    Ok(())
}
