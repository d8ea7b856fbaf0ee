//! Growth of the Ψ convergence time on lollipops L_n^{m0}, n = 4..12, with
//! least-squares slopes on log-log axes. Reported, not asserted.
//!
//! cargo run --release --example lollipop_growth

use qgossip::dynamics::Algorithm;
use qgossip::harness::preset_lollipop_m0;
use qgossip::randwalk::{meeting_time_exact, p_af, p_as, psi_convergence_exact};

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn main() -> qgossip::Result<()> {
    let mut ns = Vec::new();
    let mut cols: [Vec<f64>; 4] = Default::default();
    println!("{:>3} {:>4} {:>12} {:>12} {:>12} {:>12}", "n", "m0", "T_psi AF", "M_af", "T_psi AS", "M_as");
    for n in 4..=12 {
        let g = preset_lollipop_m0(n)?;
        let row = [
            psi_convergence_exact(&g, Algorithm::Af)?[(0, n - 1)],
            meeting_time_exact(&p_af(&g)?)?.per_pair[(0, n - 1)],
            psi_convergence_exact(&g, Algorithm::As)?[(0, n - 1)],
            meeting_time_exact(&p_as(&g)?)?.per_pair[(0, n - 1)],
        ];
        println!(
            "{n:>3} {:>4} {:>12.2} {:>12.2} {:>12.2} {:>12.2}",
            (2 * n + 1) / 3,
            row[0],
            row[1],
            row[2],
            row[3]
        );
        ns.push(n as f64);
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    println!(
        "log-log slope {:>12.3} {:>12.3} {:>12.3} {:>12.3}",
        slope(&ns, &cols[0]),
        slope(&ns, &cols[1]),
        slope(&ns, &cols[2]),
        slope(&ns, &cols[3])
    );
    Ok(())
}
