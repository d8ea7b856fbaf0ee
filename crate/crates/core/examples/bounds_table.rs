//! The closed-form bounds for a range of network sizes.
//!
//! cargo run --example bounds_table -- [b] [j]

use qgossip::bounds::{bound_hsf_cubic, bound_prop2, bound_thm2, bound_thm6, t1};

fn main() {
    let mut args = std::env::args().skip(1);
    let b: u64 = args.next().map_or(1, |a| a.parse().expect("b"));
    let j: u64 = args.next().map_or(2, |a| a.parse().expect("j"));
    println!("b={b} J={j}");
    println!("{:>3} {:>10} {:>12} {:>12} {:>12} {:>12}", "n", "4n³/27", "thm2", "t1", "prop2", "thm6");
    for n in 2..=12 {
        println!(
            "{n:>3} {:>10.2} {:>12.4e} {:>12} {:>12.4e} {:>12.4e}",
            bound_hsf_cubic(n),
            bound_thm2(n, j),
            t1(n, b),
            bound_prop2(n, b),
            bound_thm6(n, b, j)
        );
    }
}
