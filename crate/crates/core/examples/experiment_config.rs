//! Runs a TOML experiment and writes CSV and JSON results.
//!
//! cargo run --release --example experiment_config -- [config.toml]
//!
//! Without an argument the built-in config below is used. Output goes to
//! `$QGOSSIP_OUT_DIR` (default `out/`).

use std::path::PathBuf;

use qgossip::harness::{emit, run_experiment, ExperimentConfig, Format, OUT_DIR_ENV};

const BUILTIN: &str = r#"
algorithm = "AS"
trials = 2000
seed = 2024
outputs = ["t_con", "events", "bounds", "walks"]

[graph]
kind = "lollipop"
n = 8

[quantizer]
u_min = 0.0
u_max = 1.0
r = 4

[initial]
kind = "psi"
"#;

fn main() -> qgossip::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path.as_ref())?,
        None => ExperimentConfig::from_toml(BUILTIN)?,
    };
    let out = PathBuf::from(std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| "out".into()));
    let result = run_experiment(&cfg)?;

    let s = &result.summary;
    println!("{} trials: mean {:.2} ± {:.2}, timeouts {}", s.count, s.mean, s.se, s.timeouts);
    if let Some(w) = &result.walks {
        println!("exact E[T_con] from Ψ under AS: {:.2}", w.psi_as);
    }
    for b in &result.bounds {
        println!("{}: {:.3} <= {:.3e} ({})", b.report.name, b.measured, b.report.value, b.holds);
    }
    for w in &result.warnings {
        println!("warning: {w}");
    }
    for f in emit(&result, Format::Csv, &out.join("experiment.csv"))?
        .into_iter()
        .chain(emit(&result, Format::Json, &out.join("experiment.json"))?)
    {
        println!("wrote {}", f.display());
    }
    result.check()
}
