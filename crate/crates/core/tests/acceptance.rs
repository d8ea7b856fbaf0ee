//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use qgossip::bounds::{bound_prop1, bound_prop2, bound_thm2, bound_thm6, t1};
use qgossip::dynamics::{af_partner, as_partner, run, run_observed, Algorithm, EventKind};
use qgossip::graph::{build_named, sample_connected_gnp, sample_gnp_with, Graph, NamedKind};
use qgossip::harness::{preset_lollipop_m0, preset_scaled_schedule, records_csv, run_experiment, ExperimentConfig};
use qgossip::quantization::{QState, QuantizerSpec, Rational};
use qgossip::randwalk::{
    hitting_matrix, meeting_time_exact, meeting_time_mc, meeting_time_schedule, p0, p_af, p_as, p_sf,
    psi_convergence_exact, theta_trajectory, ChainKind, ScheduleMeetingOptions, WalkRule,
};
use qgossip::schedule::GraphSchedule;
use qgossip::seeds::trial_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn family(max_n: usize) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for kind in [NamedKind::Path, NamedKind::Cycle, NamedKind::Star, NamedKind::Complete] {
            out.push((format!("{kind}({n})"), build_named(kind, n, None).unwrap()));
        }
        for m in 2..=n {
            out.push((format!("lollipop({n};{m})"), build_named(NamedKind::Lollipop, n, Some(m)).unwrap()));
        }
    }
    out
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn psi_config(alg: &str, graph: &str, trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::from_toml(&format!(
        "algorithm = \"{alg}\"\ntrials = {trials}\nseed = {seed}\n[graph]\n{graph}\n[initial]\nkind = \"psi\"\n"
    ))
    .unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_ratio = 0.0f64;
    let mut worst_cycle = 0.0f64;
    let mut graphs = 0;
    for (_, g) in family(7) {
        let n = g.n();
        let haf = hitting_matrix(&p_af(&g).unwrap()).unwrap();
        let hsf = hitting_matrix(&p_sf(&g).unwrap()).unwrap();
        let scale = haf.max();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let rel = (haf[(i, j)] - n as f64 * hsf[(i, j)]).abs() / (n as f64 * hsf[(i, j)]);
                    worst_ratio = worst_ratio.max(rel);
                }
                for k in 0..n {
                    let lhs = haf[(i, j)] + haf[(j, k)] + haf[(k, i)];
                    let rhs = haf[(i, k)] + haf[(k, j)] + haf[(j, i)];
                    worst_cycle = worst_cycle.max((lhs - rhs).abs() / scale);
                }
            }
        }
        graphs += 1;
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst_ratio <= 1e-9 && worst_cycle <= 1e-9 && elapsed < Duration::from_secs(60),
        format!(
            "{graphs} graphs; max rel |H_af - n H_sf| = {worst_ratio:.2e}; max cyclic gap/scale = {worst_cycle:.2e}; {:.2?}",
            elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut worst_name = String::new();
    let mut ok = true;
    for (name, g) in family(7) {
        let m = meeting_time_exact(&p_af(&g).unwrap()).unwrap().max;
        let h = hitting_matrix(&p_sf(&g).unwrap()).unwrap().max();
        let bound = bound_prop1(g.n(), h);
        ok &= m <= bound + 1e-6;
        if bound - m < worst {
            worst = bound - m;
            worst_name = format!("{name}: M={m:.4} bound={bound:.4}");
        }
    }
    Outcome::new(ok, format!("tightest case {worst_name}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut lines = Vec::new();
    let mut oracle_ok = true;
    for n in [4, 5, 6] {
        for (label, g) in [
            (format!("complete({n})"), Graph::complete(n).unwrap()),
            (format!("lollipop({n};{})", (2 * n + 1) / 3), preset_lollipop_m0(n).unwrap()),
        ] {
            let edges: Vec<String> = g.edges().map(|(i, j)| format!("[{i}, {j}]")).collect();
            let spec = format!("kind = \"edges\"\nn = {n}\nedges = [{}]", edges.join(", "));
            let r = run_experiment(&psi_config("AF", &spec, 10_000, 3000 + n as u64)).unwrap();
            let s = &r.summary;
            let m = meeting_time_exact(&p_af(&g).unwrap()).unwrap().per_pair[(0, n - 1)];
            let psi = psi_convergence_exact(&g, Algorithm::Af).unwrap()[(0, n - 1)];
            let hit = (s.mean - m).abs() <= 3.0 * s.se;
            oracle_ok &= (s.mean - psi).abs() <= 3.0 * s.se;
            ok &= hit && s.timeouts == 0;
            lines.push(format!(
                "{label}: MC {:.3}±{:.3} vs M {m:.3} ({}) vs exact Psi chain {psi:.3}",
                s.mean,
                s.se,
                if hit { "ok" } else { "off" }
            ));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    Outcome::new(
        ok,
        format!(
            "{}; Psi-chain oracle {}; {:.2?}",
            lines.join("; "),
            if oracle_ok { "agrees everywhere" } else { "DISAGREES" },
            elapsed
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spec = QuantizerSpec::unit(4).unwrap();
    let mut ok = true;
    let mut min_slack = f64::INFINITY;
    let mut cases = 0;
    for n in 3..=8 {
        for gi in 0..50u64 {
            let g = sample_connected_gnp(n, 0.5, &mut rng, 10_000).unwrap();
            let units: Vec<i64> = loop {
                let u: Vec<i64> = (0..n).map(|_| rng.random_range(0..=16)).collect();
                if u.iter().max() != u.iter().min() {
                    break u;
                }
            };
            let x0 = QState::new(units, spec).unwrap();
            let s = GraphSchedule::constant(g);
            let ts: Vec<f64> = (0..1000)
                .map(|k| {
                    let r = run(Algorithm::Af, &s, &x0, trial_seed(gi * 100 + n as u64, k), 10_000_000).unwrap();
                    r.t_con.expect("converged") as f64
                })
                .collect();
            let (mean, se) = mean_se(&ts);
            let bound = bound_thm2(n, x0.spread_j());
            ok &= mean - 3.0 * se <= bound;
            min_slack = min_slack.min(bound / (mean - 3.0 * se).max(1e-300));
            cases += 1;
        }
    }
    Outcome::new(ok, format!("{cases} graph/state cases; smallest bound/(mean-3SE) = {min_slack:.2}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ticks = 0u64;
    let mut runs = 0u64;
    let mut failures = Vec::new();
    while ticks < 1_000_000 {
        let n = rng.random_range(2..=12);
        let p = rng.random_range(0.2..1.0);
        let g = sample_gnp_with(n, p, &mut rng).unwrap();
        let alg = if rng.random_bool(0.5) { Algorithm::As } else { Algorithm::Af };
        let g = if alg == Algorithm::Af && !g.is_connected() { Graph::complete(n).unwrap() } else { g };
        let spec = QuantizerSpec::unit(8).unwrap();
        let x0 = QState::new((0..n).map(|_| rng.random_range(0..=256)).collect(), spec).unwrap();
        let sum0 = x0.sum_units();
        let mean0 = x0.mean_units();
        let v0 = x0.lyapunov(mean0);
        let mut v_prev = v0;
        let mut nontrivial = 0u64;
        let s = GraphSchedule::constant(g);
        let rec = run_observed(alg, &s, &x0, rng.random(), 20_000, |ev, x| {
            let v = x.lyapunov(mean0);
            if x.sum_units() != sum0 {
                failures.push(format!("sum changed at tick {}", ev.t));
            }
            if v > v_prev {
                failures.push(format!("V increased at tick {}", ev.t));
            }
            if ev.kind == EventKind::Nontrivial {
                nontrivial += 1;
                if v_prev - v < Rational::from_integer(2) {
                    failures.push(format!("non-trivial drop {} < 2 at tick {}", v_prev - v, ev.t));
                }
            }
            v_prev = v;
        })
        .unwrap();
        ticks += rec.nontrivial + rec.trivial + rec.noop;
        runs += 1;
        let j0 = x0.spread_j() as i128;
        if Rational::from_integer(2 * nontrivial as i128) > v0
            || v0 / Rational::from_integer(2) > Rational::new(n as i128 * j0 * j0, 8)
            || nontrivial != rec.nontrivial
        {
            failures.push(format!("budget chain broken in run {runs}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{ticks} ticks over {runs} runs; {} failure(s) {:?}", failures.len(), failures.first()),
    )
}

/// Binomial z-score of a frequency; a zero-variance target must be hit exactly.
fn z_score(freq: f64, p: f64, ticks: u64) -> f64 {
    let se = (p * (1.0 - p) / ticks as f64).sqrt();
    let gap = (freq - p).abs();
    if se > 0.0 {
        gap / se
    } else if gap < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut entries = 0;
    let mut ok = true;
    let ticks = 100_000u64;
    for _ in 0..3 {
        let n = 8;
        let mut g = sample_gnp_with(n, 0.5, &mut rng).unwrap();
        // cut two nodes loose
        let mut cut = Graph::empty(n);
        for (i, j) in g.edges() {
            if i != 2 && j != 2 && i != 5 && j != 5 {
                cut.add_edge(i, j).unwrap();
            }
        }
        g = cut;
        let pm = p_as(&g).unwrap();
        ok &= pm.is_symmetric(1e-12) && pm.is_doubly_stochastic(1e-12);
        let mut counts: HashMap<(usize, Option<usize>), u64> = HashMap::new();
        for _ in 0..ticks {
            let i = rng.random_range(0..n);
            *counts.entry((i, as_partner(&g, i, &mut rng))).or_default() += 1;
        }
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                let want = if i == j { continue } else { pm.get(i, j) };
                row += want;
                let got = *counts.get(&(i, Some(j))).unwrap_or(&0) as f64 / ticks as f64;
                let z = z_score(got, want, ticks);
                worst = worst.max(z);
                ok &= z <= 3.0;
                entries += 1;
            }
            // the active node keeping its value: 1/n minus its outgoing mass
            let want = (1.0 / n as f64 - row).max(0.0);
            let got = *counts.get(&(i, None)).unwrap_or(&0) as f64 / ticks as f64;
            let z = z_score(got, want, ticks);
            worst = worst.max(z);
            ok &= z <= 3.0;
            entries += 1;
        }
    }
    Outcome::new(ok, format!("{entries} entries over 3 graphs; max |z| = {worst:.2}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [2, 3] {
        for b in [1u64, 2] {
            let s = preset_scaled_schedule(Graph::path(n).unwrap(), b).unwrap();
            let horizon = 2 * t1(n, b);
            let free = theta_trajectory(&s, p_as, (0, n - 1), horizon, ChainKind::Independent, false).unwrap();
            let held = theta_trajectory(&s, p_as, (0, n - 1), horizon, ChainKind::Independent, true).unwrap();
            let t1v = t1(n, b) as usize;
            let min_after = free[t1v..].iter().copied().fold(f64::INFINITY, f64::min);
            let dominated = held.iter().zip(&free).all(|(h, f)| *h + 1e-12 >= *f);
            let pass = min_after >= 1.0 / (2 * n) as f64 && dominated;
            ok &= pass;
            notes.push(format!("n={n} b={b}: t1={t1v} min theta after t1 {min_after:.4} (>= {:.4})", 1.0 / (2 * n) as f64));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    Outcome::new(ok, format!("{}; {:.2?}", notes.join("; "), elapsed))
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [2, 3] {
        for b in [1u64, 2] {
            let s = preset_scaled_schedule(Graph::path(n).unwrap(), b).unwrap();
            let m = meeting_time_schedule(&s, p_as, ScheduleMeetingOptions::default()).unwrap();
            let bound = bound_prop2(n, b);
            ok &= m.max <= bound && m.truncation < 1e-9;
            notes.push(format!("M(path({n}),b={b}) = {:.3} <= {bound}", m.max));
        }
    }
    for n in [4, 5] {
        for b in [1u64, 2] {
            let spec = format!("kind = \"path\"\nn = {n}\nb = {b}");
            let r = run_experiment(&psi_config("AS", &spec, 1000, 800 + n as u64 * 10 + b)).unwrap();
            let bound = bound_thm6(n, b, 2);
            let lhs = r.summary.mean - 3.0 * r.summary.se;
            ok &= lhs <= bound && r.summary.timeouts == 0 && r.check().is_ok();
            notes.push(format!("AS path({n}) b={b}: {:.1}-3SE = {lhs:.1} <= {bound:.3e}", r.summary.mean));
        }
    }
    Outcome::new(ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let ticks = 100_000u64;
    for n in [4, 6] {
        for p in [0.5, 1.0] {
            let q = p0(n, p).unwrap();
            let s = GraphSchedule::generator(n, p, 900 + n as u64).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(90 + n as u64);
            let mut counts = vec![0u64; n * n];
            for t in 0..ticks {
                let g = s.graph_at(t);
                let i = rng.random_range(0..n);
                if let Some(j) = af_partner(&g, i, &mut rng) {
                    counts[i * n + j] += 1;
                }
            }
            let se = (q * (1.0 - q) / ticks as f64).sqrt();
            let worst = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| (counts[i * n + j] as f64 / ticks as f64 - q).abs() / se)
                .fold(0.0, f64::max);
            let est = meeting_time_mc(&s, WalkRule::Af, (0, n - 1), 10_000, 910 + n as u64, 10_000_000).unwrap();
            let want = 1.0 / (2.0 * q);
            let meet_ok = (est.mean - want).abs() <= 3.0 * est.se;
            ok &= worst <= 3.0 && meet_ok;
            notes.push(format!(
                "n={n} p={p}: edge |z|max {worst:.2}, M {:.2}±{:.2} vs {want:.2}",
                est.mean, est.se
            ));
        }
    }
    let s = GraphSchedule::generator(2, 1.0, 92).unwrap();
    let est = meeting_time_mc(&s, WalkRule::Af, (0, 1), 10_000, 93, 100).unwrap();
    let exact_one = est.mean == 1.0 && est.se == 0.0;
    ok &= exact_one;
    notes.push(format!("n=2 p=1: every trial meets at tick 1: {exact_one}"));
    Outcome::new(ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let fixed = run_experiment(&psi_config("AS", "kind = \"lollipop\"\nn = 7\nm = 5", 1000, 101)).unwrap();
    let scaled = run_experiment(&psi_config("AS", "kind = \"lollipop\"\nn = 7\nm = 5\nb = 3", 1000, 103)).unwrap();
    let (a, b) = (&fixed.summary, &scaled.summary);
    let diff = b.mean - 3.0 * a.mean;
    let tol = 3.0 * (b.se.powi(2) + 9.0 * a.se.powi(2)).sqrt();
    Outcome::new(
        diff.abs() <= tol && a.timeouts == 0 && b.timeouts == 0,
        format!("scaled {:.1}±{:.1} vs 3 x fixed {:.1}±{:.1}; |diff| {:.1} <= {tol:.1}", b.mean, b.se, 3.0 * a.mean, 3.0 * a.se, diff.abs()),
    )
}

fn criterion_11() -> Outcome {
    let cfg = ExperimentConfig::from_toml(
        "algorithm = \"AF\"\ntrials = 500\nseed = 11\n[graph]\nkind = \"gnp\"\nn = 7\np = 0.4\n[initial]\nkind = \"uniform-random\"\n",
    )
    .unwrap();
    let a = records_csv(&run_experiment(&cfg).unwrap()).unwrap();
    let b = records_csv(&run_experiment(&cfg).unwrap()).unwrap();
    let per_tick = psi_config("AS", "kind = \"gnp\"\nn = 6\np = 0.3\nper_tick = true", 300, 12);
    let c = records_csv(&run_experiment(&per_tick).unwrap()).unwrap();
    let d = records_csv(&run_experiment(&per_tick).unwrap()).unwrap();
    Outcome::new(a == b && c == d, format!("{} + {} CSV bytes identical across re-runs", a.len(), c.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("hitting-time identities", criterion_1),
        ("meeting time within 2nH_sf - n", criterion_2),
        ("E[T_Psi] equals the meeting time", criterion_3),
        ("AF convergence within the fixed-graph bound", criterion_4),
        ("conservation and Lyapunov fuzz", criterion_5),
        ("switching-walk matrix fidelity", criterion_6),
        ("diagonal mass of the product chain", criterion_7),
        ("switching-graph meeting and convergence bounds", criterion_8),
        ("random-graph edge rate and meeting time", criterion_9),
        ("time scaling of stretched schedules", criterion_10),
        ("byte-identical replay", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({:.1?}): {}",
            k + 1,
            if out.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
