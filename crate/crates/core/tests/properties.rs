//! Property tests over random graphs, states and seeds.

use proptest::prelude::*;
use qgossip::dynamics::{has_converged, run, run_observed, Algorithm, EventKind};
use qgossip::graph::{sample_gnp, Graph};
use qgossip::harness::{emit, run_experiment, ExperimentConfig, Format};
use qgossip::quantization::{QState, QuantizerSpec, Rational};
use qgossip::randwalk::{meeting_time_exact, p_af, p_as, product_chain, token_pair_chain};
use qgossip::schedule::GraphSchedule;

fn state(units: Vec<i64>) -> QState {
    QState::new(units, QuantizerSpec::unit(6).unwrap()).unwrap()
}

fn graph_and_state() -> impl Strategy<Value = (Graph, Vec<i64>, u64)> {
    (2usize..9, 0.1f64..1.0, any::<u64>(), any::<u64>()).prop_flat_map(|(n, p, gseed, seed)| {
        let g = sample_gnp(n, p, gseed).unwrap();
        (Just(g), proptest::collection::vec(0i64..=64, n), Just(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_conserve_and_descend((g, units, seed) in graph_and_state(), as_rule in any::<bool>()) {
        let alg = if as_rule { Algorithm::As } else { Algorithm::Af };
        let g = if alg == Algorithm::Af && !g.is_connected() { Graph::complete(g.n()).unwrap() } else { g };
        let x0 = state(units);
        let mean = x0.mean_units();
        let mut prev = x0.lyapunov(mean);
        let mut ok = true;
        let rec = run_observed(alg, &GraphSchedule::constant(g.clone()), &x0, seed, 200_000, |ev, x| {
            let v = x.lyapunov(mean);
            ok &= x.sum_units() == x0.sum_units();
            ok &= match ev.kind {
                EventKind::Nontrivial => prev - v >= Rational::from_integer(2),
                _ => v == prev,
            };
            prev = v;
        }).unwrap();
        prop_assert!(ok);
        rec.check_invariants(&x0).unwrap();
        if rec.t_con.is_some() {
            prop_assert!(has_converged(&rec.final_state, mean));
        } else {
            prop_assert!(alg == Algorithm::As && !g.is_connected());
        }
    }

    #[test]
    fn replay_is_exact((g, units, seed) in graph_and_state()) {
        let s = GraphSchedule::constant(Graph::union([&g, &Graph::path(g.n()).unwrap()]).unwrap());
        let x0 = state(units);
        let a = run(Algorithm::As, &s, &x0, seed, 100_000).unwrap();
        let b = run(Algorithm::As, &s, &x0, seed, 100_000).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn switching_walk_is_doubly_stochastic(n in 2usize..12, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = sample_gnp(n, p, seed).unwrap();
        let pm = p_as(&g).unwrap();
        prop_assert!(pm.is_symmetric(1e-12));
        prop_assert!(pm.is_doubly_stochastic(1e-12));
        if n <= 6 {
            prop_assert!(product_chain(&pm).unwrap().max_column_sum_error() < 1e-12);
        }
    }

    #[test]
    fn meeting_times_are_symmetric(n in 3usize..8, seed in any::<u64>()) {
        let g = Graph::union([&sample_gnp(n, 0.4, seed).unwrap(), &Graph::path(n).unwrap()]).unwrap();
        let m = meeting_time_exact(&p_af(&g).unwrap()).unwrap();
        for i in 0..n {
            prop_assert_eq!(m.per_pair[(i, i)], 0.0);
            for j in 0..n {
                prop_assert!((m.per_pair[(i, j)] - m.per_pair[(j, i)]).abs() < 1e-8 * m.max);
            }
        }
        let chain = token_pair_chain(&p_af(&g).unwrap()).unwrap();
        prop_assert!(chain.max_row_sum_error() < 1e-12);
    }
}

#[test]
fn trial_order_does_not_matter() {
    // records are keyed by trial seed; rerunning a subset reproduces the same records
    let text = |trials: usize| {
        format!(
            "algorithm = \"AF\"\ntrials = {trials}\nseed = 3\n[graph]\nkind = \"cycle\"\nn = 6\n[initial]\nkind = \"uniform-random\"\n"
        )
    };
    let big = run_experiment(&ExperimentConfig::from_toml(&text(40)).unwrap()).unwrap();
    let small = run_experiment(&ExperimentConfig::from_toml(&text(10)).unwrap()).unwrap();
    assert_eq!(&big.records[..10], &small.records[..]);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    emit(&big, Format::Json, &p).unwrap();
    assert_eq!(qgossip::harness::read_json(&p).unwrap(), big);
}
