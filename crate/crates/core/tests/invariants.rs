use std::path::Path;

use congest_core::algos::greedy_mis::{mis_members, replay_matches, GreedyMis, MisPhaseConfig};
use congest_core::algos::{
    ball_solution, run_named, AlgoParams, BallGrowConfig, BallGrowing, ProposeConfig, ProposeMatching, ALGORITHMS,
};
use congest_core::experiments::{run_experiment_with, run_serial, ExperimentSpec};
use congest_core::graph::{assign_ids, assign_ports, gen_gnp, PortGraph};
use congest_core::oracle::{is_maximal_independent_set, optimum, SizeGuard};
use congest_core::ratio::Ratio;
use congest_core::sim::run;
use congest_core::{Problem, SimConfig};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = PortGraph> {
    (1usize..=13, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, s)| gen_gnp(n, p, s).unwrap())
}

fn params(pairs: &[(&str, &str)]) -> AlgoParams {
    pairs.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect()
}

fn problem() -> impl Strategy<Value = Problem> {
    prop::sample::select(Problem::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_algorithm_outputs_a_valid_solution(g in graph(), seed in any::<u64>(), p in problem()) {
        let cfg = SimConfig::default().with_seed(seed);
        for a in ALGORITHMS {
            let ps = match a.name {
                "ball-growing" | "gather-all" => params(&[("problem", p.name())]),
                _ => params(&[]),
            };
            let r = run_named(a.name, &g, &ps, &cfg).unwrap();
            prop_assert!(!r.timed_out, "{} timed out", a.name);
            r.solution.check(&g).unwrap();
            prop_assert!(r.valid, "{} invalid", a.name);
        }
    }

    #[test]
    fn ball_growing_ratio_and_radius(g in graph(), p in problem(), eps in prop::sample::select(vec![(1u64, 4u64), (1, 2), (3, 4)])) {
        let eps = Ratio::new(eps.0, eps.1).unwrap();
        let bc = BallGrowConfig::new(p, eps).unwrap();
        let res = run(&g, |k, _| BallGrowing::new(k, bc.clone()), &SimConfig::default()).unwrap();
        let sol = ball_solution(p, &g, &res.outputs);
        sol.check(&g).unwrap();
        let opt = optimum(p, &g, SizeGuard::default()).unwrap() as f64;
        let (got, f) = (sol.size as f64, 1.0 + eps.to_f64());
        if p.is_covering() {
            prop_assert!(got <= f * opt + 1e-9, "{:?}: {} vs {}", p, got, opt);
        } else {
            prop_assert!(got * f + 1e-9 >= opt, "{:?}: {} vs {}", p, got, opt);
        }
        let base = ((g.n().max(2) as f64).ln() / f.ln()).ceil().max(1.0) as u32;
        let cap = bc.cap(g.n());
        if p == Problem::MaxIs {
            prop_assert_eq!(cap, base);
        }
        for o in &res.outputs {
            prop_assert!(o.radii.iter().all(|&r| r <= cap));
        }
    }

    #[test]
    fn greedy_mis_is_maximal_and_replays(g in graph(), seed in any::<u64>(), c in prop::sample::select(vec![1.0, 2.0, 100.0])) {
        let p = if g.n() < 2 { 1.0 } else { (2.0 * g.m() as f64 / (g.n() * (g.n() - 1)) as f64).max(0.05) };
        let mc = MisPhaseConfig::with_constant(g.n(), p, c);
        let res = run(&g, |k, s| GreedyMis::new(k, s, mc.clone()), &SimConfig::default().with_seed(seed)).unwrap();
        prop_assert!(is_maximal_independent_set(&g, &mis_members(&res.outputs)));
        prop_assert!(replay_matches(&g, &res.outputs));
    }

    #[test]
    fn propose_is_cheap(g in graph(), seed in any::<u64>(), alpha in 0.05f64..=1.0) {
        let pc = ProposeConfig::new(alpha);
        let res = run(&g, |k, s| ProposeMatching::new(k, s, pc.clone()), &SimConfig::default().with_seed(seed)).unwrap();
        prop_assert!(res.messages <= 3 * g.n() as u64, "{} messages on {} nodes", res.messages, g.n());
        prop_assert!(res.rounds <= 3);
    }

    #[test]
    fn runs_are_deterministic_and_relabelling_stays_valid(g in graph(), seed in any::<u64>(), shuffle in any::<u64>()) {
        let cfg = SimConfig::default().with_seed(seed);
        let ps = params(&[("problem", "mds")]);
        let a = run_named("ball-growing", &g, &ps, &cfg).unwrap();
        let b = run_named("ball-growing", &g, &ps, &cfg).unwrap();
        prop_assert_eq!(&a.solution, &b.solution);
        prop_assert_eq!((a.messages, a.rounds, a.bits), (b.messages, b.rounds, b.bits));
        let h = assign_ports(&assign_ids(&g, shuffle), shuffle ^ 1);
        let c = run_named("ball-growing", &h, &ps, &cfg).unwrap();
        prop_assert!(c.valid);
    }
}

#[test]
fn parallel_runner_matches_serial() {
    let spec = ExperimentSpec::from_toml(
        r#"
name = "mis"
algorithm = "greedy-mis"
seeds = [3, 1, 4, 1, 5, 9, 2, 6]
[generator]
kind = "gnp"
n = [16, 24]
p = 0.3
"#,
    );
    assert!(spec.is_err() || spec.as_ref().unwrap().validate().is_err());
    let spec = ExperimentSpec::from_toml(
        r#"
name = "mis"
algorithm = "greedy-mis"
seeds = [3, 1, 4, 5, 9, 2, 6]
[generator]
kind = "gnp"
n = [16, 24]
p = 0.3
"#,
    )
    .unwrap();
    let serial = run_serial(&spec, Path::new(".")).unwrap();
    for w in [1, 2, 5] {
        assert_eq!(run_experiment_with(&spec, Path::new("."), Some(w)).unwrap(), serial);
    }
    let order: Vec<(usize, u64)> = serial.iter().map(|r| (r.n, r.seed)).collect();
    let want: Vec<(usize, u64)> = [16, 24].iter().flat_map(|&n| [3, 1, 4, 5, 9, 2, 6].map(move |s| (n, s))).collect();
    assert_eq!(order, want);
}
