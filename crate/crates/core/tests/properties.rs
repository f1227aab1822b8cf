use lamocs_core::instance::check_instance;
use lamocs_core::objectives::{eval_resource_waste, server_loads};
use lamocs_core::{
    dominates, evaluate, generate_instance, scalarize, Automaton, GeneratorConfig, ObjectiveVector, Placement,
    PlacementProblem, ResourceVector, ScalarWeights,
};
use proptest::prelude::*;

fn problem_strategy() -> impl Strategy<Value = (PlacementProblem, Placement)> {
    (1usize..6, 1usize..10).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec((1.0f64..50.0, 1.0f64..50.0), m),
            prop::collection::vec((0.1f64..20.0, 0.1f64..20.0), n),
            prop::collection::vec(0..m, n),
            0.0f64..=1.0,
        )
            .prop_map(|(servers, vms, assign, alpha)| {
                let servers = servers.into_iter().map(|(c, m)| ResourceVector::new(c, m)).collect();
                let vms = vms.into_iter().map(|(c, m)| ResourceVector::new(c, m)).collect();
                let p = PlacementProblem::new(servers, vms, alpha, 1.0 - alpha).unwrap();
                (p, Placement::new(assign))
            })
    })
}

fn objective_strategy() -> impl Strategy<Value = ObjectiveVector> {
    (0.0f64..=1.0, 0.0f64..=0.5, 0.0f64..=1.0, any::<bool>()).prop_map(|(u, lb, a, f)| ObjectiveVector {
        utilization: u,
        load_balance: lb,
        active_fraction: a,
        feasible: f,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn automaton_updates_stay_on_simplex(
        m in prop::sample::select(vec![2usize, 5, 50]),
        ops in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>(), 0.001f64..0.999), 1..400),
    ) {
        let mut la = Automaton::uniform(m);
        for (reward, idx, step) in ops {
            let action = idx.index(m);
            if reward {
                la.reward(action, step).unwrap();
            } else {
                la.penalize(action, step).unwrap();
            }
            let sum: f64 = la.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            prop_assert!(la.probs().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn dominance_is_irreflexive_and_asymmetric(a in objective_strategy(), b in objective_strategy()) {
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
    }

    #[test]
    fn scalarize_is_monotone(o in objective_strategy(), d in 1e-6f64..0.1) {
        let w = ScalarWeights::default();
        let base = scalarize(&o, &w);
        let mut worse_u = o;
        worse_u.utilization -= d;
        let mut worse_lb = o;
        worse_lb.load_balance += d;
        let mut worse_a = o;
        worse_a.active_fraction += d;
        prop_assert!(scalarize(&worse_u, &w) > base);
        prop_assert!(scalarize(&worse_lb, &w) > base);
        prop_assert!(scalarize(&worse_a, &w) > base);
    }

    #[test]
    fn objectives_invariant_under_vm_permutation((p, s) in problem_strategy(), seed in any::<u64>()) {
        let n = p.num_vms();
        let mut order: Vec<usize> = (0..n).collect();
        // Deterministic shuffle from the seed.
        let mut x = seed;
        for i in (1..n).rev() {
            x = lamocs_core::seed::splitmix64(x);
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let vms = order.iter().map(|&i| p.vms()[i]).collect();
        let q = PlacementProblem::new(p.servers().to_vec(), vms, p.alpha(), p.beta()).unwrap();
        let t = Placement::new(order.iter().map(|&i| s.server_of(i)).collect());
        let (a, b) = (evaluate(&p, &s), evaluate(&q, &t));
        prop_assert_eq!(a.feasible, b.feasible);
        prop_assert!((a.utilization - b.utilization).abs() < 1e-12);
        prop_assert!((a.load_balance - b.load_balance).abs() < 1e-12);
        prop_assert_eq!(a.active_fraction, b.active_fraction);
    }

    #[test]
    fn objectives_in_range((p, s) in problem_strategy()) {
        let o = evaluate(&p, &s);
        prop_assert!(o.active_fraction > 0.0 && o.active_fraction <= 1.0);
        prop_assert!(o.load_balance >= 0.0);
        if o.feasible {
            prop_assert!(o.utilization > 0.0 && o.utilization <= 1.0 + 1e-9);
            prop_assert!(o.load_balance <= 0.5 + 1e-9);
        }
        let waste = eval_resource_waste(&server_loads(&p, &s)).unwrap();
        prop_assert!((waste - (1.0 - o.utilization)).abs() < 1e-12);
    }
}

#[test]
fn generator_invariants_over_many_seeds() {
    for seed in 0..1000u64 {
        let m = 2 + (seed % 19) as usize;
        let n = m + (seed % 81) as usize;
        let cfg = GeneratorConfig::new(m, n, seed);
        let p = generate_instance(&cfg).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!((p.num_servers(), p.num_vms()), (m, n));
        let check = check_instance(&p, cfg.demand_floor_ratio);
        assert!(check.passed(), "seed {seed}: {check:?}");
        assert!(check.cpu_fill <= 1.0 && check.mem_fill <= 1.0, "seed {seed}: {check:?}");
        for s in p.servers() {
            assert!((10.0..=30.0).contains(&s.cpu) && (16.0..=64.0).contains(&s.mem));
        }
    }
}

#[test]
fn generator_is_deterministic_and_round_trips() {
    let cfg = GeneratorConfig::new(20, 60, 7);
    let a = generate_instance(&cfg).unwrap();
    let b = generate_instance(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(PlacementProblem::from_json(&a.to_json()).unwrap(), a);
}
