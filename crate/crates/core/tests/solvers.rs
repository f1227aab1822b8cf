use lamocs_core::instance::GeneratorConfig;
use lamocs_core::{
    brute_force, check_feasible, evaluate, generate_instance, scalarize, solve, solve_ffd, solve_ga, solve_pso,
    GaConfig, PlacementProblem, PsoConfig, ResourceVector, ScalarWeights, SolveResult, SolverConfig,
};

fn split_instance() -> PlacementProblem {
    PlacementProblem::with_equal_weights(
        vec![ResourceVector::new(10.0, 10.0); 2],
        vec![ResourceVector::new(5.0, 5.0); 4],
    )
    .unwrap()
}

fn population_solvers(p: &PlacementProblem, pop: usize, cycles: usize, seed: u64) -> Vec<(&'static str, SolveResult)> {
    vec![
        (
            "lamocs",
            solve(p, &SolverConfig::default().with_budget(pop, cycles).with_seed(seed)).unwrap(),
        ),
        (
            "ga",
            solve_ga(
                p,
                &GaConfig {
                    pop,
                    generations: cycles,
                    seed,
                    ..GaConfig::default()
                },
            )
            .unwrap(),
        ),
        (
            "pso",
            solve_pso(
                p,
                &PsoConfig {
                    pop,
                    iterations: cycles,
                    seed,
                    ..PsoConfig::default()
                },
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn split_instance_optimum() {
    let p = split_instance();
    let w = ScalarWeights::default();
    let exact = brute_force(&p, &w).unwrap();
    assert_eq!(exact.enumerated, 16);
    assert_eq!(exact.objectives.load_balance, 0.0);
    assert_eq!(exact.objectives.utilization, 1.0);
    assert_eq!(exact.objectives.active_fraction, 1.0);
    for (name, r) in population_solvers(&p, 20, 50, 5) {
        assert!(
            (r.best.scalar - exact.scalar).abs() < 1e-9,
            "{name}: {} vs {}",
            r.best.scalar,
            exact.scalar
        );
        assert_eq!(r.best.objectives.load_balance, 0.0, "{name}");
    }
    assert!(check_feasible(&p, &solve_ffd(&p)).0);
}

#[test]
fn history_monotone_and_best_reevaluates() {
    let w = ScalarWeights::default();
    for k in 0..30u64 {
        let m = 3 + (k % 5) as usize;
        let n = m + 2 + (k % 7) as usize;
        let p = generate_instance(&GeneratorConfig::new(m, n, 100 + k)).unwrap();
        for (name, r) in population_solvers(&p, 12, 15, k) {
            assert_eq!(r.history.len(), 15, "{name}");
            assert!(
                r.history.windows(2).all(|h| h[1] <= h[0]),
                "{name} seed {k}: {:?}",
                r.history
            );
            let again = scalarize(&evaluate(&p, &r.best.decoded), &w);
            assert_eq!(again, r.best.scalar, "{name}");
            assert_eq!(evaluate(&p, &r.best.decoded), r.best.objectives, "{name}");
            for nest in &r.archive {
                assert_eq!(evaluate(&p, &nest.decoded), nest.objectives, "{name}");
            }
        }
    }
}

#[test]
fn same_seed_same_result() {
    let p = generate_instance(&GeneratorConfig::new(5, 15, 3)).unwrap();
    let a = population_solvers(&p, 10, 10, 9);
    let b = population_solvers(&p, 10, 10, 9);
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        assert_eq!(x.best.decoded, y.best.decoded, "{name}");
        assert_eq!(x.history, y.history, "{name}");
    }
}

#[test]
fn single_server_is_trivial() {
    let p = PlacementProblem::with_equal_weights(
        vec![ResourceVector::new(10.0, 10.0)],
        vec![ResourceVector::new(2.0, 2.0); 3],
    )
    .unwrap();
    for (name, r) in population_solvers(&p, 5, 5, 1) {
        assert_eq!(r.best.decoded.to_one_based(), vec![1, 1, 1], "{name}");
        assert!(r.best.objectives.feasible);
    }
}
