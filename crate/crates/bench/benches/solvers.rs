use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lamocs_bench::random_placement;
use lamocs_core::instance::GeneratorConfig;
use lamocs_core::{
    evaluate, generate_instance, repair, solve, solve_ffd, solve_ga, solve_pso, GaConfig, PsoConfig, SolverConfig,
};
use std::hint::black_box;

fn objectives(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    for n in [20, 60, 100] {
        let p = generate_instance(&GeneratorConfig::new(20, n, 1)).unwrap();
        let s = random_placement(n, 20, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| evaluate(&p, black_box(s)))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("repair");
    for n in [20, 60, 100] {
        let p = generate_instance(&GeneratorConfig::new(20, n, 1)).unwrap();
        let s = random_placement(n, 20, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| repair(&p, black_box(s)))
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let p = generate_instance(&GeneratorConfig::new(20, 50, 3)).unwrap();
    let (pop, cycles) = (30, 50);
    let mut g = c.benchmark_group("solve_n50");
    g.sample_size(10);
    g.bench_function("lamocs", |b| {
        b.iter(|| solve(&p, &SolverConfig::default().with_budget(pop, cycles)).unwrap())
    });
    g.bench_function("ga", |b| {
        b.iter(|| {
            solve_ga(
                &p,
                &GaConfig {
                    pop,
                    generations: cycles,
                    ..GaConfig::default()
                },
            )
            .unwrap()
        })
    });
    g.bench_function("pso", |b| {
        b.iter(|| {
            solve_pso(
                &p,
                &PsoConfig {
                    pop,
                    iterations: cycles,
                    ..PsoConfig::default()
                },
            )
            .unwrap()
        })
    });
    g.bench_function("ffd", |b| b.iter(|| solve_ffd(black_box(&p))));
    g.finish();
}

criterion_group!(benches, objectives, solvers);
criterion_main!(benches);
