use std::time::Instant;

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archive::DEFAULT_ARCHIVE_CAP;
use crate::error::{Error, Result};
use crate::instance::{Placement, PlacementProblem};
use crate::objectives::ScalarWeights;
use crate::search::{argmin_scalar, CycleTrace, Evaluator, Nest, SolveResult, Tracker};

/// Genetic algorithm settings. Operators: binary tournament selection,
/// single-point crossover, per-gene uniform-reset mutation, one elite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub pop: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
    pub weights: ScalarWeights,
    pub archive_cap: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            pop: 100,
            generations: 500,
            crossover_rate: 0.7,
            mutation_rate: 0.05,
            seed: 0,
            weights: ScalarWeights::default(),
            archive_cap: DEFAULT_ARCHIVE_CAP,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop < 2 {
            return Err(Error::InvalidConfig("population size must be at least 2".into()));
        }
        if self.generations == 0 {
            return Err(Error::InvalidConfig("at least one generation is required".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidConfig(
                "crossover and mutation rates must lie in [0, 1]".into(),
            ));
        }
        if self.archive_cap == 0 {
            return Err(Error::InvalidConfig("archive capacity must be positive".into()));
        }
        self.weights.validate()
    }
}

pub fn solve_ga(p: &PlacementProblem, cfg: &GaConfig) -> Result<SolveResult> {
    solve_ga_traced(p, cfg, |_| {})
}

pub fn solve_ga_traced(
    p: &PlacementProblem,
    cfg: &GaConfig,
    mut trace: impl FnMut(&CycleTrace),
) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let n = p.num_vms();
    let m = p.num_servers();
    let eval = Evaluator::new(p, cfg.weights);
    let mut tracker = Tracker::new(cfg.archive_cap);

    if m == 1 {
        let nest = eval.from_placement(Placement::all_on_first(n));
        tracker.observe(&nest);
        tracker.archive(&nest);
        trace(&tracker.end_cycle());
        return Ok(tracker.finish(start.elapsed()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let server = Uniform::new(0, m).expect("m >= 1");
    let member = Uniform::new(0, cfg.pop).expect("pop >= 2");

    let mut pop: Vec<Nest> = (0..cfg.pop)
        .map(|_| eval.from_placement(Placement::new((0..n).map(|_| server.sample(&mut rng)).collect())))
        .collect();
    pop.iter().for_each(|c| tracker.observe(c));

    for _ in 0..cfg.generations {
        let tournament = |rng: &mut ChaCha8Rng| {
            let a = member.sample(rng);
            let b = member.sample(rng);
            if pop[b].scalar < pop[a].scalar {
                b
            } else {
                a
            }
        };
        let mut next: Vec<Nest> = Vec::with_capacity(cfg.pop);
        next.push(pop[argmin_scalar(&pop)].clone());
        while next.len() < cfg.pop {
            let mut c1 = pop[tournament(&mut rng)].decoded.clone();
            let mut c2 = pop[tournament(&mut rng)].decoded.clone();
            if n > 1 && rng.random::<f64>() < cfg.crossover_rate {
                let cut = rng.random_range(1..n);
                for i in cut..n {
                    let (g1, g2) = (c1.server_of(i), c2.server_of(i));
                    c1.set(i, g2);
                    c2.set(i, g1);
                }
            }
            for child in [c1, c2] {
                if next.len() == cfg.pop {
                    break;
                }
                let mut child = child;
                for i in 0..n {
                    if rng.random::<f64>() < cfg.mutation_rate {
                        child.set(i, server.sample(&mut rng));
                    }
                }
                let nest = eval.from_placement(child);
                tracker.observe(&nest);
                next.push(nest);
            }
        }
        pop = next;
        for c in &pop {
            tracker.archive(c);
        }
        trace(&tracker.end_cycle());
    }

    Ok(tracker.finish(start.elapsed()))
}
