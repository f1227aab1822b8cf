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

/// Global-best particle swarm settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub pop: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    /// Velocity clamp; `None` means `0.5 * (m - 1)`.
    pub v_max: Option<f64>,
    pub seed: u64,
    pub weights: ScalarWeights,
    pub archive_cap: usize,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            pop: 100,
            iterations: 500,
            inertia: 0.7,
            c1: 1.5,
            c2: 1.5,
            v_max: None,
            seed: 0,
            weights: ScalarWeights::default(),
            archive_cap: DEFAULT_ARCHIVE_CAP,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop < 2 {
            return Err(Error::InvalidConfig("swarm size must be at least 2".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("at least one iteration is required".into()));
        }
        if ![self.inertia, self.c1, self.c2].iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidConfig("swarm coefficients must be finite".into()));
        }
        if let Some(v) = self.v_max {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(
                    "velocity clamp must be finite and non-negative".into(),
                ));
            }
        }
        if self.archive_cap == 0 {
            return Err(Error::InvalidConfig("archive capacity must be positive".into()));
        }
        self.weights.validate()
    }
}

pub fn solve_pso(p: &PlacementProblem, cfg: &PsoConfig) -> Result<SolveResult> {
    solve_pso_traced(p, cfg, |_| {})
}

pub fn solve_pso_traced(p: &PlacementProblem, cfg: &PsoConfig, trace: impl FnMut(&CycleTrace)) -> Result<SolveResult> {
    run(p, cfg, None, trace)
}

/// Swarm loop. `initial` overrides the random starting positions.
fn run(
    p: &PlacementProblem,
    cfg: &PsoConfig,
    initial: Option<Vec<Vec<f64>>>,
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
    let hi = m as f64;
    let v_max = cfg.v_max.unwrap_or(0.5 * (hi - 1.0));
    // Uniform over decoded servers once clamped; see the cuckoo search.
    let coord = Uniform::new(0.5, hi + 0.5).expect("m >= 2");

    let starts = initial.unwrap_or_else(|| {
        (0..cfg.pop)
            .map(|_| (0..n).map(|_| coord.sample(&mut rng)).collect())
            .collect()
    });
    let mut particles: Vec<Nest> = starts.into_iter().map(|x| eval.from_position(x)).collect();
    let mut velocity = vec![vec![0.0; n]; particles.len()];
    let mut pbest = particles.clone();
    particles.iter().for_each(|x| tracker.observe(x));
    let mut gbest = pbest[argmin_scalar(&pbest)].clone();

    for _ in 0..cfg.iterations {
        for (k, particle) in particles.iter_mut().enumerate() {
            let mut x = particle.position.clone();
            for i in 0..n {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = cfg.inertia * velocity[k][i]
                    + cfg.c1 * r1 * (pbest[k].position[i] - x[i])
                    + cfg.c2 * r2 * (gbest.position[i] - x[i]);
                let v = v.clamp(-v_max, v_max);
                velocity[k][i] = v;
                x[i] = (x[i] + v).clamp(1.0, hi);
            }
            *particle = eval.from_position(x);
            tracker.observe(particle);
            if particle.scalar < pbest[k].scalar {
                pbest[k] = particle.clone();
            }
        }
        let leader = argmin_scalar(&pbest);
        if pbest[leader].scalar < gbest.scalar {
            gbest = pbest[leader].clone();
        }
        for x in &particles {
            tracker.archive(x);
        }
        trace(&tracker.end_cycle());
    }

    Ok(tracker.finish(start.elapsed()))
}
