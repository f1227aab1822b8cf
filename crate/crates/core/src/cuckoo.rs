//! Learning-automata guided multi-objective cuckoo search (LAMOCS).
//!
//! Nests carry continuous positions in `[1, m]^n` that decode to placements.
//! Each cycle every nest proposes a Lévy flight biased toward the current best
//! nest, the worst fraction `p_a` of nests is abandoned and regenerated (part
//! of them sampled from the per-VM learning automata), the automata are
//! rewarded with the best nest's servers and penalized with the worst's, and
//! the non-dominated archive is refreshed.

use std::time::Instant;

use rand::distr::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archive::DEFAULT_ARCHIVE_CAP;
use crate::automata::AutomatonBank;
use crate::error::{Error, Result};
use crate::instance::{Placement, PlacementProblem};
use crate::levy::LevyFlight;
use crate::objectives::ScalarWeights;
use crate::search::{
    argmax_scalar, argmin_scalar, placement_position, CycleTrace, Evaluator, Nest, SolveResult, Tracker,
};

/// Where automaton-sampled solutions replace uniform random ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaScope {
    /// Only nests regenerated after abandonment.
    Regenerated,
    /// Only the initial population.
    InitialPopulation,
    Both,
}

impl LaScope {
    fn regenerated(self) -> bool {
        matches!(self, LaScope::Regenerated | LaScope::Both)
    }

    fn initial(self) -> bool {
        matches!(self, LaScope::InitialPopulation | LaScope::Both)
    }
}

/// Which nests are abandoned each cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbandonRule {
    /// The highest-scalar nests.
    WorstRanked,
    /// Nests drawn uniformly at random.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub pop_size: usize,
    pub max_cycles: usize,
    /// Fraction of nests abandoned per cycle.
    pub p_a: f64,
    pub levy_beta: f64,
    /// Step scale; `None` means `0.01 * (m - 1)`.
    pub levy_scale: Option<f64>,
    pub seed: u64,
    pub weights: ScalarWeights,
    /// Share of newly created nests sampled from the automata.
    pub la_fraction: f64,
    pub la_scope: LaScope,
    pub reward_a: f64,
    pub penalty_b: f64,
    pub abandon: AbandonRule,
    pub archive_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            pop_size: 100,
            max_cycles: 500,
            p_a: 0.25,
            levy_beta: 1.5,
            levy_scale: None,
            seed: 0,
            weights: ScalarWeights::default(),
            la_fraction: 0.5,
            la_scope: LaScope::Both,
            reward_a: 0.5,
            penalty_b: 0.05,
            abandon: AbandonRule::WorstRanked,
            archive_cap: DEFAULT_ARCHIVE_CAP,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, pop_size: usize, max_cycles: usize) -> Self {
        self.pop_size = pop_size;
        self.max_cycles = max_cycles;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.pop_size < 2 {
            return bad("population size must be at least 2");
        }
        if self.max_cycles == 0 {
            return bad("at least one cycle is required");
        }
        if !(0.0..=1.0).contains(&self.p_a) {
            return bad("abandon probability must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.la_fraction) {
            return bad("automaton fraction must lie in [0, 1]");
        }
        if let Some(s) = self.levy_scale {
            if !(s.is_finite() && s >= 0.0) {
                return bad("levy step scale must be finite and non-negative");
            }
        }
        if self.archive_cap == 0 {
            return bad("archive capacity must be positive");
        }
        self.weights.validate()?;
        LevyFlight::new(self.levy_beta)?;
        AutomatonBank::new(1, 1, self.reward_a, self.penalty_b)?;
        Ok(())
    }

    fn step_scale(&self, m: usize) -> f64 {
        self.levy_scale.unwrap_or(0.01 * (m as f64 - 1.0))
    }
}

/// Runs LAMOCS.
pub fn solve(p: &PlacementProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_traced(p, cfg, |_| {})
}

/// Runs LAMOCS, reporting each finished cycle to `trace`.
pub fn solve_traced(
    p: &PlacementProblem,
    cfg: &SolverConfig,
    mut trace: impl FnMut(&CycleTrace),
) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let n = p.num_vms();
    let m = p.num_servers();
    let eval = Evaluator::new(p, cfg.weights);
    let mut tracker = Tracker::new(cfg.archive_cap);

    if m == 1 {
        let nest = eval.score(Placement::all_on_first(n), vec![1.0; n]);
        tracker.observe(&nest);
        tracker.archive(&nest);
        trace(&tracker.end_cycle());
        return Ok(tracker.finish(start.elapsed()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bank = AutomatonBank::new(n, m, cfg.reward_a, cfg.penalty_b)?;
    let levy = LevyFlight::new(cfg.levy_beta)?;
    let scale = cfg.step_scale(m);
    let coord = Uniform::new(0.5, m as f64 + 0.5).expect("m >= 2");

    // Drawn on [0.5, m + 0.5) so every server decodes with equal probability;
    // the evaluator clamps the edges back into [1, m].
    let random_nest = |rng: &mut ChaCha8Rng| eval.from_position((0..n).map(|_| coord.sample(rng)).collect());
    let automaton_nest = |bank: &AutomatonBank, rng: &mut ChaCha8Rng| {
        let sampled = bank.sample_placement(rng);
        let position = placement_position(&sampled);
        eval.from_position(position)
    };

    let initial_la = if cfg.la_scope.initial() {
        fraction_of(cfg.la_fraction, cfg.pop_size)
    } else {
        0
    };
    let mut nests: Vec<Nest> = (0..cfg.pop_size)
        .map(|k| {
            if k < initial_la {
                automaton_nest(&bank, &mut rng)
            } else {
                random_nest(&mut rng)
            }
        })
        .collect();
    nests.iter().for_each(|nest| tracker.observe(nest));

    let abandon_count = fraction_of(cfg.p_a, cfg.pop_size);
    let pick = Uniform::new(0, cfg.pop_size).expect("pop_size >= 2");

    for _ in 0..cfg.max_cycles {
        // Lévy flights around each nest, pulled toward the cycle's best.
        let leader = nests[argmin_scalar(&nests)].position.clone();
        for i in 0..cfg.pop_size {
            let proposal: Vec<f64> = nests[i]
                .position
                .iter()
                .zip(&leader)
                .map(|(&x, &b)| {
                    let pull: f64 = rng.random();
                    x + scale * levy.sample(&mut rng) + pull * (b - x)
                })
                .collect();
            let candidate = eval.from_position(proposal);
            tracker.observe(&candidate);
            let j = pick.sample(&mut rng);
            if candidate.scalar < nests[j].scalar {
                nests[j] = candidate;
            }
        }

        // Abandon and regenerate.
        let abandoned = abandoned_indices(&nests, abandon_count, cfg.abandon, &mut rng);
        let from_bank = if cfg.la_scope.regenerated() {
            fraction_of(cfg.la_fraction, abandoned.len())
        } else {
            0
        };
        for (k, &idx) in abandoned.iter().enumerate() {
            nests[idx] = if k < from_bank {
                automaton_nest(&bank, &mut rng)
            } else {
                random_nest(&mut rng)
            };
            tracker.observe(&nests[idx]);
        }

        // Reinforce the automata with the population's best and worst.
        let best = nests[argmin_scalar(&nests)].decoded.clone();
        let worst = nests[argmax_scalar(&nests)].decoded.clone();
        bank.update_from_population(&best, &worst)?;

        for nest in &nests {
            tracker.archive(nest);
        }
        trace(&tracker.end_cycle());
    }

    Ok(tracker.finish(start.elapsed()))
}

/// `ceil(fraction * count)`, guarding against float noise just above an
/// integer.
fn fraction_of(fraction: f64, count: usize) -> usize {
    let raw = fraction * count as f64;
    let rounded = raw.round();
    let k = if (raw - rounded).abs() < 1e-9 {
        rounded
    } else {
        raw.ceil()
    };
    (k as usize).min(count)
}

fn abandoned_indices(nests: &[Nest], count: usize, rule: AbandonRule, rng: &mut impl Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..nests.len()).collect();
    match rule {
        AbandonRule::WorstRanked => {
            idx.sort_by(|&a, &b| nests[b].scalar.total_cmp(&nests[a].scalar).then(a.cmp(&b)));
        }
        AbandonRule::Random => idx.shuffle(rng),
    }
    idx.truncate(count);
    idx
}
