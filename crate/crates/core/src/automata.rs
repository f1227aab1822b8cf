//! Linear reward-penalty learning automata, one per VM, whose actions are the
//! servers the VM may be placed on.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Placement;

/// Drift in the probability sum tolerated before renormalizing.
const RENORMALIZE_TOL: f64 = 1e-12;

/// A probability vector over `M` actions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Automaton {
    probs: Vec<f64>,
}

impl Automaton {
    /// All actions equally likely.
    pub fn uniform(actions: usize) -> Self {
        assert!(actions > 0, "an automaton needs at least one action");
        Self {
            probs: vec![1.0 / actions as f64; actions],
        }
    }

    /// Builds an automaton from explicit probabilities, which must form a
    /// distribution to within 1e-9.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidConfig("an automaton needs at least one action".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(
                "automaton probabilities must form a distribution".into(),
            ));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_actions(&self) -> usize {
        self.probs.len()
    }

    fn check_action(&self, action: usize) -> Result<()> {
        if action >= self.probs.len() {
            return Err(Error::ActionOutOfRange {
                index: action,
                actions: self.probs.len(),
            });
        }
        Ok(())
    }

    fn renormalize(&mut self) {
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > RENORMALIZE_TOL {
            self.probs.iter_mut().for_each(|p| *p /= sum);
        }
    }

    /// Moves mass toward `action`: `p_i += a (1 - p_i)`, `p_j *= (1 - a)`.
    pub fn reward(&mut self, action: usize, a: f64) -> Result<()> {
        self.check_action(action)?;
        for (j, p) in self.probs.iter_mut().enumerate() {
            if j == action {
                *p += a * (1.0 - *p);
            } else {
                *p *= 1.0 - a;
            }
        }
        self.renormalize();
        Ok(())
    }

    /// Moves mass away from `action`: `p_i *= (1 - b)` and
    /// `p_j = b / (M - 1) + (1 - b) p_j` for the others. No-op when `M = 1`.
    pub fn penalize(&mut self, action: usize, b: f64) -> Result<()> {
        self.check_action(action)?;
        let m = self.probs.len();
        if m == 1 {
            return Ok(());
        }
        let share = b / (m - 1) as f64;
        for (j, p) in self.probs.iter_mut().enumerate() {
            if j == action {
                *p *= 1.0 - b;
            } else {
                *p = share + (1.0 - b) * *p;
            }
        }
        self.renormalize();
        Ok(())
    }

    /// Draws an action from the distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let x: f64 = rng.random();
        let mut acc = 0.0;
        for (j, &p) in self.probs.iter().enumerate() {
            acc += p;
            if x < acc {
                return j;
            }
        }
        // Rounding left x above the accumulated sum: take the last action
        // with any mass.
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.probs.len() - 1)
    }
}

/// One automaton per VM, plus the reward and penalty factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutomatonBank {
    automata: Vec<Automaton>,
    reward_a: f64,
    penalty_b: f64,
}

impl AutomatonBank {
    /// `n` uniform automata over `m` actions.
    pub fn new(n: usize, m: usize, reward_a: f64, penalty_b: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidConfig("automaton bank needs n >= 1 and m >= 1".into()));
        }
        if !(reward_a > 0.0 && reward_a < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "reward factor {reward_a} must lie in (0, 1)"
            )));
        }
        if !(0.0..1.0).contains(&penalty_b) {
            return Err(Error::InvalidConfig(format!(
                "penalty factor {penalty_b} must lie in [0, 1)"
            )));
        }
        Ok(Self {
            automata: vec![Automaton::uniform(m); n],
            reward_a,
            penalty_b,
        })
    }

    pub fn automata(&self) -> &[Automaton] {
        &self.automata
    }

    pub fn reward_a(&self) -> f64 {
        self.reward_a
    }

    pub fn penalty_b(&self) -> f64 {
        self.penalty_b
    }

    /// Samples one server per VM from its automaton.
    pub fn sample_placement<R: Rng + ?Sized>(&self, rng: &mut R) -> Placement {
        Placement::new(self.automata.iter().map(|a| a.sample(rng)).collect())
    }

    /// For every VM, rewards the server chosen by `best` and then penalizes
    /// the server chosen by `worst`.
    pub fn update_from_population(&mut self, best: &Placement, worst: &Placement) -> Result<()> {
        if best.len() != self.automata.len() || worst.len() != self.automata.len() {
            return Err(Error::InvalidPlacement(format!(
                "expected placements of length {}, got {} and {}",
                self.automata.len(),
                best.len(),
                worst.len()
            )));
        }
        for (i, auto) in self.automata.iter_mut().enumerate() {
            auto.reward(best.server_of(i), self.reward_a)?;
            if self.penalty_b > 0.0 {
                auto.penalize(worst.server_of(i), self.penalty_b)?;
            }
        }
        Ok(())
    }

    /// Per-VM probabilities as JSON, for debugging.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("bank serializes")
    }
}
