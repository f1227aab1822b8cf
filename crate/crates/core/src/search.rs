//! Solution bookkeeping shared by the population solvers: nests, the
//! evaluation path, best-so-far tracking and the run result.

use std::time::Duration;

use serde::Serialize;

use crate::archive::ParetoArchive;
use crate::instance::{Placement, PlacementProblem};
use crate::objectives::{evaluate, scalarize, ObjectiveVector, ScalarWeights};
use crate::repair::repair_in_place;

/// A candidate solution: a continuous position in `[1, m]^n`, the placement
/// it decodes to, and its scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Nest {
    pub position: Vec<f64>,
    pub decoded: Placement,
    pub objectives: ObjectiveVector,
    pub scalar: f64,
}

/// Rounds each coordinate half-up and clamps it to `[1, m]`; the result holds
/// 0-based server indices.
pub fn decode(position: &[f64], m: usize) -> Placement {
    let hi = m as f64;
    Placement::new(
        position
            .iter()
            .map(|&x| {
                let r = (x + 0.5).floor();
                let r = if r.is_nan() { 1.0 } else { r.clamp(1.0, hi) };
                r as usize - 1
            })
            .collect(),
    )
}

/// Lifts a placement to the integer position it decodes from.
pub fn placement_position(s: &Placement) -> Vec<f64> {
    s.assign().iter().map(|&j| (j + 1) as f64).collect()
}

/// Decodes, repairs and scores candidates against one problem.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'a> {
    problem: &'a PlacementProblem,
    weights: ScalarWeights,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a PlacementProblem, weights: ScalarWeights) -> Self {
        Self { problem, weights }
    }

    pub fn problem(&self) -> &'a PlacementProblem {
        self.problem
    }

    pub fn weights(&self) -> &ScalarWeights {
        &self.weights
    }

    /// Scores a placement as is.
    pub fn score(&self, placement: Placement, position: Vec<f64>) -> Nest {
        let objectives = evaluate(self.problem, &placement);
        let scalar = scalarize(&objectives, &self.weights);
        Nest {
            position,
            decoded: placement,
            objectives,
            scalar,
        }
    }

    /// Clamps, decodes and repairs a position. Coordinates of VMs moved by the
    /// repair are snapped to their new server so `decoded == decode(position)`.
    pub fn from_position(&self, mut position: Vec<f64>) -> Nest {
        let hi = self.problem.num_servers() as f64;
        for x in position.iter_mut() {
            *x = if x.is_nan() { 1.0 } else { x.clamp(1.0, hi) };
        }
        let mut placement = decode(&position, self.problem.num_servers());
        let before = placement.clone();
        if repair_in_place(self.problem, &mut placement) > 0 {
            for (i, (&old, &new)) in before.assign().iter().zip(placement.assign()).enumerate() {
                if old != new {
                    position[i] = (new + 1) as f64;
                }
            }
        }
        self.score(placement, position)
    }

    /// Repairs and scores a discrete placement, using its integer position.
    pub fn from_placement(&self, mut placement: Placement) -> Nest {
        repair_in_place(self.problem, &mut placement);
        let position = placement_position(&placement);
        self.score(placement, position)
    }
}

/// One line of the optional per-cycle trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleTrace {
    pub cycle: usize,
    pub best_scalar: f64,
    pub archive_size: usize,
}

/// Outcome of one solver run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Lowest-scalar feasible nest seen, or the lowest-scalar nest overall
    /// when nothing feasible was found.
    pub best: Nest,
    /// Mutually non-dominated nests.
    pub archive: Vec<Nest>,
    /// Best-so-far scalar after each cycle; non-increasing.
    pub history: Vec<f64>,
    pub wall_time: Duration,
    pub cycles_run: usize,
}

fn better(a: &Nest, b: &Nest) -> bool {
    a.scalar < b.scalar
}

/// Best-so-far, archive and history bookkeeping for one run.
#[derive(Debug)]
pub struct Tracker {
    best_overall: Option<Nest>,
    best_feasible: Option<Nest>,
    archive: ParetoArchive<Nest>,
    history: Vec<f64>,
}

impl Tracker {
    pub fn new(archive_cap: usize) -> Self {
        Self {
            best_overall: None,
            best_feasible: None,
            archive: ParetoArchive::new(archive_cap),
            history: Vec::new(),
        }
    }

    /// Records an evaluated nest for best-so-far tracking.
    pub fn observe(&mut self, nest: &Nest) {
        if self.best_overall.as_ref().is_none_or(|b| better(nest, b)) {
            self.best_overall = Some(nest.clone());
        }
        if nest.objectives.feasible && self.best_feasible.as_ref().is_none_or(|b| better(nest, b)) {
            self.best_feasible = Some(nest.clone());
        }
    }

    /// Offers a nest to the non-dominated archive.
    pub fn archive(&mut self, nest: &Nest) {
        self.archive.offer(&nest.objectives, || nest.clone());
    }

    /// Closes a cycle, recording the best-so-far scalar.
    pub fn end_cycle(&mut self) -> CycleTrace {
        let best_scalar = self.best_scalar();
        self.history.push(best_scalar);
        CycleTrace {
            cycle: self.history.len(),
            best_scalar,
            archive_size: self.archive.len(),
        }
    }

    pub fn best_scalar(&self) -> f64 {
        self.best_overall.as_ref().map_or(f64::INFINITY, |b| b.scalar)
    }

    pub fn finish(self, wall_time: Duration) -> SolveResult {
        let best = self
            .best_feasible
            .or(self.best_overall)
            .expect("a solver run evaluates at least one nest");
        let cycles_run = self.history.len();
        SolveResult {
            best,
            archive: self.archive.into_entries().into_iter().map(|(_, n)| n).collect(),
            history: self.history,
            wall_time,
            cycles_run,
        }
    }
}

/// Index of the lowest-scalar nest, ties to the lower index.
pub fn argmin_scalar(nests: &[Nest]) -> usize {
    nests
        .iter()
        .enumerate()
        .fold(0, |best, (i, n)| if n.scalar < nests[best].scalar { i } else { best })
}

/// Index of the highest-scalar nest, ties to the lower index.
pub fn argmax_scalar(nests: &[Nest]) -> usize {
    nests.iter().enumerate().fold(
        0,
        |worst, (i, n)| if n.scalar > nests[worst].scalar { i } else { worst },
    )
}
