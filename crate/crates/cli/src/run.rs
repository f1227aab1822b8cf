//! Algorithm dispatch and per-run reports.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use lamocs_core::objectives::{active_servers, eval_resource_waste, server_loads};
use lamocs_core::{
    evaluate, scalarize, solve_ffd, solve_traced, CycleTrace, GaConfig, Placement, PlacementProblem, PsoConfig,
    ScalarWeights, SolverConfig,
};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lamocs,
    Ga,
    Pso,
    Ffd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Lamocs, Algorithm::Ga, Algorithm::Pso, Algorithm::Ffd];

    /// Stable identifier fed into seed derivation.
    pub fn id(self) -> u64 {
        match self {
            Algorithm::Lamocs => 1,
            Algorithm::Ga => 2,
            Algorithm::Pso => 3,
            Algorithm::Ffd => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lamocs => "lamocs",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
            Algorithm::Ffd => "ffd",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CliError::UnknownAlgorithm(s.to_string()))
    }
}

/// Parses a comma-separated algorithm list.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Settings shared by every solver in a run. The population solvers all get
/// the same population size and cycle budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverOptions {
    pub pop: usize,
    pub cycles: usize,
    pub weights: ScalarWeights,
    pub p_a: f64,
    pub la_fraction: f64,
    pub reward_a: f64,
    pub penalty_b: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        let la = SolverConfig::default();
        Self {
            pop: la.pop_size,
            cycles: la.max_cycles,
            weights: la.weights,
            p_a: la.p_a,
            la_fraction: la.la_fraction,
            reward_a: la.reward_a,
            penalty_b: la.penalty_b,
        }
    }
}

impl SolverOptions {
    pub fn lamocs(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            weights: self.weights,
            p_a: self.p_a,
            la_fraction: self.la_fraction,
            reward_a: self.reward_a,
            penalty_b: self.penalty_b,
            ..SolverConfig::default()
        }
        .with_budget(self.pop, self.cycles)
        .with_seed(seed)
    }

    pub fn ga(&self, seed: u64) -> GaConfig {
        GaConfig {
            pop: self.pop,
            generations: self.cycles,
            seed,
            weights: self.weights,
            ..GaConfig::default()
        }
    }

    pub fn pso(&self, seed: u64) -> PsoConfig {
        PsoConfig {
            pop: self.pop,
            iterations: self.cycles,
            seed,
            weights: self.weights,
            ..PsoConfig::default()
        }
    }
}

/// Result of one solver invocation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub placement: Placement,
    /// Scalar the solver reported for `placement`.
    pub scalar: f64,
    pub history: Vec<f64>,
    pub wall_time: Duration,
    pub cycles: usize,
}

/// Runs one algorithm. Wall time covers the solver call only.
pub fn run_algorithm(
    p: &PlacementProblem,
    algorithm: Algorithm,
    opts: &SolverOptions,
    seed: u64,
    trace: impl FnMut(&CycleTrace),
) -> Result<RunOutcome> {
    let result = match algorithm {
        Algorithm::Lamocs => solve_traced(p, &opts.lamocs(seed), trace)?,
        Algorithm::Ga => lamocs_core::baselines::solve_ga_traced(p, &opts.ga(seed), trace)?,
        Algorithm::Pso => lamocs_core::baselines::solve_pso_traced(p, &opts.pso(seed), trace)?,
        Algorithm::Ffd => {
            let start = std::time::Instant::now();
            let placement = solve_ffd(p);
            let wall_time = start.elapsed();
            let scalar = scalarize(&evaluate(p, &placement), &opts.weights);
            return Ok(RunOutcome {
                placement,
                scalar,
                history: Vec::new(),
                wall_time,
                cycles: 0,
            });
        }
    };
    Ok(RunOutcome {
        placement: result.best.decoded,
        scalar: result.best.scalar,
        history: result.history,
        wall_time: result.wall_time,
        cycles: result.cycles_run,
    })
}

/// Metrics of one run, all recomputed from the returned placement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub utilization: f64,
    pub load_balance: f64,
    pub active_servers: usize,
    pub resource_waste: f64,
    pub feasible: bool,
    pub wall_time_ms: f64,
    pub cycles: usize,
}

impl RunReport {
    pub fn new(p: &PlacementProblem, algorithm: Algorithm, seed: u64, outcome: &RunOutcome) -> Self {
        let obj = evaluate(p, &outcome.placement);
        let loads = server_loads(p, &outcome.placement);
        Self {
            algorithm,
            n: p.num_vms(),
            m: p.num_servers(),
            seed,
            utilization: obj.utilization,
            load_balance: obj.load_balance,
            active_servers: active_servers(&loads),
            // n >= 1 guarantees an active server.
            resource_waste: eval_resource_waste(&loads).unwrap_or(f64::NAN),
            feasible: obj.feasible,
            wall_time_ms: outcome.wall_time.as_secs_f64() * 1e3,
            cycles: outcome.cycles,
        }
    }

    pub const CSV_HEADER: [&'static str; 11] = [
        "algorithm",
        "n",
        "m",
        "seed",
        "utilization",
        "load_balance",
        "active_servers",
        "resource_waste",
        "feasible",
        "wall_time_ms",
        "cycles",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.algorithm.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.seed.to_string(),
            self.utilization.to_string(),
            self.load_balance.to_string(),
            self.active_servers.to_string(),
            self.resource_waste.to_string(),
            self.feasible.to_string(),
            self.wall_time_ms.to_string(),
            self.cycles.to_string(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lamocs_core::ResourceVector;

    fn split() -> PlacementProblem {
        PlacementProblem::with_equal_weights(
            vec![ResourceVector::new(10.0, 10.0); 2],
            vec![ResourceVector::new(5.0, 5.0); 4],
        )
        .unwrap()
    }

    #[test]
    fn parses_names_and_rejects_unknown() {
        assert_eq!("LAMOCS".parse::<Algorithm>().unwrap(), Algorithm::Lamocs);
        assert_eq!(parse_algorithms("ga,pso").unwrap(), vec![Algorithm::Ga, Algorithm::Pso]);
        assert!(matches!("sa".parse::<Algorithm>(), Err(CliError::UnknownAlgorithm(_))));
    }

    #[test]
    fn report_matches_reevaluation() {
        let p = split();
        let opts = SolverOptions {
            pop: 10,
            cycles: 20,
            ..SolverOptions::default()
        };
        for alg in Algorithm::ALL {
            let out = run_algorithm(&p, alg, &opts, 3, |_| {}).unwrap();
            let r = RunReport::new(&p, alg, 3, &out);
            assert!(r.feasible, "{alg}");
            assert_eq!(out.scalar, scalarize(&evaluate(&p, &out.placement), &opts.weights));
            assert_eq!(r.active_servers, 2);
            assert!((r.utilization - 1.0).abs() < 1e-12);
            assert!(r.load_balance.abs() < 1e-12);
        }
    }
}
