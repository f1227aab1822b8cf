//! Comparison of solvers against exhaustive enumeration on tiny instances.

use std::time::Duration;

use lamocs_core::baselines::BRUTE_FORCE_LIMIT;
use lamocs_core::instance::{generate_instance, GeneratorConfig};
use lamocs_core::seed::hash64;
use lamocs_core::{brute_force, PlacementProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::run::{run_algorithm, Algorithm, SolverOptions};

/// Scalars within this distance of the exhaustive optimum count as a match.
pub const MATCH_TOL: f64 = 1e-9;

const ORACLE_STREAM: u64 = 0x6f72_6163_6c65;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    pub count: usize,
    pub max_vms: usize,
    pub max_servers: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Demand floor of the generated instances. Looser than the sweep's
    /// default so most tiny instances admit a feasible packing.
    pub demand_floor: f64,
    pub solver: SolverOptions,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            count: 20,
            max_vms: 6,
            max_servers: 3,
            algorithms: vec![Algorithm::Lamocs],
            seed: 0,
            demand_floor: 0.5,
            solver: SolverOptions {
                pop: 50,
                cycles: 200,
                ..SolverOptions::default()
            },
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_servers == 0 || self.max_vms < self.max_servers {
            return Err(CliError::Usage("size bounds need 1 <= max servers <= max vms".into()));
        }
        let space = (self.max_servers as u64).checked_pow(self.max_vms as u32);
        if space.is_none_or(|s| s > BRUTE_FORCE_LIMIT) {
            return Err(CliError::Usage(format!(
                "{}^{} placements exceed the enumeration limit of {BRUTE_FORCE_LIMIT}",
                self.max_servers, self.max_vms
            )));
        }
        Ok(())
    }

    /// The `index`-th tiny instance.
    pub fn instance(&self, index: usize) -> Result<PlacementProblem> {
        let seed = hash64(&[self.seed, ORACLE_STREAM, index as u64]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.random_range(self.max_servers.min(2)..=self.max_servers);
        let n = if self.max_vms > m {
            rng.random_range(m + 1..=self.max_vms)
        } else {
            m
        };
        let gen = GeneratorConfig {
            demand_floor_ratio: self.demand_floor,
            ..GeneratorConfig::new(m, n, rng.random())
        };
        Ok(generate_instance(&gen)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    pub algorithm: Algorithm,
    pub scalar: f64,
    pub matched: bool,
    /// Kept out of the JSON report so it is reproducible.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleInstance {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub optimum: f64,
    pub optimum_feasible: bool,
    pub runs: Vec<OracleRun>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub algorithm: Algorithm,
    pub matches: usize,
    pub total: usize,
    /// 1 when no instances were checked.
    pub fraction: f64,
    #[serde(skip)]
    pub max_wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub instances: Vec<OracleInstance>,
    pub summary: Vec<OracleSummary>,
}

pub fn run_oracle_check(cfg: &OracleConfig) -> Result<OracleReport> {
    cfg.validate()?;
    let mut instances = Vec::with_capacity(cfg.count);
    for index in 0..cfg.count {
        let p = cfg.instance(index)?;
        let exact = brute_force(&p, &cfg.solver.weights)?;
        let mut runs = Vec::new();
        for &alg in &cfg.algorithms {
            let seed = hash64(&[cfg.seed, index as u64, alg.id()]);
            let out = run_algorithm(&p, alg, &cfg.solver, seed, |_| {})?;
            let scalar = lamocs_core::scalarize(&lamocs_core::evaluate(&p, &out.placement), &cfg.solver.weights);
            runs.push(OracleRun {
                algorithm: alg,
                scalar,
                matched: (scalar - exact.scalar).abs() <= MATCH_TOL,
                wall_time_ms: duration_ms(out.wall_time),
            });
        }
        instances.push(OracleInstance {
            index,
            n: p.num_vms(),
            m: p.num_servers(),
            optimum: exact.scalar,
            optimum_feasible: exact.objectives.feasible,
            runs,
        });
    }
    let summary = cfg
        .algorithms
        .iter()
        .map(|&alg| {
            let runs: Vec<&OracleRun> = instances
                .iter()
                .flat_map(|i| i.runs.iter().filter(move |r| r.algorithm == alg))
                .collect();
            let matches = runs.iter().filter(|r| r.matched).count();
            OracleSummary {
                algorithm: alg,
                matches,
                total: runs.len(),
                fraction: if runs.is_empty() {
                    1.0
                } else {
                    matches as f64 / runs.len() as f64
                },
                max_wall_time_ms: runs.iter().map(|r| r.wall_time_ms).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(OracleReport { instances, summary })
}

fn duration_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
