//! Benchmark sweeps: (vm count × algorithm × rep) runs, raw rows and
//! mean/std aggregates.

use std::time::Duration;

use lamocs_core::instance::{generate_instance, GeneratorConfig};
use lamocs_core::seed::run_seed;
use lamocs_core::{Placement, PlacementProblem};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::run::{run_algorithm, Algorithm, RunReport, SolverOptions};
use crate::table::{Cell, Table};

/// Algorithm id reserved for instance seeds, so every algorithm in a rep
/// sees the same instance.
pub const INSTANCE_STREAM: u64 = 0;

/// Seed of the instance used by every algorithm at `(vm_count, rep)`.
pub fn instance_seed(base_seed: u64, vm_count: usize, rep: usize) -> u64 {
    run_seed(base_seed, vm_count, INSTANCE_STREAM, rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub vm_counts: Vec<usize>,
    pub m: usize,
    pub reps: usize,
    pub algorithms: Vec<Algorithm>,
    pub base_seed: u64,
    /// Template; `m`, `n` and `seed` are overwritten per run.
    pub generator: GeneratorConfig,
    pub solver: SolverOptions,
    /// Population sizes to sweep; the solver's own size when `None`.
    pub pop_sweep: Option<Vec<usize>>,
    /// Record measured wall time; when false the column holds 0 so reruns are
    /// byte-identical.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            vm_counts: vec![20, 40, 60, 80, 100],
            m: 20,
            reps: 10,
            algorithms: vec![Algorithm::Lamocs, Algorithm::Ga, Algorithm::Pso],
            base_seed: 0,
            generator: GeneratorConfig::new(20, 20, 0),
            solver: SolverOptions::default(),
            pop_sweep: None,
            timing: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(CliError::Usage("reps must be at least 1".into()));
        }
        if self.vm_counts.is_empty() {
            return Err(CliError::Usage("at least one vm count is required".into()));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Usage("at least one algorithm is required".into()));
        }
        if self.pop_sweep.as_ref().is_some_and(|p| p.is_empty()) {
            return Err(CliError::Usage("population sweep needs at least one size".into()));
        }
        Ok(())
    }

    fn pops(&self) -> Vec<Option<usize>> {
        match &self.pop_sweep {
            Some(p) => p.iter().map(|&x| Some(x)).collect(),
            None => vec![None],
        }
    }

    pub fn instance(&self, vm_count: usize, rep: usize) -> Result<PlacementProblem> {
        let cfg = GeneratorConfig {
            m: self.m,
            n: vm_count,
            seed: instance_seed(self.base_seed, vm_count, rep),
            ..self.generator.clone()
        };
        Ok(generate_instance(&cfg)?)
    }
}

/// One sweep run. `report` and `placement` are absent when the run failed.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub pop: Option<usize>,
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub rep: usize,
    pub seed: u64,
    pub instance_seed: u64,
    pub report: Option<RunReport>,
    pub placement: Option<Placement>,
    pub error: Option<String>,
}

fn run_cell(cfg: &SweepConfig, pop: Option<usize>, algorithm: Algorithm, n: usize, rep: usize) -> RunRecord {
    let seed = run_seed(cfg.base_seed, n, algorithm.id(), rep);
    let mut record = RunRecord {
        pop,
        algorithm,
        n,
        m: cfg.m,
        rep,
        seed,
        instance_seed: instance_seed(cfg.base_seed, n, rep),
        report: None,
        placement: None,
        error: None,
    };
    let mut opts = cfg.solver.clone();
    if let Some(pop) = pop {
        opts.pop = pop;
    }
    let outcome = cfg
        .instance(n, rep)
        .and_then(|p| run_algorithm(&p, algorithm, &opts, seed, |_| {}).map(|o| (p, o)));
    match outcome {
        Ok((p, mut out)) => {
            if !cfg.timing {
                out.wall_time = Duration::ZERO;
            }
            record.report = Some(RunReport::new(&p, algorithm, seed, &out));
            record.placement = Some(out.placement);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Runs every cell, in parallel, and returns records ordered by
/// (population, vm count, algorithm, rep). Failed runs are recorded, never
/// propagated.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for pop in cfg.pops() {
        for &n in &cfg.vm_counts {
            for &alg in &cfg.algorithms {
                for rep in 0..cfg.reps {
                    cells.push((pop, alg, n, rep));
                }
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .map(|(pop, alg, n, rep)| run_cell(cfg, pop, alg, n, rep))
        .collect())
}

pub const RAW_COLUMNS: [&str; 11] = [
    "algorithm",
    "n",
    "m",
    "rep",
    "seed",
    "utilization",
    "load_balance",
    "active_servers",
    "resource_waste",
    "feasible",
    "wall_time_ms",
];

/// Metrics averaged in the aggregate table, in column order.
pub const METRICS: [&str; 6] = [
    "utilization",
    "load_balance",
    "active_servers",
    "resource_waste",
    "feasible",
    "wall_time_ms",
];

fn metric_values(r: &RunReport) -> [f64; 6] {
    [
        r.utilization,
        r.load_balance,
        r.active_servers as f64,
        r.resource_waste,
        if r.feasible { 1.0 } else { 0.0 },
        r.wall_time_ms,
    ]
}

fn with_pop(pop_sweep: bool, cols: &[&str]) -> Vec<String> {
    pop_sweep
        .then(|| "pop".to_string())
        .into_iter()
        .chain(cols.iter().map(|s| s.to_string()))
        .collect()
}

/// One row per run. Failed runs carry NaN metrics and `feasible = false`.
pub fn raw_table(records: &[RunRecord]) -> Table {
    let pop_sweep = records.iter().any(|r| r.pop.is_some());
    let mut t = Table {
        header: with_pop(pop_sweep, &RAW_COLUMNS),
        rows: Vec::new(),
    };
    for r in records {
        let mut row = Vec::new();
        if pop_sweep {
            row.push(Cell::Int(r.pop.unwrap_or(0) as u64));
        }
        row.extend([
            Cell::Str(r.algorithm.to_string()),
            Cell::Int(r.n as u64),
            Cell::Int(r.m as u64),
            Cell::Int(r.rep as u64),
            Cell::Int(r.seed),
        ]);
        match &r.report {
            Some(rep) => row.extend([
                Cell::Float(rep.utilization),
                Cell::Float(rep.load_balance),
                Cell::Int(rep.active_servers as u64),
                Cell::Float(rep.resource_waste),
                Cell::Bool(rep.feasible),
                Cell::Float(rep.wall_time_ms),
            ]),
            None => row.extend([
                Cell::Float(f64::NAN),
                Cell::Float(f64::NAN),
                Cell::Float(f64::NAN),
                Cell::Float(f64::NAN),
                Cell::Bool(false),
                Cell::Float(f64::NAN),
            ]),
        }
        t.rows.push(row);
    }
    t
}

/// Arithmetic mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// One row per (population, algorithm, vm count) in first-seen order, with
/// the mean and population std of each metric over the successful runs.
pub fn aggregate_table(records: &[RunRecord]) -> Table {
    let pop_sweep = records.iter().any(|r| r.pop.is_some());
    let mut cols = vec![
        "algorithm".to_string(),
        "n".into(),
        "m".into(),
        "runs".into(),
        "failed".into(),
    ];
    for m in METRICS {
        cols.push(format!("{m}_mean"));
        cols.push(format!("{m}_std"));
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table {
        header: with_pop(pop_sweep, &col_refs),
        rows: Vec::new(),
    };

    type Key = (Option<usize>, Algorithm, usize);
    let mut groups: Vec<(Key, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = (r.pop, r.algorithm, r.n);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    for ((pop, alg, n), runs) in groups {
        let ok: Vec<&RunReport> = runs.iter().filter_map(|r| r.report.as_ref()).collect();
        let mut row = Vec::new();
        if pop_sweep {
            row.push(Cell::Int(pop.unwrap_or(0) as u64));
        }
        row.extend([
            Cell::Str(alg.to_string()),
            Cell::Int(n as u64),
            Cell::Int(runs[0].m as u64),
            Cell::Int(ok.len() as u64),
            Cell::Int((runs.len() - ok.len()) as u64),
        ]);
        for k in 0..METRICS.len() {
            let xs: Vec<f64> = ok.iter().map(|r| metric_values(r)[k]).collect();
            let (mean, std) = mean_std(&xs);
            row.push(Cell::Float(mean));
            row.push(Cell::Float(std));
        }
        t.rows.push(row);
    }
    t
}

/// Run description written next to the tables.
#[derive(Debug, Serialize)]
pub struct SweepMetadata<'a> {
    pub servers: usize,
    pub servers_note: &'static str,
    pub seed_derivation: &'static str,
    pub wall_time: &'static str,
    pub config: &'a SweepConfig,
}

impl<'a> SweepMetadata<'a> {
    pub fn new(config: &'a SweepConfig) -> Self {
        Self {
            servers: config.m,
            servers_note: "server count is a chosen default; the reproduced experiment does not state one",
            seed_derivation:
                "solver seed = hash64(base_seed, n, algorithm_id, rep) with ids lamocs=1 ga=2 pso=3 ffd=4; \
                              instance seed uses algorithm_id 0 and is shared by all algorithms",
            wall_time: if config.timing {
                "solver call only, milliseconds"
            } else {
                "disabled (written as 0)"
            },
            config,
        }
    }
}
