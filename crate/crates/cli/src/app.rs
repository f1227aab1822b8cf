//! Command-line definitions and the four subcommands.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lamocs_core::instance::{check_instance, generate_instance, GeneratorConfig};
use lamocs_core::{PlacementProblem, ScalarWeights};

use crate::error::{CliError, Result};
use crate::oracle::{run_oracle_check, OracleConfig};
use crate::run::{parse_algorithms, run_algorithm, Algorithm, RunReport, SolverOptions};
use crate::sweep::{aggregate_table, raw_table, run_sweep, SweepConfig, SweepMetadata};
use crate::table::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "lamocs", version, about = "VM placement solvers and benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance file.
    Generate(GenerateArgs),
    /// Solve an instance file with one algorithm.
    Solve(SolveArgs),
    /// Run a benchmark sweep and write raw and aggregated reports.
    Bench(BenchArgs),
    /// Compare solvers with exhaustive enumeration on tiny instances.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GeneratorArgs {
    #[arg(long, default_value_t = 10.0)]
    pub cpu_min: f64,
    #[arg(long, default_value_t = 30.0)]
    pub cpu_max: f64,
    #[arg(long, default_value_t = 16.0)]
    pub mem_min: f64,
    #[arg(long, default_value_t = 64.0)]
    pub mem_max: f64,
    /// Total VM demand as a fraction of total server capacity.
    #[arg(long, default_value_t = 0.9)]
    pub floor: f64,
    /// Weight of cpu in the objectives; memory gets 1 - alpha.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
}

impl GeneratorArgs {
    fn config(&self, m: usize, n: usize, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            cpu_range: (self.cpu_min, self.cpu_max),
            mem_range: (self.mem_min, self.mem_max),
            demand_floor_ratio: self.floor,
            alpha: self.alpha,
            ..GeneratorConfig::new(m, n, seed)
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Population (nests, chromosomes or particles).
    #[arg(long, default_value_t = 100)]
    pub pop: usize,
    /// Cycles, generations or iterations.
    #[arg(long, default_value_t = 500)]
    pub cycles: usize,
    /// Scalarization weights for utilization, load balance and active servers.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub weights: Option<Vec<f64>>,
    /// Penalty added to the scalar of infeasible placements.
    #[arg(long, default_value_t = 10.0)]
    pub infeasible_penalty: f64,
    /// Fraction of nests abandoned per cycle.
    #[arg(long, default_value_t = 0.25)]
    pub pa: f64,
    /// Share of new nests sampled from the learning automata.
    #[arg(long, default_value_t = 0.5)]
    pub la_fraction: f64,
    /// Automaton reward step.
    #[arg(long, default_value_t = 0.5)]
    pub la_reward: f64,
    /// Automaton penalty step.
    #[arg(long, default_value_t = 0.05)]
    pub la_penalty: f64,
}

impl SolverArgs {
    pub fn options(&self) -> Result<SolverOptions> {
        let base = ScalarWeights::default();
        let weights = match self.weights.as_deref() {
            Some([u, lb, a]) => ScalarWeights::new(*u, *lb, *a, self.infeasible_penalty)?,
            Some(_) => return Err(CliError::Usage("--weights takes three values".into())),
            None => ScalarWeights::new(base.w_util, base.w_lb, base.w_active, self.infeasible_penalty)?,
        };
        Ok(SolverOptions {
            pop: self.pop,
            cycles: self.cycles,
            weights,
            p_a: self.pa,
            la_fraction: self.la_fraction,
            reward_a: self.la_reward,
            penalty_b: self.la_penalty,
        })
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 20)]
    pub servers: usize,
    #[arg(long)]
    pub vms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub generator: GeneratorArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// lamocs, ga, pso or ffd.
    #[arg(long, default_value = "lamocs")]
    pub algorithm: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Placement output file (1-based server indices).
    #[arg(long, default_value = "placement.json")]
    pub out: PathBuf,
    /// Write one JSON line per cycle to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
    pub vm_counts: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub servers: usize,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value = "lamocs,ga,pso")]
    pub algorithms: String,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    #[arg(long, default_value = "bench-out")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Population sizes to compare at a fixed vm count (see --pop-sweep-vms).
    #[arg(long, value_delimiter = ',')]
    pub pop_sweep: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    pub pop_sweep_vms: usize,
    /// Write 0 instead of measured wall time so reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub generator: GeneratorArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 6)]
    pub max_vms: usize,
    #[arg(long, default_value_t = 3)]
    pub max_servers: usize,
    #[arg(long, default_value = "lamocs")]
    pub algorithms: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Demand floor of the generated instances.
    #[arg(long, default_value_t = 0.5)]
    pub floor: f64,
    #[arg(long, default_value_t = 50)]
    pub pop: usize,
    #[arg(long, default_value_t = 200)]
    pub cycles: usize,
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    pub infeasible_penalty: f64,
    /// Also write the full JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::OracleCheck(a) => cmd_oracle_check(&a, out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut impl Write) -> Result<()> {
    let cfg = a.generator.config(a.servers, a.vms, a.seed);
    let p = generate_instance(&cfg)?;
    write_file(&a.out, &(p.to_json() + "\n"))?;
    let check = check_instance(&p, cfg.demand_floor_ratio);
    writeln!(
        out,
        "instance: {} servers, {} vms, seed {}",
        p.num_servers(),
        p.num_vms(),
        a.seed
    )
    .map_err(stdout_err)?;
    writeln!(
        out,
        "demand/capacity: cpu {:.6}, mem {:.6} (floor {})",
        check.cpu_fill, check.mem_fill, cfg.demand_floor_ratio
    )
    .map_err(stdout_err)?;
    writeln!(out, "every vm below mean server capacity: {}", check.demands_below_mean).map_err(stdout_err)?;
    writeln!(out, "invariants: {}", if check.passed() { "ok" } else { "VIOLATED" }).map_err(stdout_err)?;
    if !check.passed() {
        return Err(CliError::Usage("generated instance violates its invariants".into()));
    }
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<PlacementProblem> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    PlacementProblem::from_json(&text).map_err(|e| CliError::Parse {
        path: path.into(),
        message: e.to_string(),
    })
}

pub fn cmd_solve(a: &SolveArgs, out: &mut impl Write) -> Result<()> {
    let p = read_instance(&a.instance)?;
    let algorithm: Algorithm = a.algorithm.parse()?;
    let opts = a.solver.options()?;
    let mut trace = a.trace.as_deref().map(create).transpose()?;
    let mut trace_err = None;
    let outcome = run_algorithm(&p, algorithm, &opts, a.seed, |t| {
        if let Some(w) = trace.as_mut() {
            let line = serde_json::to_string(t).expect("trace lines serialize");
            if let Err(e) = writeln!(w, "{line}") {
                trace_err.get_or_insert(e);
            }
        }
    })?;
    if let (Some(path), Some(e)) = (a.trace.as_deref(), trace_err) {
        return Err(CliError::io(path, e));
    }
    if let (Some(path), Some(mut w)) = (a.trace.as_deref(), trace) {
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    write_file(&a.out, &(outcome.placement.to_json() + "\n"))?;
    let report = RunReport::new(&p, algorithm, a.seed, &outcome);
    match a.format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?).map_err(stdout_err)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(RunReport::CSV_HEADER)?;
            w.write_record(report.csv_record())?;
            w.flush().map_err(stdout_err)?;
        }
    }
    if report.feasible {
        Ok(())
    } else {
        Err(CliError::Infeasible)
    }
}

pub fn sweep_config(a: &BenchArgs) -> Result<SweepConfig> {
    let vm_counts = if a.pop_sweep.is_some() {
        vec![a.pop_sweep_vms]
    } else {
        a.vm_counts.clone()
    };
    Ok(SweepConfig {
        vm_counts,
        m: a.servers,
        reps: a.reps,
        algorithms: parse_algorithms(&a.algorithms)?,
        base_seed: a.base_seed,
        generator: a.generator.config(a.servers, a.servers, 0),
        solver: a.solver.options()?,
        pop_sweep: a.pop_sweep.clone(),
        timing: !a.no_timing,
    })
}

fn write_table(table: &Table, format: Format, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    table.write(format, &mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn cmd_bench(a: &BenchArgs, out: &mut impl Write) -> Result<()> {
    let cfg = sweep_config(a)?;
    cfg.validate()?;
    fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;
    let records = run_sweep(&cfg)?;
    let ext = a.format.extension();
    let aggregate = aggregate_table(&records);
    write_table(&raw_table(&records), a.format, &a.out_dir.join(format!("raw.{ext}")))?;
    write_table(&aggregate, a.format, &a.out_dir.join(format!("aggregate.{ext}")))?;
    let meta = serde_json::to_string_pretty(&SweepMetadata::new(&cfg))? + "\n";
    write_file(&a.out_dir.join("metadata.json"), &meta)?;

    let placements_path = a.out_dir.join("placements.jsonl");
    let mut w = create(&placements_path)?;
    for r in &records {
        let line = serde_json::json!({
            "algorithm": r.algorithm,
            "n": r.n,
            "m": r.m,
            "rep": r.rep,
            "seed": r.seed,
            "instance_seed": r.instance_seed,
            "assign": r.placement.as_ref().map(|p| p.to_one_based()),
            "error": r.error,
        });
        writeln!(w, "{line}").map_err(|e| CliError::io(&placements_path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&placements_path, e))?;

    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "run failed: {} n={} rep={}: {}",
            r.algorithm,
            r.n,
            r.rep,
            r.error.as_deref().unwrap_or("")
        );
    }
    aggregate.write_csv(&mut *out)?;
    Ok(())
}

pub fn cmd_oracle_check(a: &OracleArgs, out: &mut impl Write) -> Result<()> {
    let solver = SolverArgs {
        pop: a.pop,
        cycles: a.cycles,
        weights: a.weights.clone(),
        infeasible_penalty: a.infeasible_penalty,
        ..SolverArgs::defaults()
    };
    let cfg = OracleConfig {
        count: a.count,
        max_vms: a.max_vms,
        max_servers: a.max_servers,
        algorithms: parse_algorithms(&a.algorithms)?,
        seed: a.seed,
        demand_floor: a.floor,
        solver: solver.options()?,
    };
    let report = run_oracle_check(&cfg)?;
    for inst in &report.instances {
        write!(
            out,
            "instance {:>3}: n={} m={} optimum={:.12} feasible={}",
            inst.index, inst.n, inst.m, inst.optimum, inst.optimum_feasible
        )
        .map_err(stdout_err)?;
        for r in &inst.runs {
            write!(out, "  {}={}", r.algorithm, if r.matched { "match" } else { "miss" }).map_err(stdout_err)?;
        }
        writeln!(out).map_err(stdout_err)?;
    }
    for s in &report.summary {
        writeln!(
            out,
            "{}: {}/{} matched ({:.3}), slowest run {:.1} ms",
            s.algorithm, s.matches, s.total, s.fraction, s.max_wall_time_ms
        )
        .map_err(stdout_err)?;
    }
    if let Some(path) = &a.out {
        write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(())
}

impl SolverArgs {
    fn defaults() -> Self {
        let o = SolverOptions::default();
        Self {
            pop: o.pop,
            cycles: o.cycles,
            weights: None,
            infeasible_penalty: o.weights.infeasibility_penalty,
            pa: o.p_a,
            la_fraction: o.la_fraction,
            la_reward: o.reward_a,
            la_penalty: o.penalty_b,
        }
    }
}
