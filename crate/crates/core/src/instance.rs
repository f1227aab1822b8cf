//! Placement problem data model and the synthetic instance generator.

use rand::distr::{Distribution, Open01, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking that `alpha + beta = 1`.
const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Two-dimensional resource amount: cpu in GHz-equivalents, memory in GB.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResourceVector {
    pub cpu: f64,
    pub mem: f64,
}

impl ResourceVector {
    pub const ZERO: ResourceVector = ResourceVector { cpu: 0.0, mem: 0.0 };

    pub fn new(cpu: f64, mem: f64) -> Self {
        Self { cpu, mem }
    }

    fn is_valid(&self) -> bool {
        self.cpu.is_finite() && self.mem.is_finite() && self.cpu >= 0.0 && self.mem >= 0.0
    }
}

impl std::ops::Add for ResourceVector {
    type Output = ResourceVector;

    fn add(self, rhs: ResourceVector) -> ResourceVector {
        ResourceVector::new(self.cpu + rhs.cpu, self.mem + rhs.mem)
    }
}

impl std::ops::AddAssign for ResourceVector {
    fn add_assign(&mut self, rhs: ResourceVector) {
        self.cpu += rhs.cpu;
        self.mem += rhs.mem;
    }
}

impl std::ops::SubAssign for ResourceVector {
    fn sub_assign(&mut self, rhs: ResourceVector) {
        self.cpu -= rhs.cpu;
        self.mem -= rhs.mem;
    }
}

impl std::iter::Sum for ResourceVector {
    fn sum<I: Iterator<Item = ResourceVector>>(iter: I) -> Self {
        iter.fold(ResourceVector::ZERO, |acc, r| acc + r)
    }
}

/// An immutable placement instance: `m` servers, `n` VMs and the global
/// cpu/memory weights used by the utilization measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem")]
pub struct PlacementProblem {
    servers: Vec<ResourceVector>,
    vms: Vec<ResourceVector>,
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawProblem {
    servers: Vec<ResourceVector>,
    vms: Vec<ResourceVector>,
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawProblem> for PlacementProblem {
    type Error = Error;

    fn try_from(raw: RawProblem) -> Result<Self> {
        PlacementProblem::new(raw.servers, raw.vms, raw.alpha, raw.beta)
    }
}

impl PlacementProblem {
    /// Validates and builds a problem.
    ///
    /// Servers need strictly positive capacity in both resources (utilization
    /// divides by it); VM demands must be strictly positive.
    pub fn new(servers: Vec<ResourceVector>, vms: Vec<ResourceVector>, alpha: f64, beta: f64) -> Result<Self> {
        if servers.is_empty() {
            return Err(Error::InvalidProblem("at least one server is required".into()));
        }
        if vms.is_empty() {
            return Err(Error::InvalidProblem("at least one vm is required".into()));
        }
        for (j, s) in servers.iter().enumerate() {
            if !s.is_valid() || s.cpu <= 0.0 || s.mem <= 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "server {} has non-positive or non-finite capacity ({}, {})",
                    j + 1,
                    s.cpu,
                    s.mem
                )));
            }
        }
        for (i, v) in vms.iter().enumerate() {
            if !v.is_valid() || v.cpu <= 0.0 || v.mem <= 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "vm {} has non-positive or non-finite demand ({}, {})",
                    i + 1,
                    v.cpu,
                    v.mem
                )));
            }
        }
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidProblem(format!(
                "alpha and beta must lie in [0, 1], got {alpha} and {beta}"
            )));
        }
        if (alpha + beta - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidProblem(format!(
                "alpha + beta must equal 1, got {}",
                alpha + beta
            )));
        }
        Ok(Self {
            servers,
            vms,
            alpha,
            beta,
        })
    }

    /// Equal cpu/memory weighting.
    pub fn with_equal_weights(servers: Vec<ResourceVector>, vms: Vec<ResourceVector>) -> Result<Self> {
        Self::new(servers, vms, 0.5, 0.5)
    }

    pub fn servers(&self) -> &[ResourceVector] {
        &self.servers
    }

    pub fn vms(&self) -> &[ResourceVector] {
        &self.vms
    }

    /// Number of servers `m`.
    pub fn num_servers(&self) -> usize {
        self.servers.len()
    }

    /// Number of VMs `n`.
    pub fn num_vms(&self) -> usize {
        self.vms.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Componentwise mean server capacity.
    pub fn mean_capacity(&self) -> ResourceVector {
        let total = total_capacity(self);
        let m = self.servers.len() as f64;
        ResourceVector::new(total.cpu / m, total.mem / m)
    }

    /// Componentwise sum of VM demands.
    pub fn total_demand(&self) -> ResourceVector {
        self.vms.iter().copied().sum()
    }

    /// A uniform-placement-independent size for a resource amount: weighted
    /// ratio against the mean server capacity. Used to rank VMs and slack.
    pub fn normalized_size(&self, r: ResourceVector) -> f64 {
        let mean = self.mean_capacity();
        self.alpha * r.cpu / mean.cpu + self.beta * r.mem / mean.mem
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Componentwise sum of server capacities.
pub fn total_capacity(p: &PlacementProblem) -> ResourceVector {
    p.servers.iter().copied().sum()
}

/// Assignment of every VM to a server.
///
/// Indices are 0-based in memory; the JSON form (`{"assign": [...]}`) uses
/// 1-based server numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PlacementFile", into = "PlacementFile")]
pub struct Placement {
    assign: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PlacementFile {
    assign: Vec<usize>,
}

impl TryFrom<PlacementFile> for Placement {
    type Error = Error;

    fn try_from(f: PlacementFile) -> Result<Self> {
        if let Some(pos) = f.assign.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPlacement(format!(
                "entry {} is 0; server numbers start at 1",
                pos + 1
            )));
        }
        Ok(Placement {
            assign: f.assign.into_iter().map(|s| s - 1).collect(),
        })
    }
}

impl From<Placement> for PlacementFile {
    fn from(p: Placement) -> Self {
        PlacementFile {
            assign: p.to_one_based(),
        }
    }
}

impl Placement {
    /// Builds a placement from 0-based server indices.
    pub fn new(assign: Vec<usize>) -> Self {
        Self { assign }
    }

    /// Builds a placement from 1-based server numbers, checking the range.
    pub fn from_one_based(assign: &[usize], m: usize) -> Result<Self> {
        if let Some((i, &s)) = assign.iter().enumerate().find(|(_, &s)| s == 0 || s > m) {
            return Err(Error::InvalidPlacement(format!(
                "vm {} assigned to server {s}, outside [1, {m}]",
                i + 1
            )));
        }
        Ok(Self {
            assign: assign.iter().map(|s| s - 1).collect(),
        })
    }

    /// Every VM on server 0.
    pub fn all_on_first(n: usize) -> Self {
        Self { assign: vec![0; n] }
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn server_of(&self, vm: usize) -> usize {
        self.assign[vm]
    }

    pub fn set(&mut self, vm: usize, server: usize) {
        self.assign[vm] = server;
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.assign.iter().map(|s| s + 1).collect()
    }

    /// Checks length and index range against a problem.
    pub fn validate_for(&self, p: &PlacementProblem) -> Result<()> {
        if self.assign.len() != p.num_vms() {
            return Err(Error::InvalidPlacement(format!(
                "placement has {} entries, problem has {} vms",
                self.assign.len(),
                p.num_vms()
            )));
        }
        if let Some((i, &s)) = self.assign.iter().enumerate().find(|(_, &s)| s >= p.num_servers()) {
            return Err(Error::InvalidPlacement(format!(
                "vm {} assigned to server {}, outside [1, {}]",
                i + 1,
                s + 1,
                p.num_servers()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("placement serializes")
    }
}

/// Default sampling interval for server cpu capacity.
pub const DEFAULT_CPU_RANGE: (f64, f64) = (10.0, 30.0);
/// Default sampling interval for server memory capacity.
pub const DEFAULT_MEM_RANGE: (f64, f64) = (16.0, 64.0);
/// Fraction of the mean server capacity bounding each VM demand.
pub const DEMAND_CAP_RATIO: f64 = 0.99;
/// Rounds of the rescale/clamp loop before the generator gives up.
pub const MAX_GENERATOR_ROUNDS: usize = 100;

/// Parameters of the synthetic instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub m: usize,
    pub n: usize,
    pub cpu_range: (f64, f64),
    pub mem_range: (f64, f64),
    pub demand_floor_ratio: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        Self {
            m,
            n,
            cpu_range: DEFAULT_CPU_RANGE,
            mem_range: DEFAULT_MEM_RANGE,
            demand_floor_ratio: 0.9,
            alpha: 0.5,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGeneratorConfig(msg));
        if self.m == 0 {
            return bad("server count must be positive".into());
        }
        if self.n < self.m {
            return bad(format!(
                "vm count ({}) must be at least the server count ({})",
                self.n, self.m
            ));
        }
        for (name, (lo, hi)) in [("cpu", self.cpu_range), ("mem", self.mem_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return bad(format!("{name} range ({lo}, {hi}) must satisfy 0 < lo <= hi"));
            }
        }
        if !(self.demand_floor_ratio > 0.0 && self.demand_floor_ratio < 1.0) {
            return bad(format!(
                "demand floor ratio {} must lie in (0, 1)",
                self.demand_floor_ratio
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha {} must lie in [0, 1]", self.alpha));
        }
        Ok(())
    }
}

fn sample_range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        Uniform::new_inclusive(lo, hi).expect("validated range").sample(rng)
    }
}

/// Draws VM demands for one resource: each strictly inside `(0, cap]` with
/// `cap` below the mean server capacity, summing to `target` (to within a
/// relative 2e-9, never below it).
fn draw_demands(rng: &mut ChaCha8Rng, n: usize, cap: f64, target: f64, resource: &str) -> Result<Vec<f64>> {
    if cap * n as f64 <= target {
        return Err(Error::InfeasibleGeneratorConfig(format!(
            "{n} vms capped at {cap:.4} {resource} cannot reach the demand floor {target:.4}"
        )));
    }
    let mut demands: Vec<f64> = (0..n)
        .map(|_| cap * Distribution::<f64>::sample(&Open01, rng))
        .collect();
    // Aim fractionally above the floor so rounding in the rescale cannot
    // leave the total a hair short. Totals above the aim are scaled down as
    // well: raw draws for n >> m would otherwise exceed the whole capacity.
    let aim = target * (1.0 + 1e-9);
    let settled = |demands: &[f64]| {
        let total: f64 = demands.iter().sum();
        total >= target && total <= aim * (1.0 + 1e-9) && demands.iter().all(|&d| d <= cap)
    };
    for _ in 0..MAX_GENERATOR_ROUNDS {
        if settled(&demands) {
            return Ok(demands);
        }
        let total: f64 = demands.iter().sum();
        if total < target || total > aim * (1.0 + 1e-9) {
            let ratio = aim / total;
            demands.iter_mut().for_each(|d| *d *= ratio);
        }
        let mut excess = 0.0;
        for d in demands.iter_mut() {
            if *d > cap {
                excess += *d - cap;
                *d = cap;
            }
        }
        let below = demands.iter().filter(|&&d| d < cap).count();
        if below == 0 {
            break;
        }
        let share = excess / below as f64;
        demands.iter_mut().filter(|d| **d < cap).for_each(|d| *d += share);
    }
    if settled(&demands) {
        Ok(demands)
    } else {
        Err(Error::InfeasibleGeneratorConfig(format!(
            "{resource} demands did not converge within {MAX_GENERATOR_ROUNDS} rounds"
        )))
    }
}

/// Generates a random instance.
///
/// Server capacities are uniform over the configured ranges. VM demands are
/// each below the mean server capacity and together amount to
/// `demand_floor_ratio` of the total capacity in both resources (never less).
/// The output is a pure function of `cfg`.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<PlacementProblem> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let servers: Vec<ResourceVector> = (0..cfg.m)
        .map(|_| {
            let cpu = sample_range(&mut rng, cfg.cpu_range);
            let mem = sample_range(&mut rng, cfg.mem_range);
            ResourceVector::new(cpu, mem)
        })
        .collect();
    let total: ResourceVector = servers.iter().copied().sum();
    let m = cfg.m as f64;
    let cap = ResourceVector::new(DEMAND_CAP_RATIO * total.cpu / m, DEMAND_CAP_RATIO * total.mem / m);
    let cpu = draw_demands(&mut rng, cfg.n, cap.cpu, cfg.demand_floor_ratio * total.cpu, "cpu")?;
    let mem = draw_demands(&mut rng, cfg.n, cap.mem, cfg.demand_floor_ratio * total.mem, "mem")?;
    let vms = cpu
        .into_iter()
        .zip(mem)
        .map(|(c, m)| ResourceVector::new(c, m))
        .collect();
    PlacementProblem::new(servers, vms, cfg.alpha, 1.0 - cfg.alpha)
}

/// Result of checking a problem against the generator's guarantees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceCheck {
    pub demands_below_mean: bool,
    pub cpu_fill: f64,
    pub mem_fill: f64,
    pub floor_met: bool,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.demands_below_mean && self.floor_met
    }
}

/// Checks the generator guarantees on an arbitrary problem.
pub fn check_instance(p: &PlacementProblem, floor: f64) -> InstanceCheck {
    let mean = p.mean_capacity();
    let total = total_capacity(p);
    let demand = p.total_demand();
    let demands_below_mean = p.vms().iter().all(|v| v.cpu < mean.cpu && v.mem < mean.mem);
    let cpu_fill = demand.cpu / total.cpu;
    let mem_fill = demand.mem / total.mem;
    InstanceCheck {
        demands_below_mean,
        cpu_fill,
        mem_fill,
        floor_met: cpu_fill >= floor && mem_fill >= floor,
    }
}
