//! Placement objectives: utilization, load balance, the active-server energy
//! proxy and resource waste, plus feasibility, dominance and scalarization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Placement, PlacementProblem, ResourceVector};

/// Relative slack allowed when comparing summed demand to capacity, so that
/// an exact fill is not rejected by floating-point rounding.
pub const CAPACITY_TOL: f64 = 1e-9;

/// Aggregate load of one server under a placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ServerLoad {
    pub cpu_used: f64,
    pub mem_used: f64,
    /// `alpha * cpu_used / cpu_cap + beta * mem_used / mem_cap`.
    pub utilization: f64,
    /// Hosts at least one VM.
    pub active: bool,
}

/// Objective values of one placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    /// Mean utilization over active servers (maximize).
    pub utilization: f64,
    /// Population standard deviation of active-server utilization (minimize).
    pub load_balance: f64,
    /// Active servers divided by `m` (minimize).
    pub active_fraction: f64,
    pub feasible: bool,
}

/// Weights collapsing an [`ObjectiveVector`] into a single minimized score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarWeights {
    pub w_util: f64,
    pub w_lb: f64,
    pub w_active: f64,
    pub infeasibility_penalty: f64,
}

impl Default for ScalarWeights {
    fn default() -> Self {
        Self {
            w_util: 1.0 / 3.0,
            w_lb: 1.0 / 3.0,
            w_active: 1.0 / 3.0,
            infeasibility_penalty: 10.0,
        }
    }
}

impl ScalarWeights {
    pub fn new(w_util: f64, w_lb: f64, w_active: f64, infeasibility_penalty: f64) -> Result<Self> {
        let w = Self {
            w_util,
            w_lb,
            w_active,
            infeasibility_penalty,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.w_util, self.w_lb, self.w_active];
        if parts.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig(
                "objective weights must be finite and non-negative".into(),
            ));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig("objective weights must sum to 1".into()));
        }
        if !(self.infeasibility_penalty.is_finite() && self.infeasibility_penalty > 0.0) {
            return Err(Error::InvalidConfig("infeasibility penalty must be positive".into()));
        }
        Ok(())
    }
}

/// Which resource a capacity violation concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Cpu,
    Mem,
}

/// One overloaded server resource.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    /// 0-based server index.
    pub server: usize,
    pub resource: Resource,
    /// Demand in excess of capacity.
    pub overload: f64,
}

fn utilization_of(p: &PlacementProblem, cap: ResourceVector, used: ResourceVector) -> f64 {
    p.alpha() * used.cpu / cap.cpu + p.beta() * used.mem / cap.mem
}

/// Per-server demand sums and utilization; one entry per server.
pub fn server_loads(p: &PlacementProblem, s: &Placement) -> Vec<ServerLoad> {
    let mut used = vec![ResourceVector::ZERO; p.num_servers()];
    let mut count = vec![0usize; p.num_servers()];
    for (vm, &server) in p.vms().iter().zip(s.assign()) {
        used[server] += *vm;
        count[server] += 1;
    }
    p.servers()
        .iter()
        .zip(used)
        .zip(count)
        .map(|((&cap, u), c)| ServerLoad {
            cpu_used: u.cpu,
            mem_used: u.mem,
            utilization: utilization_of(p, cap, u),
            active: c > 0,
        })
        .collect()
}

fn active_utilizations(loads: &[ServerLoad]) -> impl Iterator<Item = f64> + '_ {
    loads.iter().filter(|l| l.active).map(|l| l.utilization)
}

fn active_mean(loads: &[ServerLoad]) -> Result<(f64, usize)> {
    let (sum, count) = active_utilizations(loads).fold((0.0, 0usize), |(s, c), u| (s + u, c + 1));
    if count == 0 {
        return Err(Error::NoActiveServers);
    }
    Ok((sum / count as f64, count))
}

/// Mean utilization over active servers; 0 when nothing is active.
pub fn eval_utilization(loads: &[ServerLoad]) -> f64 {
    active_mean(loads).map(|(mean, _)| mean).unwrap_or(0.0)
}

/// The unnormalized weighted cpu + memory ratio summed over every server.
pub fn raw_utilization_sum(loads: &[ServerLoad]) -> f64 {
    loads.iter().map(|l| l.utilization).sum()
}

/// Population standard deviation of utilization over active servers.
pub fn eval_load_balance(loads: &[ServerLoad]) -> Result<f64> {
    let (mean, count) = active_mean(loads)?;
    let ss: f64 = active_utilizations(loads).map(|u| (u - mean) * (u - mean)).sum();
    Ok((ss / count as f64).sqrt())
}

/// Fraction of servers hosting at least one VM.
pub fn eval_active_fraction(loads: &[ServerLoad]) -> f64 {
    if loads.is_empty() {
        return 0.0;
    }
    loads.iter().filter(|l| l.active).count() as f64 / loads.len() as f64
}

/// Number of servers hosting at least one VM.
pub fn active_servers(loads: &[ServerLoad]) -> usize {
    loads.iter().filter(|l| l.active).count()
}

/// Mean unused utilization share over active servers.
pub fn eval_resource_waste(loads: &[ServerLoad]) -> Result<f64> {
    let (sum, count) = active_utilizations(loads).fold((0.0, 0usize), |(s, c), u| (s + (1.0 - u), c + 1));
    if count == 0 {
        return Err(Error::NoActiveServers);
    }
    Ok(sum / count as f64)
}

pub(crate) fn exceeds(used: f64, cap: f64) -> bool {
    used > cap * (1.0 + CAPACITY_TOL)
}

/// Capacity violations from precomputed loads.
pub fn violations(p: &PlacementProblem, loads: &[ServerLoad]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (server, (l, cap)) in loads.iter().zip(p.servers()).enumerate() {
        if exceeds(l.cpu_used, cap.cpu) {
            out.push(Violation {
                server,
                resource: Resource::Cpu,
                overload: l.cpu_used - cap.cpu,
            });
        }
        if exceeds(l.mem_used, cap.mem) {
            out.push(Violation {
                server,
                resource: Resource::Mem,
                overload: l.mem_used - cap.mem,
            });
        }
    }
    out
}

/// Whether every server's summed cpu and memory demand fits its capacity.
pub fn check_feasible(p: &PlacementProblem, s: &Placement) -> (bool, Vec<Violation>) {
    let v = violations(p, &server_loads(p, s));
    (v.is_empty(), v)
}

/// Objective vector from precomputed loads.
pub fn evaluate_loads(p: &PlacementProblem, loads: &[ServerLoad]) -> ObjectiveVector {
    ObjectiveVector {
        utilization: eval_utilization(loads),
        load_balance: eval_load_balance(loads).unwrap_or(0.0),
        active_fraction: eval_active_fraction(loads),
        feasible: violations(p, loads).is_empty(),
    }
}

/// Evaluates every objective of a placement. Infeasible placements still get
/// their objective values; only the flag differs.
pub fn evaluate(p: &PlacementProblem, s: &Placement) -> ObjectiveVector {
    evaluate_loads(p, &server_loads(p, s))
}

/// Pareto dominance with feasibility first: a feasible vector dominates any
/// infeasible one; otherwise `a` must be no worse in all three criteria and
/// strictly better in one.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    match (a.feasible, b.feasible) {
        (true, false) => return true,
        (false, true) => return false,
        _ => {}
    }
    let no_worse =
        a.utilization >= b.utilization && a.load_balance <= b.load_balance && a.active_fraction <= b.active_fraction;
    let better =
        a.utilization > b.utilization || a.load_balance < b.load_balance || a.active_fraction < b.active_fraction;
    no_worse && better
}

/// Weighted score to minimize, with a flat penalty for infeasibility.
pub fn scalarize(o: &ObjectiveVector, w: &ScalarWeights) -> f64 {
    let base = w.w_util * (1.0 - o.utilization) + w.w_lb * o.load_balance + w.w_active * o.active_fraction;
    if o.feasible {
        base
    } else {
        base + w.infeasibility_penalty
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(cpu: f64, mem: f64) -> ResourceVector {
        ResourceVector::new(cpu, mem)
    }

    fn load(u: f64, active: bool) -> ServerLoad {
        ServerLoad {
            cpu_used: 0.0,
            mem_used: 0.0,
            utilization: u,
            active,
        }
    }

    fn ov(u: f64, lb: f64, a: f64, feasible: bool) -> ObjectiveVector {
        ObjectiveVector {
            utilization: u,
            load_balance: lb,
            active_fraction: a,
            feasible,
        }
    }

    #[test]
    fn server_loads_single_server() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 16.0)], vec![rv(2.0, 4.0), rv(3.0, 4.0)]).unwrap();
        let loads = server_loads(&p, &Placement::new(vec![0, 0]));
        assert_eq!(loads.len(), 1);
        assert_eq!(loads[0].cpu_used, 5.0);
        assert_eq!(loads[0].mem_used, 8.0);
        assert!((loads[0].utilization - 0.5).abs() < 1e-15);
        assert!(loads[0].active);
        assert_eq!(evaluate(&p, &Placement::new(vec![0, 0])), ov(0.5, 0.0, 1.0, true));
    }

    #[test]
    fn empty_and_full_servers() {
        let p = PlacementProblem::with_equal_weights(vec![rv(4.0, 4.0), rv(10.0, 10.0)], vec![rv(4.0, 4.0)]).unwrap();
        let loads = server_loads(&p, &Placement::new(vec![0]));
        assert_eq!(loads[0].utilization, 1.0);
        assert_eq!(
            loads[1],
            ServerLoad {
                cpu_used: 0.0,
                mem_used: 0.0,
                utilization: 0.0,
                active: false
            }
        );
    }

    #[test]
    fn utilization_is_mean_over_active() {
        assert_eq!(eval_utilization(&[load(0.5, true), load(0.5, true)]), 0.5);
        let loads = [load(1.0, true), load(0.0, false), load(0.0, false), load(0.0, false)];
        assert_eq!(eval_utilization(&loads), 1.0);
        assert!((eval_utilization(&[load(0.2, true), load(0.8, true)]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn load_balance_std_dev() {
        assert_eq!(eval_load_balance(&[load(0.5, true), load(0.5, true)]).unwrap(), 0.0);
        assert!((eval_load_balance(&[load(0.2, true), load(0.8, true)]).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(eval_load_balance(&[load(0.7, true), load(0.0, false)]).unwrap(), 0.0);
        assert_eq!(eval_load_balance(&[load(0.0, false)]), Err(Error::NoActiveServers));
    }

    #[test]
    fn active_fraction_counts() {
        let loads = [load(0.1, true), load(0.0, false), load(0.3, true), load(0.0, false)];
        assert_eq!(eval_active_fraction(&loads), 0.5);
        assert_eq!(eval_active_fraction(&[load(0.1, true), load(0.2, true)]), 1.0);
    }

    #[test]
    fn resource_waste_complements_utilization() {
        assert_eq!(eval_resource_waste(&[load(1.0, true)]).unwrap(), 0.0);
        let loads = [load(0.2, true), load(0.8, true), load(0.0, false)];
        assert!((eval_resource_waste(&loads).unwrap() - 0.5).abs() < 1e-15);
        assert!((eval_resource_waste(&loads).unwrap() - (1.0 - eval_utilization(&loads))).abs() < 1e-15);
    }

    #[test]
    fn feasibility_per_resource() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 16.0), rv(10.0, 16.0)],
            vec![rv(6.0, 4.0), rv(6.0, 4.0)],
        )
        .unwrap();
        let (ok, v) = check_feasible(&p, &Placement::new(vec![0, 0]));
        assert!(!ok);
        assert_eq!(
            v,
            vec![Violation {
                server: 0,
                resource: Resource::Cpu,
                overload: 2.0
            }]
        );
        assert!(check_feasible(&p, &Placement::new(vec![0, 1])).0);

        let exact =
            PlacementProblem::with_equal_weights(vec![rv(10.0, 16.0)], vec![rv(4.0, 10.0), rv(6.0, 6.0)]).unwrap();
        assert!(check_feasible(&exact, &Placement::new(vec![0, 0])).0);
    }

    #[test]
    fn infeasible_still_evaluated() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0)], vec![rv(8.0, 8.0), rv(4.0, 4.0)]).unwrap();
        let o = evaluate(&p, &Placement::new(vec![0, 0]));
        assert!(!o.feasible);
        assert!((o.utilization - 1.2).abs() < 1e-12);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&ov(0.9, 0.1, 0.5, true), &ov(0.8, 0.2, 0.6, true)));
        assert!(!dominates(&ov(0.9, 0.3, 0.5, true), &ov(0.8, 0.2, 0.6, true)));
        assert!(dominates(&ov(0.1, 0.9, 1.0, true), &ov(0.99, 0.0, 0.1, false)));
        assert!(!dominates(&ov(0.99, 0.0, 0.1, false), &ov(0.1, 0.9, 1.0, true)));
        let a = ov(0.5, 0.1, 0.5, true);
        assert!(!dominates(&a, &a));
    }

    #[test]
    fn scalarize_examples() {
        let w = ScalarWeights::new(1.0, 0.0, 0.0, 10.0).unwrap();
        assert_eq!(scalarize(&ov(1.0, 0.0, 0.7, true), &w), 0.0);
        let thirds = ScalarWeights::default();
        let s = scalarize(&ov(0.5, 0.3, 0.5, true), &thirds);
        assert!((s - 1.3 / 3.0).abs() < 1e-12);
        let infeasible = scalarize(&ov(0.5, 0.3, 0.5, false), &thirds);
        assert!((infeasible - s - 10.0).abs() < 1e-12);
    }

    #[test]
    fn weights_validated() {
        assert!(ScalarWeights::new(0.5, 0.5, 0.5, 1.0).is_err());
        assert!(ScalarWeights::new(-0.5, 1.0, 0.5, 1.0).is_err());
        assert!(ScalarWeights::new(0.5, 0.5, 0.0, 0.0).is_err());
        assert!(ScalarWeights::default().validate().is_ok());
    }
}
