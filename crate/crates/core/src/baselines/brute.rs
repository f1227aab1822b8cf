use crate::archive::ParetoArchive;
use crate::error::{Error, Result};
use crate::instance::{Placement, PlacementProblem};
use crate::objectives::{evaluate, scalarize, ObjectiveVector, ScalarWeights};

/// Largest number of placements `brute_force` will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Exhaustive optimum and Pareto set of a tiny instance.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// First placement (in enumeration order) attaining the minimum scalar.
    pub placement: Placement,
    pub objectives: ObjectiveVector,
    pub scalar: f64,
    /// Non-dominated set, one representative placement per distinct
    /// objective vector.
    pub pareto: Vec<(Placement, ObjectiveVector)>,
    pub enumerated: u64,
}

/// Enumerates all `m^n` placements, without repair.
pub fn brute_force(p: &PlacementProblem, w: &ScalarWeights) -> Result<BruteForceResult> {
    let n = p.num_vms();
    let m = p.num_servers();
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| (m as u64).checked_pow(e))
        .filter(|&t| t <= BRUTE_FORCE_LIMIT)
        .ok_or(Error::InstanceTooLarge {
            servers: m,
            vms: n,
            limit: BRUTE_FORCE_LIMIT,
        })?;

    let mut digits = vec![0usize; n];
    let mut best: Option<(Placement, ObjectiveVector, f64)> = None;
    let mut front: ParetoArchive<Placement> = ParetoArchive::new(usize::MAX);
    for _ in 0..total {
        let s = Placement::new(digits.clone());
        let o = evaluate(p, &s);
        let scalar = scalarize(&o, w);
        if best.as_ref().is_none_or(|(_, _, b)| scalar < *b) {
            best = Some((s.clone(), o, scalar));
        }
        front.offer(&o, || s);
        // Odometer increment, first VM fastest.
        for d in digits.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    let (placement, objectives, scalar) = best.expect("m^n >= 1");
    Ok(BruteForceResult {
        placement,
        objectives,
        scalar,
        pareto: front.into_entries().into_iter().map(|(o, s)| (s, o)).collect(),
        enumerated: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ResourceVector;
    use crate::objectives::dominates;

    fn rv(cpu: f64, mem: f64) -> ResourceVector {
        ResourceVector::new(cpu, mem)
    }

    #[test]
    fn even_split_optimum() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0); 2], vec![rv(5.0, 5.0); 4]).unwrap();
        let r = brute_force(&p, &ScalarWeights::default()).unwrap();
        assert_eq!(r.enumerated, 16);
        assert_eq!(r.objectives.load_balance, 0.0);
        assert_eq!(r.objectives.utilization, 1.0);
        assert_eq!(r.objectives.active_fraction, 1.0);
        assert!(r.objectives.feasible);
        assert!((r.scalar - 1.0 / 3.0).abs() < 1e-15);
        for (_, a) in &r.pareto {
            for (_, b) in &r.pareto {
                assert!(!dominates(a, b));
            }
        }
    }

    #[test]
    fn single_vm_picks_best_server() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 10.0), rv(4.0, 4.0), rv(20.0, 20.0)],
            vec![rv(4.0, 4.0)],
        )
        .unwrap();
        let r = brute_force(&p, &ScalarWeights::default()).unwrap();
        assert_eq!(r.placement.to_one_based(), vec![2]);
    }

    #[test]
    fn guard_rejects_large_instances() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0); 10], vec![rv(1.0, 1.0); 8]).unwrap();
        assert!(matches!(
            brute_force(&p, &ScalarWeights::default()),
            Err(Error::InstanceTooLarge { .. })
        ));
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0); 2], vec![rv(1.0, 1.0); 200]).unwrap();
        assert!(brute_force(&p, &ScalarWeights::default()).is_err());
    }
}
