use crate::instance::{Placement, PlacementProblem, ResourceVector};
use crate::objectives::exceeds;

/// First-fit decreasing on the weighted demand measure.
///
/// VMs are taken largest first and put on the lowest-numbered server with
/// room in both resources. A VM that fits nowhere goes to the server with the
/// most weighted slack, which leaves the placement infeasible.
pub fn solve_ffd(p: &PlacementProblem) -> Placement {
    let mean = p.mean_capacity();
    let weigh = |r: ResourceVector| p.alpha() * r.cpu / mean.cpu + p.beta() * r.mem / mean.mem;
    let mut order: Vec<usize> = (0..p.num_vms()).collect();
    let sizes: Vec<f64> = p.vms().iter().map(|&v| weigh(v)).collect();
    order.sort_by(|&a, &b| sizes[b].total_cmp(&sizes[a]).then(a.cmp(&b)));

    let caps = p.servers();
    let mut used = vec![ResourceVector::ZERO; caps.len()];
    let mut assign = vec![0usize; p.num_vms()];
    for vm in order {
        let d = p.vms()[vm];
        let fits = |j: usize| {
            let u = used[j] + d;
            !exceeds(u.cpu, caps[j].cpu) && !exceeds(u.mem, caps[j].mem)
        };
        let target = (0..caps.len()).find(|&j| fits(j)).unwrap_or_else(|| {
            (0..caps.len())
                .map(|j| {
                    (
                        j,
                        weigh(ResourceVector::new(
                            caps[j].cpu - used[j].cpu,
                            caps[j].mem - used[j].mem,
                        )),
                    )
                })
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                )
                .0
        });
        used[target] += d;
        assign[vm] = target;
    }
    Placement::new(assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::check_feasible;

    fn rv(cpu: f64, mem: f64) -> ResourceVector {
        ResourceVector::new(cpu, mem)
    }

    #[test]
    fn packs_even_split() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0); 2], vec![rv(5.0, 5.0); 4]).unwrap();
        let s = solve_ffd(&p);
        assert_eq!(s.to_one_based(), vec![1, 1, 2, 2]);
        assert!(check_feasible(&p, &s).0);
        assert_eq!(solve_ffd(&p), s);
    }

    #[test]
    fn single_vm_goes_to_first_server() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0); 3], vec![rv(1.0, 1.0)]).unwrap();
        assert_eq!(solve_ffd(&p).to_one_based(), vec![1]);
    }

    #[test]
    fn largest_first() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 10.0); 2],
            vec![rv(3.0, 3.0), rv(8.0, 8.0), rv(6.0, 6.0)],
        )
        .unwrap();
        // 8 -> server 1, 6 -> server 2, 3 -> none fits server 1 (11), server 2 (9) fits.
        assert_eq!(solve_ffd(&p).to_one_based(), vec![2, 1, 2]);
    }

    #[test]
    fn overflow_falls_back_to_most_slack() {
        let p =
            PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0), rv(12.0, 12.0)], vec![rv(9.0, 9.0); 3]).unwrap();
        let s = solve_ffd(&p);
        assert!(!check_feasible(&p, &s).0);
        // Both 9s fill their servers; the third lands where 3 units remain.
        assert_eq!(s.to_one_based(), vec![1, 2, 2]);
    }
}
