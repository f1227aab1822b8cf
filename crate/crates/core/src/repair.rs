//! Greedy capacity repair shared by every population solver.

use crate::instance::{Placement, PlacementProblem, ResourceVector};
use crate::objectives::exceeds;

fn overloaded(used: ResourceVector, cap: ResourceVector) -> bool {
    exceeds(used.cpu, cap.cpu) || exceeds(used.mem, cap.mem)
}

fn fits(used: ResourceVector, add: ResourceVector, cap: ResourceVector) -> bool {
    !overloaded(used + add, cap)
}

/// Moves VMs off overloaded servers until the placement is feasible or no
/// move is possible.
///
/// Overloaded servers are visited in index order. On each, VMs are tried from
/// the largest (weighted demand relative to mean server capacity) down; the
/// first one that some other server can host moves to the host with the most
/// weighted slack. When no single move exists, a VM on an overloaded server
/// is exchanged with one elsewhere that is smaller in every overloaded
/// resource, provided the other server stays within capacity. When neither
/// step applies the loop stops and the placement stays infeasible. At most
/// `n` moves (single moves or exchanges) are made; returns the number
/// performed.
pub fn repair_in_place(p: &PlacementProblem, s: &mut Placement) -> usize {
    let n = p.num_vms();
    let caps = p.servers();
    let mean = p.mean_capacity();
    let weigh = |r: ResourceVector| p.alpha() * r.cpu / mean.cpu + p.beta() * r.mem / mean.mem;
    let sizes: Vec<f64> = p.vms().iter().map(|&v| weigh(v)).collect();

    let mut used = vec![ResourceVector::ZERO; caps.len()];
    for (vm, &server) in p.vms().iter().zip(s.assign()) {
        used[server] += *vm;
    }
    // Hosted VMs per server, largest first (ties by index).
    let rank = |a: &usize, b: &usize| sizes[*b].total_cmp(&sizes[*a]).then(a.cmp(b));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(rank);
    let mut hosted: Vec<Vec<usize>> = vec![Vec::new(); caps.len()];
    for &vm in &order {
        hosted[s.server_of(vm)].push(vm);
    }
    let relocate = |hosted: &mut [Vec<usize>], vm: usize, from: usize, to: usize| {
        let at = hosted[from]
            .iter()
            .position(|&v| v == vm)
            .expect("vm is hosted on its server");
        hosted[from].remove(at);
        let at = hosted[to].binary_search_by(|v| rank(v, &vm)).unwrap_or_else(|i| i);
        hosted[to].insert(at, vm);
    };

    let best_host = |used: &[ResourceVector], src: usize, demand: ResourceVector| -> Option<usize> {
        let mut target: Option<(usize, f64)> = None;
        for (j, (&u, &cap)) in used.iter().zip(caps).enumerate() {
            if j == src || !fits(u, demand, cap) {
                continue;
            }
            let slack = weigh(ResourceVector::new(cap.cpu - u.cpu, cap.mem - u.mem));
            if target.is_none_or(|(_, best)| slack > best) {
                target = Some((j, slack));
            }
        }
        target.map(|(j, _)| j)
    };

    let mut moves = 0;
    'outer: while moves < n {
        let sources: Vec<usize> = (0..caps.len()).filter(|&j| overloaded(used[j], caps[j])).collect();
        for &src in &sources {
            for k in 0..hosted[src].len() {
                let vm = hosted[src][k];
                let demand = p.vms()[vm];
                if let Some(dst) = best_host(&used, src, demand) {
                    used[src] -= demand;
                    used[dst] += demand;
                    s.set(vm, dst);
                    relocate(&mut hosted, vm, src, dst);
                    moves += 1;
                    continue 'outer;
                }
            }
        }
        // No single move helps: exchange a VM on an overloaded server with a
        // smaller one elsewhere, keeping the other server within capacity and
        // strictly shrinking every overloaded resource on the source.
        for &src in &sources {
            let over_cpu = exceeds(used[src].cpu, caps[src].cpu);
            let over_mem = exceeds(used[src].mem, caps[src].mem);
            let mut on_src = hosted[src].clone();
            on_src.sort_unstable();
            for a in on_src {
                let da = p.vms()[a];
                for b in (0..n).filter(|&i| s.server_of(i) != src) {
                    let db = p.vms()[b];
                    let shrinks = (!over_cpu || db.cpu < da.cpu) && (!over_mem || db.mem < da.mem);
                    if !shrinks {
                        continue;
                    }
                    let dst = s.server_of(b);
                    let mut after = used[dst];
                    after -= db;
                    if fits(after, da, caps[dst]) {
                        used[src] -= da;
                        used[src] += db;
                        used[dst] = after + da;
                        s.set(a, dst);
                        s.set(b, src);
                        relocate(&mut hosted, a, src, dst);
                        relocate(&mut hosted, b, dst, src);
                        moves += 1;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    moves
}

/// Returns a repaired copy of `s`. See [`repair_in_place`].
pub fn repair(p: &PlacementProblem, s: &Placement) -> Placement {
    let mut out = s.clone();
    repair_in_place(p, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{check_feasible, server_loads, violations};

    fn rv(cpu: f64, mem: f64) -> ResourceVector {
        ResourceVector::new(cpu, mem)
    }

    #[test]
    fn moves_one_vm_off_overloaded_server() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 10.0), rv(10.0, 10.0)],
            vec![rv(6.0, 1.0), rv(6.0, 1.0)],
        )
        .unwrap();
        let fixed = repair(&p, &Placement::new(vec![0, 0]));
        assert!(check_feasible(&p, &fixed).0);
        assert_eq!(fixed, Placement::new(vec![1, 0]));
    }

    #[test]
    fn feasible_input_unchanged() {
        let p =
            PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0), rv(10.0, 10.0)], vec![rv(5.0, 5.0); 4]).unwrap();
        let s = Placement::new(vec![0, 1, 0, 1]);
        let mut t = s.clone();
        assert_eq!(repair_in_place(&p, &mut t), 0);
        assert_eq!(t, s);
    }

    #[test]
    fn impossible_instance_left_infeasible() {
        let p = PlacementProblem::with_equal_weights(vec![rv(10.0, 10.0)], vec![rv(6.0, 6.0), rv(6.0, 6.0)]).unwrap();
        let s = repair(&p, &Placement::new(vec![0, 0]));
        assert_eq!(s, Placement::new(vec![0, 0]));
        assert!(!check_feasible(&p, &s).0);
    }

    #[test]
    fn picks_target_with_most_slack() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 10.0), rv(10.0, 10.0), rv(10.0, 10.0)],
            vec![rv(7.0, 7.0), rv(4.0, 4.0), rv(3.0, 3.0)],
        )
        .unwrap();
        // Server 1 holds 7 + 4 (overloaded), server 2 holds 3, server 3 is empty.
        let s = repair(&p, &Placement::new(vec![0, 0, 1]));
        assert_eq!(s, Placement::new(vec![2, 0, 1]));
    }

    #[test]
    fn never_adds_overloaded_servers() {
        let p = PlacementProblem::with_equal_weights(
            vec![rv(10.0, 20.0), rv(8.0, 8.0), rv(12.0, 6.0)],
            vec![rv(5.0, 3.0), rv(4.0, 6.0), rv(3.0, 5.0), rv(6.0, 2.0), rv(2.0, 7.0)],
        )
        .unwrap();
        for code in 0..3usize.pow(5) {
            let assign: Vec<usize> = (0..5).map(|i| (code / 3usize.pow(i)) % 3).collect();
            let s = Placement::new(assign);
            let before = violations(&p, &server_loads(&p, &s));
            let after = violations(&p, &server_loads(&p, &repair(&p, &s)));
            let count = |v: &[crate::objectives::Violation]| {
                let mut servers: Vec<usize> = v.iter().map(|x| x.server).collect();
                servers.dedup();
                servers.len()
            };
            assert!(count(&after) <= count(&before), "{s:?}");
        }
    }
}
