//! Comparison solvers: a genetic algorithm, particle swarm optimization,
//! first-fit decreasing and an exhaustive oracle for tiny instances.

mod brute;
mod ffd;
mod ga;
mod pso;

pub use brute::{brute_force, BruteForceResult, BRUTE_FORCE_LIMIT};
pub use ffd::solve_ffd;
pub use ga::{solve_ga, solve_ga_traced, GaConfig};
pub use pso::{solve_pso, solve_pso_traced, PsoConfig};
