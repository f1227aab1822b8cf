//! Virtual machine placement with a learning-automata guided multi-objective
//! cuckoo search, plus baseline solvers and a synthetic instance generator.
//!
//! The shared data types ([`PlacementProblem`], [`Placement`],
//! [`ObjectiveVector`], [`SolveResult`]) are re-exported at the crate root.

pub mod archive;
pub mod automata;
pub mod baselines;
pub mod cuckoo;
pub mod error;
pub mod instance;
pub mod levy;
pub mod objectives;
pub mod repair;
pub mod search;
pub mod seed;

pub use automata::{Automaton, AutomatonBank};
pub use baselines::{brute_force, solve_ffd, solve_ga, solve_pso, BruteForceResult, GaConfig, PsoConfig};
pub use cuckoo::{solve, solve_traced, AbandonRule, LaScope, SolverConfig};
pub use error::{Error, Result};
pub use instance::{generate_instance, total_capacity, GeneratorConfig, Placement, PlacementProblem, ResourceVector};
pub use objectives::{check_feasible, dominates, evaluate, scalarize, ObjectiveVector, ScalarWeights, ServerLoad};
pub use repair::repair;
pub use search::{decode, CycleTrace, Nest, SolveResult};
