use thiserror::Error;

/// Errors raised by problem construction, instance generation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("invalid generator config: {0}")]
    InvalidGeneratorConfig(String),

    #[error("infeasible generator config: {0}")]
    InfeasibleGeneratorConfig(String),

    #[error("invalid solver config: {0}")]
    InvalidConfig(String),

    #[error("action index {index} out of range for {actions} actions")]
    ActionOutOfRange { index: usize, actions: usize },

    #[error("no active servers")]
    NoActiveServers,

    #[error("instance too large for exhaustive search: {servers}^{vms} placements exceeds {limit}")]
    InstanceTooLarge { servers: usize, vms: usize, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
