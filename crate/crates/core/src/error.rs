//! Error types shared across the crate.

use thiserror::Error;

use crate::callgraph::Violation;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node id '{0}'")]
    DuplicateNode(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("invalid graph: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("graph text, line {line}: {message}")]
    TextParse { line: usize, message: String },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("{0}")]
    BadInput(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("no VMs defined; at least one is required to offload")]
    EmptyFleet,
    #[error("stage with chains {stage_chains:?} needs {needed} VMs but the fleet has {available}")]
    InsufficientFleet {
        stage_chains: Vec<String>,
        needed: usize,
        available: usize,
    },
    #[error("crash references unknown VM '{0}'")]
    UnknownVm(String),
    #[error("chain '{chain}' is assigned to unknown VM '{vm}'")]
    UnknownAssignment { chain: String, vm: String },
    #[error("offloadable chain '{0}' has no VM assignment")]
    UnassignedChain(String),
    #[error("{0}")]
    BadInput(String),
}

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("VM '{0}' is not placed on any host")]
    UnhostedVm(String),
    #[error("VM '{0}' is placed on more than one host")]
    MultiplyHostedVm(String),
    #[error("{0}")]
    BadInput(String),
}

/// Umbrella error for report assembly, which crosses module boundaries.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Energy(#[from] EnergyError),
    #[error("{0}")]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    BadInput(String),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("unsupported schema version {0}; this build reads schema 1")]
    SchemaVersion(u32),
    #[error("{0}")]
    BadInput(String),
}
