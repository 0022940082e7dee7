//! Deterministic simulator and partition toolkit for mobile-to-cloud
//! computation offloading.
//!
//! Applications are modeled as call-link graphs whose independent offloadable
//! chains can run either back-to-back on one VM or spread across a fleet. The
//! crate extracts those chains, sizes the offloading decision with simple
//! energy and utility formulas, replays plans under VM crashes with data
//! resend accounting, and reports device plus datacenter energy.

pub mod callgraph;
pub mod energy;
pub mod engine;
pub mod error;
pub mod partition;
pub mod report;
pub mod scenario;

pub use callgraph::{
    extract_chains, independent, parse_graph_text, validate_graph, CallGraph, Chain,
    ChainDecomposition, MethodNode, Stage, Violation,
};
pub use energy::{
    cloud_energy, integrate_host_energy, mobile_energy, CloudEnergyReport, DevicePowerProfile,
    HostSpec, MobileEnergyReport,
};
pub use engine::{
    build_plan, improvement_percent, max_resend, simulate, CrashEvent, CrashTrigger, ExecMode,
    NetworkSpec, OffloadPlan, ResendBound, SimReport, VmSpec,
};
pub use error::{EnergyError, EngineError, GraphError, PartitionError, RunError, ScenarioError};
pub use partition::{
    best_offload_interval, break_even_decision, energy_saved, energy_saved_speedup, fu_utilities,
    BreakEvenDecision, DecisionInputs, MethodCost, OffloadChoice,
};
pub use report::{
    energy_compare, partition_report, resend_sweep, run_report, EnergyCompareReport,
    EnergyCompareRow, ModeRun, OutputFormat, PartitionReport, ReportBundle, SweepReport, SweepRow,
};
pub use scenario::{load_scenario, load_scenario_str, DeviceSpec, Mode, Scenario, SCHEMA_VERSION};
