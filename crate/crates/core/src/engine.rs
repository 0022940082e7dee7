//! Deterministic replay of an offload plan: chain scheduling in sequential
//! or distributed mode, transfer timing, VM crash injection with data
//! resend, and makespan/byte accounting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::callgraph::{CallGraph, Chain, ChainDecomposition, Stage};
use crate::error::EngineError;

/// Reserved assignment target for chains that must stay on the device.
pub const DEVICE_ID: &str = "device";

/// A cloud VM. `pe_count` and `ram_mb` are carried as provisioning metadata;
/// chain execution is single-stream, so they do not affect timing. `mips`
/// feeds host utilization in the energy model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmSpec {
    pub id: String,
    #[serde(default = "default_vm_mips")]
    pub mips: f64,
    #[serde(default = "default_vm_pe")]
    pub pe_count: u32,
    #[serde(default = "default_vm_ram")]
    pub ram_mb: u64,
}

fn default_vm_mips() -> f64 {
    10_000.0
}
fn default_vm_pe() -> u32 {
    2
}
fn default_vm_ram() -> u64 {
    1024
}

impl VmSpec {
    /// The stock profile: 10000 MIPS, 2 processing elements, 1024 MB RAM.
    pub fn standard(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            mips: default_vm_mips(),
            pe_count: default_vm_pe(),
            ram_mb: default_vm_ram(),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), EngineError> {
        if self.id.is_empty() || self.id == DEVICE_ID {
            return Err(EngineError::BadInput(format!(
                "VM id '{}' is reserved or empty",
                self.id
            )));
        }
        if !self.mips.is_finite() || self.mips <= 0.0 {
            return Err(EngineError::BadInput(format!(
                "VM '{}' mips must be positive, got {}",
                self.id, self.mips
            )));
        }
        if self.pe_count == 0 || self.ram_mb == 0 {
            return Err(EngineError::BadInput(format!(
                "VM '{}' pe_count and ram_mb must be at least 1",
                self.id
            )));
        }
        Ok(())
    }
}

/// Link between the device and the cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub bandwidth_mbps: f64,
    #[serde(default)]
    pub latency_s: f64,
}

impl NetworkSpec {
    /// Effectively free transfers; useful when only execution time matters.
    pub fn instant() -> Self {
        Self {
            bandwidth_mbps: 1e12,
            latency_s: 0.0,
        }
    }

    /// Seconds to move `bytes` one way. Every transfer pays the link latency
    /// once, even when empty.
    pub fn transfer_time_s(&self, bytes: u64) -> f64 {
        bytes as f64 * 8.0 / (self.bandwidth_mbps * 1e6) + self.latency_s
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if !self.bandwidth_mbps.is_finite() || self.bandwidth_mbps <= 0.0 {
            return Err(EngineError::BadInput(format!(
                "bandwidth_mbps must be positive, got {}",
                self.bandwidth_mbps
            )));
        }
        if !self.latency_s.is_finite() || self.latency_s < 0.0 {
            return Err(EngineError::BadInput(format!(
                "latency_s must be finite and >= 0, got {}",
                self.latency_s
            )));
        }
        Ok(())
    }
}

impl Default for NetworkSpec {
    fn default() -> Self {
        Self::instant()
    }
}

/// How offloadable chains are placed on the fleet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecMode {
    /// Every offloadable chain runs back-to-back on one VM.
    Sequential,
    /// Chains of one parallel stage run concurrently on distinct VMs.
    Distributed,
}

impl fmt::Display for ExecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExecMode::Sequential => "sequential",
            ExecMode::Distributed => "distributed",
        })
    }
}

/// A complete placement decision for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffloadPlan {
    pub mode: ExecMode,
    pub decomposition: ChainDecomposition,
    /// Chain head id -> VM id; non-offloadable chains map to "device".
    pub assignments: BTreeMap<String, String>,
    pub fleet: Vec<VmSpec>,
}

/// When a crash fires. At most one crash per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrashTrigger {
    /// Fraction in [0, 1] of the first hosted chain's execution, measured
    /// from that chain's upload completion.
    AtFraction(f64),
    /// Absolute simulation time in seconds.
    AtTime(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrashEvent {
    pub vm_id: String,
    pub trigger: CrashTrigger,
}

impl CrashEvent {
    /// Parses the flag grammar `<vm>@<fraction>` or `<vm>@t=<seconds>`.
    pub fn parse_flag(s: &str) -> Result<Self, EngineError> {
        let bad = |msg: String| EngineError::BadInput(msg);
        let (vm, spec) = s.split_once('@').ok_or_else(|| {
            bad(format!(
                "crash flag '{s}' must look like <vm>@<fraction> or <vm>@t=<seconds>"
            ))
        })?;
        if vm.is_empty() {
            return Err(bad(format!("crash flag '{s}' has an empty VM id")));
        }
        let trigger = if let Some(t) = spec.strip_prefix("t=") {
            let secs: f64 = t
                .parse()
                .map_err(|_| bad(format!("crash time '{t}' is not a number")))?;
            CrashTrigger::AtTime(secs)
        } else {
            let frac: f64 = spec
                .parse()
                .map_err(|_| bad(format!("crash fraction '{spec}' is not a number")))?;
            CrashTrigger::AtFraction(frac)
        };
        let event = Self {
            vm_id: vm.to_string(),
            trigger,
        };
        event.validate()?;
        Ok(event)
    }

    pub(crate) fn validate(&self) -> Result<(), EngineError> {
        match self.trigger {
            CrashTrigger::AtFraction(f) => {
                if !f.is_finite() || !(0.0..=1.0).contains(&f) {
                    return Err(EngineError::BadInput(format!(
                        "crash fraction must lie in [0, 1], got {f}"
                    )));
                }
            }
            CrashTrigger::AtTime(t) => {
                if !t.is_finite() || t < 0.0 {
                    return Err(EngineError::BadInput(format!(
                        "crash time must be finite and >= 0, got {t}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    TransferStart,
    TransferEnd,
    ExecStart,
    ExecEnd,
    Crash,
    Reprovision,
}

/// One audit record; the trace carries enough events to re-derive the
/// makespan by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub t_s: f64,
    pub kind: EventKind,
    pub subject: String,
}

/// A closed interval during which a VM executes chain work; feeds host
/// utilization in the energy model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusyInterval {
    pub vm_id: String,
    pub start_s: f64,
    pub end_s: f64,
    pub mips: f64,
}

/// Everything measured during one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub mode: ExecMode,
    pub makespan_s: f64,
    /// Planned upload bytes per VM, crash resend excluded.
    pub per_vm_bytes: BTreeMap<String, u64>,
    pub total_offloaded_bytes: u64,
    pub resend_bytes: u64,
    pub resend_time_s: f64,
    /// Seconds the device spends executing its own chains.
    pub device_busy_s: f64,
    /// Total transfer seconds, uploads and returns, resend included.
    pub transfer_time_s: f64,
    pub vm_busy: Vec<BusyInterval>,
    pub event_trace: Vec<TraceEvent>,
}

/// Assigns chains to VMs. Sequential mode sends every offloadable chain to
/// the first VM in id order; distributed mode deals offloadable chains
/// round-robin over the id-sorted fleet, which lands the chains of any one
/// stage on pairwise-distinct VMs. Non-offloadable chains go to "device".
pub fn build_plan(
    decomposition: &ChainDecomposition,
    mode: ExecMode,
    fleet: &[VmSpec],
) -> Result<OffloadPlan, EngineError> {
    if fleet.is_empty() {
        return Err(EngineError::EmptyFleet);
    }
    let mut fleet = fleet.to_vec();
    fleet.sort_by(|a, b| a.id.cmp(&b.id));
    for vm in &fleet {
        vm.validate()?;
    }
    for pair in fleet.windows(2) {
        if pair[0].id == pair[1].id {
            return Err(EngineError::BadInput(format!(
                "duplicate VM id '{}' in fleet",
                pair[0].id
            )));
        }
    }

    if mode == ExecMode::Distributed {
        for stage in &decomposition.stages {
            let offloadable: Vec<&Chain> =
                stage.chains().iter().filter(|c| c.offloadable).collect();
            if offloadable.len() > fleet.len() {
                return Err(EngineError::InsufficientFleet {
                    stage_chains: offloadable.iter().map(|c| c.head().to_string()).collect(),
                    needed: offloadable.len(),
                    available: fleet.len(),
                });
            }
        }
    }

    let mut assignments = BTreeMap::new();
    let mut next = 0usize;
    for chain in decomposition.chains() {
        let target = if !chain.offloadable {
            DEVICE_ID.to_string()
        } else {
            match mode {
                ExecMode::Sequential => fleet[0].id.clone(),
                ExecMode::Distributed => {
                    let vm = fleet[next % fleet.len()].id.clone();
                    next += 1;
                    vm
                }
            }
        };
        assignments.insert(chain.head().to_string(), target);
    }

    Ok(OffloadPlan {
        mode,
        decomposition: decomposition.clone(),
        assignments,
        fleet,
    })
}

fn validate_plan(graph: &CallGraph, plan: &OffloadPlan) -> Result<(), EngineError> {
    if plan.fleet.is_empty() {
        return Err(EngineError::EmptyFleet);
    }
    let mut vm_ids = BTreeSet::new();
    for vm in &plan.fleet {
        vm.validate()?;
        if !vm_ids.insert(vm.id.as_str()) {
            return Err(EngineError::BadInput(format!(
                "duplicate VM id '{}' in fleet",
                vm.id
            )));
        }
    }

    // The chains must partition the graph's nodes exactly.
    let mut covered = BTreeSet::new();
    for chain in plan.decomposition.chains() {
        for id in &chain.node_ids {
            if graph.node(id).is_none() {
                return Err(EngineError::BadInput(format!(
                    "plan chain references unknown node '{id}'"
                )));
            }
            if !covered.insert(id.as_str()) {
                return Err(EngineError::BadInput(format!(
                    "node '{id}' appears in more than one chain"
                )));
            }
        }
    }
    if covered.len() != graph.nodes.len() {
        return Err(EngineError::BadInput(
            "plan chains do not cover every graph node".to_string(),
        ));
    }

    let mut cloud_vms_used = BTreeSet::new();
    for chain in plan.decomposition.chains() {
        let assigned = plan.assignments.get(chain.head());
        if chain.offloadable {
            let vm =
                assigned.ok_or_else(|| EngineError::UnassignedChain(chain.head().to_string()))?;
            if !vm_ids.contains(vm.as_str()) {
                return Err(EngineError::UnknownAssignment {
                    chain: chain.head().to_string(),
                    vm: vm.clone(),
                });
            }
            cloud_vms_used.insert(vm.as_str());
        } else if let Some(vm) = assigned {
            if vm != DEVICE_ID {
                return Err(EngineError::BadInput(format!(
                    "non-offloadable chain '{}' must stay on the device, not '{vm}'",
                    chain.head()
                )));
            }
        }
    }

    match plan.mode {
        ExecMode::Sequential => {
            if cloud_vms_used.len() > 1 {
                return Err(EngineError::BadInput(format!(
                    "sequential mode requires a single VM, found {:?}",
                    cloud_vms_used
                )));
            }
        }
        ExecMode::Distributed => {
            for stage in &plan.decomposition.stages {
                if let Stage::Parallel(chains) = stage {
                    let mut seen = BTreeSet::new();
                    for chain in chains.iter().filter(|c| c.offloadable) {
                        let vm = &plan.assignments[chain.head()];
                        if !seen.insert(vm.as_str()) {
                            return Err(EngineError::BadInput(format!(
                                "chains of one parallel stage share VM '{vm}'"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Per-chain physical quantities, summed over member nodes.
struct ChainPhys {
    head: String,
    /// None for device chains.
    vm: Option<String>,
    upload_bytes: u64,
    return_bytes: u64,
    exec_s: f64,
}

fn chain_phys(graph: &CallGraph, chain: &Chain, plan: &OffloadPlan) -> ChainPhys {
    let mut upload_bytes = 0u64;
    let mut return_bytes = 0u64;
    let mut exec_s = 0.0;
    for id in &chain.node_ids {
        let node = graph.node(id).expect("validated");
        if chain.offloadable {
            upload_bytes += node.upload_bytes;
            return_bytes += node.return_bytes;
            exec_s += node.cloud_s;
        } else {
            exec_s += node.mobile_s;
        }
    }
    ChainPhys {
        head: chain.head().to_string(),
        vm: chain
            .offloadable
            .then(|| plan.assignments[chain.head()].clone()),
        upload_bytes,
        return_bytes,
        exec_s,
    }
}

#[derive(Default)]
struct PassOutput {
    makespan_s: f64,
    events: Vec<TraceEvent>,
    busy: Vec<BusyInterval>,
    device_busy_s: f64,
    transfer_time_s: f64,
    resend_bytes: u64,
    resend_time_s: f64,
    /// (vm, upload_end, exec duration) per cloud chain in plan order, from
    /// the undisturbed part of the timeline; used to resolve at-fraction
    /// crash triggers.
    cloud_schedules: Vec<(String, f64, f64)>,
}

fn run_pass(
    graph: &CallGraph,
    plan: &OffloadPlan,
    network: &NetworkSpec,
    crash: Option<(&str, f64)>,
) -> PassOutput {
    let vm_mips: BTreeMap<&str, f64> = plan
        .fleet
        .iter()
        .map(|vm| (vm.id.as_str(), vm.mips))
        .collect();
    let mut out = PassOutput::default();
    let mut crash_pending = crash;

    let mut t = 0.0f64;
    for stage in &plan.decomposition.stages {
        let stage_start = t;
        let mut stage_end = stage_start;
        let mut cursor = stage_start;
        for chain in stage.chains() {
            let start = match plan.mode {
                ExecMode::Sequential => cursor,
                ExecMode::Distributed => stage_start,
            };
            let phys = chain_phys(graph, chain, plan);
            let end = match &phys.vm {
                None => schedule_device_chain(&mut out, &phys, start),
                Some(vm) => {
                    let mips = vm_mips[vm.as_str()];
                    schedule_cloud_chain(&mut out, &phys, start, network, mips, &mut crash_pending)
                }
            };
            cursor = end;
            stage_end = stage_end.max(end);
        }
        t = stage_end;
    }
    out.makespan_s = t;

    // A crash that never intersected a hosted chain is still an event.
    if let Some((vm, t_c)) = crash_pending {
        out.events.push(TraceEvent {
            t_s: t_c,
            kind: EventKind::Crash,
            subject: vm.to_string(),
        });
        out.events.push(TraceEvent {
            t_s: t_c,
            kind: EventKind::Reprovision,
            subject: vm.to_string(),
        });
    }

    out.events.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
    out
}

fn schedule_device_chain(out: &mut PassOutput, phys: &ChainPhys, start: f64) -> f64 {
    let end = start + phys.exec_s;
    let subject = format!("{} on device", phys.head);
    out.events.push(TraceEvent {
        t_s: start,
        kind: EventKind::ExecStart,
        subject: subject.clone(),
    });
    out.events.push(TraceEvent {
        t_s: end,
        kind: EventKind::ExecEnd,
        subject,
    });
    out.device_busy_s += phys.exec_s;
    end
}

#[allow(clippy::too_many_arguments)]
fn schedule_cloud_chain(
    out: &mut PassOutput,
    phys: &ChainPhys,
    start: f64,
    network: &NetworkSpec,
    mips: f64,
    crash_pending: &mut Option<(&str, f64)>,
) -> f64 {
    let vm = phys.vm.as_deref().expect("cloud chain");
    let up_t = network.transfer_time_s(phys.upload_bytes);
    let ret_t = network.transfer_time_s(phys.return_bytes);
    let upload_end = start + up_t;
    let exec_end = upload_end + phys.exec_s;
    let completion = exec_end + ret_t;

    let upload_subject = format!("upload {} -> {vm}", phys.head);
    let exec_subject = format!("{} on {vm}", phys.head);
    let return_subject = format!("return {} <- {vm}", phys.head);

    // The crash hits this chain iff it lands inside the chain's occupancy
    // window [upload start, completion]; a crash at exactly the completion
    // instant still forces the restart.
    let hit = match crash_pending {
        Some((cv, t_c)) if *cv == vm && *t_c >= start && *t_c <= completion => Some(*t_c),
        _ => None,
    };

    out.cloud_schedules
        .push((vm.to_string(), upload_end, phys.exec_s));

    let Some(t_c) = hit else {
        push_cloud_phase_events(
            out,
            start,
            upload_end,
            exec_end,
            completion,
            &upload_subject,
            &exec_subject,
            &return_subject,
            f64::INFINITY,
        );
        out.transfer_time_s += up_t + ret_t;
        push_busy(out, vm, mips, upload_end, exec_end);
        return completion;
    };

    *crash_pending = None;

    // Events that actually happened before the crash instant.
    push_cloud_phase_events(
        out,
        start,
        upload_end,
        exec_end,
        completion,
        &upload_subject,
        &exec_subject,
        &return_subject,
        t_c,
    );
    // Transfer seconds the device really spent before the crash.
    out.transfer_time_s += (t_c.min(upload_end) - start).max(0.0);
    out.transfer_time_s += (t_c - exec_end).clamp(0.0, ret_t);
    push_busy(out, vm, mips, upload_end, t_c.min(exec_end));

    out.events.push(TraceEvent {
        t_s: t_c,
        kind: EventKind::Crash,
        subject: vm.to_string(),
    });
    out.events.push(TraceEvent {
        t_s: t_c,
        kind: EventKind::Reprovision,
        subject: vm.to_string(),
    });

    // Full redo on the reprovisioned VM: re-upload, re-execute, return.
    let r_upload_end = t_c + up_t;
    let r_exec_end = r_upload_end + phys.exec_s;
    let r_completion = r_exec_end + ret_t;
    push_cloud_phase_events(
        out,
        t_c,
        r_upload_end,
        r_exec_end,
        r_completion,
        &upload_subject,
        &exec_subject,
        &return_subject,
        f64::INFINITY,
    );
    out.transfer_time_s += up_t + ret_t;
    out.resend_bytes += phys.upload_bytes;
    out.resend_time_s += up_t;
    push_busy(out, vm, mips, r_upload_end, r_exec_end);
    r_completion
}

/// Emits the upload/exec/return phase events of one attempt, dropping any
/// event at or after `cutoff` (the crash instant).
#[allow(clippy::too_many_arguments)]
fn push_cloud_phase_events(
    out: &mut PassOutput,
    start: f64,
    upload_end: f64,
    exec_end: f64,
    completion: f64,
    upload_subject: &str,
    exec_subject: &str,
    return_subject: &str,
    cutoff: f64,
) {
    let phases = [
        (start, EventKind::TransferStart, upload_subject),
        (upload_end, EventKind::TransferEnd, upload_subject),
        (upload_end, EventKind::ExecStart, exec_subject),
        (exec_end, EventKind::ExecEnd, exec_subject),
        (exec_end, EventKind::TransferStart, return_subject),
        (completion, EventKind::TransferEnd, return_subject),
    ];
    for (t_s, kind, subject) in phases {
        if t_s < cutoff {
            out.events.push(TraceEvent {
                t_s,
                kind,
                subject: subject.to_string(),
            });
        }
    }
}

fn push_busy(out: &mut PassOutput, vm: &str, mips: f64, start_s: f64, end_s: f64) {
    if end_s > start_s {
        out.busy.push(BusyInterval {
            vm_id: vm.to_string(),
            start_s,
            end_s,
            mips,
        });
    }
}

/// Replays the plan over the network, optionally injecting one VM crash, and
/// returns the measured run.
///
/// Makespan is built stage by stage: within a stage, sequential mode runs
/// chains back-to-back while distributed mode overlaps them, and the stage
/// completes when its slowest chain does. A crashed VM is reprovisioned on
/// the spot and its resident chain restarts from the crash instant, paying
/// its upload again; those bytes and seconds are itemized as resend.
pub fn simulate(
    graph: &CallGraph,
    plan: &OffloadPlan,
    network: &NetworkSpec,
    crash: Option<&CrashEvent>,
) -> Result<SimReport, EngineError> {
    network.validate()?;
    validate_plan(graph, plan)?;

    let resolved_crash = match crash {
        None => None,
        Some(event) => {
            event.validate()?;
            if !plan.fleet.iter().any(|vm| vm.id == event.vm_id) {
                return Err(EngineError::UnknownVm(event.vm_id.clone()));
            }
            let t_c = match event.trigger {
                CrashTrigger::AtTime(t) => t,
                CrashTrigger::AtFraction(f) => {
                    // Resolve against the undisturbed timeline; nothing
                    // before the crash instant differs between passes.
                    let nominal = run_pass(graph, plan, network, None);
                    nominal
                        .cloud_schedules
                        .iter()
                        .find(|(vm, _, _)| *vm == event.vm_id)
                        .map(|(_, upload_end, exec_s)| upload_end + f * exec_s)
                        .unwrap_or(0.0)
                }
            };
            Some((event.vm_id.as_str(), t_c))
        }
    };

    let pass = run_pass(graph, plan, network, resolved_crash);

    let mut per_vm_bytes: BTreeMap<String, u64> =
        plan.fleet.iter().map(|vm| (vm.id.clone(), 0)).collect();
    for chain in plan.decomposition.chains() {
        if chain.offloadable {
            let phys = chain_phys(graph, chain, plan);
            *per_vm_bytes.get_mut(phys.vm.as_deref().unwrap()).unwrap() += phys.upload_bytes;
        }
    }
    let total_offloaded_bytes = per_vm_bytes.values().sum();

    Ok(SimReport {
        mode: plan.mode,
        makespan_s: pass.makespan_s,
        per_vm_bytes,
        total_offloaded_bytes,
        resend_bytes: pass.resend_bytes,
        resend_time_s: pass.resend_time_s,
        device_busy_s: pass.device_busy_s,
        transfer_time_s: pass.transfer_time_s,
        vm_busy: pass.busy,
        event_trace: pass.events,
    })
}

/// Runtime saved by going distributed, as a percent of the sequential time.
pub fn improvement_percent(sequential_s: f64, distributed_s: f64) -> Result<f64, EngineError> {
    if !sequential_s.is_finite() || sequential_s <= 0.0 {
        return Err(EngineError::BadInput(format!(
            "sequential makespan must be positive, got {sequential_s}"
        )));
    }
    Ok(100.0 * (sequential_s - distributed_s) / sequential_s)
}

/// Worst-case single-crash resend for a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResendBound {
    pub bytes: u64,
    /// Relative to the whole application's upload bytes.
    pub percent_of_app: f64,
}

/// The most data any single crash can force back over the link: the largest
/// per-VM share of the planned uploads.
pub fn max_resend(graph: &CallGraph, plan: &OffloadPlan) -> Result<ResendBound, EngineError> {
    validate_plan(graph, plan)?;
    let mut per_vm: BTreeMap<&str, u64> = plan.fleet.iter().map(|vm| (vm.id.as_str(), 0)).collect();
    for chain in plan.decomposition.chains() {
        if chain.offloadable {
            let phys = chain_phys(graph, chain, plan);
            *per_vm.get_mut(phys.vm.as_deref().unwrap()).unwrap() += phys.upload_bytes;
        }
    }
    let bytes = per_vm.values().copied().max().unwrap_or(0);
    let total = graph.total_upload_bytes();
    let percent_of_app = if total == 0 {
        0.0
    } else {
        100.0 * bytes as f64 / total as f64
    };
    Ok(ResendBound {
        bytes,
        percent_of_app,
    })
}
