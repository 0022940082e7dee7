//! Scenario files: a single versioned JSON document carrying the graph, the
//! device, the network, the VM fleet, host placement, and the optional
//! decision-math inputs for one run.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::callgraph::{validate_graph, CallGraph};
use crate::energy::{DevicePowerProfile, HostSpec};
use crate::engine::{CrashEvent, NetworkSpec, VmSpec};
use crate::error::ScenarioError;
use crate::partition::{DecisionInputs, MethodCost};

pub const SCHEMA_VERSION: u32 = 1;

/// The mobile device: its processor speed (descriptive metadata; node times
/// are given directly) and its power profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    #[serde(default = "default_device_mips")]
    pub mips: f64,
    #[serde(default)]
    pub power: DevicePowerProfile,
}

fn default_device_mips() -> f64 {
    1000.0
}

impl Default for DeviceSpec {
    fn default() -> Self {
        Self {
            mips: default_device_mips(),
            power: DevicePowerProfile::default(),
        }
    }
}

/// Which placement modes a run should cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sequential,
    Distributed,
    #[default]
    Both,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sequential => "sequential",
            Mode::Distributed => "distributed",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(Mode::Sequential),
            "distributed" => Ok(Mode::Distributed),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "mode must be sequential, distributed, or both, got '{other}'"
            )),
        }
    }
}

/// One self-contained run description. Loading normalizes it: the graph is
/// canonicalized and checked, fleet and hosts are sorted by id, and a
/// default host holding the whole fleet is filled in when none is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    pub graph: CallGraph,
    #[serde(default)]
    pub device: DeviceSpec,
    #[serde(default)]
    pub network: NetworkSpec,
    #[serde(default)]
    pub vm_fleet: Vec<VmSpec>,
    #[serde(default)]
    pub hosts: Vec<HostSpec>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crash: Option<CrashEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision_inputs: Option<DecisionInputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method_sequence: Option<Vec<MethodCost>>,
}

impl Scenario {
    fn normalize_and_validate(&mut self) -> Result<(), ScenarioError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ScenarioError::SchemaVersion(self.schema));
        }
        if self.name.is_empty() {
            return Err(ScenarioError::BadInput("scenario name is empty".into()));
        }

        let graph = CallGraph::new(
            self.graph.root.clone(),
            self.graph.nodes.clone(),
            self.graph.edges.clone(),
        )?;
        let violations = validate_graph(&graph);
        if !violations.is_empty() {
            let list = violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(ScenarioError::BadInput(format!("invalid graph: {list}")));
        }
        self.graph = graph;

        if !self.device.mips.is_finite() || self.device.mips <= 0.0 {
            return Err(ScenarioError::BadInput(format!(
                "device mips must be positive, got {}",
                self.device.mips
            )));
        }
        self.device
            .power
            .validate()
            .map_err(|e| ScenarioError::BadInput(e.to_string()))?;
        self.network
            .validate()
            .map_err(|e| ScenarioError::BadInput(e.to_string()))?;

        self.vm_fleet.sort_by(|a, b| a.id.cmp(&b.id));
        let mut fleet_ids = BTreeSet::new();
        for vm in &self.vm_fleet {
            vm.validate()
                .map_err(|e| ScenarioError::BadInput(e.to_string()))?;
            if !fleet_ids.insert(vm.id.as_str()) {
                return Err(ScenarioError::BadInput(format!(
                    "duplicate VM id '{}' in vm_fleet",
                    vm.id
                )));
            }
        }

        if self.hosts.is_empty() && !self.vm_fleet.is_empty() {
            self.hosts = vec![HostSpec::standard(
                "host1",
                self.vm_fleet.iter().map(|vm| vm.id.clone()).collect(),
            )];
        }
        self.hosts.sort_by(|a, b| a.id.cmp(&b.id));
        let mut host_ids = BTreeSet::new();
        let mut hosted = BTreeSet::new();
        for host in &self.hosts {
            host.validate()
                .map_err(|e| ScenarioError::BadInput(e.to_string()))?;
            if !host_ids.insert(host.id.as_str()) {
                return Err(ScenarioError::BadInput(format!(
                    "duplicate host id '{}'",
                    host.id
                )));
            }
            for vm in &host.vms {
                if !fleet_ids.contains(vm.as_str()) {
                    return Err(ScenarioError::BadInput(format!(
                        "host '{}' places unknown VM '{vm}'",
                        host.id
                    )));
                }
                if !hosted.insert(vm.as_str()) {
                    return Err(ScenarioError::BadInput(format!(
                        "VM '{vm}' is placed on more than one host"
                    )));
                }
            }
        }
        for vm in &fleet_ids {
            if !hosted.contains(vm) {
                return Err(ScenarioError::BadInput(format!(
                    "VM '{vm}' is not placed on any host"
                )));
            }
        }

        if let Some(crash) = &self.crash {
            crash
                .validate()
                .map_err(|e| ScenarioError::BadInput(e.to_string()))?;
            if !fleet_ids.contains(crash.vm_id.as_str()) {
                return Err(ScenarioError::BadInput(format!(
                    "crash references unknown VM '{}'",
                    crash.vm_id
                )));
            }
        }

        if let Some(inputs) = &self.decision_inputs {
            inputs
                .validate()
                .map_err(|e| ScenarioError::BadInput(format!("decision_inputs: {e}")))?;
        }

        if let Some(seq) = &self.method_sequence {
            if seq.is_empty() {
                return Err(ScenarioError::BadInput("method_sequence is empty".into()));
            }
            for (i, c) in seq.iter().enumerate() {
                for (name, v) in [
                    ("mobile_s", c.mobile_s),
                    ("cloud_s", c.cloud_s),
                    ("upload_s", c.upload_s),
                    ("return_s", c.return_s),
                ] {
                    if !v.is_finite() || v < 0.0 {
                        return Err(ScenarioError::BadInput(format!(
                            "method_sequence entry {} {name} must be finite and >= 0",
                            i + 1
                        )));
                    }
                }
            }
        }

        Ok(())
    }

    /// Stable pretty-printed form; loading it back yields an equal Scenario.
    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }
}

/// Parses and validates a scenario from JSON text.
pub fn load_scenario_str(text: &str) -> Result<Scenario, ScenarioError> {
    let mut scenario: Scenario = serde_json::from_str(text)?;
    scenario.normalize_and_validate()?;
    Ok(scenario)
}

/// Reads, parses, and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let text = fs::read_to_string(path)?;
    load_scenario_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        r#"{
            "schema": 1,
            "name": "tiny",
            "graph": {
                "root": "main",
                "nodes": [
                    {"id": "main", "offloadable": false, "mobile_s": 0.1, "cloud_s": 0.1, "upload_bytes": 0, "return_bytes": 0},
                    {"id": "work", "offloadable": true, "mobile_s": 2.0, "cloud_s": 0.5, "upload_bytes": 1000, "return_bytes": 100}
                ],
                "edges": [["main", "work"]]
            },
            "vm_fleet": [{"id": "vm2"}, {"id": "vm1"}]
        }"#
        .to_string()
    }

    #[test]
    fn minimal_scenario_loads_with_defaults() {
        let s = load_scenario_str(&minimal_json()).unwrap();
        assert_eq!(s.mode, Mode::Both);
        // Fleet sorted, stock VM profile filled in.
        assert_eq!(s.vm_fleet[0].id, "vm1");
        assert_eq!(s.vm_fleet[0].mips, 10_000.0);
        assert_eq!(s.vm_fleet[0].pe_count, 2);
        assert_eq!(s.vm_fleet[0].ram_mb, 1024);
        // Default host covers the whole fleet.
        assert_eq!(s.hosts.len(), 1);
        assert_eq!(s.hosts[0].vms, vec!["vm1", "vm2"]);
        assert_eq!(s.hosts[0].capacity_mips, 20_000.0);
        assert_eq!(s.device.power.p_transmit_w, 1.3);
    }

    #[test]
    fn canonical_round_trip_is_identity() {
        let s = load_scenario_str(&minimal_json()).unwrap();
        let text = s.to_canonical_json();
        let again = load_scenario_str(&text).unwrap();
        assert_eq!(s, again);
        assert_eq!(text, again.to_canonical_json());
    }

    #[test]
    fn cycle_is_named_in_the_error() {
        let json = minimal_json().replace(
            r#""edges": [["main", "work"]]"#,
            r#""edges": [["main", "work"], ["work", "main"]]"#,
        );
        let err = load_scenario_str(&json).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(load_scenario_str(""), Err(ScenarioError::Json(_))));
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let json = minimal_json().replace(r#""schema": 1"#, r#""schema": 2"#);
        assert!(matches!(
            load_scenario_str(&json),
            Err(ScenarioError::SchemaVersion(2))
        ));
    }

    #[test]
    fn crash_must_reference_a_fleet_vm() {
        let json = minimal_json().replace(
            r#""vm_fleet""#,
            r#""crash": {"vm_id": "vm9", "trigger": {"at_fraction": 0.5}}, "vm_fleet""#,
        );
        let err = load_scenario_str(&json).unwrap_err();
        assert!(err.to_string().contains("vm9"), "{err}");
    }

    #[test]
    fn host_placing_unknown_vm_is_rejected() {
        let json = minimal_json().replace(
            r#""vm_fleet""#,
            r#""hosts": [{"id": "h1", "vms": ["ghost"]}], "vm_fleet""#,
        );
        assert!(load_scenario_str(&json).is_err());
    }

    #[test]
    fn mode_strings_parse() {
        assert_eq!("sequential".parse::<Mode>().unwrap(), Mode::Sequential);
        assert_eq!("distributed".parse::<Mode>().unwrap(), Mode::Distributed);
        assert_eq!("both".parse::<Mode>().unwrap(), Mode::Both);
        assert!("parallel".parse::<Mode>().is_err());
    }
}
