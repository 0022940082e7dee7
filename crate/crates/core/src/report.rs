//! Report assembly and rendering: one-run bundles, resend sweeps, VM-count
//! energy comparisons, and decision reports, each emittable as an aligned
//! table, JSON, or CSV.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::callgraph::extract_chains;
use crate::energy::{
    cloud_energy, integrate_host_energy, mobile_energy, CloudEnergyReport, MobileEnergyReport,
};
use crate::engine::{
    build_plan, improvement_percent, max_resend, simulate, BusyInterval, CrashEvent, ExecMode,
    ResendBound, SimReport,
};
use crate::error::RunError;
use crate::partition::{
    best_offload_interval, energy_saved, energy_saved_speedup, fu_utilities, DecisionInputs,
    MethodCost, OffloadChoice,
};
use crate::scenario::{Mode, Scenario};

/// Output encodings supported by every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("format must be table, json, or csv, got '{other}'")),
        }
    }
}

/// One executed mode with its measurements and energy bills.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRun {
    pub mode: ExecMode,
    /// Chain head -> VM id, as planned.
    pub assignments: BTreeMap<String, String>,
    pub sim: SimReport,
    pub mobile: MobileEnergyReport,
    pub cloud: CloudEnergyReport,
    /// Worst-case single-crash resend for this placement.
    pub resend_bound: ResendBound,
}

/// Everything `simulate` reports for one scenario invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub scenario: String,
    pub runs: Vec<ModeRun>,
    /// Sequential-to-distributed runtime saving; present when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement_percent: Option<f64>,
}

/// Runs the scenario in the requested mode(s) and bundles the results.
/// Overrides, when given, take precedence over the scenario's own `mode`
/// and `crash` fields.
pub fn run_report(
    scenario: &Scenario,
    mode_override: Option<Mode>,
    crash_override: Option<&CrashEvent>,
) -> Result<ReportBundle, RunError> {
    let mode = mode_override.unwrap_or(scenario.mode);
    let crash = crash_override.or(scenario.crash.as_ref());
    let decomposition = extract_chains(&scenario.graph)?;

    let exec_modes: &[ExecMode] = match mode {
        Mode::Sequential => &[ExecMode::Sequential],
        Mode::Distributed => &[ExecMode::Distributed],
        Mode::Both => &[ExecMode::Sequential, ExecMode::Distributed],
    };

    let mut runs = Vec::new();
    for &exec_mode in exec_modes {
        let plan = build_plan(&decomposition, exec_mode, &scenario.vm_fleet)?;
        let sim = simulate(&scenario.graph, &plan, &scenario.network, crash)?;
        let mobile = mobile_energy(&sim, &scenario.device.power)?;
        let cloud = cloud_energy(&sim, &scenario.hosts, None)?;
        let resend_bound = max_resend(&scenario.graph, &plan)?;
        runs.push(ModeRun {
            mode: exec_mode,
            assignments: plan.assignments,
            sim,
            mobile,
            cloud,
            resend_bound,
        });
    }

    let improvement = match runs.as_slice() {
        [seq, dist] => improvement_percent(seq.sim.makespan_s, dist.sim.makespan_s).ok(),
        _ => None,
    };

    Ok(ReportBundle {
        scenario: scenario.name.clone(),
        runs,
        improvement_percent: improvement,
    })
}

/// One hypothetical distribution of the offloadable share over VMs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Percent of the application's bytes sent to each VM.
    pub split_percent: Vec<f64>,
    /// Worst single-crash resend: the largest share.
    pub max_resend_percent: f64,
    pub max_resend_bytes: u64,
}

/// Resend exposure across a list of split hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub scenario: String,
    pub offloadable_percent: f64,
    pub total_upload_bytes: u64,
    pub rows: Vec<SweepRow>,
}

/// For each split, reports the worst-case resend share: the biggest slice a
/// single crash can force back over the link. Every split must distribute
/// exactly the scenario's offloadable percentage.
pub fn resend_sweep(scenario: &Scenario, splits: &[Vec<f64>]) -> Result<SweepReport, RunError> {
    if splits.is_empty() {
        return Err(RunError::BadInput("no splits given".into()));
    }
    let offloadable_percent = scenario.graph.offloadable_percent();
    let total_upload_bytes = scenario.graph.total_upload_bytes();

    let mut rows = Vec::new();
    for split in splits {
        if split.is_empty() {
            return Err(RunError::BadInput("empty split".into()));
        }
        for &share in split {
            if !share.is_finite() || share < 0.0 {
                return Err(RunError::BadInput(format!(
                    "split share must be finite and >= 0, got {share}"
                )));
            }
        }
        let sum: f64 = split.iter().sum();
        if (sum - offloadable_percent).abs() > 1e-6 {
            return Err(RunError::BadInput(format!(
                "split {split:?} sums to {sum}% but the scenario's offloadable share is {offloadable_percent}%"
            )));
        }
        let max_resend_percent = split.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let max_resend_bytes =
            (max_resend_percent / 100.0 * total_upload_bytes as f64).round() as u64;
        rows.push(SweepRow {
            split_percent: split.clone(),
            max_resend_percent,
            max_resend_bytes,
        });
    }

    Ok(SweepReport {
        scenario: scenario.name.clone(),
        offloadable_percent,
        total_upload_bytes,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCompareRow {
    pub vm_count: usize,
    pub makespan_s: f64,
    pub kwh: f64,
}

/// The same cloudlet workload run at several fleet sizes, billed over one
/// shared horizon so static draw is comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCompareReport {
    pub scenario: String,
    pub cloudlets: usize,
    pub cloudlet_secs: f64,
    pub horizon_s: f64,
    pub rows: Vec<EnergyCompareRow>,
    pub max_relative_spread: f64,
    pub warnings: Vec<String>,
}

/// Deals `cloudlets` tasks of `cloudlet_secs` each round-robin over the
/// first `k` fleet VMs for every requested count `k`, then integrates host
/// energy over the longest of the resulting makespans.
pub fn energy_compare(
    scenario: &Scenario,
    vm_counts: &[usize],
    cloudlets: usize,
    cloudlet_secs: f64,
) -> Result<EnergyCompareReport, RunError> {
    if vm_counts.is_empty() {
        return Err(RunError::BadInput("no VM counts given".into()));
    }
    if cloudlets == 0 {
        return Err(RunError::BadInput("cloudlets must be at least 1".into()));
    }
    if !cloudlet_secs.is_finite() || cloudlet_secs <= 0.0 {
        return Err(RunError::BadInput(format!(
            "cloudlet_secs must be positive, got {cloudlet_secs}"
        )));
    }
    if scenario.hosts.is_empty() {
        return Err(RunError::BadInput(
            "scenario defines no hosts to bill".into(),
        ));
    }
    for &count in vm_counts {
        if count == 0 {
            return Err(RunError::BadInput("VM count must be at least 1".into()));
        }
        if count > scenario.vm_fleet.len() {
            return Err(RunError::BadInput(format!(
                "requested {count} VMs but the fleet has {}",
                scenario.vm_fleet.len()
            )));
        }
    }

    // Lay out each configuration's busy intervals: VM j runs its share of
    // cloudlets back-to-back from t = 0.
    let mut layouts: Vec<(usize, Vec<BusyInterval>, f64)> = Vec::new();
    let mut horizon_s = 0.0f64;
    for &count in vm_counts {
        let vms = &scenario.vm_fleet[..count];
        let mut per_vm = vec![0usize; count];
        for i in 0..cloudlets {
            per_vm[i % count] += 1;
        }
        let mut busy = Vec::new();
        let mut makespan = 0.0f64;
        for (vm, &n) in vms.iter().zip(&per_vm) {
            let end = n as f64 * cloudlet_secs;
            if end > 0.0 {
                busy.push(BusyInterval {
                    vm_id: vm.id.clone(),
                    start_s: 0.0,
                    end_s: end,
                    mips: vm.mips,
                });
            }
            makespan = makespan.max(end);
        }
        horizon_s = horizon_s.max(makespan);
        layouts.push((count, busy, makespan));
    }

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (count, busy, makespan) in layouts {
        let cloud = integrate_host_energy(&busy, &scenario.hosts, horizon_s)?;
        for w in cloud.warnings {
            let tagged = format!("{count} VMs: {w}");
            if !warnings.contains(&tagged) {
                warnings.push(tagged);
            }
        }
        rows.push(EnergyCompareRow {
            vm_count: count,
            makespan_s: makespan,
            kwh: cloud.total_kwh,
        });
    }

    let max = rows.iter().map(|r| r.kwh).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.kwh).fold(f64::INFINITY, f64::min);
    let max_relative_spread = if max <= 0.0 { 0.0 } else { (max - min) / max };

    Ok(EnergyCompareReport {
        scenario: scenario.name.clone(),
        cloudlets,
        cloudlet_secs,
        horizon_s,
        rows,
        max_relative_spread,
        warnings,
    })
}

/// The decision mathematics evaluated over whatever inputs were given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_saved_j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_saved_speedup_j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recommendation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<f64>>,
    /// End index achieving the first utility's maximum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_end_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_interval: Option<OffloadChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval_recommendation: Option<String>,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Evaluates the energy formulas and/or the interval math, whichever inputs
/// are present; at least one of the two input kinds is required.
pub fn partition_report(
    inputs: Option<&DecisionInputs>,
    sequence: Option<&[MethodCost]>,
) -> Result<PartitionReport, RunError> {
    if inputs.is_none() && sequence.is_none() {
        return Err(RunError::BadInput(
            "nothing to decide: supply decision inputs (compute_mi, mobile_mips, \
             server_mips or speedup, transfer_mbit, bandwidth_mbps, p_compute_w, \
             p_idle_w, p_transmit_w) and/or a method sequence"
                .into(),
        ));
    }

    let mut report = PartitionReport {
        energy_saved_j: None,
        energy_saved_speedup_j: None,
        recommendation: None,
        utilities: None,
        best_end_index: None,
        best_interval: None,
        interval_recommendation: None,
    };

    if let Some(di) = inputs {
        let saved = energy_saved(di)?;
        report.energy_saved_j = Some(saved);
        report.energy_saved_speedup_j = Some(energy_saved_speedup(di)?);
        report.recommendation = Some(if saved > 0.0 {
            format!("offload (saves {} J)", round2(saved))
        } else {
            format!("do not offload (saves {} J)", round2(saved))
        });
    }

    if let Some(seq) = sequence {
        let (utilities, kstar) = fu_utilities(seq)?;
        let choice = best_offload_interval(seq)?;
        report.interval_recommendation = Some(if choice.offload() {
            format!(
                "offload methods {}..{} (saves {} s)",
                choice.start,
                choice.end,
                round2(choice.saving_s)
            )
        } else {
            "do not offload".to_string()
        });
        report.utilities = Some(utilities);
        report.best_end_index = Some(kstar);
        report.best_interval = Some(choice);
    }

    Ok(report)
}

fn json_of<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

/// Pads each column to its widest cell; two spaces between columns.
fn align(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    let headers: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    emit(&mut out, &headers);
    for row in rows {
        emit(&mut out, row);
    }
    out
}

fn csv_line(cells: &[String]) -> String {
    cells.join(",")
}

fn secs(x: f64) -> String {
    format!("{x:.2}")
}

fn pct(x: f64) -> String {
    format!("{x:.2}")
}

fn kwh6(x: f64) -> String {
    format!("{x:.5e}")
}

impl ReportBundle {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json_of(self),
            OutputFormat::Table => {
                let headers = [
                    "mode",
                    "makespan_s",
                    "offloaded_bytes",
                    "resend_bytes",
                    "mobile_j",
                    "cloud_kwh",
                ];
                let rows: Vec<Vec<String>> = self
                    .runs
                    .iter()
                    .map(|r| {
                        vec![
                            r.mode.to_string(),
                            secs(r.sim.makespan_s),
                            r.sim.total_offloaded_bytes.to_string(),
                            r.sim.resend_bytes.to_string(),
                            format!("{:.2}", r.mobile.total_j),
                            kwh6(r.cloud.total_kwh),
                        ]
                    })
                    .collect();
                let mut out = format!("scenario: {}\n", self.scenario);
                out.push_str(&align(&headers, &rows));
                if let Some(p) = self.improvement_percent {
                    out.push_str(&format!("improvement: {}%\n", pct(p)));
                }
                for r in &self.runs {
                    for w in r.mobile.warnings.iter().chain(&r.cloud.warnings) {
                        out.push_str(&format!("warning ({}): {w}\n", r.mode));
                    }
                }
                out
            }
            OutputFormat::Csv => {
                let mut out = csv_line(&[
                    "mode".into(),
                    "makespan_s".into(),
                    "total_offloaded_bytes".into(),
                    "resend_bytes".into(),
                    "resend_time_s".into(),
                    "mobile_total_j".into(),
                    "cloud_kwh".into(),
                    "improvement_percent".into(),
                ]);
                out.push('\n');
                for r in &self.runs {
                    let improvement = self
                        .improvement_percent
                        .map(|p| p.to_string())
                        .unwrap_or_default();
                    out.push_str(&csv_line(&[
                        r.mode.to_string(),
                        r.sim.makespan_s.to_string(),
                        r.sim.total_offloaded_bytes.to_string(),
                        r.sim.resend_bytes.to_string(),
                        r.sim.resend_time_s.to_string(),
                        r.mobile.total_j.to_string(),
                        r.cloud.total_kwh.to_string(),
                        improvement,
                    ]));
                    out.push('\n');
                }
                out
            }
        }
    }
}

impl SweepReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json_of(self),
            OutputFormat::Table => {
                let headers = [
                    "offloadable_%",
                    "split_%",
                    "max_resend_%",
                    "max_resend_bytes",
                ];
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            pct(self.offloadable_percent),
                            r.split_percent
                                .iter()
                                .map(|s| pct(*s))
                                .collect::<Vec<_>>()
                                .join("/"),
                            pct(r.max_resend_percent),
                            r.max_resend_bytes.to_string(),
                        ]
                    })
                    .collect();
                format!("scenario: {}\n{}", self.scenario, align(&headers, &rows))
            }
            OutputFormat::Csv => {
                let mut out = csv_line(&[
                    "offloadable_percent".into(),
                    "split_percent".into(),
                    "max_resend_percent".into(),
                    "max_resend_bytes".into(),
                ]);
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&csv_line(&[
                        self.offloadable_percent.to_string(),
                        r.split_percent
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join("/"),
                        r.max_resend_percent.to_string(),
                        r.max_resend_bytes.to_string(),
                    ]));
                    out.push('\n');
                }
                out
            }
        }
    }
}

impl EnergyCompareReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json_of(self),
            OutputFormat::Table => {
                let headers = ["vm_count", "makespan_s", "kwh"];
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| vec![r.vm_count.to_string(), secs(r.makespan_s), kwh6(r.kwh)])
                    .collect();
                let mut out = format!(
                    "scenario: {} ({} cloudlets x {} s, horizon {} s)\n",
                    self.scenario,
                    self.cloudlets,
                    self.cloudlet_secs,
                    secs(self.horizon_s)
                );
                out.push_str(&align(&headers, &rows));
                out.push_str(&format!(
                    "max relative spread: {:.3e}\n",
                    self.max_relative_spread
                ));
                for w in &self.warnings {
                    out.push_str(&format!("warning: {w}\n"));
                }
                out
            }
            OutputFormat::Csv => {
                let mut out = csv_line(&["vm_count".into(), "makespan_s".into(), "kwh".into()]);
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&csv_line(&[
                        r.vm_count.to_string(),
                        r.makespan_s.to_string(),
                        r.kwh.to_string(),
                    ]));
                    out.push('\n');
                }
                out
            }
        }
    }
}

impl PartitionReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json_of(self),
            OutputFormat::Table => {
                let mut lines = Vec::new();
                if let Some(x) = self.energy_saved_j {
                    lines.push(format!("energy_saved_j: {x:.2}"));
                }
                if let Some(x) = self.energy_saved_speedup_j {
                    lines.push(format!("energy_saved_speedup_j: {x:.2}"));
                }
                if let Some(r) = &self.recommendation {
                    lines.push(format!("recommendation: {r}"));
                }
                if let Some(u) = &self.utilities {
                    let cells: Vec<String> = u.iter().map(|x| x.to_string()).collect();
                    lines.push(format!("utilities: [{}]", cells.join(", ")));
                }
                if let Some(k) = self.best_end_index {
                    lines.push(format!("utility_argmax_k: {k}"));
                }
                if let Some(c) = &self.best_interval {
                    lines.push(format!(
                        "best_interval: methods {}..{} saving {} s",
                        c.start, c.end, c.saving_s
                    ));
                }
                if let Some(r) = &self.interval_recommendation {
                    lines.push(format!("interval_recommendation: {r}"));
                }
                let mut out = lines.join("\n");
                out.push('\n');
                out
            }
            OutputFormat::Csv => {
                let mut out = String::from("key,value\n");
                let mut push = |k: &str, v: String| {
                    out.push_str(k);
                    out.push(',');
                    out.push_str(&v);
                    out.push('\n');
                };
                if let Some(x) = self.energy_saved_j {
                    push("energy_saved_j", x.to_string());
                }
                if let Some(x) = self.energy_saved_speedup_j {
                    push("energy_saved_speedup_j", x.to_string());
                }
                if let Some(r) = &self.recommendation {
                    push("recommendation", r.clone());
                }
                if let Some(u) = &self.utilities {
                    let cells: Vec<String> = u.iter().map(|x| x.to_string()).collect();
                    push("utilities", cells.join("/"));
                }
                if let Some(k) = self.best_end_index {
                    push("utility_argmax_k", k.to_string());
                }
                if let Some(c) = &self.best_interval {
                    push(
                        "best_interval",
                        format!("{}..{} saving {}", c.start, c.end, c.saving_s),
                    );
                }
                if let Some(r) = &self.interval_recommendation {
                    push("interval_recommendation", r.clone());
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::load_scenario_str;

    fn scenario() -> Scenario {
        load_scenario_str(
            r#"{
                "schema": 1,
                "name": "forked",
                "graph": {
                    "root": "main",
                    "nodes": [
                        {"id": "main", "offloadable": false, "mobile_s": 0.0, "cloud_s": 0.0, "upload_bytes": 60000000, "return_bytes": 0},
                        {"id": "p1", "offloadable": true, "mobile_s": 0.9, "cloud_s": 0.18, "upload_bytes": 40000000, "return_bytes": 0},
                        {"id": "p2", "offloadable": true, "mobile_s": 0.8, "cloud_s": 0.15, "upload_bytes": 30000000, "return_bytes": 0},
                        {"id": "q1", "offloadable": true, "mobile_s": 1.1, "cloud_s": 0.30, "upload_bytes": 30000000, "return_bytes": 0},
                        {"id": "q2", "offloadable": true, "mobile_s": 1.2, "cloud_s": 0.32, "upload_bytes": 25000000, "return_bytes": 0},
                        {"id": "q3", "offloadable": true, "mobile_s": 0.9, "cloud_s": 0.25, "upload_bytes": 15000000, "return_bytes": 0}
                    ],
                    "edges": [["main","p1"],["p1","p2"],["main","q1"],["q1","q2"],["q2","q3"]]
                },
                "vm_fleet": [{"id": "vm1"}, {"id": "vm2"}]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn both_modes_report_improvement() {
        let bundle = run_report(&scenario(), None, None).unwrap();
        assert_eq!(bundle.runs.len(), 2);
        assert_eq!(bundle.runs[0].mode, ExecMode::Sequential);
        let p = bundle.improvement_percent.unwrap();
        assert!((p - 27.5).abs() < 1e-3, "got {p}");
    }

    #[test]
    fn single_mode_reports_no_improvement() {
        let bundle = run_report(&scenario(), Some(Mode::Distributed), None).unwrap();
        assert_eq!(bundle.runs.len(), 1);
        assert!(bundle.improvement_percent.is_none());
    }

    #[test]
    fn sweep_reports_max_share() {
        let s = scenario();
        // 140 MB offloadable of 200 MB total: 70%.
        let report = resend_sweep(
            &s,
            &[
                vec![70.0, 0.0],
                vec![60.0, 10.0],
                vec![50.0, 20.0],
                vec![35.0, 35.0],
            ],
        )
        .unwrap();
        let shares: Vec<f64> = report.rows.iter().map(|r| r.max_resend_percent).collect();
        assert_eq!(shares, vec![70.0, 60.0, 50.0, 35.0]);
        assert_eq!(report.rows[3].max_resend_bytes, 70_000_000);
    }

    #[test]
    fn sweep_rejects_wrong_sum() {
        let err = resend_sweep(&scenario(), &[vec![50.0, 10.0]]).unwrap_err();
        assert!(err.to_string().contains("70"), "{err}");
    }

    #[test]
    fn three_vm_split_takes_the_max() {
        let mut s = scenario();
        s.vm_fleet.push(crate::engine::VmSpec::standard("vm3"));
        let report = resend_sweep(&s, &[vec![30.0, 20.0, 20.0]]).unwrap();
        assert_eq!(report.rows[0].max_resend_percent, 30.0);
    }

    #[test]
    fn energy_compare_is_flat_across_vm_counts() {
        let report = energy_compare(&scenario(), &[1, 2], 10, 0.25).unwrap();
        assert!(report.max_relative_spread <= 1e-9, "{report:?}");
        assert_eq!(report.horizon_s, 2.5);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn energy_compare_same_count_twice_is_identical() {
        let report = energy_compare(&scenario(), &[1, 1], 10, 0.25).unwrap();
        assert_eq!(report.rows[0].kwh, report.rows[1].kwh);
        assert_eq!(report.max_relative_spread, 0.0);
    }

    #[test]
    fn energy_compare_rejects_oversized_count() {
        assert!(energy_compare(&scenario(), &[3], 10, 0.25).is_err());
    }

    #[test]
    fn partition_report_recommends_the_hand_case() {
        let di = DecisionInputs {
            compute_mi: 1000.0,
            mobile_mips: 100.0,
            server_mips: Some(1000.0),
            speedup: None,
            transfer_mbit: 1.0,
            bandwidth_mbps: 1.0,
            p_compute_w: 0.9,
            p_idle_w: 0.3,
            p_transmit_w: 1.3,
        };
        let report = partition_report(Some(&di), None).unwrap();
        assert_eq!(
            report.recommendation.as_deref(),
            Some("offload (saves 7.4 J)")
        );
    }

    #[test]
    fn partition_report_handles_sequences() {
        let seq = vec![
            MethodCost::new(5.0, 1.0, 1.0, 1.0),
            MethodCost::new(4.0, 1.0, 1.0, 1.0),
            MethodCost::new(3.0, 1.0, 1.0, 1.0),
        ];
        let report = partition_report(None, Some(&seq)).unwrap();
        assert_eq!(report.utilities, Some(vec![7.0, 3.0, 0.0]));
        let c = report.best_interval.unwrap();
        assert_eq!((c.start, c.end, c.saving_s), (1, 3, 7.0));
        assert_eq!(
            report.interval_recommendation.as_deref(),
            Some("offload methods 1..3 (saves 7 s)")
        );
    }

    #[test]
    fn partition_report_requires_some_input() {
        assert!(partition_report(None, None).is_err());
    }

    #[test]
    fn renders_are_nonempty_for_all_formats() {
        let bundle = run_report(&scenario(), None, None).unwrap();
        for f in [OutputFormat::Table, OutputFormat::Json, OutputFormat::Csv] {
            assert!(!bundle.render(f).is_empty());
        }
    }

    #[test]
    fn json_render_is_stable() {
        let s = scenario();
        let a = run_report(&s, None, None)
            .unwrap()
            .render(OutputFormat::Json);
        let b = run_report(&s, None, None)
            .unwrap()
            .render(OutputFormat::Json);
        assert_eq!(a, b);
    }
}
