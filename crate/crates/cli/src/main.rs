//! `offsim` command-line front end.
//!
//! Every subcommand loads its inputs, hands them to `offsim_core`, and prints
//! one report. Exit codes: 0 success, 1 bad input (parse or validation),
//! 2 failure while running the model.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use offsim_core::{
    energy_compare, extract_chains, load_scenario, parse_graph_text, partition_report,
    resend_sweep, run_report, validate_graph, CallGraph, CrashEvent, DecisionInputs, GraphError,
    MethodCost, Mode, NetworkSpec, OutputFormat, RunError, ScenarioError,
};

#[derive(Parser)]
#[command(
    name = "offsim",
    version,
    about = "Deterministic simulator and partition toolkit for mobile-to-cloud offloading"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report encoding: table, json, or csv.
    #[arg(long, global = true, default_value = "table", value_parser = parse_format)]
    format: OutputFormat,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Reserved for future stochastic extensions; current runs take no randomness.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the offload schedule for a scenario and report timings, data, and energy.
    Simulate {
        /// Scenario JSON file.
        scenario: PathBuf,

        /// Override the scenario's mode: sequential, distributed, or both.
        #[arg(long, value_name = "MODE")]
        mode: Option<String>,

        /// Inject a VM crash: <vm_id>@<fraction> or <vm_id>@t=<seconds>.
        #[arg(long, value_name = "SPEC")]
        crash: Option<String>,
    },

    /// Worst-case resend exposure for different per-VM splits of the offloadable data.
    ResendSweep {
        /// Scenario JSON file.
        scenario: PathBuf,

        /// Per-VM percents for one row, comma separated (e.g. --split 60,10).
        /// Repeat the flag for more rows; each row must sum to the scenario's
        /// offloadable percentage.
        #[arg(long = "split", value_name = "PCTS", required = true)]
        splits: Vec<String>,
    },

    /// Host energy for the same cloudlet batch spread over different VM counts.
    EnergyCompare {
        /// Scenario JSON file (supplies the fleet and host models).
        scenario: PathBuf,

        /// VM counts to compare, comma separated.
        #[arg(long, default_value = "1,2", value_name = "COUNTS")]
        vm_counts: String,

        /// Number of equal cloudlets to spread over the VMs.
        #[arg(long, default_value_t = 10)]
        cloudlets: usize,

        /// Execution time of one cloudlet on one VM, seconds.
        #[arg(long, default_value_t = 0.25)]
        cloudlet_secs: f64,
    },

    /// Offload decision report: energy saved, per-method utilities, best interval.
    Partition {
        /// Scenario JSON file supplying decision_inputs and/or method_sequence.
        /// Flags below override or replace the scenario's values.
        scenario: Option<PathBuf>,

        /// Computation need, million instructions.
        #[arg(long, value_name = "MI")]
        compute_mi: Option<f64>,

        /// Mobile processor speed, MIPS.
        #[arg(long, value_name = "MIPS")]
        mobile_mips: Option<f64>,

        /// Server processor speed, MIPS.
        #[arg(long, value_name = "MIPS")]
        server_mips: Option<f64>,

        /// Server speed as a multiple of the mobile processor.
        #[arg(long, value_name = "F")]
        speedup: Option<f64>,

        /// Data to ship for the offloaded computation, megabits.
        #[arg(long, value_name = "MBIT")]
        transfer_mbit: Option<f64>,

        /// Link bandwidth, megabits per second. With --graph this also prices
        /// the per-method transfers derived from the graph's byte counts.
        #[arg(long, value_name = "MBPS")]
        bandwidth_mbps: Option<f64>,

        /// Device power while computing, watts (default 0.9).
        #[arg(long = "p-compute", value_name = "W")]
        p_compute: Option<f64>,

        /// Device power while idle, watts (default 0.3).
        #[arg(long = "p-idle", value_name = "W")]
        p_idle: Option<f64>,

        /// Device power while transmitting, watts (default 1.3).
        #[arg(long = "p-transmit", value_name = "W")]
        p_transmit: Option<f64>,

        /// Method sequence, one mobile:cloud:invoke:return cost tuple per
        /// entry, comma separated (e.g. --sequence 5:1:1:1,4:1:1:1,3:1:1:1).
        #[arg(long, value_name = "M:C:I:R,...")]
        sequence: Option<String>,

        /// Plain-text graph file; the graph must be a single call chain, and
        /// its nodes become the method sequence in call order.
        #[arg(long, value_name = "PATH")]
        graph: Option<PathBuf>,

        /// One-way latency added to each transfer derived from --graph, seconds.
        #[arg(long = "latency-s", default_value_t = 0.0, value_name = "S")]
        latency_s: f64,
    },

    /// Check a scenario file (.json) or a plain-text graph file and print a summary.
    Validate {
        /// Scenario JSON file, or a graph file in the node/edge text dialect.
        path: PathBuf,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::from_str(s)
}

/// `load_scenario` with the file name prefixed to any failure.
fn load(path: &Path) -> Result<offsim_core::Scenario, CliError> {
    load_scenario(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Failures split by exit code: bad input is 1, a failed run is 2.
enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Engine(_) | RunError::Energy(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let Cli {
        command,
        format,
        out,
        seed: _,
    } = cli;

    let text = match command {
        Command::Simulate {
            scenario,
            mode,
            crash,
        } => {
            let sc = load(&scenario)?;
            let mode = mode
                .as_deref()
                .map(Mode::from_str)
                .transpose()
                .map_err(CliError::Validation)?;
            let crash = crash
                .as_deref()
                .map(CrashEvent::parse_flag)
                .transpose()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if let Some(c) = &crash {
                if !sc.vm_fleet.iter().any(|vm| vm.id == c.vm_id) {
                    return Err(CliError::Validation(format!(
                        "--crash references VM '{}' which is not in the fleet",
                        c.vm_id
                    )));
                }
            }
            run_report(&sc, mode, crash.as_ref())?.render(format)
        }

        Command::ResendSweep { scenario, splits } => {
            let sc = load(&scenario)?;
            let rows: Vec<Vec<f64>> = splits
                .iter()
                .map(|s| parse_f64_list(s, "--split"))
                .collect::<Result<_, _>>()?;
            resend_sweep(&sc, &rows)?.render(format)
        }

        Command::EnergyCompare {
            scenario,
            vm_counts,
            cloudlets,
            cloudlet_secs,
        } => {
            let sc = load(&scenario)?;
            let counts = parse_usize_list(&vm_counts, "--vm-counts")?;
            energy_compare(&sc, &counts, cloudlets, cloudlet_secs)?.render(format)
        }

        Command::Partition {
            scenario,
            compute_mi,
            mobile_mips,
            server_mips,
            speedup,
            transfer_mbit,
            bandwidth_mbps,
            p_compute,
            p_idle,
            p_transmit,
            sequence,
            graph,
            latency_s,
        } => {
            let sc = scenario.as_deref().map(load).transpose()?;

            let decision_flags = compute_mi.is_some()
                || mobile_mips.is_some()
                || server_mips.is_some()
                || speedup.is_some()
                || transfer_mbit.is_some()
                || p_compute.is_some()
                || p_idle.is_some()
                || p_transmit.is_some();
            // --bandwidth-mbps doubles as the graph pricing knob; alone with
            // --graph it does not open a decision-inputs override.
            let decision_flags = decision_flags || (bandwidth_mbps.is_some() && graph.is_none());

            let mut inputs = sc.as_ref().and_then(|s| s.decision_inputs.clone());
            if decision_flags {
                inputs = Some(merge_decision_inputs(
                    inputs.take(),
                    compute_mi,
                    mobile_mips,
                    server_mips,
                    speedup,
                    transfer_mbit,
                    bandwidth_mbps,
                    p_compute,
                    p_idle,
                    p_transmit,
                )?);
            }

            if sequence.is_some() && graph.is_some() {
                return Err(CliError::Validation(
                    "--sequence and --graph both give a method sequence; pass one".into(),
                ));
            }
            let mut seq = sc.as_ref().and_then(|s| s.method_sequence.clone());
            if let Some(spec) = sequence.as_deref() {
                seq = Some(parse_sequence(spec)?);
            }
            if let Some(path) = graph.as_deref() {
                seq = Some(sequence_from_graph(path, bandwidth_mbps, latency_s)?);
            }

            partition_report(inputs.as_ref(), seq.as_deref())?.render(format)
        }

        Command::Validate { path } => cmd_validate(&path, format)?,
    };

    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_f64_list(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("{flag}: bad number '{}'", tok.trim())))
        })
        .collect()
}

fn parse_usize_list(s: &str, flag: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Validation(format!("{flag}: bad count '{}'", tok.trim())))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn merge_decision_inputs(
    base: Option<DecisionInputs>,
    compute_mi: Option<f64>,
    mobile_mips: Option<f64>,
    server_mips: Option<f64>,
    speedup: Option<f64>,
    transfer_mbit: Option<f64>,
    bandwidth_mbps: Option<f64>,
    p_compute: Option<f64>,
    p_idle: Option<f64>,
    p_transmit: Option<f64>,
) -> Result<DecisionInputs, CliError> {
    // NaN marks fields nobody supplied so the missing-flag check below can
    // name them; powers fall back to the stock device profile.
    let mut d = base.unwrap_or(DecisionInputs {
        compute_mi: f64::NAN,
        mobile_mips: f64::NAN,
        server_mips: None,
        speedup: None,
        transfer_mbit: f64::NAN,
        bandwidth_mbps: f64::NAN,
        p_compute_w: 0.9,
        p_idle_w: 0.3,
        p_transmit_w: 1.3,
    });
    if let Some(v) = compute_mi {
        d.compute_mi = v;
    }
    if let Some(v) = mobile_mips {
        d.mobile_mips = v;
    }
    if let Some(v) = transfer_mbit {
        d.transfer_mbit = v;
    }
    if let Some(v) = bandwidth_mbps {
        d.bandwidth_mbps = v;
    }
    if let Some(v) = p_compute {
        d.p_compute_w = v;
    }
    if let Some(v) = p_idle {
        d.p_idle_w = v;
    }
    if let Some(v) = p_transmit {
        d.p_transmit_w = v;
    }
    // Supplying one server-speed form replaces the other so an override can
    // switch forms without fighting the consistency check.
    match (server_mips, speedup) {
        (Some(s), None) => {
            d.server_mips = Some(s);
            d.speedup = None;
        }
        (None, Some(f)) => {
            d.speedup = Some(f);
            d.server_mips = None;
        }
        (Some(s), Some(f)) => {
            d.server_mips = Some(s);
            d.speedup = Some(f);
        }
        (None, None) => {}
    }

    let mut missing = Vec::new();
    if d.compute_mi.is_nan() {
        missing.push("--compute-mi");
    }
    if d.mobile_mips.is_nan() {
        missing.push("--mobile-mips");
    }
    if d.server_mips.is_none() && d.speedup.is_none() {
        missing.push("--server-mips or --speedup");
    }
    if d.transfer_mbit.is_nan() {
        missing.push("--transfer-mbit");
    }
    if d.bandwidth_mbps.is_nan() {
        missing.push("--bandwidth-mbps");
    }
    if !missing.is_empty() {
        return Err(CliError::Validation(format!(
            "partition: missing {}",
            missing.join(", ")
        )));
    }
    Ok(d)
}

fn parse_sequence(spec: &str) -> Result<Vec<MethodCost>, CliError> {
    spec.split(',')
        .map(|entry| {
            let entry = entry.trim();
            let parts: Vec<&str> = entry.split(':').collect();
            let nums: Option<Vec<f64>> = if parts.len() == 4 {
                parts.iter().map(|p| p.trim().parse::<f64>().ok()).collect()
            } else {
                None
            };
            match nums {
                Some(v) => Ok(MethodCost::new(v[0], v[1], v[2], v[3])),
                None => Err(CliError::Validation(format!(
                    "--sequence: entry '{entry}' is not mobile:cloud:invoke:return"
                ))),
            }
        })
        .collect()
}

/// Reads a plain-text graph that forms a single call chain and turns each
/// node into a method cost entry, pricing its bytes over the given link.
fn sequence_from_graph(
    path: &Path,
    bandwidth_mbps: Option<f64>,
    latency_s: f64,
) -> Result<Vec<MethodCost>, CliError> {
    let bandwidth_mbps = bandwidth_mbps.ok_or_else(|| {
        CliError::Validation(
            "--graph needs --bandwidth-mbps to turn byte counts into transfer seconds".into(),
        )
    })?;
    let net = NetworkSpec {
        bandwidth_mbps,
        latency_s,
    };
    net.validate()
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("reading {}: {e}", path.display())))?;
    let graph = parse_graph_text(&text)?;
    let violations = validate_graph(&graph);
    if !violations.is_empty() {
        return Err(GraphError::Invalid(violations).into());
    }

    let chain = linear_order(&graph).ok_or_else(|| {
        CliError::Validation(format!(
            "{}: graph is not a single call chain; every method must have at \
             most one caller and one callee",
            path.display()
        ))
    })?;
    Ok(chain
        .iter()
        .map(|id| {
            let n = graph.node(id).expect("chain ids come from the graph");
            MethodCost::new(
                n.mobile_s,
                n.cloud_s,
                net.transfer_time_s(n.upload_bytes),
                net.transfer_time_s(n.return_bytes),
            )
        })
        .collect())
}

/// Node ids in call order if the graph is one path from the root, else None.
fn linear_order(graph: &CallGraph) -> Option<Vec<String>> {
    let mut next = std::collections::BTreeMap::new();
    let mut callers = std::collections::BTreeMap::new();
    for (from, to) in &graph.edges {
        if next.insert(from.as_str(), to.as_str()).is_some() {
            return None; // a fork
        }
        if callers.insert(to.as_str(), from.as_str()).is_some() {
            return None; // a join
        }
    }
    let mut order = vec![graph.root.clone()];
    let mut cur = graph.root.as_str();
    while let Some(&to) = next.get(cur) {
        order.push(to.to_string());
        cur = to;
    }
    (order.len() == graph.nodes.len()).then_some(order)
}

fn cmd_validate(path: &Path, format: OutputFormat) -> Result<String, CliError> {
    let is_scenario = path.extension().is_some_and(|e| e == "json");
    let (kind, name, graph, fleet, hosts) = if is_scenario {
        let sc = load(path)?;
        (
            "scenario",
            sc.name.clone(),
            sc.graph.clone(),
            sc.vm_fleet.len(),
            sc.hosts.len(),
        )
    } else {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("reading {}: {e}", path.display())))?;
        let graph = parse_graph_text(&text)?;
        let violations = validate_graph(&graph);
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations).into());
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        ("graph", name, graph, 0, 0)
    };

    let dec = extract_chains(&graph)?;
    let offloadable_nodes = graph.nodes.iter().filter(|n| n.offloadable).count();
    let offloadable_chains = dec.chains().filter(|c| c.offloadable).count();

    let out = match format {
        OutputFormat::Json => {
            let mut doc = serde_json::json!({
                "ok": true,
                "kind": kind,
                "name": name,
                "nodes": graph.nodes.len(),
                "offloadable_nodes": offloadable_nodes,
                "edges": graph.edges.len(),
                "chains": dec.chain_count(),
                "offloadable_chains": offloadable_chains,
                "stages": dec.stages.len(),
                "max_parallel_width": dec.max_parallel_width(),
                "total_upload_bytes": graph.total_upload_bytes(),
                "offloadable_upload_bytes": graph.offloadable_upload_bytes(),
                "offloadable_percent": graph.offloadable_percent(),
            });
            if is_scenario {
                let obj = doc.as_object_mut().expect("built as an object");
                obj.insert("vm_fleet".into(), fleet.into());
                obj.insert("hosts".into(), hosts.into());
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
            s.push('\n');
            s
        }
        OutputFormat::Table | OutputFormat::Csv => {
            let mut rows: Vec<(&str, String)> = vec![
                ("nodes", graph.nodes.len().to_string()),
                ("offloadable nodes", offloadable_nodes.to_string()),
                ("edges", graph.edges.len().to_string()),
                ("chains", dec.chain_count().to_string()),
                ("offloadable chains", offloadable_chains.to_string()),
                ("stages", dec.stages.len().to_string()),
                ("max parallel width", dec.max_parallel_width().to_string()),
                ("total upload bytes", graph.total_upload_bytes().to_string()),
                (
                    "offloadable upload bytes",
                    graph.offloadable_upload_bytes().to_string(),
                ),
                (
                    "offloadable percent",
                    format!("{:.2}", graph.offloadable_percent()),
                ),
            ];
            if is_scenario {
                rows.push(("vm fleet", fleet.to_string()));
                rows.push(("hosts", hosts.to_string()));
            }
            match format {
                OutputFormat::Table => {
                    let mut s = format!("ok: {kind} '{name}'\n");
                    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in &rows {
                        s.push_str(&format!("  {k:<width$}  {v}\n"));
                    }
                    s
                }
                _ => {
                    let mut s = String::from("field,value\n");
                    s.push_str(&format!("kind,{kind}\nname,{name}\nok,true\n"));
                    for (k, v) in &rows {
                        s.push_str(&format!("{},{v}\n", k.replace(' ', "_")));
                    }
                    s
                }
            }
        }
    };
    Ok(out)
}
