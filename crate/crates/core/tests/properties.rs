//! Randomized invariant checks for chain extraction, scheduling, crash
//! accounting, and the decision math.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::Index;

use offsim_core::{
    best_offload_interval, break_even_decision, build_plan, energy_saved, energy_saved_speedup,
    extract_chains, fu_utilities, max_resend, simulate, BreakEvenDecision, CallGraph, CrashEvent,
    CrashTrigger, DecisionInputs, ExecMode, MethodCost, MethodNode, NetworkSpec, Stage, VmSpec,
};

/// Rooted random DAG: node j > 0 gets one parent among earlier nodes, plus a
/// few extra forward edges to create joins. Node ids sort in creation order,
/// so "n00" is always the root.
fn arb_graph() -> impl Strategy<Value = CallGraph> {
    (2usize..=10)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<Index>(), n - 1),
                prop::collection::vec((any::<Index>(), any::<Index>()), 0..=6),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec((1u32..=40, 1u32..=40, 0u64..=50), n),
            )
        })
        .prop_map(|(n, parents, extras, offloadable, costs)| {
            let id = |i: usize| format!("n{i:02}");
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|j| (parents[j - 1].index(j), j)).collect();
            for (a, b) in extras {
                let (i, j) = (a.index(n), b.index(n));
                if i < j {
                    edges.push((i, j));
                }
            }
            edges.sort_unstable();
            edges.dedup();
            let nodes: Vec<MethodNode> = (0..n)
                .map(|i| {
                    let (mobile, cloud, upload) = costs[i];
                    MethodNode::new(
                        id(i),
                        offloadable[i],
                        mobile as f64 / 10.0,
                        cloud as f64 / 10.0,
                    )
                    .with_bytes(upload * 1_000_000, upload * 10_000)
                })
                .collect();
            let edges = edges.into_iter().map(|(a, b)| (id(a), id(b))).collect();
            CallGraph::new(id(0), nodes, edges).unwrap()
        })
}

fn closure(graph: &CallGraph) -> Vec<Vec<bool>> {
    let n = graph.nodes.len();
    let index: BTreeMap<&str, usize> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, node)| (node.id.as_str(), i))
        .collect();
    let mut reach = vec![vec![false; n]; n];
    for (from, to) in &graph.edges {
        reach[index[from.as_str()]][index[to.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    reach
}

fn fleet(n: usize) -> Vec<VmSpec> {
    (1..=n)
        .map(|i| VmSpec::standard(format!("vm{i:02}")))
        .collect()
}

proptest! {
    #[test]
    fn chains_partition_the_nodes(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let mut seen = BTreeMap::new();
        for chain in d.chains() {
            for id in &chain.node_ids {
                *seen.entry(id.clone()).or_insert(0u32) += 1;
            }
        }
        prop_assert_eq!(seen.len(), graph.nodes.len());
        prop_assert!(seen.values().all(|&c| c == 1));
    }

    #[test]
    fn chains_are_paths_of_uniform_offloadability(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        for chain in d.chains() {
            for id in &chain.node_ids {
                prop_assert_eq!(graph.node(id).unwrap().offloadable, chain.offloadable);
            }
            for pair in chain.node_ids.windows(2) {
                prop_assert!(graph.edges.contains(&(pair[0].clone(), pair[1].clone())));
            }
        }
    }

    #[test]
    fn parallel_stage_chains_share_no_path(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let reach = closure(&graph);
        let index: BTreeMap<&str, usize> = graph
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.id.as_str(), i))
            .collect();
        for stage in &d.stages {
            if let Stage::Parallel(chains) = stage {
                for (a, chain_a) in chains.iter().enumerate() {
                    for chain_b in &chains[a + 1..] {
                        for u in &chain_a.node_ids {
                            for v in &chain_b.node_ids {
                                let (iu, iv) = (index[u.as_str()], index[v.as_str()]);
                                prop_assert!(!reach[iu][iv] && !reach[iv][iu],
                                    "{u} and {v} are ordered but share a stage");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stage_order_respects_dependencies(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let mut stage_of = BTreeMap::new();
        for (i, stage) in d.stages.iter().enumerate() {
            for chain in stage.chains() {
                for id in &chain.node_ids {
                    stage_of.insert(id.clone(), i);
                }
            }
        }
        for (from, to) in &graph.edges {
            prop_assert!(stage_of[from] <= stage_of[to]);
        }
    }

    #[test]
    fn distributed_never_beats_sequential_backwards(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let net = NetworkSpec { bandwidth_mbps: 100.0, latency_s: 0.01 };
        let vms = fleet(10);
        let seq = simulate(&graph, &build_plan(&d, ExecMode::Sequential, &vms).unwrap(), &net, None).unwrap();
        let dist = simulate(&graph, &build_plan(&d, ExecMode::Distributed, &vms).unwrap(), &net, None).unwrap();
        prop_assert!(dist.makespan_s <= seq.makespan_s);
        if d.max_parallel_width() == 1 {
            prop_assert_eq!(seq.makespan_s, dist.makespan_s);
        } else {
            prop_assert!(dist.makespan_s < seq.makespan_s);
        }
    }

    #[test]
    fn simulation_is_deterministic(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let net = NetworkSpec { bandwidth_mbps: 50.0, latency_s: 0.02 };
        let vms = fleet(10);
        let plan = build_plan(&d, ExecMode::Distributed, &vms).unwrap();
        let a = simulate(&graph, &plan, &net, None).unwrap();
        let b = simulate(&graph, &plan, &net, None).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn crash_only_delays(graph in arb_graph(), frac in 0.0f64..=1.0) {
        let d = extract_chains(&graph).unwrap();
        let net = NetworkSpec { bandwidth_mbps: 100.0, latency_s: 0.01 };
        let vms = fleet(10);
        let plan = build_plan(&d, ExecMode::Distributed, &vms).unwrap();
        let clean = simulate(&graph, &plan, &net, None).unwrap();
        let crash = CrashEvent { vm_id: "vm01".into(), trigger: CrashTrigger::AtFraction(frac) };
        let crashed = simulate(&graph, &plan, &net, Some(&crash)).unwrap();
        prop_assert!(crashed.makespan_s >= clean.makespan_s);
        prop_assert!(crashed.resend_bytes <= *crashed.per_vm_bytes.values().max().unwrap());
        prop_assert_eq!(clean.resend_bytes, 0);
        prop_assert_eq!(clean.resend_time_s, 0.0);
    }

    #[test]
    fn max_resend_at_least_the_balanced_share(graph in arb_graph()) {
        let d = extract_chains(&graph).unwrap();
        let vms = fleet(10);
        let plan = build_plan(&d, ExecMode::Distributed, &vms).unwrap();
        let sim = simulate(&graph, &plan, &NetworkSpec::instant(), None).unwrap();
        let bound = max_resend(&graph, &plan).unwrap();
        let total = sim.total_offloaded_bytes;
        prop_assert!(bound.bytes as f64 >= total as f64 / vms.len() as f64 - 1e-9);
        prop_assert!(bound.bytes <= total);
    }

    #[test]
    fn energy_forms_agree(
        c in 0.0f64..=1000.0,
        m in 10.0f64..=1000.0,
        f in 1.0f64..=100.0,
        d in 0.0f64..=100.0,
        b in 0.1f64..=100.0,
        pc in 0.1f64..=5.0,
        pi in 0.0f64..=5.0,
        ptr in 0.0f64..=5.0,
    ) {
        let inputs = DecisionInputs {
            compute_mi: c,
            mobile_mips: m,
            server_mips: Some(f * m),
            speedup: Some(f),
            transfer_mbit: d,
            bandwidth_mbps: b,
            p_compute_w: pc,
            p_idle_w: pi,
            p_transmit_w: ptr,
        };
        let a = energy_saved(&inputs).unwrap();
        let s = energy_saved_speedup(&inputs).unwrap();
        prop_assert!((a - s).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {s}");
    }

    #[test]
    fn saving_falls_with_transfer_and_rises_with_compute(
        c in 1.0f64..=1000.0,
        m in 10.0f64..=1000.0,
        f in 2.0f64..=100.0,
        d in 0.0f64..=100.0,
        b in 0.1f64..=100.0,
        pi in 0.1f64..=2.0,
        ptr in 0.1f64..=5.0,
    ) {
        // Choose p_compute above p_idle/F so the compute term really pays.
        let pc = pi / f + 0.5;
        let base = DecisionInputs {
            compute_mi: c,
            mobile_mips: m,
            server_mips: None,
            speedup: Some(f),
            transfer_mbit: d,
            bandwidth_mbps: b,
            p_compute_w: pc,
            p_idle_w: pi,
            p_transmit_w: ptr,
        };
        let e0 = energy_saved(&base).unwrap();
        let mut more_data = base.clone();
        more_data.transfer_mbit = d + 1.0;
        prop_assert!(energy_saved(&more_data).unwrap() < e0);
        let mut more_compute = base.clone();
        more_compute.compute_mi = c + 1.0;
        prop_assert!(energy_saved(&more_compute).unwrap() > e0);
    }
}

/// Integer-valued costs keep every sum and comparison exact.
fn arb_sequence() -> impl Strategy<Value = Vec<MethodCost>> {
    prop::collection::vec((0u32..=9, 0u32..=9, 0u32..=9, 0u32..=9), 1..=8).prop_map(|entries| {
        entries
            .into_iter()
            .map(|(m, c, i, r)| MethodCost::new(m as f64, c as f64, i as f64, r as f64))
            .collect()
    })
}

fn saving(seq: &[MethodCost], s: usize, e: usize) -> f64 {
    let diff: f64 = seq[s - 1..e].iter().map(|c| c.mobile_s - c.cloud_s).sum();
    diff - seq[s - 1].upload_s - seq[e - 1].return_s
}

proptest! {
    #[test]
    fn interval_choice_matches_enumeration(seq in arb_sequence()) {
        let choice = best_offload_interval(&seq).unwrap();
        let mut best: Option<(usize, usize, f64)> = None;
        for s in 1..=seq.len() {
            for e in s..=seq.len() {
                let v = saving(&seq, s, e);
                let better = match best {
                    None => true,
                    Some((bs, be, bv)) => {
                        v > bv || (v == bv && (e - s < be - bs || (e - s == be - bs && s < bs)))
                    }
                };
                if better {
                    best = Some((s, e, v));
                }
            }
        }
        let (bs, be, bv) = best.unwrap();
        prop_assert_eq!((choice.start, choice.end, choice.saving_s), (bs, be, bv));
    }

    #[test]
    fn utilities_match_suffix_maxima_when_argmax_allows(seq in arb_sequence()) {
        let (utilities, kstar) = fu_utilities(&seq).unwrap();
        prop_assert_eq!(utilities.len(), seq.len());
        // U_1 is the max over intervals starting at 1 by definition.
        let from_start: f64 = (1..=seq.len())
            .map(|e| saving(&seq, 1, e))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(utilities[0], from_start);
        // Later utilities telescope down the same interval end; they equal
        // the honest start-at-i maximum only while that end stays ahead.
        for i in 2..=seq.len() {
            if kstar >= i {
                let honest: f64 = (i..=seq.len())
                    .map(|e| saving(&seq, i, e))
                    .fold(f64::NEG_INFINITY, f64::max);
                prop_assert_eq!(utilities[i - 1], honest,
                    "i={} kstar={} seq={:?}", i, kstar, seq);
            }
        }
    }

    #[test]
    fn break_even_policy_properties(
        elapsed in 0.0f64..=10.0,
        threshold in 0.01f64..=5.0,
        path in 0.0f64..=5.0,
    ) {
        match break_even_decision(elapsed, threshold, path).unwrap() {
            BreakEvenDecision::ContinueLocal => prop_assert!(elapsed < threshold),
            BreakEvenDecision::OffloadAndRestart { projected_total_s } => {
                prop_assert!(elapsed >= threshold);
                prop_assert_eq!(projected_total_s, threshold + path);
                prop_assert!(projected_total_s >= threshold);
            }
        }
    }
}
