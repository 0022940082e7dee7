//! Call-link graph model and its decomposition into independent offloadable
//! chains.
//!
//! An application is a DAG of annotated methods. Chains are maximal paths of
//! same-offloadability methods between fork/join points; chains that share no
//! directed path are independent and can run on distinct VMs concurrently.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// A single method of the application, annotated with execution and transfer
/// costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodNode {
    pub id: String,
    pub offloadable: bool,
    /// Execution time on the device, seconds.
    pub mobile_s: f64,
    /// Execution time on a reference VM, seconds.
    pub cloud_s: f64,
    /// Code + data shipped to the cloud if this method is offloaded.
    pub upload_bytes: u64,
    /// Result shipped back after remote execution.
    pub return_bytes: u64,
}

impl MethodNode {
    pub fn new(id: impl Into<String>, offloadable: bool, mobile_s: f64, cloud_s: f64) -> Self {
        Self {
            id: id.into(),
            offloadable,
            mobile_s,
            cloud_s,
            upload_bytes: 0,
            return_bytes: 0,
        }
    }

    pub fn with_bytes(mut self, upload_bytes: u64, return_bytes: u64) -> Self {
        self.upload_bytes = upload_bytes;
        self.return_bytes = return_bytes;
        self
    }
}

/// The call hierarchy of an application: annotated method nodes plus call
/// edges, rooted at the entry method.
///
/// Nodes and edges are canonicalized (sorted, edges deduplicated) on
/// construction so serialized graphs and reports are stable. Construction is
/// permissive about structure; [`validate_graph`] reports cycles, unreachable
/// nodes, dangling edges and the like as a violation list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallGraph {
    pub root: String,
    pub nodes: Vec<MethodNode>,
    pub edges: Vec<(String, String)>,
}

impl CallGraph {
    /// Builds a graph from parts. Fails only on duplicate node ids; every
    /// other defect is left for [`validate_graph`] to report.
    pub fn new(
        root: impl Into<String>,
        mut nodes: Vec<MethodNode>,
        mut edges: Vec<(String, String)>,
    ) -> Result<Self, GraphError> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(GraphError::DuplicateNode(pair[0].id.clone()));
            }
        }
        edges.sort();
        edges.dedup();
        Ok(Self {
            root: root.into(),
            nodes,
            edges,
        })
    }

    pub fn node(&self, id: &str) -> Option<&MethodNode> {
        self.nodes
            .binary_search_by(|n| n.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.nodes[i])
    }

    fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    /// Out- and in-adjacency over node indices; dangling edges are skipped.
    fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (from, to) in &self.edges {
            if let (Some(f), Some(t)) = (self.index_of(from), self.index_of(to)) {
                out[f].push(t);
                inn[t].push(f);
            }
        }
        (out, inn)
    }

    /// Total upload bytes over every node (the application size).
    pub fn total_upload_bytes(&self) -> u64 {
        self.nodes.iter().map(|n| n.upload_bytes).sum()
    }

    /// Upload bytes over offloadable nodes only.
    pub fn offloadable_upload_bytes(&self) -> u64 {
        self.nodes
            .iter()
            .filter(|n| n.offloadable)
            .map(|n| n.upload_bytes)
            .sum()
    }

    /// Share of the application size that is offloadable, in percent.
    pub fn offloadable_percent(&self) -> f64 {
        let total = self.total_upload_bytes();
        if total == 0 {
            return 0.0;
        }
        100.0 * self.offloadable_upload_bytes() as f64 / total as f64
    }
}

/// A structural defect found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// A directed cycle, listed as the node ids along it.
    Cycle(Vec<String>),
    /// Node not reachable from the root.
    Unreachable(String),
    /// Edge endpoint that names no node.
    DanglingEdge(String, String),
    /// More than one node has no callers; the graph has no single entry.
    MultipleRoots(Vec<String>),
    /// The declared root id names no node.
    MissingRoot(String),
    /// A cost annotation is negative or not finite.
    InvalidField {
        node: String,
        field: String,
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle(path) => write!(f, "cycle: {}", path.join(" -> ")),
            Violation::Unreachable(id) => write!(f, "node '{id}' is unreachable from the root"),
            Violation::DanglingEdge(a, b) => {
                write!(f, "edge {a} -> {b} references a missing node")
            }
            Violation::MultipleRoots(ids) => {
                write!(
                    f,
                    "multiple entry nodes with no callers: {}",
                    ids.join(", ")
                )
            }
            Violation::MissingRoot(id) => write!(f, "declared root '{id}' does not exist"),
            Violation::InvalidField { node, field, value } => {
                write!(f, "node '{node}' field {field} has invalid value {value}")
            }
        }
    }
}

/// Checks every structural invariant and returns the violations found; an
/// empty list means the graph is valid.
pub fn validate_graph(graph: &CallGraph) -> Vec<Violation> {
    let mut violations = Vec::new();

    for node in &graph.nodes {
        for (field, value) in [("mobile_s", node.mobile_s), ("cloud_s", node.cloud_s)] {
            if !value.is_finite() || value < 0.0 {
                violations.push(Violation::InvalidField {
                    node: node.id.clone(),
                    field: field.to_string(),
                    value,
                });
            }
        }
    }

    for (from, to) in &graph.edges {
        if graph.index_of(from).is_none() || graph.index_of(to).is_none() {
            violations.push(Violation::DanglingEdge(from.clone(), to.clone()));
        }
    }

    let root_idx = graph.index_of(&graph.root);
    if root_idx.is_none() {
        violations.push(Violation::MissingRoot(graph.root.clone()));
    }

    let (out, inn) = graph.adjacency();
    let n = graph.nodes.len();

    let sources: Vec<&MethodNode> = graph
        .nodes
        .iter()
        .enumerate()
        .filter(|(i, _)| inn[*i].is_empty())
        .map(|(_, node)| node)
        .collect();
    if sources.len() > 1 {
        violations.push(Violation::MultipleRoots(
            sources.iter().map(|s| s.id.clone()).collect(),
        ));
    }

    if let Some(cycle) = find_cycle(&out) {
        violations.push(Violation::Cycle(
            cycle
                .into_iter()
                .map(|i| graph.nodes[i].id.clone())
                .collect(),
        ));
    }

    if let Some(root) = root_idx {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &out[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        for (i, node) in graph.nodes.iter().enumerate() {
            if !seen[i] {
                violations.push(Violation::Unreachable(node.id.clone()));
            }
        }
    }

    violations
}

/// DFS cycle search; returns the first cycle found as a closed node path.
fn find_cycle(out: &[Vec<usize>]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = out.len();
    let mut color = vec![WHITE; n];
    let mut parent = vec![usize::MAX; n];

    for start in 0..n {
        if color[start] != WHITE {
            continue;
        }
        // Iterative DFS with an explicit edge stack.
        let mut stack = vec![(start, 0usize)];
        color[start] = GRAY;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < out[u].len() {
                let v = out[u][*next];
                *next += 1;
                match color[v] {
                    WHITE => {
                        color[v] = GRAY;
                        parent[v] = u;
                        stack.push((v, 0));
                    }
                    GRAY => {
                        // Back edge u -> v closes a cycle v ... u -> v.
                        let mut path = vec![v];
                        let mut cur = u;
                        while cur != v {
                            path.push(cur);
                            cur = parent[cur];
                        }
                        path.push(v);
                        path.reverse();
                        return Some(path);
                    }
                    _ => {}
                }
            } else {
                color[u] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// A maximal path of same-offloadability methods between fork/join points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub node_ids: Vec<String>,
    /// True iff every member is offloadable.
    pub offloadable: bool,
}

impl Chain {
    /// First node id; unique across all chains of a decomposition, so it
    /// doubles as the chain's key.
    pub fn head(&self) -> &str {
        &self.node_ids[0]
    }

    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }
}

/// One step of a decomposition: either a single chain or several chains that
/// may run concurrently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "chains", rename_all = "snake_case")]
pub enum Stage {
    Serial(Chain),
    Parallel(Vec<Chain>),
}

impl Stage {
    pub fn chains(&self) -> &[Chain] {
        match self {
            Stage::Serial(chain) => std::slice::from_ref(chain),
            Stage::Parallel(chains) => chains,
        }
    }

    pub fn width(&self) -> usize {
        self.chains().len()
    }
}

/// The full partition of a graph into stages of chains, in topological order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDecomposition {
    pub stages: Vec<Stage>,
}

impl ChainDecomposition {
    /// All chains in stage order, then slot order within a stage.
    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.stages.iter().flat_map(|s| s.chains().iter())
    }

    pub fn chain_count(&self) -> usize {
        self.chains().count()
    }

    /// Widest parallel stage; 1 when the decomposition is purely serial.
    pub fn max_parallel_width(&self) -> usize {
        self.stages.iter().map(Stage::width).max().unwrap_or(1)
    }
}

/// Splits a valid graph into chains, cutting at every fork (out-degree > 1),
/// join (in-degree > 1) and offloadability boundary, then groups chains into
/// stages by their depth in the condensed chain DAG.
///
/// A fork node stays with its upstream chain; a join node heads a fresh one; a
/// node that is both fork and join becomes a singleton chain. Chains inside
/// one parallel stage never share a directed path, and chains within a stage
/// are ordered lexicographically by head id so the output is deterministic.
pub fn extract_chains(graph: &CallGraph) -> Result<ChainDecomposition, GraphError> {
    let violations = validate_graph(graph);
    if !violations.is_empty() {
        return Err(GraphError::Invalid(violations));
    }

    let n = graph.nodes.len();
    let (out, inn) = graph.adjacency();

    // u -> v continues a chain iff v is u's sole callee, u is v's sole
    // caller, and both share an offloadability class.
    let mut chain_next = vec![None; n];
    for u in 0..n {
        if out[u].len() == 1 {
            let v = out[u][0];
            if inn[v].len() == 1 && graph.nodes[u].offloadable == graph.nodes[v].offloadable {
                chain_next[u] = Some(v);
            }
        }
    }
    let mut chain_prev = vec![None; n];
    for (u, next) in chain_next.iter().enumerate() {
        if let Some(v) = *next {
            chain_prev[v] = Some(u);
        }
    }

    // Walk each head to materialize its segment.
    let mut segment_of = vec![usize::MAX; n];
    let mut segments: Vec<Vec<usize>> = Vec::new();
    for (head, prev) in chain_prev.iter().enumerate() {
        if prev.is_some() {
            continue;
        }
        let mut members = vec![head];
        let mut cur = head;
        while let Some(next) = chain_next[cur] {
            members.push(next);
            cur = next;
        }
        for &m in &members {
            segment_of[m] = segments.len();
        }
        segments.push(members);
    }

    // Depth of each segment in the condensed DAG: 0 for the root segment,
    // otherwise 1 + max over predecessor segments.
    let mut seg_preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); segments.len()];
    let mut seg_succs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); segments.len()];
    for u in 0..n {
        for &v in &out[u] {
            let (su, sv) = (segment_of[u], segment_of[v]);
            if su != sv {
                seg_preds[sv].insert(su);
                seg_succs[su].insert(sv);
            }
        }
    }
    let mut level = vec![0usize; segments.len()];
    let mut indeg: Vec<usize> = seg_preds.iter().map(BTreeSet::len).collect();
    let mut queue: VecDeque<usize> = (0..segments.len()).filter(|&s| indeg[s] == 0).collect();
    let mut visited = 0;
    while let Some(s) = queue.pop_front() {
        visited += 1;
        for &t in &seg_succs[s] {
            level[t] = level[t].max(level[s] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    debug_assert_eq!(visited, segments.len(), "condensed graph must be acyclic");

    let mut by_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (seg, &lvl) in level.iter().enumerate() {
        by_level.entry(lvl).or_default().push(seg);
    }

    let to_chain = |seg: &Vec<usize>| {
        let node_ids: Vec<String> = seg.iter().map(|&i| graph.nodes[i].id.clone()).collect();
        let offloadable = graph.nodes[seg[0]].offloadable;
        Chain {
            node_ids,
            offloadable,
        }
    };

    let mut stages = Vec::new();
    for (_, segs) in by_level {
        let mut chains: Vec<Chain> = segs.iter().map(|&s| to_chain(&segments[s])).collect();
        chains.sort_by(|a, b| a.head().cmp(b.head()));
        if chains.len() == 1 {
            stages.push(Stage::Serial(chains.pop().unwrap()));
        } else {
            stages.push(Stage::Parallel(chains));
        }
    }

    Ok(ChainDecomposition { stages })
}

/// True iff no directed path connects `a` to `b` in either direction.
pub fn independent(graph: &CallGraph, a: &str, b: &str) -> Result<bool, GraphError> {
    let ia = graph
        .index_of(a)
        .ok_or_else(|| GraphError::UnknownNode(a.to_string()))?;
    let ib = graph
        .index_of(b)
        .ok_or_else(|| GraphError::UnknownNode(b.to_string()))?;
    let (out, _) = graph.adjacency();
    Ok(!reaches(&out, ia, ib) && !reaches(&out, ib, ia))
}

fn reaches(out: &[Vec<usize>], from: usize, to: usize) -> bool {
    if from == to {
        return true;
    }
    let mut seen = vec![false; out.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &out[u] {
            if v == to {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Parses the plain-text graph dialect:
///
/// ```text
/// # comment
/// node <id> <offloadable:0|1> <mobile_s> <cloud_s> <upload_bytes> <return_bytes>
/// edge <from> <to>
/// root <id>            # optional; defaults to the unique node with no callers
/// ```
pub fn parse_graph_text(input: &str) -> Result<CallGraph, GraphError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut declared_root: Option<String> = None;

    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let fields: Vec<&str> = parts.collect();
        let bad = |what: &str| GraphError::TextParse {
            line: lineno + 1,
            message: what.to_string(),
        };
        match keyword {
            "node" => {
                if fields.len() != 6 {
                    return Err(bad("expected: node <id> <offloadable:0|1> <mobile_s> <cloud_s> <upload_bytes> <return_bytes>"));
                }
                let offloadable = match fields[1] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(bad(&format!(
                            "offloadable flag must be 0 or 1, got '{other}'"
                        )))
                    }
                };
                let num = |s: &str, what: &str| -> Result<f64, GraphError> {
                    s.parse().map_err(|_| bad(&format!("invalid {what} '{s}'")))
                };
                let int = |s: &str, what: &str| -> Result<u64, GraphError> {
                    s.parse().map_err(|_| bad(&format!("invalid {what} '{s}'")))
                };
                nodes.push(MethodNode {
                    id: fields[0].to_string(),
                    offloadable,
                    mobile_s: num(fields[2], "mobile_s")?,
                    cloud_s: num(fields[3], "cloud_s")?,
                    upload_bytes: int(fields[4], "upload_bytes")?,
                    return_bytes: int(fields[5], "return_bytes")?,
                });
            }
            "edge" => {
                if fields.len() != 2 {
                    return Err(bad("expected: edge <from> <to>"));
                }
                edges.push((fields[0].to_string(), fields[1].to_string()));
            }
            "root" => {
                if fields.len() != 1 {
                    return Err(bad("expected: root <id>"));
                }
                declared_root = Some(fields[0].to_string());
            }
            other => return Err(bad(&format!("unknown directive '{other}'"))),
        }
    }

    if nodes.is_empty() {
        return Err(GraphError::TextParse {
            line: 0,
            message: "no node lines found".to_string(),
        });
    }

    let root = match declared_root {
        Some(r) => r,
        None => {
            // Infer: the lexically-first node with no incoming edge.
            let targets: BTreeSet<&str> = edges.iter().map(|(_, to)| to.as_str()).collect();
            let mut candidates: Vec<&str> = nodes
                .iter()
                .map(|n| n.id.as_str())
                .filter(|id| !targets.contains(id))
                .collect();
            candidates.sort_unstable();
            candidates
                .first()
                .map(|s| s.to_string())
                .ok_or_else(|| GraphError::TextParse {
                    line: 0,
                    message: "no root candidate: every node has a caller".to_string(),
                })?
        }
    };

    CallGraph::new(root, nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, offloadable: bool) -> MethodNode {
        MethodNode::new(id, offloadable, 1.0, 0.5)
    }

    fn edge(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    fn linear_abc() -> CallGraph {
        CallGraph::new(
            "a",
            vec![node("a", true), node("b", true), node("c", true)],
            vec![edge("a", "b"), edge("b", "c")],
        )
        .unwrap()
    }

    fn diamond() -> CallGraph {
        CallGraph::new(
            "a",
            vec![
                node("a", true),
                node("b", true),
                node("c", true),
                node("d", true),
            ],
            vec![
                edge("a", "b"),
                edge("a", "c"),
                edge("b", "d"),
                edge("c", "d"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn linear_graph_is_valid() {
        assert!(validate_graph(&linear_abc()).is_empty());
    }

    #[test]
    fn two_cycle_is_reported() {
        let g = CallGraph::new(
            "a",
            vec![node("a", true), node("b", true)],
            vec![edge("a", "b"), edge("b", "a")],
        )
        .unwrap();
        let violations = validate_graph(&g);
        assert!(violations.iter().any(|v| matches!(v, Violation::Cycle(_))));
    }

    #[test]
    fn diamond_is_valid_against_exhaustive_check() {
        let g = diamond();
        assert!(validate_graph(&g).is_empty());
        // Exhaustive oracle: reachability from the root must cover everything
        // and no node may reach itself through a nonempty path.
        let closure = transitive_closure(&g);
        let root = 0; // "a" sorts first
        for (i, &reachable) in closure[root].iter().enumerate() {
            assert!(i == root || reachable, "unreachable node {i}");
        }
        for (i, row) in closure.iter().enumerate() {
            assert!(!row[i], "cycle through node {i}");
        }
    }

    #[test]
    fn dangling_edge_and_missing_root_are_reported() {
        let g = CallGraph::new("zz", vec![node("a", true)], vec![edge("a", "ghost")]).unwrap();
        let violations = validate_graph(&g);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::DanglingEdge(..))));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::MissingRoot(_))));
    }

    #[test]
    fn multiple_entry_nodes_are_reported() {
        let g = CallGraph::new(
            "a",
            vec![node("a", true), node("b", true), node("c", true)],
            vec![edge("a", "c"), edge("b", "c")],
        )
        .unwrap();
        let violations = validate_graph(&g);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::MultipleRoots(_))));
    }

    #[test]
    fn duplicate_node_ids_rejected_at_construction() {
        let err = CallGraph::new("a", vec![node("a", true), node("a", false)], vec![]);
        assert!(matches!(err, Err(GraphError::DuplicateNode(_))));
    }

    #[test]
    fn linear_graph_yields_single_serial_chain() {
        let d = extract_chains(&linear_abc()).unwrap();
        assert_eq!(d.stages.len(), 1);
        assert_eq!(
            d.stages[0],
            Stage::Serial(Chain {
                node_ids: vec!["a".into(), "b".into(), "c".into()],
                offloadable: true,
            })
        );
    }

    #[test]
    fn diamond_decomposes_into_serial_parallel_serial() {
        let d = extract_chains(&diamond()).unwrap();
        assert_eq!(d.stages.len(), 3);
        assert_eq!(d.stages[0].chains()[0].node_ids, vec!["a"]);
        let mids: Vec<&str> = d.stages[1].chains().iter().map(|c| c.head()).collect();
        assert_eq!(mids, vec!["b", "c"]);
        assert!(matches!(d.stages[1], Stage::Parallel(_)));
        assert_eq!(d.stages[2].chains()[0].node_ids, vec!["d"]);

        // Brute-force check: the two parallel chains share no path.
        let g = diamond();
        let closure = transitive_closure(&g);
        let (b, c) = (1, 2);
        assert!(!closure[b][c] && !closure[c][b]);
    }

    #[test]
    fn offloadable_boundary_cuts_chain() {
        // a(non) -> b(off) -> c(off): the boundary separates a from b,c.
        let g = CallGraph::new(
            "a",
            vec![node("a", false), node("b", true), node("c", true)],
            vec![edge("a", "b"), edge("b", "c")],
        )
        .unwrap();
        let d = extract_chains(&g).unwrap();
        assert_eq!(d.stages.len(), 2);
        assert_eq!(d.stages[0].chains()[0].node_ids, vec!["a"]);
        assert!(!d.stages[0].chains()[0].offloadable);
        assert_eq!(d.stages[1].chains()[0].node_ids, vec!["b", "c"]);
        assert!(d.stages[1].chains()[0].offloadable);
    }

    #[test]
    fn fork_below_prefix_yields_one_parallel_stage_of_two_chains() {
        // Non-offloadable entry above two independent offloadable branches.
        let g = CallGraph::new(
            "main",
            vec![
                node("main", false),
                node("p1", true),
                node("p2", true),
                node("q1", true),
                node("q2", true),
            ],
            vec![
                edge("main", "p1"),
                edge("p1", "p2"),
                edge("main", "q1"),
                edge("q1", "q2"),
            ],
        )
        .unwrap();
        let d = extract_chains(&g).unwrap();
        let parallel: Vec<&Stage> = d
            .stages
            .iter()
            .filter(|s| matches!(s, Stage::Parallel(_)))
            .collect();
        assert_eq!(parallel.len(), 1);
        assert_eq!(parallel[0].width(), 2);
        assert_eq!(parallel[0].chains()[0].node_ids, vec!["p1", "p2"]);
        assert_eq!(parallel[0].chains()[1].node_ids, vec!["q1", "q2"]);
    }

    #[test]
    fn fork_node_stays_with_upstream_chain() {
        // a -> b -> {c, d}: b forks, so the chain is [a, b] then parallel c|d.
        let g = CallGraph::new(
            "a",
            vec![
                node("a", true),
                node("b", true),
                node("c", true),
                node("d", true),
            ],
            vec![edge("a", "b"), edge("b", "c"), edge("b", "d")],
        )
        .unwrap();
        let d = extract_chains(&g).unwrap();
        assert_eq!(d.stages[0].chains()[0].node_ids, vec!["a", "b"]);
        assert_eq!(d.stages[1].width(), 2);
    }

    #[test]
    fn join_node_heads_downstream_chain() {
        // {a -> b, a -> c} -> d -> e: d joins then continues into e.
        let g = CallGraph::new(
            "a",
            vec![
                node("a", true),
                node("b", true),
                node("c", true),
                node("d", true),
                node("e", true),
            ],
            vec![
                edge("a", "b"),
                edge("a", "c"),
                edge("b", "d"),
                edge("c", "d"),
                edge("d", "e"),
            ],
        )
        .unwrap();
        let d = extract_chains(&g).unwrap();
        let last = d.stages.last().unwrap();
        assert_eq!(last.chains()[0].node_ids, vec!["d", "e"]);
    }

    #[test]
    fn extract_rejects_invalid_graph() {
        let g = CallGraph::new(
            "a",
            vec![node("a", true), node("b", true)],
            vec![edge("a", "b"), edge("b", "a")],
        )
        .unwrap();
        assert!(matches!(extract_chains(&g), Err(GraphError::Invalid(_))));
    }

    #[test]
    fn independence_in_diamond() {
        let g = diamond();
        assert!(independent(&g, "b", "c").unwrap());
        assert!(!independent(&g, "a", "d").unwrap());
        assert!(!independent(&g, "a", "a").unwrap());
        assert!(matches!(
            independent(&g, "a", "nope"),
            Err(GraphError::UnknownNode(_))
        ));
    }

    /// Boolean transitive closure; the independence oracle used by tests.
    pub(super) fn transitive_closure(g: &CallGraph) -> Vec<Vec<bool>> {
        let n = g.nodes.len();
        let (out, _) = g.adjacency();
        let mut closure = vec![vec![false; n]; n];
        for (u, next) in out.iter().enumerate() {
            for &v in next {
                closure[u][v] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    closure[i][j] |= closure[i][k] && closure[k][j];
                }
            }
        }
        closure
    }

    #[test]
    fn text_dialect_round_trips_structure() {
        let text = "\
# face-style graph
node main 0 0.0 0.0 60000000 0
node left 1 0.9 0.18 40000000 200000
node right 1 1.5 0.30 30000000 300000
edge main left
edge main right
";
        let g = parse_graph_text(text).unwrap();
        assert_eq!(g.root, "main");
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 2);
        assert!(validate_graph(&g).is_empty());
    }

    #[test]
    fn text_dialect_reports_line_numbers() {
        let err = parse_graph_text("node x 2 0 0 0 0").unwrap_err();
        match err {
            GraphError::TextParse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn text_dialect_explicit_root_wins() {
        let text = "node a 1 1 1 0 0\nnode b 1 1 1 0 0\nedge a b\nroot a\n";
        assert_eq!(parse_graph_text(text).unwrap().root, "a");
    }
}
