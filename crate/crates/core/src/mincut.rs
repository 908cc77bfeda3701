//! Minimum-mass vertex cuts between terminals, via max flow on the
//! vertex-split network, and path pencils extracted from the flow.
//!
//! Every vertex `z` becomes an arc `in(z) -> out(z)` of capacity `μ(z)`
//! (terminals included), every graph edge becomes a pair of uncapacitated
//! arcs between the split halves. A max flow from `in(v)` to `out(w)` then
//! pays only for vertices, and the source side of the residual graph cuts
//! exactly along saturated vertex arcs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::graph::{GraphPath, MeasureGraph, TerminalPair, VertexSet};

/// A minimum-mass separating vertex set together with the max-flow value
/// certifying it. `value` and `flow_value` agree up to roundoff; an absent
/// `v`-`w` path yields value 0 with an empty cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub value: f64,
    pub cut: VertexSet,
    pub flow_value: f64,
}

/// A weighted family of `v`-`w` paths with weights summing to one.
///
/// The defining property: for every vertex `z`, the combined weight of
/// paths through `z` is at most `capacity_bound * μ(z)`. Consequently any
/// separating set `A` satisfies `Σ_c α(c) · #(c ∩ A) <= capacity_bound · mass(A)`,
/// which lower-bounds every separating ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPencil {
    pub paths: Vec<(GraphPath, f64)>,
    pub total_weight: f64,
    pub capacity_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("terminal flow is zero; no path pencil exists")]
    ZeroFlow,
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: f64,
    flow: f64,
}

struct FlowNet {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, flow: 0.0 });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: 0.0,
            flow: 0.0,
        });
    }

    /// Residual capacity; reverse arcs have `cap = 0` and negative flow,
    /// so this never forms `inf - inf`.
    fn residual(&self, id: usize) -> f64 {
        self.arcs[id].cap - self.arcs[id].flow
    }

    fn push(&mut self, id: usize, amount: f64) {
        self.arcs[id].flow += amount;
        self.arcs[id ^ 1].flow -= amount;
    }

    fn tail(&self, id: usize) -> usize {
        self.arcs[id ^ 1].to
    }

    fn bfs_levels(&self, source: usize, eps: f64) -> Vec<i32> {
        let mut level = vec![-1; self.adj.len()];
        let mut queue = VecDeque::new();
        level[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let to = self.arcs[id].to;
                if level[to] < 0 && self.residual(id) > eps {
                    level[to] = level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        level
    }

    /// One blocking-flow phase on the level graph, lowest arc index first.
    fn blocking_flow(&mut self, source: usize, sink: usize, level: &[i32], eps: f64) {
        let mut it = vec![0usize; self.adj.len()];
        let mut path: Vec<usize> = Vec::new();
        let mut node = source;
        loop {
            if node == sink {
                let mut bottleneck = f64::INFINITY;
                for &id in &path {
                    bottleneck = bottleneck.min(self.residual(id));
                }
                for &id in &path {
                    self.push(id, bottleneck);
                }
                let mut cut_at = path.len();
                for (k, &id) in path.iter().enumerate() {
                    if self.residual(id) <= eps {
                        cut_at = k;
                        break;
                    }
                }
                path.truncate(cut_at);
                node = match path.last() {
                    Some(&id) => self.arcs[id].to,
                    None => source,
                };
                continue;
            }
            let mut advanced = false;
            while it[node] < self.adj[node].len() {
                let id = self.adj[node][it[node]];
                let to = self.arcs[id].to;
                if level[to] == level[node] + 1 && self.residual(id) > eps {
                    path.push(id);
                    node = to;
                    advanced = true;
                    break;
                }
                it[node] += 1;
            }
            if advanced {
                continue;
            }
            if node == source {
                return;
            }
            let id = path.pop().expect("non-source node was entered by an arc");
            node = self.tail(id);
            it[node] += 1;
        }
    }

    fn max_flow(&mut self, source: usize, sink: usize, eps: f64) -> f64 {
        loop {
            let level = self.bfs_levels(source, eps);
            if level[sink] < 0 {
                break;
            }
            self.blocking_flow(source, sink, &level, eps);
        }
        self.adj[source]
            .iter()
            .map(|&id| self.arcs[id].flow)
            .sum()
    }
}

/// Arcs with residual or remaining flow below this threshold count as
/// empty; scaled to the largest vertex mass so roundoff dust from
/// augmentations cannot masquerade as capacity.
fn flow_eps(graph: &MeasureGraph) -> f64 {
    let scale = (0..graph.vertex_count())
        .map(|z| graph.mu(z))
        .fold(0.0f64, f64::max);
    scale * 1e-12
}

fn split_network(graph: &MeasureGraph) -> FlowNet {
    let n = graph.vertex_count();
    let mut net = FlowNet::new(2 * n);
    for z in 0..n {
        // Arc ids 2z / 2z+1: the capacity arc of vertex z and its reverse.
        net.add(2 * z, 2 * z + 1, graph.mu(z));
    }
    for z in 0..n {
        for &nb in graph.neighbors(z) {
            net.add(2 * z + 1, 2 * nb, f64::INFINITY);
        }
    }
    net
}

fn solve_flow(graph: &MeasureGraph, t: TerminalPair) -> (FlowNet, f64) {
    let mut net = split_network(graph);
    let flow = net.max_flow(2 * t.v, 2 * t.w + 1, flow_eps(graph));
    (net, flow)
}

pub fn min_vertex_cut(graph: &MeasureGraph, t: TerminalPair) -> CutResult {
    graph.assert_terminals(t);
    let eps = flow_eps(graph);
    let (net, flow_value) = solve_flow(graph, t);
    let nodes = net.adj.len();
    let mut seen = vec![false; nodes];
    let mut stack = vec![2 * t.v];
    seen[2 * t.v] = true;
    while let Some(u) = stack.pop() {
        for &id in &net.adj[u] {
            let to = net.arcs[id].to;
            if !seen[to] && net.residual(id) > eps {
                seen[to] = true;
                stack.push(to);
            }
        }
    }
    let n = graph.vertex_count();
    let cut = VertexSet::from_indices(n, (0..n).filter(|&z| seen[2 * z] && !seen[2 * z + 1]));
    CutResult {
        value: graph.mass_of(&cut),
        cut,
        flow_value,
    }
}

/// Decomposes a max flow into weighted `v`-`w` paths.
///
/// Walks the positive-flow arcs from the source, always taking the lowest
/// arc index, peeling off the bottleneck each time the sink is reached and
/// cancelling any cycle on first revisit. Weights are normalized to sum to
/// one and `capacity_bound = 1 / flow`.
pub fn pencil_from_flow(graph: &MeasureGraph, t: TerminalPair) -> Result<PathPencil, PencilError> {
    graph.assert_terminals(t);
    let eps = flow_eps(graph);
    let (mut net, flow_value) = solve_flow(graph, t);
    if flow_value <= eps {
        return Err(PencilError::ZeroFlow);
    }
    let thresh = flow_value * 1e-12;
    let n = graph.vertex_count();
    let source = 2 * t.v;
    let sink = 2 * t.w + 1;
    let mut raw: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut pos: Vec<Option<usize>> = vec![None; 2 * n];

    while net.arcs[2 * t.v].flow > thresh {
        let mut path_arcs: Vec<usize> = Vec::new();
        let mut path_nodes: Vec<usize> = vec![source];
        pos[source] = Some(0);
        let mut node = source;
        loop {
            if node == sink {
                let mut bottleneck = f64::INFINITY;
                for &id in &path_arcs {
                    bottleneck = bottleneck.min(net.arcs[id].flow);
                }
                for &id in &path_arcs {
                    net.arcs[id].flow -= bottleneck;
                }
                // Vertex arcs have ids below 2n; they name the vertices
                // visited, in order.
                let vertices: Vec<usize> = path_arcs
                    .iter()
                    .filter(|&&id| id < 2 * n)
                    .map(|&id| id / 2)
                    .collect();
                match raw.iter_mut().find(|(p, _)| *p == vertices) {
                    Some((_, wt)) => *wt += bottleneck,
                    None => raw.push((vertices, bottleneck)),
                }
                break;
            }
            let next = net.adj[node]
                .iter()
                .copied()
                .find(|&id| id % 2 == 0 && net.arcs[id].flow > thresh);
            match next {
                None => {
                    // Dead end from roundoff dust: drop the arc that led
                    // here and back up.
                    pos[node] = None;
                    path_nodes.pop();
                    match path_arcs.pop() {
                        None => {
                            net.arcs[2 * t.v].flow = 0.0;
                            break;
                        }
                        Some(id) => {
                            net.arcs[id].flow = 0.0;
                            node = *path_nodes.last().expect("arc stack matches node stack");
                        }
                    }
                }
                Some(id) => {
                    let to = net.arcs[id].to;
                    if let Some(j) = pos[to] {
                        // Cycle: cancel its flow and resume from the
                        // revisited node.
                        let mut b = net.arcs[id].flow;
                        for &aid in &path_arcs[j..] {
                            b = b.min(net.arcs[aid].flow);
                        }
                        net.arcs[id].flow -= b;
                        for &aid in &path_arcs[j..] {
                            net.arcs[aid].flow -= b;
                        }
                        for &dropped in &path_nodes[j + 1..] {
                            pos[dropped] = None;
                        }
                        path_nodes.truncate(j + 1);
                        path_arcs.truncate(j);
                        node = to;
                    } else {
                        path_arcs.push(id);
                        path_nodes.push(to);
                        pos[to] = Some(path_nodes.len() - 1);
                        node = to;
                    }
                }
            }
        }
        for &visited in &path_nodes {
            pos[visited] = None;
        }
    }

    let total: f64 = raw.iter().map(|(_, wt)| wt).sum();
    debug_assert!(total > 0.0);
    let paths: Vec<(GraphPath, f64)> = raw
        .into_iter()
        .map(|(vertices, wt)| (GraphPath::new(vertices), wt / total))
        .collect();
    let total_weight = paths.iter().map(|(_, a)| a).sum();
    Ok(PathPencil {
        paths,
        total_weight,
        capacity_bound: 1.0 / flow_value,
    })
}
