//! Deterministic instance generators: every random choice flows through a
//! single seeded ChaCha stream, so identical seeds reproduce identical
//! graphs, sets, and reports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sepgraph_core::{connected_component, is_separating, MeasureGraph, TerminalPair, VertexSet};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labeled_masses(rng: &mut ChaCha8Rng, n: usize) -> Vec<(String, f64)> {
    (0..n)
        .map(|i| (i.to_string(), rng.random_range(0.1..10.0)))
        .collect()
}

/// Random connected graph on `n` vertices: a random attachment tree plus
/// `extra` random chords, masses uniform in [0.1, 10).
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> MeasureGraph {
    assert!(n >= 1);
    let mut present = vec![false; n * n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut add = |a: usize, b: usize, present: &mut Vec<bool>| {
        let key = a.min(b) * n + a.max(b);
        if a != b && !present[key] {
            present[key] = true;
            edges.push((a.min(b), a.max(b)));
            true
        } else {
            false
        }
    };
    for i in 1..n {
        let parent = rng.random_range(0..i);
        add(parent, i, &mut present);
    }
    let mut budget = extra;
    let mut attempts = 0usize;
    while budget > 0 && attempts < 20 * (extra + 1) && n >= 2 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if add(a, b, &mut present) {
            budget -= 1;
        }
        attempts += 1;
    }
    MeasureGraph::new(labeled_masses(rng, n), &edges).expect("generator avoids invalid edges")
}

/// Random graph on `n` vertices with independent edge probability `p`;
/// may be disconnected.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> MeasureGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    MeasureGraph::new(labeled_masses(rng, n), &edges).expect("generator avoids invalid edges")
}

/// Random terminal pair, distinct when the graph has two vertices.
pub fn random_terminals(rng: &mut ChaCha8Rng, n: usize) -> TerminalPair {
    if n == 1 {
        return TerminalPair::new(0, 0);
    }
    let v = rng.random_range(0..n);
    let mut w = rng.random_range(0..n - 1);
    if w >= v {
        w += 1;
    }
    TerminalPair::new(v, w)
}

/// Random separating subset of the terminal component. Rejection-samples
/// random subsets and falls back to the source singleton, which meets
/// every terminal path.
pub fn random_separating_set(
    rng: &mut ChaCha8Rng,
    graph: &MeasureGraph,
    t: TerminalPair,
) -> VertexSet {
    let n = graph.vertex_count();
    let comp = connected_component(graph, t.v);
    for _ in 0..32 {
        let set = VertexSet::from_indices(
            n,
            (0..n).filter(|&z| comp.contains(z) && rng.random_bool(0.4)),
        );
        if !set.is_empty() && is_separating(graph, t, &set) {
            return set;
        }
    }
    VertexSet::from_indices(n, [t.v])
}

/// Every connected graph on `n` labeled vertices, by exhaustive scan of
/// edge subsets; masses drawn from `rng` per graph.
pub fn connected_graph_catalog(rng: &mut ChaCha8Rng, n: usize) -> Vec<MeasureGraph> {
    assert!((1..=6).contains(&n), "catalog is meant for tiny graphs");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let graph = MeasureGraph::new(labeled_masses(rng, n), &edges).expect("valid edges");
        if connected_component(&graph, 0).len() == n {
            out.push(graph);
        }
    }
    out
}
