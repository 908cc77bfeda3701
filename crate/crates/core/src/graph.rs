//! Measure graphs, vertex sets, and paths.
//!
//! A [`MeasureGraph`] is a finite simple undirected graph with a strictly
//! positive mass on every vertex. Vertices are addressed by dense indices
//! `0..n`; the string labels used by file formats are kept alongside so
//! results can be reported in the caller's vocabulary.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Errors raised while constructing graphs or validating their pieces.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertexId(String),
    #[error("vertex `{0}` has non-positive or non-finite mass")]
    NonPositiveMass(String),
    #[error("edge endpoint `{0}` does not match any vertex")]
    UnknownEndpoint(String),
    #[error("duplicate edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("path has no vertices")]
    EmptyPath,
    #[error("path step {0} -> {1} is not an edge")]
    NotAdjacent(usize, usize),
}

/// Number of vertices a path family shares with a set: a natural number or
/// infinity. Infinity means the family of paths under consideration is
/// empty.
///
/// The derived order puts `Finite(a) < Finite(b)` for `a < b` and every
/// finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCount {
    Finite(u64),
    Infinite,
}

impl ExtendedCount {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedCount::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedCount::Finite(k) => Some(k),
            ExtendedCount::Infinite => None,
        }
    }

    pub fn saturating_add(self, rhs: u64) -> Self {
        match self {
            ExtendedCount::Finite(k) => ExtendedCount::Finite(k.saturating_add(rhs)),
            ExtendedCount::Infinite => ExtendedCount::Infinite,
        }
    }

    /// Finite values as `f64`, infinity as `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            ExtendedCount::Finite(k) => k as f64,
            ExtendedCount::Infinite => f64::INFINITY,
        }
    }
}

impl From<u64> for ExtendedCount {
    fn from(k: u64) -> Self {
        ExtendedCount::Finite(k)
    }
}

impl core::fmt::Display for ExtendedCount {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtendedCount::Finite(k) => write!(f, "{k}"),
            ExtendedCount::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of vertices of a graph with a fixed vertex count.
///
/// Backed by a bit set; all iteration is in ascending index order, so any
/// computation driven by a `VertexSet` is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(capacity: usize, indices: I) -> Self {
        let mut set = VertexSet::empty(capacity);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Number of vertices of the underlying graph, not the set's size.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.bits.len() && self.bits.contains(index)
    }

    pub fn insert(&mut self, index: usize) {
        self.bits.insert(index);
    }

    pub fn remove(&mut self, index: usize) {
        self.bits.remove(index);
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

/// Terminal pair for a connection problem. `v == w` is allowed; the only
/// path is then the single vertex `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminalPair {
    pub v: usize,
    pub w: usize,
}

impl TerminalPair {
    pub fn new(v: usize, w: usize) -> Self {
        TerminalPair { v, w }
    }
}

/// A walk given by its vertex sequence. Most constructors produce simple
/// paths; [`GraphPath::validate`] only requires consecutive adjacency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphPath {
    pub vertices: Vec<usize>,
}

impl GraphPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        GraphPath { vertices }
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// Checks that the sequence is non-empty, in range, and follows edges.
    pub fn validate(&self, graph: &MeasureGraph) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        for &z in &self.vertices {
            graph.check_index(z)?;
        }
        for pair in self.vertices.windows(2) {
            if !graph.adjacent(pair[0], pair[1]) {
                return Err(GraphError::NotAdjacent(pair[0], pair[1]));
            }
        }
        Ok(())
    }
}

/// Finite simple undirected graph with a positive mass per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureGraph {
    labels: Vec<String>,
    mu: Vec<f64>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl MeasureGraph {
    /// Builds a graph from `(label, mass)` pairs and index edges.
    ///
    /// Labels must be distinct, masses strictly positive and finite, edges
    /// free of self-loops and duplicates (regardless of orientation). Edge
    /// insertion order is preserved; adjacency lists are kept sorted.
    pub fn new(
        vertices: Vec<(String, f64)>,
        edge_list: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        let mut labels = Vec::with_capacity(n);
        let mut mu = Vec::with_capacity(n);
        let mut seen = BTreeMap::new();
        for (i, (label, mass)) in vertices.into_iter().enumerate() {
            if seen.insert(label.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertexId(label));
            }
            if !(mass.is_finite() && mass > 0.0) {
                return Err(GraphError::NonPositiveMass(label));
            }
            labels.push(label);
            mu.push(mass);
        }

        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen_edges = FixedBitSet::with_capacity(n.saturating_mul(n));
        for &(a, b) in edge_list {
            for z in [a, b] {
                if z >= n {
                    return Err(GraphError::IndexOutOfRange { index: z, count: n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(labels[a].clone()));
            }
            let key = a.min(b) * n + a.max(b);
            if seen_edges.contains(key) {
                return Err(GraphError::DuplicateEdge(labels[a].clone(), labels[b].clone()));
            }
            seen_edges.insert(key);
            adj[a].push(b);
            adj[b].push(a);
            edges.push((a, b));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(MeasureGraph {
            labels,
            mu,
            adj,
            edges,
        })
    }

    /// Builds a graph whose edges refer to vertices by label.
    pub fn from_labeled_edges(
        vertices: Vec<(String, f64)>,
        edge_list: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let index: BTreeMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, (label, _))| (label.clone(), i))
            .collect();
        let mut edges = Vec::with_capacity(edge_list.len());
        for (a, b) in edge_list {
            let ia = *index
                .get(a)
                .ok_or_else(|| GraphError::UnknownEndpoint(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| GraphError::UnknownEndpoint(b.clone()))?;
            edges.push((ia, ib));
        }
        MeasureGraph::new(vertices, &edges)
    }

    /// Graph with unit masses and labels `"0"`, `"1"`, ... Convenient for
    /// tests and generated instances.
    pub fn with_unit_masses(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let vertices = (0..n).map(|i| (format_label(i), 1.0)).collect();
        MeasureGraph::new(vertices, edge_list)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mu(&self, index: usize) -> f64 {
        self.mu[index]
    }

    /// Replaces all masses. Lengths must match; the same validity rules as
    /// in [`MeasureGraph::new`] apply.
    pub fn set_masses(&mut self, masses: &[f64]) -> Result<(), GraphError> {
        assert_eq!(masses.len(), self.mu.len(), "mass vector length mismatch");
        for (i, &m) in masses.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(GraphError::NonPositiveMass(self.labels[i].clone()));
            }
        }
        self.mu.copy_from_slice(masses);
        Ok(())
    }

    /// Neighbors in ascending index order.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges in insertion order, with the endpoint orientation they were
    /// given in.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn mass_of(&self, set: &VertexSet) -> f64 {
        assert_eq!(set.capacity(), self.vertex_count(), "set capacity mismatch");
        set.iter().map(|z| self.mu[z]).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn check_index(&self, index: usize) -> Result<(), GraphError> {
        if index < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange {
                index,
                count: self.vertex_count(),
            })
        }
    }

    pub(crate) fn assert_terminals(&self, t: TerminalPair) {
        assert!(
            t.v < self.vertex_count() && t.w < self.vertex_count(),
            "terminal index out of range"
        );
    }
}

fn format_label(i: usize) -> String {
    let mut s = String::new();
    core::fmt::write(&mut s, format_args!("{i}")).expect("write to String");
    s
}

/// Vertices reachable from `start`, including `start` itself.
pub fn connected_component(graph: &MeasureGraph, start: usize) -> VertexSet {
    graph
        .check_index(start)
        .expect("start index out of range");
    let mut seen = VertexSet::empty(graph.vertex_count());
    let mut queue = VecDeque::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        for &z in graph.neighbors(u) {
            if !seen.contains(z) {
                seen.insert(z);
                queue.push_back(z);
            }
        }
    }
    seen
}

/// Whether `w` can be reached from `v`. `has_path(g, v, v)` is true.
pub fn has_path(graph: &MeasureGraph, v: usize, w: usize) -> bool {
    graph.check_index(w).expect("index out of range");
    connected_component(graph, v).contains(w)
}

/// Number of distinct vertices the walk shares with `set`.
///
/// Repeated visits count once, matching how paths are scored against
/// separating sets everywhere in this crate.
pub fn path_intersection_count(path: &GraphPath, set: &VertexSet) -> usize {
    let mut counted = FixedBitSet::with_capacity(set.capacity());
    let mut total = 0;
    for &z in &path.vertices {
        if set.contains(z) && !counted.contains(z) {
            counted.insert(z);
            total += 1;
        }
    }
    total
}
