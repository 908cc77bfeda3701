//! Discrete width, separating ratio, position function, fibration into
//! width-one levels, and slim sets.
//!
//! All quantities are relative to a terminal pair `(v, w)` and a vertex set
//! `A`. A `v`-`w` walk is scored by the number of distinct `A`-vertices it
//! visits, endpoints included. The width of `A` is the minimum score over
//! all walks, and `pos_A(z)` is the minimum score accumulated up to a visit
//! of `z` by a walk that continues on to `w`.
//!
//! Removing a cycle from a walk never increases its distinct-vertex score,
//! and a `v`-`z` prefix extends to a `v`-`w` walk without changing the
//! prefix score whenever `z` and `w` share the terminals' component. Both
//! minima are therefore computed by one single-source shortest-path pass
//! with 0/1 vertex costs `χ_A`, instead of enumerating paths.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::graph::{
    connected_component, ExtendedCount, MeasureGraph, TerminalPair, VertexSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("terminals are not joined by any path")]
    NoPath,
    #[error("the set does not separate the terminals")]
    NotSeparating,
}

/// `pos_A` for every vertex: the least number of distinct `A`-vertices a
/// `v`-`w` walk accumulates up to a visit of `z`, or infinity when `z` lies
/// on no `v`-`w` walk (in particular everywhere when `v` and `w` are in
/// different components).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionField {
    pub terminals: TerminalPair,
    values: Vec<ExtendedCount>,
}

impl PositionField {
    pub fn value(&self, z: usize) -> ExtendedCount {
        self.values[z]
    }

    pub fn values(&self) -> &[ExtendedCount] {
        &self.values
    }
}

/// Separating ratio `mass / width` together with its ingredients.
///
/// Conventions: `value = 0` when no `v`-`w` path exists (width infinite),
/// `value = +∞` when the set fails to separate (width 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioValue {
    pub value: f64,
    pub width: ExtendedCount,
    pub mass: f64,
}

/// Decomposition of a separating set into the level sets of its position
/// function: `levels[i-1] = A ∩ {pos_A = i}` for `i = 1..=width`.
///
/// Every level is itself separating with width exactly one, levels are
/// pairwise disjoint subsets of `A`, and the chosen (minimal-mass) level
/// has mass at most `mass(A) / width`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fibration {
    pub levels: Vec<VertexSet>,
    pub masses: Vec<f64>,
    /// Index of the minimal-mass level; smallest index wins ties.
    pub chosen: usize,
    pub width: u64,
}

/// Outcome of a slimness test. `witness` is the smallest-index vertex of
/// the (component-restricted) set whose position differs from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlimCheck {
    pub slim: bool,
    pub witness: Option<usize>,
}

/// 0/1 BFS from `source` where arriving at vertex `z` costs `χ_set(z)`;
/// the source's own membership is charged too. `None` marks vertices
/// unreachable from `source`.
fn marked_distance(graph: &MeasureGraph, source: usize, set: &VertexSet) -> Vec<Option<u64>> {
    let n = graph.vertex_count();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut deque = VecDeque::with_capacity(n);
    dist[source] = Some(set.contains(source) as u64);
    deque.push_back(source);
    while let Some(u) = deque.pop_front() {
        let du = dist[u].expect("queued vertex has a distance");
        for &z in graph.neighbors(u) {
            let step = set.contains(z) as u64;
            let candidate = du + step;
            if dist[z].map_or(true, |d| candidate < d) {
                dist[z] = Some(candidate);
                if step == 0 {
                    deque.push_front(z);
                } else {
                    deque.push_back(z);
                }
            }
        }
    }
    dist
}

fn check_inputs(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) {
    graph.assert_terminals(t);
    assert_eq!(
        set.capacity(),
        graph.vertex_count(),
        "vertex set capacity mismatch"
    );
}

/// Minimum over all `v`-`w` walks of the number of distinct `set`-vertices
/// visited, endpoints included; infinite when no walk exists.
pub fn disc_width(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) -> ExtendedCount {
    check_inputs(graph, t, set);
    match marked_distance(graph, t.v, set)[t.w] {
        Some(d) => ExtendedCount::Finite(d),
        None => ExtendedCount::Infinite,
    }
}

/// True iff every `v`-`w` walk meets `set`, i.e. width ≥ 1. Vacuously true
/// when no walk exists, so every subset separates disconnected terminals.
pub fn is_separating(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) -> bool {
    disc_width(graph, t, set) != ExtendedCount::Finite(0)
}

pub fn disc_sr(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) -> RatioValue {
    let width = disc_width(graph, t, set);
    let mass = graph.mass_of(set);
    let value = match width {
        ExtendedCount::Infinite => 0.0,
        ExtendedCount::Finite(0) => f64::INFINITY,
        ExtendedCount::Finite(k) => mass / k as f64,
    };
    RatioValue { value, width, mass }
}

pub fn position_field(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) -> PositionField {
    check_inputs(graph, t, set);
    let dist = marked_distance(graph, t.v, set);
    let values = if dist[t.w].is_none() {
        // No v-w walk at all: every position is infinite.
        vec![ExtendedCount::Infinite; graph.vertex_count()]
    } else {
        dist.iter()
            .map(|d| match d {
                Some(k) => ExtendedCount::Finite(*k),
                None => ExtendedCount::Infinite,
            })
            .collect()
    };
    PositionField {
        terminals: t,
        values,
    }
}

pub fn fibrate(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<Fibration, SeparationError> {
    check_inputs(graph, t, set);
    let dist = marked_distance(graph, t.v, set);
    let width = match dist[t.w] {
        None => return Err(SeparationError::NoPath),
        Some(0) => return Err(SeparationError::NotSeparating),
        Some(k) => k,
    };
    let n = graph.vertex_count();
    let mut levels = vec![VertexSet::empty(n); width as usize];
    for z in set.iter() {
        if let Some(i) = dist[z] {
            if (1..=width).contains(&i) {
                levels[(i - 1) as usize].insert(z);
            }
        }
    }
    for level in &levels {
        // Each level set separates with width exactly one; anything else
        // means the position computation is broken.
        assert_eq!(
            disc_width(graph, t, level),
            ExtendedCount::Finite(1),
            "fibration level must have width 1"
        );
    }
    let masses: Vec<f64> = levels.iter().map(|l| graph.mass_of(l)).collect();
    let chosen = masses
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("width >= 1 gives at least one level");
    debug_assert!(masses[chosen] * width as f64 <= graph.mass_of(set) * (1.0 + 1e-9));
    Ok(Fibration {
        levels,
        masses,
        chosen,
        width,
    })
}

/// First fibration level `A ∩ {pos_A = 1}`: a slim separating subset of
/// `set`, so in particular of no greater mass.
pub fn slimify(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<VertexSet, SeparationError> {
    check_inputs(graph, t, set);
    let dist = marked_distance(graph, t.v, set);
    match dist[t.w] {
        None => return Err(SeparationError::NoPath),
        Some(0) => return Err(SeparationError::NotSeparating),
        Some(_) => {}
    }
    let mut out = VertexSet::empty(graph.vertex_count());
    for z in set.iter() {
        if dist[z] == Some(1) {
            out.insert(z);
        }
    }
    Ok(out)
}

/// Tests whether `set`, restricted to the terminals' component, is slim:
/// separating with every member a first-contact vertex of some `v`-`w`
/// walk, equivalently `pos ≡ 1` on the restricted set.
///
/// Vertices of `set` outside the component are ignored (they change
/// neither separation nor mass-minimization behavior).
pub fn is_slim(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<SlimCheck, SeparationError> {
    check_inputs(graph, t, set);
    let comp = connected_component(graph, t.v);
    if !comp.contains(t.w) {
        return Err(SeparationError::NoPath);
    }
    let effective = set.intersection(&comp);
    let dist = marked_distance(graph, t.v, &effective);
    match dist[t.w] {
        Some(0) => return Err(SeparationError::NotSeparating),
        Some(_) => {}
        None => unreachable!("w is in the component of v"),
    }
    for z in effective.iter() {
        if dist[z] != Some(1) {
            return Ok(SlimCheck {
                slim: false,
                witness: Some(z),
            });
        }
    }
    Ok(SlimCheck {
        slim: true,
        witness: None,
    })
}
