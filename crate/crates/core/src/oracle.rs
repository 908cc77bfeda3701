//! Brute-force reference implementations for small graphs.
//!
//! Everything here recomputes quantities from first principles -- explicit
//! path enumeration, subset scans, barrier-method convex solves -- so the
//! fast production routines have something methodologically independent to
//! agree with. Caps keep the exponential blow-ups honest: listing paths is
//! limited to [`ENUM_CAP`] vertices, subset and mask scans to [`MASK_CAP`],
//! and the convex solver to [`MODULUS_CAP`].
//!
//! Walks and simple paths score the same minima here: erasing a loop from a
//! walk never increases its distinct-vertex count, so every minimum over
//! walks is attained by a simple path.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use libm::{log, pow};
use thiserror::Error;

use crate::graph::{ExtendedCount, GraphPath, MeasureGraph, TerminalPair, VertexSet};

/// Vertex cap for explicit path listing.
pub const ENUM_CAP: usize = 12;
/// Vertex cap for subset scans and path-mask catalogs.
pub const MASK_CAP: usize = 16;
/// Vertex cap for the brute-force modulus solver.
pub const MODULUS_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {got} vertices, oracle cap is {cap}")]
    CapExceeded { got: usize, cap: usize },
}

/// All simple `v`-`w` paths, in lexicographic order of vertex sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCatalog {
    pub paths: Vec<GraphPath>,
}

fn check_cap(graph: &MeasureGraph, cap: usize) -> Result<(), OracleError> {
    let got = graph.vertex_count();
    if got > cap {
        Err(OracleError::CapExceeded { got, cap })
    } else {
        Ok(())
    }
}

pub fn enumerate_simple_paths(
    graph: &MeasureGraph,
    t: TerminalPair,
) -> Result<PathCatalog, OracleError> {
    graph.assert_terminals(t);
    check_cap(graph, ENUM_CAP)?;
    let mut paths = Vec::new();
    let mut visited = vec![false; graph.vertex_count()];
    let mut trail = vec![t.v];
    visited[t.v] = true;
    dfs_paths(graph, t.v, t.w, &mut visited, &mut trail, &mut paths);
    Ok(PathCatalog { paths })
}

fn dfs_paths(
    graph: &MeasureGraph,
    current: usize,
    target: usize,
    visited: &mut Vec<bool>,
    trail: &mut Vec<usize>,
    out: &mut Vec<GraphPath>,
) {
    if current == target {
        // A simple path ends at its only visit of the target.
        out.push(GraphPath::new(trail.clone()));
        return;
    }
    for &nb in graph.neighbors(current) {
        if !visited[nb] {
            visited[nb] = true;
            trail.push(nb);
            dfs_paths(graph, nb, target, visited, trail, out);
            trail.pop();
            visited[nb] = false;
        }
    }
}

fn mask_of(set: &VertexSet) -> u32 {
    let mut m = 0u32;
    for z in set.iter() {
        m |= 1 << z;
    }
    m
}

/// Ascending-index sequences compared lexicographically; a proper prefix
/// precedes its extensions.
fn lex_less(a: u32, b: u32) -> bool {
    let mut x = a;
    let mut y = b;
    while x != 0 && y != 0 {
        let i = x.trailing_zeros();
        let j = y.trailing_zeros();
        if i != j {
            return i < j;
        }
        x &= x - 1;
        y &= y - 1;
    }
    x == 0 && y != 0
}

/// For every target `z`, the distinct vertex sets of simple `source`-`z`
/// paths, as sorted bit masks. Enumerates (visited-set, endpoint) states,
/// which stays polynomial in the number of such states rather than in the
/// number of paths.
fn simple_path_masks_from(graph: &MeasureGraph, source: usize) -> Result<Vec<Vec<u32>>, OracleError> {
    check_cap(graph, MASK_CAP)?;
    let n = graph.vertex_count();
    let mut seen = vec![false; n << n];
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut stack: Vec<(u32, usize)> = Vec::new();
    let start = (1u32 << source, source);
    seen[(start.0 as usize) * n + source] = true;
    stack.push(start);
    while let Some((mask, last)) = stack.pop() {
        out[last].push(mask);
        for &nb in graph.neighbors(last) {
            if mask & (1 << nb) == 0 {
                let nm = mask | (1 << nb);
                let key = (nm as usize) * n + nb;
                if !seen[key] {
                    seen[key] = true;
                    stack.push((nm, nb));
                }
            }
        }
    }
    for masks in &mut out {
        masks.sort_unstable();
    }
    Ok(out)
}

/// Keeps only the subset-minimal masks. Valid preprocessing for any
/// objective that is monotone under taking submasks, such as minimizing
/// an intersection popcount or a nonnegative sum over members.
fn minimal_masks(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    let mut out: Vec<u32> = Vec::new();
    'next: for m in masks {
        for &k in &out {
            if k & m == k {
                continue 'next;
            }
        }
        out.push(m);
    }
    out
}

fn min_intersection(masks: &[u32], a: u32) -> Option<u32> {
    masks.iter().map(|m| (m & a).count_ones()).min()
}

pub fn brute_width(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<ExtendedCount, OracleError> {
    graph.assert_terminals(t);
    let masks = simple_path_masks_from(graph, t.v)?;
    Ok(match min_intersection(&masks[t.w], mask_of(set)) {
        Some(k) => ExtendedCount::Finite(k as u64),
        None => ExtendedCount::Infinite,
    })
}

/// Position of every vertex from scratch: minimum set-intersection count
/// over simple `v`-`z` paths, infinite off the terminals' common component.
pub fn brute_position(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<Vec<ExtendedCount>, OracleError> {
    graph.assert_terminals(t);
    let masks = simple_path_masks_from(graph, t.v)?;
    let n = graph.vertex_count();
    if masks[t.w].is_empty() {
        return Ok(vec![ExtendedCount::Infinite; n]);
    }
    let a = mask_of(set);
    Ok((0..n)
        .map(|z| match min_intersection(&masks[z], a) {
            Some(k) => ExtendedCount::Finite(k as u64),
            None => ExtendedCount::Infinite,
        })
        .collect())
}

fn reachable_avoiding(graph: &MeasureGraph, t: TerminalPair, banned: u32) -> bool {
    let n = graph.vertex_count();
    if banned & (1 << t.v) != 0 || banned & (1 << t.w) != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![t.v];
    seen[t.v] = true;
    while let Some(u) = stack.pop() {
        if u == t.w {
            return true;
        }
        for &nb in graph.neighbors(u) {
            if !seen[nb] && banned & (1 << nb) == 0 {
                seen[nb] = true;
                stack.push(nb);
            }
        }
    }
    false
}

/// Scans every subset for the least-mass separating one. The separation
/// test is plain reachability in the complement, deliberately sharing no
/// code with the width machinery. Ties go to the lexicographically least
/// vertex list.
pub fn brute_min_separating_mass(
    graph: &MeasureGraph,
    t: TerminalPair,
) -> Result<(f64, VertexSet), OracleError> {
    graph.assert_terminals(t);
    check_cap(graph, MASK_CAP)?;
    let n = graph.vertex_count();
    let mut best_mass = f64::INFINITY;
    let mut best_mask = 0u32;
    for a_mask in 0..(1u64 << n) as u32 {
        let separating = a_mask & (1 << t.v) != 0
            || a_mask & (1 << t.w) != 0
            || !reachable_avoiding(graph, t, a_mask);
        if !separating {
            continue;
        }
        let mass: f64 = (0..n)
            .filter(|&z| a_mask & (1 << z) != 0)
            .map(|z| graph.mu(z))
            .sum();
        if mass < best_mass || (mass == best_mass && lex_less(a_mask, best_mask)) {
            best_mass = mass;
            best_mask = a_mask;
        }
    }
    let witness = VertexSet::from_indices(n, (0..n).filter(|&z| best_mask & (1 << z) != 0));
    Ok((best_mass, witness))
}

/// Scans every subset for the least separating ratio `mass / width`.
/// Non-separating subsets (ratio +∞) are skipped; with no `v`-`w` path at
/// all every ratio is 0 and the empty set is the least witness.
pub fn brute_min_sr(
    graph: &MeasureGraph,
    t: TerminalPair,
) -> Result<(f64, VertexSet), OracleError> {
    graph.assert_terminals(t);
    let masks = minimal_masks(simple_path_masks_from(graph, t.v)?[t.w].clone());
    let n = graph.vertex_count();
    if masks.is_empty() {
        return Ok((0.0, VertexSet::empty(n)));
    }
    let mut best_value = f64::INFINITY;
    let mut best_mask = 0u32;
    for a_mask in 0..(1u64 << n) as u32 {
        let width = min_intersection(&masks, a_mask).expect("path catalog is nonempty");
        if width == 0 {
            continue;
        }
        let mass: f64 = (0..n)
            .filter(|&z| a_mask & (1 << z) != 0)
            .map(|z| graph.mu(z))
            .sum();
        let value = mass / width as f64;
        if value < best_value || (value == best_value && lex_less(a_mask, best_mask)) {
            best_value = value;
            best_mask = a_mask;
        }
    }
    let witness = VertexSet::from_indices(n, (0..n).filter(|&z| best_mask & (1 << z) != 0));
    Ok((best_value, witness))
}

/// Precomputed per-terminal-pair path-mask catalogs for checking the four
/// slimness characterizations against many sets cheaply.
///
/// For each vertex `z`, `from_v[z]` holds the minimal vertex-set masks of
/// simple `v`-`z` paths. The adjacency lists are kept alongside so that the
/// fourth characterization can be answered by a reachability search that
/// shares nothing with the mask catalogs.
pub struct SlimOracle {
    n: usize,
    source: usize,
    comp: u32,
    has_path: bool,
    from_v: Vec<Vec<u32>>,
    adj: Vec<Vec<usize>>,
}

impl SlimOracle {
    pub fn new(graph: &MeasureGraph, t: TerminalPair) -> Result<Self, OracleError> {
        graph.assert_terminals(t);
        let n = graph.vertex_count();
        let from_v: Vec<Vec<u32>> = simple_path_masks_from(graph, t.v)?
            .into_iter()
            .map(minimal_masks)
            .collect();
        let mut comp = 0u32;
        for (z, masks) in from_v.iter().enumerate() {
            if !masks.is_empty() {
                comp |= 1 << z;
            }
        }
        let has_path = !from_v[t.w].is_empty();
        let adj = (0..n).map(|z| graph.neighbors(z).to_vec()).collect();
        Ok(SlimOracle {
            n,
            source: t.v,
            comp,
            has_path,
            from_v,
            adj,
        })
    }

    pub fn has_path(&self) -> bool {
        self.has_path
    }

    pub fn component_of_v(&self) -> VertexSet {
        VertexSet::from_indices(self.n, (0..self.n).filter(|&z| self.comp & (1 << z) != 0))
    }

    /// The four slimness characterizations, computed by unshared routes:
    /// 1. every set vertex is the first set contact of some terminal path;
    /// 2. the position function equals 1 on the set;
    /// 3. positions take no values besides 0, 1, and +∞;
    /// 4. every component vertex starts some terminal walk whose initial
    ///    segment up to that vertex meets the set at most once.
    ///
    /// Conditions 1-3 read the mask catalogs; condition 4 runs a budgeted
    /// breadth-first search over (vertex, marks-spent) states instead.
    pub fn conditions(&self, set: &VertexSet) -> [bool; 4] {
        let a = mask_of(set);
        let first_contact = set.iter().all(|z| {
            self.from_v[z]
                .iter()
                .any(|&m| m & a == 1 << z)
        });
        let positions_one_on_set = set.iter().all(|z| {
            min_intersection(&self.from_v[z], a) == Some(1)
        });
        let mut positions_small = true;
        for z in 0..self.n {
            if self.comp & (1 << z) == 0 {
                continue;
            }
            if min_intersection(&self.from_v[z], a).expect("z is in the component") > 1 {
                positions_small = false;
            }
        }
        let cheap = self.reachable_spending_one(a);
        let single_prefix = self.has_path
            && (0..self.n)
                .filter(|&z| self.comp & (1 << z) != 0)
                .all(|z| cheap[z]);
        [
            first_contact,
            positions_one_on_set,
            positions_small,
            single_prefix,
        ]
    }

    /// Which vertices some walk from the source reaches while entering at
    /// most one marked vertex. States are (vertex, marks entered so far)
    /// pairs; entry counting and distinct counting agree at budget one
    /// because a walk that re-enters its single marked vertex can drop the
    /// loop between the two visits.
    fn reachable_spending_one(&self, a: u32) -> Vec<bool> {
        let mut seen = vec![false; 2 * self.n];
        let mut queue = VecDeque::new();
        let start = (a >> self.source & 1) as usize;
        seen[2 * self.source + start] = true;
        queue.push_back((self.source, start));
        while let Some((z, spent)) = queue.pop_front() {
            for &nb in &self.adj[z] {
                let next = spent + (a >> nb & 1) as usize;
                if next <= 1 && !seen[2 * nb + next] {
                    seen[2 * nb + next] = true;
                    queue.push_back((nb, next));
                }
            }
        }
        (0..self.n).map(|z| seen[2 * z] || seen[2 * z + 1]).collect()
    }
}

pub fn brute_slim_conditions(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &VertexSet,
) -> Result<[bool; 4], OracleError> {
    Ok(SlimOracle::new(graph, t)?.conditions(set))
}

/// Brute-force `p`-modulus of the terminal path family.
///
/// For `p = 1` this is the least mass of a subset meeting every path,
/// found by subset scan. For `p > 1` the convex program
/// `min Σ μ ρ^p  s.t.  Σ_{z∈c} ρ_z >= 1 for every path c, ρ >= 0`
/// is solved over the explicit minimal-path catalog with a log-barrier
/// interior-point method: Newton centering steps on
/// `t·Σ μ ρ^p − Σ_c ln(Σ_{z∈c} ρ_z − 1) − Σ_z ln ρ_z`
/// while `t` grows until the barrier gap bound `(paths + n)/t` falls below
/// 1e-10 of the objective. The iterate stays strictly admissible, so the
/// returned value is an upper bound within that gap. An empty path family
/// has modulus 0.
pub fn brute_modulus(graph: &MeasureGraph, t: TerminalPair, p: f64) -> Result<f64, OracleError> {
    graph.assert_terminals(t);
    assert!(p >= 1.0 && p.is_finite(), "exponent must satisfy p >= 1");
    check_cap(graph, MODULUS_CAP)?;
    let n = graph.vertex_count();
    let masks = minimal_masks(simple_path_masks_from(graph, t.v)?[t.w].clone());
    if masks.is_empty() {
        return Ok(0.0);
    }
    if p == 1.0 {
        let mut best = f64::INFINITY;
        for a_mask in 0..(1u64 << n) as u32 {
            if masks.iter().any(|&m| m & a_mask == 0) {
                continue;
            }
            let mass: f64 = (0..n)
                .filter(|&z| a_mask & (1 << z) != 0)
                .map(|z| graph.mu(z))
                .sum();
            if mass < best {
                best = mass;
            }
        }
        return Ok(best);
    }

    let cons: Vec<Vec<usize>> = masks
        .iter()
        .map(|&m| (0..n).filter(|&z| m & (1 << z) != 0).collect())
        .collect();
    let minlen = cons.iter().map(Vec::len).min().expect("nonempty family");
    let mu: Vec<f64> = (0..n).map(|z| graph.mu(z)).collect();
    let objective = |x: &[f64]| -> f64 { (0..n).map(|z| mu[z] * pow(x[z], p)).sum() };
    let barrier = |x: &[f64], t_weight: f64| -> f64 {
        let mut phi = t_weight * objective(x);
        for c in &cons {
            let slack: f64 = c.iter().map(|&z| x[z]).sum::<f64>() - 1.0;
            if slack <= 0.0 {
                return f64::INFINITY;
            }
            phi -= log(slack);
        }
        for &xz in x {
            if xz <= 0.0 {
                return f64::INFINITY;
            }
            phi -= log(xz);
        }
        phi
    };

    // Strictly feasible start: uniform density scaled past every
    // constraint, since each path has at least `minlen` vertices.
    let mut x = vec![1.2 / minlen as f64; n];
    let total_constraints = (cons.len() + n) as f64;
    let mut t_weight = total_constraints / objective(&x).max(1e-12);
    let mut grad = vec![0.0f64; n];
    let mut hess = vec![vec![0.0f64; n]; n];
    loop {
        for _ in 0..200 {
            for z in 0..n {
                grad[z] = t_weight * p * mu[z] * pow(x[z], p - 1.0) - 1.0 / x[z];
                hess[z].fill(0.0);
                hess[z][z] =
                    t_weight * p * (p - 1.0) * mu[z] * pow(x[z], p - 2.0) + 1.0 / (x[z] * x[z]);
            }
            for c in &cons {
                let slack: f64 = c.iter().map(|&z| x[z]).sum::<f64>() - 1.0;
                let inv = 1.0 / slack;
                for &z in c {
                    grad[z] -= inv;
                    for &zz in c {
                        hess[z][zz] += inv * inv;
                    }
                }
            }
            let step = solve_spd(&mut hess, &grad);
            let decrement: f64 = (0..n).map(|z| grad[z] * step[z]).sum();
            if decrement <= 2e-12 {
                break;
            }
            let phi_here = barrier(&x, t_weight);
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..100 {
                let trial: Vec<f64> = (0..n).map(|z| x[z] - alpha * step[z]).collect();
                if barrier(&trial, t_weight) <= phi_here - 0.25 * alpha * decrement {
                    x = trial;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        let fx = objective(&x);
        if total_constraints / t_weight <= 1e-10 * fx.max(1e-12) || t_weight > 1e280 {
            return Ok(fx);
        }
        t_weight *= 10.0;
    }
}

/// Solves `H d = g` for symmetric positive definite `H` by Gaussian
/// elimination with partial pivoting. `H` is consumed as scratch space.
fn solve_spd(h: &mut [Vec<f64>], g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut rhs = g.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| h[a][col].abs().total_cmp(&h[b][col].abs()))
            .expect("nonempty column");
        h.swap(col, pivot);
        rhs.swap(col, pivot);
        let (top, bottom) = h.split_at_mut(col + 1);
        let pivot_row = &top[col];
        let diag = pivot_row[col];
        for (off, row) in bottom.iter_mut().enumerate() {
            let factor = row[col] / diag;
            if factor == 0.0 {
                continue;
            }
            for (dst, &src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= factor * src;
            }
            rhs[col + 1 + off] -= factor * rhs[col];
        }
    }
    let mut d = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= h[row][k] * d[k];
        }
        d[row] = acc / h[row][row];
    }
    d
}
