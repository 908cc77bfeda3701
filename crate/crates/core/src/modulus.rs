//! Discrete `p`-modulus of the terminal path family, solved by constraint
//! generation, plus path pencils built from the optimal duals.
//!
//! The primal problem minimizes `Σ_z μ(z) ρ(z)^p` over vertex densities
//! `ρ >= 0` subject to `Σ_{z∈c} ρ(z) >= 1` for every `v`-`w` path `c`.
//! Only a few constraints bind at the optimum, so the solver alternates
//! between maximizing the Lagrangian dual over the currently active paths
//! (coordinate ascent, each coordinate solved by monotone bisection) and
//! asking a vertex-weighted shortest-path oracle for a violated path.
//! Dividing the iterate by its shortest path length restores exact
//! admissibility, and the dual value certifies the duality gap.
//!
//! For `p = 1` the optimum is the minimum-mass vertex cut and is delegated
//! to the flow solver.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use libm::pow;
use thiserror::Error;

use crate::graph::{has_path, GraphPath, MeasureGraph, TerminalPair};
use crate::mincut::{min_vertex_cut, PathPencil};

/// A nonnegative vertex density.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    rho: Vec<f64>,
}

impl Density {
    pub fn new(rho: Vec<f64>) -> Self {
        assert!(
            rho.iter().all(|r| r.is_finite() && *r >= 0.0),
            "densities must be finite and nonnegative"
        );
        Density { rho }
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        Density::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn value(&self, z: usize) -> f64 {
        self.rho[z]
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    /// Sum of the density over a path's vertices.
    pub fn path_length(&self, path: &GraphPath) -> f64 {
        path.vertices.iter().map(|&z| self.rho[z]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusResult {
    pub p: f64,
    /// Energy `Σ μ ρ^p` of the admissible density `rho`.
    pub value: f64,
    pub rho: Density,
    /// Paths whose constraints were generated; duals index into this list.
    pub active_paths: Vec<GraphPath>,
    pub duals: Vec<f64>,
    /// Relative duality gap; 0 for the exact `p = 1` case.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModulusError {
    #[error("terminals are not joined by any path")]
    NoPath,
    #[error("constraint generation failed to close the duality gap")]
    NonConvergence,
    #[error("all path duals are zero; no pencil can be formed")]
    DegenerateDuals,
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    // Inverted: BinaryHeap is a max-heap, we pop the smallest distance,
    // breaking ties toward the smallest vertex index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum of `Σ_{z∈c} rho(z)` over `v`-`w` paths, with a witness path.
/// Vertex-weighted Dijkstra; ties resolve toward smaller vertex indices,
/// so the witness is deterministic.
pub fn shortest_rho_path(
    graph: &MeasureGraph,
    t: TerminalPair,
    rho: &Density,
) -> Result<(GraphPath, f64), ModulusError> {
    graph.assert_terminals(t);
    assert_eq!(rho.len(), graph.vertex_count(), "density length mismatch");
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut settled = vec![false; n];
    let mut heap = alloc::collections::BinaryHeap::new();
    dist[t.v] = rho.value(t.v);
    heap.push(HeapEntry {
        dist: dist[t.v],
        vertex: t.v,
    });
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == t.w {
            break;
        }
        for &z in graph.neighbors(u) {
            let nd = d + rho.value(z);
            if nd < dist[z] {
                dist[z] = nd;
                parent[z] = u;
                heap.push(HeapEntry { dist: nd, vertex: z });
            }
        }
    }
    if !settled[t.w] {
        return Err(ModulusError::NoPath);
    }
    let mut vertices = vec![t.w];
    let mut u = t.w;
    while u != t.v {
        u = parent[u];
        vertices.push(u);
    }
    vertices.reverse();
    Ok((GraphPath::new(vertices), dist[t.w]))
}

/// Dual coordinate ascent over the active constraints. `s[z]` caches
/// `Σ λ_c` over active paths through `z`; the stationarity map
/// `ρ(z) = (s(z) / (p μ(z)))^{1/(p-1)}` turns each coordinate update into
/// a monotone root find for `Σ_{z∈c} ρ(z) = 1` (zero if slack at zero).
fn dual_ascent(
    lambda: &mut [f64],
    s: &mut [f64],
    active: &[Vec<usize>],
    mu: &[f64],
    p: f64,
    q: f64,
    rel_tol: f64,
) {
    let dual_value = |s: &[f64], lam_sum: f64| -> f64 {
        let energy: f64 = (0..mu.len())
            .map(|z| mu[z] * pow(s[z] / (p * mu[z]), p * q))
            .sum();
        lam_sum - (p - 1.0) * energy
    };
    let mut g_prev = dual_value(s, lambda.iter().sum());
    for _ in 0..10_000 {
        // Rebuild the cache each sweep so incremental updates cannot
        // accumulate drift.
        for v in s.iter_mut() {
            *v = 0.0;
        }
        for (ci, c) in active.iter().enumerate() {
            for &z in c {
                s[z] += lambda[ci];
            }
        }
        for (ci, c) in active.iter().enumerate() {
            for &z in c {
                s[z] -= lambda[ci];
            }
            let shortfall = |x: f64| -> f64 {
                c.iter()
                    .map(|&z| pow((s[z] + x) / (p * mu[z]), q))
                    .sum::<f64>()
                    - 1.0
            };
            let new = if shortfall(0.0) >= 0.0 {
                0.0
            } else {
                let mut hi = 1.0f64;
                let mut guard = 0;
                while shortfall(hi) < 0.0 && guard < 200 {
                    hi *= 2.0;
                    guard += 1;
                }
                let mut lo = 0.0f64;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if shortfall(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            for &z in c {
                s[z] += new;
            }
            lambda[ci] = new;
        }
        let g_now = dual_value(s, lambda.iter().sum());
        if g_now - g_prev <= rel_tol * g_now.abs().max(1.0) {
            return;
        }
        g_prev = g_now;
    }
}

pub fn modulus_p(
    graph: &MeasureGraph,
    t: TerminalPair,
    p: f64,
    tol: f64,
) -> Result<ModulusResult, ModulusError> {
    graph.assert_terminals(t);
    assert!(p.is_finite() && p >= 1.0, "exponent must satisfy p >= 1");
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    if !has_path(graph, t.v, t.w) {
        return Err(ModulusError::NoPath);
    }
    let n = graph.vertex_count();
    if p == 1.0 {
        let cut = min_vertex_cut(graph, t);
        let rho: Vec<f64> = (0..n)
            .map(|z| if cut.cut.contains(z) { 1.0 } else { 0.0 })
            .collect();
        return Ok(ModulusResult {
            p,
            value: cut.value,
            rho: Density::new(rho),
            active_paths: Vec::new(),
            duals: Vec::new(),
            gap: 0.0,
        });
    }

    let mu: Vec<f64> = (0..n).map(|z| graph.mu(z)).collect();
    let q = 1.0 / (p - 1.0);
    let (first, _) = shortest_rho_path(graph, t, &Density::uniform(n, 1.0))?;
    let mut active: Vec<Vec<usize>> = vec![first.vertices.to_vec()];
    let mut active_paths: Vec<GraphPath> = vec![first];
    let mut lambda: Vec<f64> = vec![0.0];
    let mut s: Vec<f64> = vec![0.0; n];
    let mut ascent_tol = tol / 10.0;
    let mut len_tol = tol / (4.0 * p);
    let max_rounds = 10 * n * n;
    for _ in 0..max_rounds {
        dual_ascent(&mut lambda, &mut s, &active, &mu, p, q, ascent_tol);
        let rho_raw: Vec<f64> = (0..n).map(|z| pow(s[z] / (p * mu[z]), q)).collect();
        let (path, len) = shortest_rho_path(graph, t, &Density::new(rho_raw.clone()))?;
        if len >= 1.0 - len_tol {
            let primal_rho: Vec<f64> = rho_raw.iter().map(|r| r / len).collect();
            let primal: f64 = (0..n).map(|z| mu[z] * pow(primal_rho[z], p)).sum();
            let lam_sum: f64 = lambda.iter().sum();
            let energy_raw: f64 = (0..n).map(|z| mu[z] * pow(rho_raw[z], p)).sum();
            let dual = lam_sum - (p - 1.0) * energy_raw;
            let gap = ((primal - dual) / primal).max(0.0);
            if gap <= tol {
                return Ok(ModulusResult {
                    p,
                    value: primal,
                    rho: Density::new(primal_rho),
                    active_paths,
                    duals: lambda,
                    gap,
                });
            }
            len_tol *= 0.25;
            ascent_tol *= 0.1;
            continue;
        }
        let verts = path.vertices.to_vec();
        if active.contains(&verts) {
            // The separation oracle repeated a known path, so the master
            // was solved too loosely to make progress.
            ascent_tol *= 0.1;
        } else {
            active.push(verts);
            active_paths.push(path);
            lambda.push(0.0);
        }
    }
    Err(ModulusError::NonConvergence)
}

/// Normalizes the optimal duals into path weights `α = λ / Σλ` and attaches
/// the exact worst-case ratio bound.
///
/// For any density `g >= 0`, Hölder's inequality bounds
/// `(Σ_c α_c Σ_{z∈c} g(z))^p / Σ μ g^p` by
/// `C = (Σ_z t_z^{p'} μ_z^{1-p'})^{p-1}` with `t_z` the pencil load at `z`
/// and `p' = p/(p-1)`; the bound is attained at `g ∝ (t/μ)^{1/(p-1)}`.
pub fn pencil_from_duals(
    graph: &MeasureGraph,
    result: &ModulusResult,
) -> Result<PathPencil, ModulusError> {
    assert!(result.p > 1.0, "dual pencils need p > 1");
    assert_eq!(result.active_paths.len(), result.duals.len());
    let total: f64 = result.duals.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(ModulusError::DegenerateDuals);
    }
    let paths: Vec<(GraphPath, f64)> = result
        .active_paths
        .iter()
        .zip(&result.duals)
        .filter(|(_, &l)| l > 0.0)
        .map(|(c, &l)| (c.clone(), l / total))
        .collect();
    let n = graph.vertex_count();
    let mut loads = vec![0.0f64; n];
    for (c, a) in &paths {
        for &z in &c.vertices {
            loads[z] += *a;
        }
    }
    let pp = result.p / (result.p - 1.0);
    let inner: f64 = (0..n)
        .map(|z| pow(loads[z], pp) * pow(graph.mu(z), 1.0 - pp))
        .sum();
    let capacity_bound = pow(inner, result.p - 1.0);
    let total_weight = paths.iter().map(|(_, a)| a).sum();
    Ok(PathPencil {
        paths,
        total_weight,
        capacity_bound,
    })
}

/// Empirical counterpart of a pencil's capacity bound: the ratio
/// `(Σ_c α_c Σ_{z∈c} g(z))^p / Σ μ g^p` for one probe density `g`, defined
/// as 0 when the probe has zero energy.
pub fn pencil_ratio(
    graph: &MeasureGraph,
    pencil: &PathPencil,
    p: f64,
    probe: &Density,
) -> f64 {
    assert_eq!(probe.len(), graph.vertex_count(), "density length mismatch");
    let num_base: f64 = pencil
        .paths
        .iter()
        .map(|(c, a)| a * probe.path_length(c))
        .sum();
    let den: f64 = (0..graph.vertex_count())
        .map(|z| graph.mu(z) * pow(probe.value(z), p))
        .sum();
    if den == 0.0 {
        0.0
    } else {
        pow(num_base, p) / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MeasureGraph;

    fn chain3() -> (MeasureGraph, TerminalPair) {
        let g = MeasureGraph::with_unit_masses(3, &[(0, 1), (1, 2)]).unwrap();
        (g, TerminalPair::new(0, 2))
    }

    fn parallel() -> (MeasureGraph, TerminalPair) {
        let g = MeasureGraph::with_unit_masses(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        (g, TerminalPair::new(0, 3))
    }

    #[test]
    fn chain_closed_form() {
        let (g, t) = chain3();
        for p in [1.5f64, 2.0, 3.0] {
            let res = modulus_p(&g, t, p, 1e-9).unwrap();
            let want = 3.0 * pow(1.0 / 3.0, p);
            assert!(
                (res.value - want).abs() <= 1e-8 * want,
                "p={p}: got {}, want {want}",
                res.value
            );
            assert!(res.gap <= 1e-9);
            // Final density is admissible.
            let (_, len) = shortest_rho_path(&g, t, &res.rho).unwrap();
            assert!(len >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn parallel_routes_p2() {
        let (g, t) = parallel();
        let res = modulus_p(&g, t, 2.0, 1e-9).unwrap();
        assert!((res.value - 0.4).abs() <= 1e-8);
        // rho: terminals 2/5, branch vertices 1/5.
        assert!((res.rho.value(0) - 0.4).abs() <= 1e-6);
        assert!((res.rho.value(1) - 0.2).abs() <= 1e-6);
        assert!((res.rho.value(2) - 0.2).abs() <= 1e-6);
        assert!((res.rho.value(3) - 0.4).abs() <= 1e-6);
        // Duals split evenly across the two branch paths and sum to
        // p * value.
        let lam_sum: f64 = res.duals.iter().sum();
        assert!((lam_sum - 0.8).abs() <= 1e-6);
        // Paths with positive dual are tight.
        for (c, &l) in res.active_paths.iter().zip(&res.duals) {
            if l > 1e-9 {
                let len = res.rho.path_length(c);
                assert!((len - 1.0).abs() <= 1e-6, "active path length {len}");
            }
        }
    }

    #[test]
    fn p1_delegates_to_the_cut() {
        let g = MeasureGraph::new(
            vec![
                ("v".into(), 5.0),
                ("a".into(), 3.0),
                ("b".into(), 7.0),
                ("w".into(), 5.0),
            ],
            &[(0, 1), (1, 2), (2, 3)],
        )
        .unwrap();
        let t = TerminalPair::new(0, 3);
        let res = modulus_p(&g, t, 1.0, 1e-6).unwrap();
        assert_eq!(res.value, 3.0);
        assert_eq!(res.gap, 0.0);
        assert_eq!(res.rho.values(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn mass_scaling_is_linear() {
        let g = MeasureGraph::with_unit_masses(5, &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4), (1, 3)])
            .unwrap();
        let t = TerminalPair::new(0, 4);
        let base = modulus_p(&g, t, 2.0, 1e-9).unwrap().value;
        let mut scaled = g.clone();
        let masses: Vec<f64> = (0..5).map(|z| g.mu(z) * 3.7).collect();
        scaled.set_masses(&masses).unwrap();
        let got = modulus_p(&scaled, t, 2.0, 1e-9).unwrap().value;
        assert!((got - 3.7 * base).abs() <= 1e-6 * got.abs().max(1.0));
    }

    #[test]
    fn degenerate_terminals_and_no_path() {
        let g = MeasureGraph::new(vec![("v".into(), 4.0), ("x".into(), 1.0)], &[(0, 1)]).unwrap();
        let res = modulus_p(&g, TerminalPair::new(0, 0), 2.0, 1e-9).unwrap();
        assert!((res.value - 4.0).abs() <= 1e-8);

        let split = MeasureGraph::with_unit_masses(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            modulus_p(&split, TerminalPair::new(0, 3), 2.0, 1e-6),
            Err(ModulusError::NoPath)
        );
        assert_eq!(
            shortest_rho_path(&split, TerminalPair::new(0, 3), &Density::uniform(4, 1.0)),
            Err(ModulusError::NoPath)
        );
    }

    #[test]
    fn shortest_path_breaks_ties_toward_lower_indices() {
        let (g, t) = parallel();
        let (path, len) = shortest_rho_path(&g, t, &Density::uniform(4, 1.0)).unwrap();
        assert_eq!(path.vertices, &[0, 1, 3]);
        assert_eq!(len, 3.0);
    }

    #[test]
    fn dual_pencil_bound_is_tight_and_sampled_ratios_stay_below() {
        let (g, t) = parallel();
        let res = modulus_p(&g, t, 2.0, 1e-9).unwrap();
        let pencil = pencil_from_duals(&g, &res).unwrap();
        assert!((pencil.total_weight - 1.0).abs() <= 1e-9);
        // At the optimum the bound equals 1 / modulus.
        assert!((pencil.capacity_bound - 2.5).abs() <= 1e-6);
        // Deterministic probes never beat the bound.
        let probes = [
            vec![1.0, 1.0, 1.0, 1.0],
            vec![0.4, 0.2, 0.2, 0.4],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.3, 0.9, 0.1, 0.7],
        ];
        for probe in probes {
            let r = pencil_ratio(&g, &pencil, 2.0, &Density::new(probe));
            assert!(r <= pencil.capacity_bound + 1e-9, "ratio {r}");
        }
    }
}
