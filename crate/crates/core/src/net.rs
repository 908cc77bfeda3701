//! Discretization of measured metric point clouds: greedy nets, scale
//! graphs, indicator transfer, truncated Riesz-potential weights, doubling
//! estimation, and the multi-scale experiment driver.
//!
//! A net at scale `r` is a maximal `r`-separated subset of the cloud taken
//! in input order; net points become graph vertices carrying the cloud
//! mass of their closed `3r`-ball, with edges between net points at
//! distance at most `3r`. Continuum sets transfer to the net by strict
//! `2r`-proximity, and two designated cloud points act as terminals via
//! nearest net vertices.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use libm::{pow, sqrt};
use thiserror::Error;

use crate::graph::{ExtendedCount, MeasureGraph, TerminalPair, VertexSet};
use crate::mincut::min_vertex_cut;
use crate::separation::disc_sr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("point {0} has inconsistent dimension")]
    DimensionMismatch(usize),
    #[error("point {0} has a non-finite coordinate")]
    BadCoordinate(usize),
    #[error("point {0} has non-positive or non-finite mass")]
    BadMass(usize),
    #[error("mass vector length does not match the point count")]
    MassLength,
    #[error("bad distance matrix: {0}")]
    BadMatrix(String),
    #[error("scale must be positive and finite")]
    BadScale,
    #[error("point index {0} is out of range")]
    BadIndex(usize),
    #[error("poles coincide")]
    CoincidentPoles,
    #[error("truncation factor must be finite and at least 1")]
    BadTruncation,
    #[error("scale schedule must be strictly decreasing, positive, and nonempty")]
    BadSchedule,
    #[error("terminals map to the same net vertex at r = {r}")]
    TerminalsMerged { r: f64 },
    #[error("all weights vanish; no usable measure")]
    DegenerateWeights,
}

#[derive(Debug, Clone)]
enum Geometry {
    Coords(Vec<Vec<f64>>),
    Matrix(Vec<f64>),
}

/// A finite metric space with a positive mass per point, given either by
/// Euclidean coordinates or by an explicit distance matrix.
#[derive(Debug, Clone)]
pub struct PointCloud {
    geometry: Geometry,
    mass: Vec<f64>,
}

fn check_masses(mass: &[f64], n: usize) -> Result<(), NetError> {
    if mass.len() != n {
        return Err(NetError::MassLength);
    }
    for (i, m) in mass.iter().enumerate() {
        if !(m.is_finite() && *m > 0.0) {
            return Err(NetError::BadMass(i));
        }
    }
    Ok(())
}

impl PointCloud {
    pub fn from_coords(points: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Self, NetError> {
        if points.is_empty() {
            return Err(NetError::EmptyCloud);
        }
        let dim = points[0].len();
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != dim {
                return Err(NetError::DimensionMismatch(i));
            }
            if pt.iter().any(|c| !c.is_finite()) {
                return Err(NetError::BadCoordinate(i));
            }
        }
        check_masses(&mass, points.len())?;
        Ok(PointCloud {
            geometry: Geometry::Coords(points),
            mass,
        })
    }

    pub fn from_distance_matrix(dist: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Self, NetError> {
        let n = dist.len();
        if n == 0 {
            return Err(NetError::EmptyCloud);
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &dist {
            if row.len() != n {
                return Err(NetError::BadMatrix(String::from("matrix is not square")));
            }
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(NetError::BadMatrix(String::from("diagonal is not zero")));
            }
            for j in 0..n {
                let d = flat[i * n + j];
                if !(d.is_finite() && d >= 0.0) {
                    return Err(NetError::BadMatrix(String::from(
                        "entries must be finite and nonnegative",
                    )));
                }
                if (d - flat[j * n + i]).abs() > 1e-9 * d.abs().max(1.0) {
                    return Err(NetError::BadMatrix(String::from("matrix is not symmetric")));
                }
            }
        }
        check_masses(&mass, n)?;
        let cloud = PointCloud {
            geometry: Geometry::Matrix(flat),
            mass,
        };
        cloud.spot_check_triangle()?;
        Ok(cloud)
    }

    /// Triangle inequality, checked exhaustively for small matrices and on
    /// a deterministic pseudo-random sample of triples otherwise.
    fn spot_check_triangle(&self) -> Result<(), NetError> {
        let n = self.len();
        let check = |a: usize, b: usize, c: usize| -> bool {
            let direct = self.distance(a, c);
            let detour = self.distance(a, b) + self.distance(b, c);
            direct <= detour + 1e-9 * detour.max(1.0)
        };
        if n <= 20 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(NetError::BadMatrix(String::from(
                                "triangle inequality violated",
                            )));
                        }
                    }
                }
            }
        } else {
            for k in 0..1000usize {
                let a = (k * 7919) % n;
                let b = (k * 104_729 + 1) % n;
                let c = (k * 1_299_709 + 2) % n;
                if a == b || b == c || a == c {
                    continue;
                }
                if !check(a, b, c) {
                    return Err(NetError::BadMatrix(String::from(
                        "triangle inequality violated",
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mass[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        match &self.geometry {
            Geometry::Coords(pts) => Some(pts),
            Geometry::Matrix(_) => None,
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.geometry {
            Geometry::Coords(pts) => {
                let mut s = 0.0;
                for (a, b) in pts[i].iter().zip(&pts[j]) {
                    s += (a - b) * (a - b);
                }
                sqrt(s)
            }
            Geometry::Matrix(flat) => flat[i * self.mass.len() + j],
        }
    }

    /// Same metric space with a replacement measure.
    pub fn with_masses(&self, mass: Vec<f64>) -> Result<Self, NetError> {
        check_masses(&mass, self.len())?;
        Ok(PointCloud {
            geometry: self.geometry.clone(),
            mass,
        })
    }
}

/// A scale-`r` graph over a maximal `r`-separated subset of the cloud.
/// `net_indices[i]` is the cloud index of graph vertex `i`; vertex labels
/// carry the same cloud index in decimal.
#[derive(Debug, Clone)]
pub struct NetGraph {
    pub graph: MeasureGraph,
    pub net_indices: Vec<usize>,
    pub r: f64,
}

pub fn build_net(cloud: &PointCloud, r: f64) -> Result<NetGraph, NetError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(NetError::BadScale);
    }
    let n = cloud.len();
    let mut net: Vec<usize> = Vec::new();
    for i in 0..n {
        if net.iter().all(|&j| cloud.distance(i, j) >= r) {
            net.push(i);
        }
    }
    let reach = 3.0 * r;
    let vertices: Vec<(String, f64)> = net
        .iter()
        .map(|&v| {
            let ball: f64 = (0..n)
                .filter(|&q| cloud.distance(v, q) <= reach)
                .map(|q| cloud.mass(q))
                .sum();
            (format!("{v}"), ball)
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..net.len() {
        for b in (a + 1)..net.len() {
            if cloud.distance(net[a], net[b]) <= reach {
                edges.push((a, b));
            }
        }
    }
    let graph = MeasureGraph::new(vertices, &edges).expect("net construction is valid");
    Ok(NetGraph {
        graph,
        net_indices: net,
        r,
    })
}

/// Net vertices strictly within `2r` of some cloud point selected by the
/// indicator.
pub fn transfer_set(cloud: &PointCloud, net: &NetGraph, indicator: &[bool]) -> VertexSet {
    assert_eq!(indicator.len(), cloud.len(), "indicator length mismatch");
    let bound = 2.0 * net.r;
    VertexSet::from_indices(
        net.net_indices.len(),
        (0..net.net_indices.len()).filter(|&i| {
            let v = net.net_indices[i];
            (0..cloud.len()).any(|q| indicator[q] && cloud.distance(v, q) < bound)
        }),
    )
}

/// Nearest net vertex to a cloud point; ties go to the lowest vertex index.
pub fn nearest_net_vertex(cloud: &PointCloud, net: &NetGraph, point: usize) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, &v) in net.net_indices.iter().enumerate() {
        let d = cloud.distance(point, v);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Per-point masses for the two-pole weighting `R(z) · mass(z)`, where
/// `R(z) = d(x,z)/m(B_{d(x,z)}(x)) + d(y,z)/m(B_{d(y,z)}(y))`, zero at the
/// poles and outside the union of closed `2·L·d(x,y)`-balls around them.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszWeights {
    pub poles: (usize, usize),
    pub l: f64,
    pub weights: Vec<f64>,
}

impl RieszWeights {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

struct PoleTable {
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl PoleTable {
    fn new(cloud: &PointCloud, pole: usize) -> Self {
        let n = cloud.len();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|q| (cloud.distance(pole, q), cloud.mass(q)))
            .collect();
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for (_, m) in &pairs {
            acc += m;
            prefix.push(acc);
        }
        PoleTable {
            sorted: pairs.into_iter().map(|(d, _)| d).collect(),
            prefix,
        }
    }

    /// Closed-ball mass around the pole.
    fn ball(&self, radius: f64) -> f64 {
        let k = self.sorted.partition_point(|d| *d <= radius);
        self.prefix[k]
    }
}

pub fn riesz_weights(
    cloud: &PointCloud,
    x: usize,
    y: usize,
    l: f64,
) -> Result<RieszWeights, NetError> {
    let n = cloud.len();
    if x >= n {
        return Err(NetError::BadIndex(x));
    }
    if y >= n {
        return Err(NetError::BadIndex(y));
    }
    if !(l.is_finite() && l >= 1.0) {
        return Err(NetError::BadTruncation);
    }
    let dxy = cloud.distance(x, y);
    if x == y || dxy <= 0.0 {
        return Err(NetError::CoincidentPoles);
    }
    let cutoff = 2.0 * l * dxy;
    let table_x = PoleTable::new(cloud, x);
    let table_y = PoleTable::new(cloud, y);
    let weights: Vec<f64> = (0..n)
        .map(|z| {
            if z == x || z == y {
                return 0.0;
            }
            let dx = cloud.distance(x, z);
            let dy = cloud.distance(y, z);
            if dx > cutoff && dy > cutoff {
                return 0.0;
            }
            let mut potential = 0.0;
            if dx > 0.0 {
                potential += dx / table_x.ball(dx);
            }
            if dy > 0.0 {
                potential += dy / table_y.ball(dy);
            }
            potential * cloud.mass(z)
        })
        .collect();
    Ok(RieszWeights {
        poles: (x, y),
        l,
        weights,
    })
}

/// Largest observed ratio `m(B_{2ρ}(x)) / m(B_ρ(x))` over a deterministic
/// strided sample of centers and log-spaced radii between the minimal
/// positive pairwise distance and half the diameter. Returns 1 for clouds
/// without positive distances.
pub fn estimate_doubling(cloud: &PointCloud, samples: usize) -> f64 {
    let n = cloud.len();
    if n <= 1 || samples == 0 {
        return 1.0;
    }
    let mut rmin = f64::INFINITY;
    let mut rmax = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = cloud.distance(i, j);
            if d > 0.0 && d < rmin {
                rmin = d;
            }
            if d > rmax {
                rmax = d;
            }
        }
    }
    if !rmin.is_finite() {
        return 1.0;
    }
    // Sparse clouds can have every pairwise distance beyond half the
    // diameter; clamping the lower radius keeps the scan on the ball-growth
    // transition instead of collapsing to ratio-1 radii.
    let lower = rmin.min(rmax / 2.0);
    let upper = (rmax / 2.0).max(lower);
    let radius_count = 8usize;
    let per_point = (samples.div_ceil(radius_count)).clamp(1, n);
    let mut best = 1.0f64;
    for k in 0..per_point {
        let center = k * n / per_point;
        for ri in 0..radius_count {
            let frac = ri as f64 / (radius_count - 1) as f64;
            let radius = lower * pow(upper / lower, frac);
            let mut inner = 0.0;
            let mut outer = 0.0;
            for q in 0..n {
                let d = cloud.distance(center, q);
                if d <= radius {
                    inner += cloud.mass(q);
                }
                if d <= 2.0 * radius {
                    outer += cloud.mass(q);
                }
            }
            if inner > 0.0 {
                best = best.max(outer / inner);
            }
        }
    }
    best
}

/// Measure used when discretizing: the cloud's own masses, or the two-pole
/// weighting with truncation factor `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    Plain,
    Riesz { l: f64 },
}

/// One scale of the experiment: width of the transferred set, its
/// separating ratio and the minimum cut value, both normalized by `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub r: f64,
    pub width: ExtendedCount,
    pub sr_over_r: f64,
    pub cut_over_r: f64,
    pub net_size: usize,
    pub set_mass: f64,
    pub sr_value: f64,
    pub cut_value: f64,
}

/// Runs the discretization at every scheduled scale: build the net, map
/// the poles to their nearest net vertices, transfer the indicator set,
/// and record width, ratio, and cut, each normalized by `r`.
///
/// With Riesz weighting, points whose weight vanishes (poles, truncated
/// tail) are floored at `total · 1e-15 / n` so the net keeps a strictly
/// positive measure everywhere.
pub fn net_experiment(
    cloud: &PointCloud,
    x: usize,
    y: usize,
    indicator: &[bool],
    schedule: &[f64],
    weighting: Weighting,
) -> Result<Vec<ExperimentRow>, NetError> {
    let n = cloud.len();
    if x >= n {
        return Err(NetError::BadIndex(x));
    }
    if y >= n {
        return Err(NetError::BadIndex(y));
    }
    assert_eq!(indicator.len(), n, "indicator length mismatch");
    if schedule.is_empty()
        || schedule.iter().any(|r| !(r.is_finite() && *r > 0.0))
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(NetError::BadSchedule);
    }
    let working = match weighting {
        Weighting::Plain => cloud.clone(),
        Weighting::Riesz { l } => {
            let rw = riesz_weights(cloud, x, y, l)?;
            let total = rw.total_mass();
            if total.is_nan() || total <= 0.0 {
                return Err(NetError::DegenerateWeights);
            }
            let floor = total * 1e-15 / n as f64;
            cloud.with_masses(rw.weights.iter().map(|w| w.max(floor)).collect())?
        }
    };
    let mut rows = Vec::with_capacity(schedule.len());
    for &r in schedule {
        let net = build_net(&working, r)?;
        let tx = nearest_net_vertex(&working, &net, x);
        let ty = nearest_net_vertex(&working, &net, y);
        if tx == ty {
            return Err(NetError::TerminalsMerged { r });
        }
        let a = transfer_set(&working, &net, indicator);
        let t = TerminalPair::new(tx, ty);
        let sr = disc_sr(&net.graph, t, &a);
        let cut = min_vertex_cut(&net.graph, t);
        rows.push(ExperimentRow {
            r,
            width: sr.width,
            sr_over_r: sr.value / r,
            cut_over_r: cut.value / r,
            net_size: net.graph.vertex_count(),
            set_mass: sr.mass,
            sr_value: sr.value,
            cut_value: cut.value,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_cloud() -> PointCloud {
        PointCloud::from_coords(
            vec![vec![0.0], vec![0.4], vec![1.0], vec![2.2]],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap()
    }

    #[test]
    fn greedy_net_on_a_line() {
        let net = build_net(&line_cloud(), 0.5).unwrap();
        assert_eq!(net.net_indices, vec![0, 2, 3]);
        assert_eq!(net.graph.vertex_count(), 3);
        assert_eq!(net.graph.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(net.graph.mu(0), 6.0);
        assert_eq!(net.graph.mu(1), 10.0);
        assert_eq!(net.graph.mu(2), 7.0);
        assert_eq!(net.graph.label(0), "0");
    }

    #[test]
    fn net_is_separated_and_dense() {
        // Deterministic scattered points via a small linear congruence.
        let mut pts = Vec::new();
        let mut state = 9u64;
        for _ in 0..60 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((state >> 33) % 1000) as f64 / 1000.0;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((state >> 33) % 1000) as f64 / 1000.0;
            pts.push(vec![a, b]);
        }
        let cloud = PointCloud::from_coords(pts, vec![1.0; 60]).unwrap();
        let r = 0.2;
        let net = build_net(&cloud, r).unwrap();
        for (i, &a) in net.net_indices.iter().enumerate() {
            for &b in &net.net_indices[i + 1..] {
                assert!(cloud.distance(a, b) >= r);
            }
        }
        for q in 0..cloud.len() {
            assert!(net
                .net_indices
                .iter()
                .any(|&v| cloud.distance(q, v) < r));
        }
        // Edge rule and ball masses.
        for a in 0..net.graph.vertex_count() {
            for b in (a + 1)..net.graph.vertex_count() {
                let d = cloud.distance(net.net_indices[a], net.net_indices[b]);
                assert_eq!(net.graph.adjacent(a, b), d <= 3.0 * r);
            }
            let ball: f64 = (0..cloud.len())
                .filter(|&q| cloud.distance(net.net_indices[a], q) <= 3.0 * r)
                .map(|q| cloud.mass(q))
                .sum();
            assert_eq!(net.graph.mu(a), ball);
        }
    }

    #[test]
    fn transfer_uses_strict_two_r() {
        let cloud = line_cloud();
        let net = build_net(&cloud, 0.5).unwrap();
        let indicator = [false, true, false, false];
        let got = transfer_set(&cloud, &net, &indicator);
        // d(0, 0.4) = 0.4 and d(1.0, 0.4) = 0.6 are under 1.0; d(2.2, 0.4) is not.
        assert_eq!(
            got,
            VertexSet::from_indices(3, [0usize, 1].into_iter())
        );

        // Exactly 2r away is excluded.
        let cloud2 =
            PointCloud::from_coords(vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).unwrap();
        let net2 = build_net(&cloud2, 0.5).unwrap();
        let got2 = transfer_set(&cloud2, &net2, &[true, false]);
        assert!(got2.contains(0));
        assert!(!got2.contains(1));
    }

    #[test]
    fn matrix_backend_matches_coords() {
        let cloud = line_cloud();
        let n = cloud.len();
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| cloud.distance(i, j)).collect())
            .collect();
        let from_matrix =
            PointCloud::from_distance_matrix(dist, cloud.masses().to_vec()).unwrap();
        let a = build_net(&cloud, 0.5).unwrap();
        let b = build_net(&from_matrix, 0.5).unwrap();
        assert_eq!(a.net_indices, b.net_indices);
        assert_eq!(a.graph.edges(), b.graph.edges());
    }

    #[test]
    fn matrix_validation() {
        let masses = vec![1.0, 1.0, 1.0];
        assert!(matches!(
            PointCloud::from_distance_matrix(
                vec![
                    vec![0.0, 1.0, 3.0],
                    vec![1.0, 0.0, 1.0],
                    vec![3.0, 1.0, 0.0],
                ],
                masses.clone()
            ),
            Err(NetError::BadMatrix(_))
        ));
        assert!(matches!(
            PointCloud::from_distance_matrix(
                vec![vec![0.0, 1.0], vec![2.0, 0.0]],
                vec![1.0, 1.0]
            ),
            Err(NetError::BadMatrix(_))
        ));
        assert!(matches!(
            PointCloud::from_distance_matrix(vec![vec![1.0]], vec![1.0]),
            Err(NetError::BadMatrix(_))
        ));
        let ok = PointCloud::from_distance_matrix(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            masses,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn riesz_weights_on_a_grid() {
        // 11x11 unit-mass grid on [0,1]^2, poles on the horizontal axis.
        let mut pts = Vec::new();
        for i in 0..11 {
            for j in 0..11 {
                pts.push(vec![i as f64 / 10.0, j as f64 / 10.0]);
            }
        }
        let n = pts.len();
        let cloud = PointCloud::from_coords(pts, vec![1.0; n]).unwrap();
        let x = 11 + 5; // (0.1, 0.5)
        let y = 9 * 11 + 5; // (0.9, 0.5)
        let rw = riesz_weights(&cloud, x, y, 1.0).unwrap();
        assert_eq!(rw.weights[x], 0.0);
        assert_eq!(rw.weights[y], 0.0);
        assert!(rw.total_mass() > 0.0);
        // Far corners are outside the truncation region of both poles:
        // cutoff is 2 * 1 * 0.8 = 1.6, and every grid point is within 1.6
        // of a pole, so nothing truncates at L = 1 on this cloud. Check a
        // synthetic faraway point instead via L on a stretched line.
        let line = PointCloud::from_coords(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]],
            vec![1.0; 4],
        )
        .unwrap();
        let rw = riesz_weights(&line, 0, 1, 1.0).unwrap();
        assert_eq!(rw.weights[3], 0.0);
        assert!(rw.weights[2] > 0.0);

        // Scaling all masses leaves the weights invariant.
        let scaled = cloud.with_masses(vec![3.0; n]).unwrap();
        let rw1 = riesz_weights(&cloud, x, y, 1.0).unwrap();
        let rw3 = riesz_weights(&scaled, x, y, 1.0).unwrap();
        for (a, b) in rw1.weights.iter().zip(&rw3.weights) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn riesz_rejects_bad_poles() {
        let cloud = PointCloud::from_coords(
            vec![vec![0.0], vec![0.0], vec![1.0]],
            vec![1.0; 3],
        )
        .unwrap();
        assert_eq!(
            riesz_weights(&cloud, 0, 1, 1.0),
            Err(NetError::CoincidentPoles)
        );
        assert_eq!(
            riesz_weights(&cloud, 0, 0, 1.0),
            Err(NetError::CoincidentPoles)
        );
        assert_eq!(
            riesz_weights(&cloud, 0, 2, 0.5),
            Err(NetError::BadTruncation)
        );
        assert_eq!(riesz_weights(&cloud, 0, 9, 1.0), Err(NetError::BadIndex(9)));
    }

    #[test]
    fn doubling_estimates_match_dimension() {
        let line = PointCloud::from_coords(
            (0..64).map(|i| vec![i as f64]).collect(),
            vec![1.0; 64],
        )
        .unwrap();
        let d1 = estimate_doubling(&line, 128);
        assert!((1.4..=2.6).contains(&d1), "line estimate {d1}");

        let mut pts = Vec::new();
        for i in 0..20 {
            for j in 0..20 {
                pts.push(vec![i as f64, j as f64]);
            }
        }
        let plane = PointCloud::from_coords(pts, vec![1.0; 400]).unwrap();
        let d2 = estimate_doubling(&plane, 256);
        assert!((3.0..=5.5).contains(&d2), "plane estimate {d2}");

        let single = PointCloud::from_coords(vec![vec![0.0]], vec![1.0]).unwrap();
        assert_eq!(estimate_doubling(&single, 16), 1.0);
    }

    #[test]
    fn experiment_runs_and_flags_merged_terminals() {
        let mut pts = Vec::new();
        for i in 0..24 {
            for j in 0..12 {
                pts.push(vec![i as f64 / 24.0, j as f64 / 24.0]);
            }
        }
        let n = pts.len();
        let indicator: Vec<bool> = pts.iter().map(|p| (p[0] - 0.5).abs() <= 0.06).collect();
        let cloud = PointCloud::from_coords(pts, vec![1.0 / n as f64; n]).unwrap();
        let x = 5; // left edge-ish point
        let y = n - 7;
        let rows = net_experiment(&cloud, x, y, &indicator, &[0.2, 0.12], Weighting::Plain)
            .unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert!(row.net_size > 1);
            assert!(row.cut_over_r > 0.0);
            assert!(row.sr_over_r > 0.0);
        }
        assert_eq!(
            net_experiment(&cloud, x, y, &indicator, &[5.0], Weighting::Plain),
            Err(NetError::TerminalsMerged { r: 5.0 })
        );
        assert_eq!(
            net_experiment(&cloud, x, y, &indicator, &[0.2, 0.2], Weighting::Plain),
            Err(NetError::BadSchedule)
        );
        // Riesz weighting keeps the pipeline alive on the same inputs.
        let rows = net_experiment(
            &cloud,
            x,
            y,
            &indicator,
            &[0.2, 0.12],
            Weighting::Riesz { l: 1.0 },
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
    }
}
