//! Intersection graphs (unit-disk, unit-square, hop unit-disk), their
//! shortest-path metrics, and the checkable geometric properties the rest of
//! the pipeline relies on.

use crate::error::{Error, Result};
use crate::geometry::{dist, NormKind, Point2D, PointSet};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Intersection-graph family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphFamily {
    /// Edge iff l2 distance <= 2; weighted.
    UnitDisk,
    /// Edge iff linf distance <= 2; weighted.
    UnitSquare,
    /// Unit-disk adjacency, every edge weight 1 (hop metric).
    HopUnitDisk,
}

/// Adjacency-threshold and weight-distortion constants of a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConstants {
    /// l2 <= c1 forces an edge.
    pub c1: f64,
    /// The stated exclusion constant (edge weights are certified <= c1*c4
    /// only through `c2_prime`; see `l2_exclusion` for the sharp threshold).
    pub c2: f64,
    /// Stated lower weight distortion: c3 * |l2 gap| <= w.
    pub c3: f64,
    /// Stated upper weight distortion: w <= c4 * |l2 gap|.
    pub c4: f64,
}

/// A graph family together with the norm weighting its edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricKind {
    pub family: GraphFamily,
    pub weight_norm: NormKind,
}

impl MetricKind {
    pub fn udg(weight_norm: NormKind) -> Self {
        MetricKind { family: GraphFamily::UnitDisk, weight_norm }
    }

    pub fn usg(weight_norm: NormKind) -> Self {
        MetricKind { family: GraphFamily::UnitSquare, weight_norm }
    }

    pub fn hop_udg() -> Self {
        MetricKind { family: GraphFamily::HopUnitDisk, weight_norm: NormKind::l2() }
    }

    /// Parse a CLI metric name: udg-l2 | udg-l1 | udg-linf | usg-linf | usg-l2 | usg-l1 | hop-udg.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "udg-l2" => Ok(Self::udg(NormKind::l2())),
            "udg-l1" => Ok(Self::udg(NormKind::l1())),
            "udg-linf" => Ok(Self::udg(NormKind::linf())),
            "usg-linf" => Ok(Self::usg(NormKind::linf())),
            "usg-l2" => Ok(Self::usg(NormKind::l2())),
            "usg-l1" => Ok(Self::usg(NormKind::l1())),
            "hop-udg" => Ok(Self::hop_udg()),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }

    pub fn name(&self) -> String {
        let norm = if self.weight_norm.is_inf() {
            "linf".to_string()
        } else if self.weight_norm.p() == 1.0 {
            "l1".to_string()
        } else if self.weight_norm.p() == 2.0 {
            "l2".to_string()
        } else {
            format!("l{}", self.weight_norm.p())
        };
        match self.family {
            GraphFamily::UnitDisk => format!("udg-{norm}"),
            GraphFamily::UnitSquare => format!("usg-{norm}"),
            GraphFamily::HopUnitDisk => "hop-udg".to_string(),
        }
    }

    /// True if two embedded points are adjacent in this family.
    pub fn adjacent(&self, p: &Point2D, q: &Point2D) -> bool {
        match self.family {
            GraphFamily::UnitDisk | GraphFamily::HopUnitDisk => dist(p, q, NormKind::l2()) <= 2.0,
            GraphFamily::UnitSquare => dist(p, q, NormKind::linf()) <= 2.0,
        }
    }

    /// Weight of an edge between two adjacent points.
    pub fn edge_weight(&self, p: &Point2D, q: &Point2D) -> f64 {
        match self.family {
            GraphFamily::HopUnitDisk => 1.0,
            _ => dist(p, q, self.weight_norm),
        }
    }

    /// Stated Locally-Euclidean constants for the family/norm pair. The two
    /// canonical presets (udg-l2 and usg-linf) carry the constants the family
    /// definitions fix; other norms use the distortion the norm equivalence
    /// in the plane gives.
    pub fn constants(&self) -> Result<LocalConstants> {
        let p = self.weight_norm.p();
        match self.family {
            GraphFamily::UnitDisk => {
                let (c3, c4) = if p <= 2.0 { (1.0, 2f64.sqrt()) } else { (1.0 / 2f64.sqrt(), 1.0) };
                let (c3, c4) = if p == 2.0 { (1.0, 1.0) } else { (c3, c4) };
                Ok(LocalConstants { c1: 2.0, c2: 2.0, c3, c4 })
            }
            GraphFamily::UnitSquare => {
                if self.weight_norm.is_inf() {
                    Ok(LocalConstants { c1: 2f64.sqrt(), c2: 2.0, c3: 1.0, c4: 2f64.sqrt() })
                } else if p <= 2.0 {
                    Ok(LocalConstants { c1: 2f64.sqrt(), c2: 2.0, c3: 1.0, c4: 2f64.sqrt() })
                } else {
                    Ok(LocalConstants {
                        c1: 2f64.sqrt(),
                        c2: 2.0,
                        c3: 1.0 / 2f64.sqrt(),
                        c4: 1.0,
                    })
                }
            }
            GraphFamily::HopUnitDisk => Err(Error::UnsupportedMetric(
                "hop-udg is not Locally Euclidean; it has no distortion constants".into(),
            )),
        }
    }

    /// Sharp l2 threshold beyond which no edge can exist (2 for unit-disk
    /// families, 2*sqrt2 for unit-square: an linf gap of 2 allows an l2 gap
    /// up to 2*sqrt2).
    pub fn l2_exclusion(&self) -> f64 {
        match self.family {
            GraphFamily::UnitDisk | GraphFamily::HopUnitDisk => 2.0,
            GraphFamily::UnitSquare => 2.0 * 2f64.sqrt(),
        }
    }

    /// Effective lower weight distortion (w >= c3_eff * l2 gap), used for
    /// embedded-radius bounds. Exact per weight norm.
    pub fn c3_eff(&self) -> f64 {
        match self.family {
            GraphFamily::HopUnitDisk => 0.5, // w = 1 >= l2/2 since l2 <= 2
            _ => {
                if self.weight_norm.p() <= 2.0 {
                    1.0
                } else {
                    1.0 / 2f64.sqrt()
                }
            }
        }
    }

    /// Hop-to-distance constant: any pair joined by a minimum-hop shortest
    /// path of tau >= 2 hops satisfies d_G >= c1_prime * tau.
    pub fn c1_prime(&self) -> f64 {
        match self.family {
            GraphFamily::HopUnitDisk => 1.0,
            _ => {
                let c = self.constants().expect("weighted family");
                c.c1 * c.c3 / 3.0
            }
        }
    }

    /// Upper bound on any edge weight (exact per family and weight norm).
    pub fn c2_prime(&self) -> f64 {
        match self.family {
            GraphFamily::HopUnitDisk => 1.0,
            GraphFamily::UnitDisk => {
                let p = self.weight_norm.p();
                if p <= 2.0 {
                    2f64.sqrt() * 2f64.powf(1.0 / p)
                } else {
                    2.0
                }
            }
            GraphFamily::UnitSquare => {
                let p = self.weight_norm.p();
                if p.is_infinite() {
                    2.0
                } else {
                    2.0 * 2f64.powf(1.0 / p)
                }
            }
        }
    }

    /// Declared planar-spanner stretch for this metric (the constant the
    /// family's spanner construction certifies).
    pub fn spanner_alpha(&self) -> Result<f64> {
        let p = self.weight_norm.p();
        match self.family {
            GraphFamily::UnitDisk => {
                if p == 2.0 {
                    Ok(2.42)
                } else if p < 2.0 {
                    Ok(3.42)
                } else {
                    Ok(4.84)
                }
            }
            GraphFamily::UnitSquare => {
                if p.is_infinite() {
                    Ok(3.0)
                } else if p >= 2.0 {
                    Ok(3.0 * 2f64.sqrt())
                } else {
                    Ok(6.0)
                }
            }
            GraphFamily::HopUnitDisk => Err(Error::UnsupportedMetric(
                "hop-udg spanner construction is out of scope".into(),
            )),
        }
    }
}

/// An immutable intersection graph over a point set.
#[derive(Debug, Clone)]
pub struct GraphInstance {
    pub points: PointSet,
    pub metric: MetricKind,
    adj: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
    max_degree: usize,
}

fn build(points: PointSet, metric: MetricKind) -> Result<GraphInstance> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("graph needs at least one point".into()));
    }
    let n = points.len();
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (p, q) = (points.get(i), points.get(j));
            if metric.adjacent(p, q) {
                let w = metric.edge_weight(p, q);
                if w <= 0.0 {
                    // Edge weights must stay positive; only coincident
                    // points can produce zero here.
                    return Err(Error::InvalidInput(format!(
                        "points {} and {} coincide; weighted intersection graphs need \
                         distinct coordinates",
                        p.id, q.id
                    )));
                }
                adj[i].push((j, w));
                adj[j].push((i, w));
                edges.push((i, j, w));
            }
        }
    }
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    Ok(GraphInstance { points, metric, adj, edges, max_degree })
}

/// Unit-disk graph: edge iff l2 <= 2, weight = lp distance.
pub fn build_udg(points: PointSet, weight_norm: NormKind) -> Result<GraphInstance> {
    build(points, MetricKind::udg(weight_norm))
}

/// Unit-square graph: edge iff linf <= 2, weight = lp distance (default linf).
pub fn build_usg(points: PointSet, weight_norm: NormKind) -> Result<GraphInstance> {
    build(points, MetricKind::usg(weight_norm))
}

/// Hop unit-disk graph: unit-disk adjacency, all weights 1.
pub fn build_hop_udg(points: PointSet) -> Result<GraphInstance> {
    build(points, MetricKind::hop_udg())
}

/// Build for an arbitrary metric kind.
pub fn build_graph(points: PointSet, metric: MetricKind) -> Result<GraphInstance> {
    build(points, metric)
}

/// Single-source shortest-path table with hop counts; among minimum-weight
/// paths the fewest-hop one is recorded, ties broken by smaller parent id.
#[derive(Debug, Clone)]
pub struct DistTable {
    pub source: usize,
    pub dist: Vec<f64>,
    pub hops: Vec<u32>,
    pub parent: Vec<Option<usize>>,
}

impl DistTable {
    pub fn reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Vertex sequence of the recorded path from the source to `v`.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.reachable(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(PartialEq)]
struct HeapKey {
    dist: f64,
    hops: u32,
    parent: u64,
    vertex: usize,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for smallest-first.
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.hops.cmp(&self.hops))
            .then(other.parent.cmp(&self.parent))
            .then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GraphInstance {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn id_of(&self, idx: usize) -> u64 {
        self.points.get(idx).id
    }

    /// Dijkstra with (distance, hops, parent-id) lexicographic relaxation.
    pub fn shortest_paths(&self, source: usize) -> DistTable {
        self.shortest_paths_in(source, None)
    }

    /// Dijkstra restricted to an induced vertex subset (`None` = all).
    /// `allowed[v]` must hold for `source`.
    pub fn shortest_paths_in(&self, source: usize, allowed: Option<&[bool]>) -> DistTable {
        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut hops = vec![u32::MAX; n];
        let mut parent = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        hops[source] = 0;
        heap.push(HeapKey { dist: 0.0, hops: 0, parent: u64::MAX, vertex: source });
        while let Some(HeapKey { dist: d, hops: h, vertex: u, .. }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            debug_assert!(d == dist[u] && h == hops[u]);
            for &(v, w) in &self.adj[u] {
                if let Some(a) = allowed {
                    if !a[v] {
                        continue;
                    }
                }
                if done[v] {
                    continue;
                }
                let nd = d + w;
                let nh = h + 1;
                let better = nd < dist[v]
                    || (nd == dist[v]
                        && (nh < hops[v]
                            || (nh == hops[v]
                                && parent[v].map_or(true, |p| self.id_of(u) < self.id_of(p)))));
                if better {
                    dist[v] = nd;
                    hops[v] = nh;
                    parent[v] = Some(u);
                    heap.push(HeapKey { dist: nd, hops: nh, parent: self.id_of(u), vertex: v });
                }
            }
        }
        DistTable { source, dist, hops, parent }
    }

    /// All-pairs tables (one Dijkstra per source).
    pub fn apsp(&self) -> Vec<DistTable> {
        (0..self.len()).map(|s| self.shortest_paths(s)).collect()
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Clustering cost: sum over weighted clients of min-center d^z.
    /// Distances come from per-center Dijkstra runs.
    pub fn cost(&self, clients: &[(usize, f64)], centers: &[usize], z: u32) -> Result<f64> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("cost with empty center set".into()));
        }
        if z < 1 {
            return Err(Error::InvalidParameter("cost needs z >= 1".into()));
        }
        let tables: Vec<DistTable> = centers.iter().map(|&c| self.shortest_paths(c)).collect();
        Ok(cost_from_tables(clients, &tables, z))
    }
}

/// Cost evaluation when per-center distance tables are already available.
pub fn cost_from_tables(clients: &[(usize, f64)], center_tables: &[DistTable], z: u32) -> f64 {
    clients
        .iter()
        .map(|&(p, w)| {
            let d = center_tables.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
            w * d.powi(z as i32)
        })
        .sum()
}

/// Min distance from `p` to any center, given per-center tables.
pub fn dist_to_centers(p: usize, center_tables: &[DistTable]) -> f64 {
    center_tables.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min)
}

/// Report of a Locally-Euclidean validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyEuclideanReport {
    pub checked_pairs: usize,
    pub c1_used: f64,
    pub l2_exclusion_used: f64,
    pub c3_eff: f64,
    pub c4_eff: f64,
}

/// Validates the Locally-Euclidean property on a weighted instance:
/// l2 <= c1 forces an edge, l2 beyond the sharp exclusion threshold forbids
/// one, every edge weight sits inside the norm-equivalence distortion band,
/// and every edge is itself a shortest path.
pub fn locally_euclidean_check(g: &GraphInstance) -> Result<LocallyEuclideanReport> {
    if g.metric.family == GraphFamily::HopUnitDisk {
        return Err(Error::UnsupportedMetric("hop-udg is not Locally Euclidean".into()));
    }
    let c = g.metric.constants()?;
    let excl = g.metric.l2_exclusion();
    let p = g.metric.weight_norm.p();
    // Exact distortion of the weight norm against l2 in the plane.
    let (c3e, c4e) = if p <= 2.0 { (1.0, 2f64.sqrt()) } else { (1.0 / 2f64.sqrt(), 1.0) };
    let (c3e, c4e) = if p == 2.0 { (1.0, 1.0) } else { (c3e, c4e) };
    let n = g.len();
    let mut adj_matrix = vec![false; n * n];
    for &(u, v, _) in g.edges() {
        adj_matrix[u * n + v] = true;
        adj_matrix[v * n + u] = true;
    }
    let tol = 1e-9;
    let mut checked = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let e = dist(g.points.get(i), g.points.get(j), NormKind::l2());
            let has = adj_matrix[i * n + j];
            if e <= c.c1 - tol && !has {
                return Err(Error::InternalConsistency(format!(
                    "pair ({}, {}) at l2 {} <= c1 {} has no edge",
                    g.id_of(i),
                    g.id_of(j),
                    e,
                    c.c1
                )));
            }
            if e > excl + tol && has {
                return Err(Error::InternalConsistency(format!(
                    "edge ({}, {}) at l2 {} beyond exclusion {}",
                    g.id_of(i),
                    g.id_of(j),
                    e,
                    excl
                )));
            }
            checked += 1;
        }
    }
    for &(u, v, w) in g.edges() {
        let e = dist(g.points.get(u), g.points.get(v), NormKind::l2());
        if w < c3e * e - tol || w > c4e * e + tol {
            return Err(Error::InternalConsistency(format!(
                "edge ({}, {}) weight {} outside [{}, {}] distortion band",
                g.id_of(u),
                g.id_of(v),
                w,
                c3e * e,
                c4e * e
            )));
        }
    }
    // Each edge must be a shortest path between its endpoints.
    for s in 0..n {
        let t = g.shortest_paths(s);
        for &(v, w) in g.neighbors(s) {
            if t.dist[v] < w - 1e-9 {
                return Err(Error::InternalConsistency(format!(
                    "edge ({}, {}) of weight {} is undercut by a path of weight {}",
                    g.id_of(s),
                    g.id_of(v),
                    w,
                    t.dist[v]
                )));
            }
        }
    }
    Ok(LocallyEuclideanReport {
        checked_pairs: checked,
        c1_used: c.c1,
        l2_exclusion_used: excl,
        c3_eff: c3e,
        c4_eff: c4e,
    })
}

/// Validates the bounded-distance property: every edge weight <= c2_prime and
/// every pair with a tau >= 2 hop minimum-hop shortest path has
/// d_G >= c1_prime * tau. Uses precomputed tables if given.
pub fn bounded_distance_check(g: &GraphInstance, tables: Option<&[DistTable]>) -> Result<()> {
    let c1p = g.metric.c1_prime();
    let c2p = g.metric.c2_prime();
    let tol = 1e-9;
    for &(u, v, w) in g.edges() {
        if w > c2p + tol {
            return Err(Error::InternalConsistency(format!(
                "edge ({}, {}) weight {} exceeds c2' = {}",
                g.id_of(u),
                g.id_of(v),
                w,
                c2p
            )));
        }
    }
    let owned;
    let tables = match tables {
        Some(t) => t,
        None => {
            owned = g.apsp();
            &owned
        }
    };
    for t in tables {
        for v in 0..g.len() {
            if !t.reachable(v) || t.hops[v] < 2 {
                continue;
            }
            let tau = t.hops[v] as f64;
            if t.dist[v] < c1p * tau - tol {
                return Err(Error::InternalConsistency(format!(
                    "pair ({}, {}): d = {} below c1' * tau = {}",
                    g.id_of(t.source),
                    g.id_of(v),
                    t.dist[v],
                    c1p * tau
                )));
            }
        }
    }
    Ok(())
}

/// Generalized triangle inequality for z-th powers:
/// (x + y)^z <= (1+eps)^(z-1) x^z + ((1+eps)/eps)^(z-1) y^z.
pub fn pow_triangle_holds(x: f64, y: f64, z: u32, eps: f64) -> bool {
    let zi = z as i32;
    let lhs = (x + y).powi(zi);
    let rhs = (1.0 + eps).powi(zi - 1) * x.powi(zi)
        + ((1.0 + eps) / eps).powi(zi - 1) * y.powi(zi);
    lhs <= rhs * (1.0 + 1e-12) + 1e-300
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;

    fn ps(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(
            coords
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Point2D::new(i as u64, x, y))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn udg_edges_basic() {
        let g = build_udg(ps(&[(0.0, 0.0), (1.0, 0.0)]), NormKind::l2()).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].2, 1.0);
        let g2 = build_udg(ps(&[(0.0, 0.0), (3.0, 0.0)]), NormKind::l2()).unwrap();
        assert!(g2.edges().is_empty());
    }

    #[test]
    fn udg_realizes_k15() {
        // Center plus 5 points on a radius-2 circle, 72 degrees apart:
        // chord 4*sin(36deg) > 2, so the leaves are pairwise non-adjacent.
        let mut coords = vec![(0.0, 0.0)];
        for i in 0..5 {
            let a = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
            coords.push((2.0 * a.cos(), 2.0 * a.sin()));
        }
        let g = build_udg(ps(&coords), NormKind::l2()).unwrap();
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.max_degree(), 5);
        assert!(g.neighbors(0).len() == 5);
    }

    #[test]
    fn usg_edge_weight_and_k14() {
        let g = build_usg(ps(&[(0.0, 0.0), (1.5, 1.5)]), NormKind::linf()).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].2, 1.5);
        let g2 = build_usg(ps(&[(0.0, 0.0), (2.1, 0.0)]), NormKind::linf()).unwrap();
        assert!(g2.edges().is_empty());
        // K_{1,4} with pairwise-disjoint leaves at the four corners.
        let g3 = build_usg(
            ps(&[(0.0, 0.0), (2.0, 2.0), (-2.0, 2.0), (2.0, -2.0), (-2.0, -2.0)]),
            NormKind::linf(),
        )
        .unwrap();
        assert_eq!(g3.neighbors(0).len(), 4);
        assert_eq!(g3.edges().len(), 4);
    }

    #[test]
    fn usg_cannot_realize_k15_randomized() {
        // Randomized falsification: no placement of 5 pairwise-disjoint
        // squares all meeting a central one.
        use rand::Rng;
        let mut rng = crate::rng::stream(11, "usg-k15");
        for _ in 0..100_000 {
            let leaves: Vec<(f64, f64)> = (0..5)
                .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let all_adj_center = leaves.iter().all(|&(x, y)| x.abs().max(y.abs()) <= 2.0);
            if !all_adj_center {
                continue;
            }
            let mut pairwise_disjoint = true;
            for i in 0..5 {
                for j in (i + 1)..5 {
                    let dx = (leaves[i].0 - leaves[j].0).abs();
                    let dy = (leaves[i].1 - leaves[j].1).abs();
                    if dx.max(dy) <= 2.0 {
                        pairwise_disjoint = false;
                    }
                }
            }
            assert!(!pairwise_disjoint, "found a K_1_5 USG at {leaves:?}");
        }
    }

    #[test]
    fn hop_udg_path() {
        let g = build_hop_udg(ps(&[(0.0, 0.0), (1.5, 0.0), (3.0, 0.0), (4.5, 0.0)])).unwrap();
        let t = g.shortest_paths(0);
        assert_eq!(t.dist[3], 3.0);
        assert_eq!(t.hops[3], 3);
        let iso = build_hop_udg(ps(&[(0.0, 0.0)])).unwrap();
        assert_eq!(iso.max_degree(), 0);
    }

    #[test]
    fn hop_udg_max_degree_matches_recount() {
        use rand::Rng;
        let mut rng = crate::rng::stream(3, "hop-deg");
        let coords: Vec<(f64, f64)> =
            (0..100).map(|_| (rng.gen_range(0.0..8.0), rng.gen_range(0.0..8.0))).collect();
        let pts = ps(&coords);
        let g = build_hop_udg(pts.clone()).unwrap();
        let mut brute = 0usize;
        for i in 0..pts.len() {
            let deg = (0..pts.len())
                .filter(|&j| {
                    j != i && dist(pts.get(i), pts.get(j), NormKind::l2()) <= 2.0
                })
                .count();
            brute = brute.max(deg);
        }
        assert_eq!(g.max_degree(), brute);
    }

    #[test]
    fn coincident_points_rejected_for_weighted_families() {
        let pts = ps(&[(1.0, 1.0), (1.0, 1.0)]);
        assert!(build_udg(pts.clone(), NormKind::l2()).is_err());
        // The hop metric weights every edge 1 and accepts them.
        assert!(build_hop_udg(pts).is_ok());
    }

    #[test]
    fn sampled_triples_respect_triangle_inequality() {
        use rand::Rng;
        let mut rng = crate::rng::stream(12, "triangle");
        let coords: Vec<(f64, f64)> =
            (0..70).map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0))).collect();
        let g = build_udg(ps(&coords), NormKind::l2()).unwrap();
        let tables = g.apsp();
        for _ in 0..3000 {
            let (u, v, w) = (
                rng.gen_range(0..g.len()),
                rng.gen_range(0..g.len()),
                rng.gen_range(0..g.len()),
            );
            let (duv, dvw, duw) = (tables[u].dist[v], tables[v].dist[w], tables[u].dist[w]);
            if duv.is_finite() && dvw.is_finite() {
                assert!(duw <= duv + dvw + 1e-9);
            }
        }
    }

    #[test]
    fn single_vertex_table() {
        let g = build_udg(ps(&[(0.0, 0.0)]), NormKind::l2()).unwrap();
        let t = g.shortest_paths(0);
        assert_eq!(t.dist[0], 0.0);
        assert_eq!(t.hops[0], 0);
    }

    #[test]
    fn zigzag_reproduces_3_sqrt2_detour() {
        // Zigzag of l2 step exactly sqrt2 whose skips exceed the disk radius;
        // the graph distance is 3*sqrt2 while the straight-line gap is smaller.
        let b = (2.0f64 - 1.44).sqrt();
        let pts = ps(&[(0.0, 0.0), (1.2, b), (2.4, 0.0), (3.6, b)]);
        let g = build_udg(pts, NormKind::l2()).unwrap();
        let t = g.shortest_paths(0);
        assert!((t.dist[3] - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        let straight = dist(g.points.get(0), g.points.get(3), NormKind::l2());
        assert!(straight < t.dist[3]);
    }

    /// Bellman-Ford oracle, independent of the Dijkstra path.
    fn bellman_ford(g: &GraphInstance, src: usize) -> Vec<f64> {
        let n = g.len();
        let mut d = vec![f64::INFINITY; n];
        d[src] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for &(u, v, w) in g.edges() {
                if d[u] + w < d[v] {
                    d[v] = d[u] + w;
                    changed = true;
                }
                if d[v] + w < d[u] {
                    d[u] = d[v] + w;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        d
    }

    #[test]
    fn dijkstra_matches_bellman_ford() {
        use rand::Rng;
        let mut rng = crate::rng::stream(5, "bf");
        let coords: Vec<(f64, f64)> =
            (0..50).map(|_| (rng.gen_range(0.0..7.0), rng.gen_range(0.0..7.0))).collect();
        let g = build_udg(ps(&coords), NormKind::l2()).unwrap();
        for s in 0..g.len() {
            let t = g.shortest_paths(s);
            let bf = bellman_ford(&g, s);
            for v in 0..g.len() {
                if bf[v].is_finite() {
                    assert!((t.dist[v] - bf[v]).abs() < 1e-9);
                } else {
                    assert!(!t.reachable(v));
                }
            }
        }
    }

    #[test]
    fn cost_examples() {
        let g = build_udg(ps(&[(0.0, 0.0), (2.0, 0.0), (4.0, 0.0)]), NormKind::l2()).unwrap();
        // Clients equal to centers cost zero.
        assert_eq!(g.cost(&[(0, 1.0), (1, 1.0)], &[0, 1], 2).unwrap(), 0.0);
        // One client at graph distance 2, z = 2.
        assert_eq!(g.cost(&[(1, 1.0)], &[0], 2).unwrap(), 4.0);
        assert!(g.cost(&[(0, 1.0)], &[], 1).is_err());
    }

    #[test]
    fn cost_matches_naive_apsp_loop() {
        use rand::Rng;
        let mut rng = crate::rng::stream(9, "cost");
        let coords: Vec<(f64, f64)> =
            (0..60).map(|_| (rng.gen_range(0.0..7.0), rng.gen_range(0.0..7.0))).collect();
        let g = build_udg(ps(&coords), NormKind::l2()).unwrap();
        let clients: Vec<(usize, f64)> = (0..g.len()).map(|i| (i, 1.0)).collect();
        let centers = vec![3, 41];
        let tables = g.apsp();
        let mut naive = 0.0;
        for &(p, w) in &clients {
            let d = centers.iter().map(|&c| tables[c].dist[p]).fold(f64::INFINITY, f64::min);
            naive += w * d;
        }
        let got = g.cost(&clients, &centers, 1).unwrap();
        assert!((got - naive).abs() < 1e-9);
    }

    #[test]
    fn locally_euclidean_and_bounded_distance_on_random_instances() {
        use rand::Rng;
        for (seed, metric) in [(1u64, MetricKind::udg(NormKind::l2())), (2, MetricKind::usg(NormKind::linf()))] {
            let mut rng = crate::rng::stream(seed, "le");
            let coords: Vec<(f64, f64)> =
                (0..80).map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0))).collect();
            let g = build_graph(ps(&coords), metric).unwrap();
            locally_euclidean_check(&g).unwrap();
            bounded_distance_check(&g, None).unwrap();
        }
    }

    #[test]
    fn pow_triangle_sampled() {
        use rand::Rng;
        let mut rng = crate::rng::stream(4, "powtri");
        for _ in 0..2000 {
            let x = rng.gen_range(0.0..10.0);
            let y = rng.gen_range(0.0..10.0);
            let z = rng.gen_range(1..=4u32);
            let eps = rng.gen_range(0.01..1.0);
            assert!(pow_triangle_holds(x, y, z, eps));
        }
    }
}
