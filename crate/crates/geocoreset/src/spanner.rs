//! Planar constant-stretch spanners for intersection graphs.
//!
//! The unit-disk spanner is the L2 Delaunay triangulation restricted to disk
//! edges (stretch 2.42); the unit-square spanner is the Chebyshev Delaunay
//! triangulation restricted to square edges (stretch 3). Other edge norms
//! reuse those constructions with a sqrt2 reweighting. A brute-force APSP
//! stretch verifier doubles as the acceptance oracle.

use crate::error::{Error, Result};
use crate::geometry::{dxy_stats, empty_axis_square_exists, NormKind, PointSet};
use crate::graphs::{GraphFamily, GraphInstance, MetricKind};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

/// A triangulation over a point set: edge list plus triangle (face) list.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<(usize, usize, usize)>,
}

/// L2 Delaunay: pq is an edge iff some circle through p and q is empty.
///
/// Per pair, candidate circle centers form a line (the bisector); each other
/// point constrains the feasible parameter to a half-line, so the edge test
/// is an O(n) interval intersection. Points are perturbed first.
pub fn l2_delaunay(points: &PointSet) -> Triangulation {
    let pts = points.perturbed();
    let n = pts.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if l2_delaunay_edge(&pts, i, j) {
                edges.push((i, j));
            }
        }
    }
    let triangles = faces_of(&pts, &edges);
    Triangulation { edges, triangles }
}

fn l2_delaunay_edge(pts: &PointSet, i: usize, j: usize) -> bool {
    let p = pts.get(i);
    let q = pts.get(j);
    let mx = 0.5 * (p.x + q.x);
    let my = 0.5 * (p.y + q.y);
    let ux = -(q.y - p.y);
    let uy = q.x - p.x;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for r in pts.iter() {
        if r.id == p.id || r.id == q.id {
            continue;
        }
        // |c(t) - r|^2 >= |c(t) - p|^2 with c(t) = m + t*u reduces to
        // a + b t >= 0.
        let a = 2.0 * (mx * (p.x - r.x) + my * (p.y - r.y))
            - (p.x * p.x + p.y * p.y - r.x * r.x - r.y * r.y);
        let b = 2.0 * (ux * (p.x - r.x) + uy * (p.y - r.y));
        if b.abs() < 1e-18 {
            if a < 0.0 {
                return false;
            }
        } else if b > 0.0 {
            lo = lo.max(-a / b);
        } else {
            hi = hi.min(-a / b);
        }
        if lo > hi {
            return false;
        }
    }
    lo <= hi
}

/// Chebyshev (linf) Delaunay: pq is an edge iff some axis-parallel square
/// through p and q is empty. Points are perturbed first.
pub fn linf_delaunay(points: &PointSet) -> Result<Triangulation> {
    let pts = points.perturbed();
    let n = pts.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if empty_axis_square_exists(pts.get(i), pts.get(j), &pts)? {
                edges.push((i, j));
            }
        }
    }
    let triangles = faces_of(&pts, &edges);
    Ok(Triangulation { edges, triangles })
}

/// Triangular faces of a planar straight-line graph: 3-cliques of the edge
/// set with no vertex strictly inside (in a planar triangulation a 3-cycle
/// bounds a face iff it is vertex-empty).
fn faces_of(pts: &PointSet, edges: &[(usize, usize)]) -> Vec<(usize, usize, usize)> {
    let n = pts.len();
    let mut adj = vec![HashSet::new(); n];
    for &(u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let inside = |a: usize, b: usize, c: usize, r: usize| -> bool {
        let o = |p: usize, q: usize, t: usize| -> f64 {
            let (pp, qq, tt) = (pts.get(p), pts.get(q), pts.get(t));
            (qq.x - pp.x) * (tt.y - pp.y) - (qq.y - pp.y) * (tt.x - pp.x)
        };
        let d1 = o(a, b, r);
        let d2 = o(b, c, r);
        let d3 = o(c, a, r);
        (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
    };
    let mut tris = Vec::new();
    for &(a, b) in edges {
        for &c in adj[a].iter() {
            if c > b && adj[b].contains(&c) {
                let empty = (0..n).all(|r| r == a || r == b || r == c || !inside(a, b, c, r));
                if empty {
                    tris.push((a, b, c));
                }
            }
        }
    }
    tris.sort_unstable();
    tris.dedup();
    tris
}

/// A planar spanner of (an induced subgraph of) a host graph.
///
/// Vertices are host indices; `alpha` is the declared stretch against the
/// host's own metric.
#[derive(Debug, Clone)]
pub struct PlanarSpanner {
    /// Host vertex indices covered, ascending.
    pub vertices: Vec<usize>,
    /// Edges as host-index pairs with spanner weights.
    pub edges: Vec<(usize, usize, f64)>,
    /// Declared stretch versus the host metric.
    pub alpha: f64,
    pub metric: MetricKind,
    adj: Vec<Vec<(usize, f64)>>,
}

/// Shortest-path table over a spanner, indexed by spanner-local vertex ids.
#[derive(Debug, Clone)]
pub struct SpannerDist {
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
}

impl PlanarSpanner {
    fn from_edges(
        vertices: Vec<usize>,
        mut edges: Vec<(usize, usize, f64)>,
        alpha: f64,
        metric: MetricKind,
    ) -> Self {
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(u, v, w) in &edges {
            let lu = vertices.binary_search(&u).expect("edge endpoint not in vertex set");
            let lv = vertices.binary_search(&v).expect("edge endpoint not in vertex set");
            adj[lu].push((lv, w));
            adj[lv].push((lu, w));
        }
        PlanarSpanner { vertices, edges, alpha, metric, adj }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Local index of a host vertex, if covered.
    pub fn local(&self, host: usize) -> Option<usize> {
        self.vertices.binary_search(&host).ok()
    }

    pub fn host_of(&self, local: usize) -> usize {
        self.vertices[local]
    }

    /// Dijkstra from a host vertex; result is local-indexed.
    pub fn shortest_paths(&self, host_src: usize) -> Result<SpannerDist> {
        let src = self
            .local(host_src)
            .ok_or_else(|| Error::InvalidParameter(format!("vertex {host_src} not in spanner")))?;
        let m = self.len();
        let mut dist = vec![f64::INFINITY; m];
        let mut parent = vec![None; m];
        let mut done = vec![false; m];
        let mut heap: BinaryHeap<SpHeapKey> = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(SpHeapKey { dist: 0.0, vertex: src });
        while let Some(SpHeapKey { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w) in &self.adj[u] {
                if !done[v] && d + w < dist[v] {
                    dist[v] = d + w;
                    parent[v] = Some(u);
                    heap.push(SpHeapKey { dist: d + w, vertex: v });
                }
            }
        }
        Ok(SpannerDist { dist, parent })
    }

    /// Distance between two host vertices inside the spanner.
    pub fn distance(&self, a: usize, b: usize) -> Result<f64> {
        let t = self.shortest_paths(a)?;
        let lb = self
            .local(b)
            .ok_or_else(|| Error::InvalidParameter(format!("vertex {b} not in spanner")))?;
        Ok(t.dist[lb])
    }
}

#[derive(PartialEq)]
struct SpHeapKey {
    dist: f64,
    vertex: usize,
}

impl Eq for SpHeapKey {}

impl Ord for SpHeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for SpHeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Unit-disk spanner: L2 Delaunay edges that are also disk edges, host
/// weights, declared stretch 2.42. Requires l2 edge weights.
pub fn udg_spanner(g: &GraphInstance) -> Result<PlanarSpanner> {
    if g.metric.family != GraphFamily::UnitDisk {
        return Err(Error::UnsupportedMetric("udg_spanner needs a unit-disk instance".into()));
    }
    if g.metric.weight_norm.p() != 2.0 {
        return Err(Error::UnsupportedMetric(
            "udg_spanner needs l2 weights; build the l2 base and use lp_spanner".into(),
        ));
    }
    let dt = l2_delaunay(&g.points);
    spanner_from_dt_edges(g, &dt.edges, 2.42)
}

/// Unit-square spanner: Chebyshev Delaunay edges that are also square edges,
/// linf weights, declared stretch 3. The Delaunay predicate is evaluated only
/// on square edges (the restriction discards all other pairs anyway).
pub fn usg_spanner(g: &GraphInstance) -> Result<PlanarSpanner> {
    if g.metric.family != GraphFamily::UnitSquare {
        return Err(Error::UnsupportedMetric("usg_spanner needs a unit-square instance".into()));
    }
    if !g.metric.weight_norm.is_inf() {
        return Err(Error::UnsupportedMetric(
            "usg_spanner needs linf weights; build the linf base and use lp_spanner".into(),
        ));
    }
    let pts = g.points.perturbed();
    let mut edges = Vec::new();
    for &(u, v, w) in g.edges() {
        if empty_axis_square_exists(pts.get(u), pts.get(v), &pts)? {
            edges.push((u, v, w));
        }
    }
    let vertices: Vec<usize> = (0..g.len()).collect();
    Ok(PlanarSpanner::from_edges(vertices, edges, 3.0, g.metric))
}

fn spanner_from_dt_edges(
    g: &GraphInstance,
    dt_edges: &[(usize, usize)],
    alpha: f64,
) -> Result<PlanarSpanner> {
    let host: HashSet<(usize, usize)> = g.edges().iter().map(|&(u, v, _)| (u, v)).collect();
    let weight: std::collections::HashMap<(usize, usize), f64> =
        g.edges().iter().map(|&(u, v, w)| ((u, v), w)).collect();
    let mut edges = Vec::new();
    for &(u, v) in dt_edges {
        let key = if u < v { (u, v) } else { (v, u) };
        if host.contains(&key) {
            edges.push((key.0, key.1, weight[&key]));
        }
    }
    let vertices: Vec<usize> = (0..g.len()).collect();
    Ok(PlanarSpanner::from_edges(vertices, edges, alpha, g.metric))
}

/// Spanner for an lp-weighted host built from the family's canonical base
/// spanner over the same points.
///
/// Unit-disk hosts (base: l2 spanner): p = 2 returns the base; p < 2 keeps
/// the base's own l2 weights and declares stretch 3.42 against the lp host
/// metric (only the upper bound is declared for p < 2); p > 2 multiplies
/// every weight by sqrt2 and declares 4.84.
///
/// Unit-square hosts (base: linf spanner): p = inf returns the base;
/// 2 <= p < inf scales by sqrt2 (stretch 3*sqrt2); p < 2 scales by 2
/// (stretch 6).
pub fn lp_spanner(g: &GraphInstance, base: &PlanarSpanner) -> Result<PlanarSpanner> {
    if base.vertices.len() != g.len() || base.vertices.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::InvalidParameter("lp_spanner: base covers different points".into()));
    }
    if base.metric.family != g.metric.family {
        return Err(Error::InvalidParameter("lp_spanner: base family mismatch".into()));
    }
    let p = g.metric.weight_norm.p();
    let alpha = g.metric.spanner_alpha()?;
    let scaled = |factor: f64| -> PlanarSpanner {
        let edges = base.edges.iter().map(|&(u, v, w)| (u, v, w * factor)).collect();
        PlanarSpanner::from_edges(base.vertices.clone(), edges, alpha, g.metric)
    };
    match g.metric.family {
        GraphFamily::UnitDisk => {
            if base.metric.weight_norm.p() != 2.0 {
                return Err(Error::InvalidParameter("base must carry l2 weights".into()));
            }
            if p == 2.0 {
                Ok(base.clone())
            } else if p < 2.0 {
                Ok(scaled(1.0))
            } else {
                Ok(scaled(2f64.sqrt()))
            }
        }
        GraphFamily::UnitSquare => {
            if !base.metric.weight_norm.is_inf() {
                return Err(Error::InvalidParameter("base must carry linf weights".into()));
            }
            if p.is_infinite() {
                Ok(base.clone())
            } else if p >= 2.0 {
                Ok(scaled(2f64.sqrt()))
            } else {
                Ok(scaled(2.0))
            }
        }
        GraphFamily::HopUnitDisk => {
            Err(Error::UnsupportedMetric("no lp spanner for hop-udg".into()))
        }
    }
}

/// Spanner of the full instance, dispatching on the metric family/norm.
pub fn spanner_for_metric(g: &GraphInstance) -> Result<PlanarSpanner> {
    match g.metric.family {
        GraphFamily::UnitDisk => {
            if g.metric.weight_norm.p() == 2.0 {
                udg_spanner(g)
            } else {
                let base_g =
                    crate::graphs::build_udg(g.points.clone(), NormKind::l2())?;
                let base = udg_spanner(&base_g)?;
                lp_spanner(g, &base)
            }
        }
        GraphFamily::UnitSquare => {
            if g.metric.weight_norm.is_inf() {
                usg_spanner(g)
            } else {
                let base_g =
                    crate::graphs::build_usg(g.points.clone(), NormKind::linf())?;
                let base = usg_spanner(&base_g)?;
                lp_spanner(g, &base)
            }
        }
        GraphFamily::HopUnitDisk => Err(Error::UnsupportedMetric(
            "hop-udg planar spanner construction is out of scope".into(),
        )),
    }
}

/// Spanner of the subgraph induced by `subset` (host indices), built by
/// re-running the family construction on the subset's points. Edges come
/// back in host indices.
pub fn induced_spanner(g: &GraphInstance, subset: &[usize]) -> Result<PlanarSpanner> {
    if subset.is_empty() {
        return Err(Error::InvalidParameter("induced_spanner on empty subset".into()));
    }
    let mut subset_sorted = subset.to_vec();
    subset_sorted.sort_unstable();
    subset_sorted.dedup();
    let sub_points = g.points.subset(&subset_sorted);
    let sub_g = crate::graphs::build_graph(sub_points, g.metric)?;
    let sub_h = spanner_for_metric(&sub_g)?;
    // Remap: sub-instance index order follows id order, which matches the
    // host's index order restricted to the subset.
    let edges = sub_h
        .edges
        .iter()
        .map(|&(u, v, w)| (subset_sorted[u], subset_sorted[v], w))
        .collect();
    Ok(PlanarSpanner::from_edges(subset_sorted, edges, sub_h.alpha, g.metric))
}

/// Maximum d_H / d_G over connected pairs, by full APSP up to 500 vertices
/// and 10^4 sampled pairs beyond. Returns infinity if the spanner disconnects
/// a host-connected pair.
pub fn verify_stretch(g: &GraphInstance, h: &PlanarSpanner) -> Result<f64> {
    if h.vertices.len() != g.len() {
        return Err(Error::InvalidParameter("verify_stretch needs V(H) = V(G)".into()));
    }
    let n = g.len();
    let mut max_ratio: f64 = 1.0;
    if n <= 500 {
        for s in 0..n {
            let tg = g.shortest_paths(s);
            let th = h.shortest_paths(s)?;
            for v in 0..n {
                if v == s || !tg.reachable(v) {
                    continue;
                }
                let dh = th.dist[h.local(v).unwrap()];
                if dh.is_infinite() {
                    return Ok(f64::INFINITY);
                }
                if tg.dist[v] > 0.0 {
                    max_ratio = max_ratio.max(dh / tg.dist[v]);
                }
            }
        }
    } else {
        use rand::Rng;
        let mut rng = crate::rng::stream(0, "verify-stretch-sample");
        let mut sources: Vec<usize> = (0..10_000 / n.max(1)).map(|_| rng.gen_range(0..n)).collect();
        sources.push(0);
        sources.sort_unstable();
        sources.dedup();
        for s in sources {
            let tg = g.shortest_paths(s);
            let th = h.shortest_paths(s)?;
            for v in 0..n {
                if v == s || !tg.reachable(v) {
                    continue;
                }
                let dh = th.dist[h.local(v).unwrap()];
                if dh.is_infinite() {
                    return Ok(f64::INFINITY);
                }
                if tg.dist[v] > 0.0 {
                    max_ratio = max_ratio.max(dh / tg.dist[v]);
                }
            }
        }
    }
    Ok(max_ratio)
}

/// Planarity of a spanner: edge-count bound and zero proper segment
/// crossings in the (perturbed) embedding.
pub fn planarity_check(points: &PointSet, h: &PlanarSpanner) -> Result<()> {
    let nv = h.vertices.len();
    if nv >= 3 && h.edges.len() > 3 * nv - 6 {
        return Err(Error::InternalConsistency(format!(
            "spanner has {} edges > 3*{} - 6",
            h.edges.len(),
            nv
        )));
    }
    if nv < 3 && h.edges.len() > 1 {
        return Err(Error::InternalConsistency("too many edges for < 3 vertices".into()));
    }
    let pts = points.perturbed();
    let coord = |v: usize| {
        let p = pts.get(v);
        (p.x, p.y)
    };
    let orient = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| -> f64 {
        (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
    };
    for (i, &(a, b, _)) in h.edges.iter().enumerate() {
        for &(c, d, _) in h.edges.iter().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (pa, pb, pc, pd) = (coord(a), coord(b), coord(c), coord(d));
            let d1 = orient(pa, pb, pc);
            let d2 = orient(pa, pb, pd);
            let d3 = orient(pc, pd, pa);
            let d4 = orient(pc, pd, pb);
            if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
                && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
            {
                return Err(Error::InternalConsistency(format!(
                    "edges ({a},{b}) and ({c},{d}) cross"
                )));
            }
        }
    }
    Ok(())
}

/// Per-edge path bound of the unit-square spanner: for every square edge ab,
/// d_H(a, b) <= 2 D(a,b) + delta(a,b). Returns the maximum observed
/// d_H(a,b) - (2D + delta) (nonpositive when the bound holds).
pub fn usg_per_edge_bound(g: &GraphInstance, h: &PlanarSpanner) -> Result<f64> {
    if g.metric.family != GraphFamily::UnitSquare {
        return Err(Error::UnsupportedMetric("per-edge bound is a unit-square property".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for s in 0..g.len() {
        let th = h.shortest_paths(s)?;
        for &(v, _) in g.neighbors(s) {
            if v < s {
                continue;
            }
            let st = dxy_stats(g.points.get(s), g.points.get(v));
            let dh = th.dist[h.local(v).unwrap()];
            worst = worst.max(dh - (2.0 * st.d_max + st.delta));
        }
    }
    Ok(worst)
}

/// Serializable spanner dump: host graph fields plus declared alpha.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct SpannerDump {
    pub n: usize,
    pub metric: String,
    pub alpha: f64,
    pub edges: Vec<(u64, u64, f64)>,
}

pub fn dump_spanner(g: &GraphInstance, h: &PlanarSpanner) -> SpannerDump {
    SpannerDump {
        n: g.len(),
        metric: g.metric.name(),
        alpha: h.alpha,
        edges: h.edges.iter().map(|&(u, v, w)| (g.id_of(u), g.id_of(v), w)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist, Point2D};
    use crate::graphs::{build_udg, build_usg};
    use rand::Rng;

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

    fn random_ps(seed: u64, n: usize, side: f64) -> PointSet {
        let mut rng = crate::rng::stream(seed, "spanner-test");
        ps(&(0..n)
            .map(|_| (rng.gen_range(0.0..side), rng.gen_range(0.0..side)))
            .collect::<Vec<_>>())
    }

    #[test]
    fn l2_delaunay_triangle() {
        let t = l2_delaunay(&ps(&[(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]));
        assert_eq!(t.edges.len(), 3);
        assert_eq!(t.triangles.len(), 1);
    }

    #[test]
    fn l2_delaunay_convex_quad_has_five_edges() {
        let t = l2_delaunay(&ps(&[(0.0, 0.0), (2.0, 0.1), (2.1, 1.9), (-0.1, 2.0)]));
        assert_eq!(t.edges.len(), 5);
    }

    #[test]
    fn l2_delaunay_small_counts() {
        assert_eq!(l2_delaunay(&ps(&[(0.0, 0.0), (1.0, 1.0)])).edges.len(), 1);
        assert_eq!(l2_delaunay(&ps(&[(0.0, 0.0)])).edges.len(), 0);
    }

    /// O(n^4) Delaunay oracle: edges of triangles with empty circumcircles,
    /// independent of the bisector-interval route.
    fn l2_delaunay_triple_oracle(points: &PointSet) -> Vec<(usize, usize)> {
        let pts = points.perturbed();
        let n = pts.len();
        let mut edges = HashSet::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let (pa, pb, pc) = (pts.get(a), pts.get(b), pts.get(c));
                    let d = 2.0
                        * (pa.x * (pb.y - pc.y) + pb.x * (pc.y - pa.y) + pc.x * (pa.y - pb.y));
                    if d.abs() < 1e-12 {
                        continue;
                    }
                    let na = pa.x * pa.x + pa.y * pa.y;
                    let nb = pb.x * pb.x + pb.y * pb.y;
                    let nc = pc.x * pc.x + pc.y * pc.y;
                    let ux = (na * (pb.y - pc.y) + nb * (pc.y - pa.y) + nc * (pa.y - pb.y)) / d;
                    let uy = (na * (pc.x - pb.x) + nb * (pa.x - pc.x) + nc * (pb.x - pa.x)) / d;
                    let r2 = (pa.x - ux).powi(2) + (pa.y - uy).powi(2);
                    let empty = (0..n).all(|r| {
                        r == a
                            || r == b
                            || r == c
                            || (pts.get(r).x - ux).powi(2) + (pts.get(r).y - uy).powi(2)
                                > r2 - 1e-12
                    });
                    if empty {
                        edges.insert((a, b));
                        edges.insert((b, c));
                        edges.insert((a, c));
                    }
                }
            }
        }
        let mut v: Vec<(usize, usize)> = edges.into_iter().collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn l2_delaunay_matches_triple_oracle() {
        let points = random_ps(21, 60, 6.0);
        let got = l2_delaunay(&points);
        let mut got_edges = got.edges.clone();
        got_edges.sort_unstable();
        let want = l2_delaunay_triple_oracle(&points);
        assert_eq!(got_edges, want);
    }

    #[test]
    fn linf_delaunay_small() {
        let t = linf_delaunay(&ps(&[(0.0, 0.0), (1.0, 0.4)])).unwrap();
        assert_eq!(t.edges.len(), 1);
    }

    #[test]
    fn linf_delaunay_planar_and_bounded() {
        let points = random_ps(33, 40, 6.0);
        let t = linf_delaunay(&points).unwrap();
        let n = points.len();
        assert!(t.edges.len() <= 3 * n - 6);
        let h = PlanarSpanner::from_edges(
            (0..n).collect(),
            t.edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
            1.0,
            MetricKind::usg(NormKind::linf()),
        );
        planarity_check(&points, &h).unwrap();
    }

    #[test]
    fn linf_closest_pair_is_edge() {
        let points = random_ps(14, 30, 6.0);
        let pts = points.perturbed();
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = dist(pts.get(i), pts.get(j), NormKind::linf());
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let t = linf_delaunay(&points).unwrap();
        assert!(t.edges.contains(&(best.1, best.2)));
    }

    #[test]
    fn udg_spanner_stretch_and_planarity() {
        let points = random_ps(7, 100, 6.0);
        let g = build_udg(points.clone(), NormKind::l2()).unwrap();
        let h = udg_spanner(&g).unwrap();
        planarity_check(&points, &h).unwrap();
        let ratio = verify_stretch(&g, &h).unwrap();
        assert!(ratio <= 2.42 + 1e-9, "stretch {ratio}");
    }

    #[test]
    fn udg_spanner_trivial_two_vertices() {
        let g = build_udg(ps(&[(0.0, 0.0), (1.0, 0.0)]), NormKind::l2()).unwrap();
        let h = udg_spanner(&g).unwrap();
        assert_eq!(h.edges.len(), 1);
        assert_eq!(verify_stretch(&g, &h).unwrap(), 1.0);
    }

    #[test]
    fn udg_spanner_dense_clique() {
        // 30 points in a tiny box form a clique; the spanner must keep the
        // planar bound yet stay within stretch.
        let mut rng = crate::rng::stream(19, "clique");
        let points = ps(&(0..30)
            .map(|_| (rng.gen_range(0.0..0.9), rng.gen_range(0.0..0.9)))
            .collect::<Vec<_>>());
        let g = build_udg(points.clone(), NormKind::l2()).unwrap();
        assert_eq!(g.edges().len(), 30 * 29 / 2);
        let h = udg_spanner(&g).unwrap();
        assert!(h.edges.len() <= 3 * 30 - 6);
        assert!(verify_stretch(&g, &h).unwrap() <= 2.42 + 1e-9);
    }

    #[test]
    fn usg_spanner_stretch_and_per_edge_bound() {
        let points = random_ps(8, 100, 6.0);
        let g = build_usg(points.clone(), NormKind::linf()).unwrap();
        let h = usg_spanner(&g).unwrap();
        planarity_check(&points, &h).unwrap();
        let ratio = verify_stretch(&g, &h).unwrap();
        assert!(ratio <= 3.0 + 1e-9, "stretch {ratio}");
        let slack = usg_per_edge_bound(&g, &h).unwrap();
        assert!(slack <= 1e-9, "per-edge bound violated by {slack}");
    }

    #[test]
    fn usg_spanner_two_points() {
        let g = build_usg(ps(&[(0.0, 0.0), (1.0, 0.5)]), NormKind::linf()).unwrap();
        let h = usg_spanner(&g).unwrap();
        assert_eq!(verify_stretch(&g, &h).unwrap(), 1.0);
    }

    #[test]
    fn lp_spanner_constants() {
        let points = random_ps(9, 80, 6.0);
        let base_g = build_udg(points.clone(), NormKind::l2()).unwrap();
        let base = udg_spanner(&base_g).unwrap();

        let g1 = build_udg(points.clone(), NormKind::l1()).unwrap();
        let h1 = lp_spanner(&g1, &base).unwrap();
        assert!(verify_stretch(&g1, &h1).unwrap() <= 3.42 + 1e-9);

        let gi = build_udg(points.clone(), NormKind::linf()).unwrap();
        let hi = lp_spanner(&gi, &base).unwrap();
        assert!(verify_stretch(&gi, &hi).unwrap() <= 4.84 + 1e-9);
        // p > 2 also preserves the lower spanner bound.
        for s in 0..gi.len() {
            let tg = gi.shortest_paths(s);
            let th = hi.shortest_paths(s).unwrap();
            for v in 0..gi.len() {
                if tg.reachable(v) {
                    assert!(th.dist[v] >= tg.dist[v] - 1e-9);
                }
            }
        }

        let g2 = build_udg(points, NormKind::l2()).unwrap();
        let h2 = lp_spanner(&g2, &base).unwrap();
        assert_eq!(h2.edges, base.edges);
    }

    #[test]
    fn usg_lp_variants_within_declared_stretch() {
        let points = random_ps(23, 70, 6.0);
        for norm in [NormKind::l2(), NormKind::l1()] {
            let g = crate::graphs::build_usg(points.clone(), norm).unwrap();
            let h = spanner_for_metric(&g).unwrap();
            let ratio = verify_stretch(&g, &h).unwrap();
            assert!(ratio <= h.alpha + 1e-9, "usg p={} ratio {ratio} over {}", norm.p(), h.alpha);
            // Scaled variants keep the lower spanner bound as well.
            for s in 0..g.len() {
                let tg = g.shortest_paths(s);
                let th = h.shortest_paths(s).unwrap();
                for v in 0..g.len() {
                    if tg.reachable(v) {
                        assert!(th.dist[v] >= tg.dist[v] - 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn induced_spanner_stretch() {
        let points = random_ps(13, 120, 7.0);
        let g = build_udg(points, NormKind::l2()).unwrap();
        let mut rng = crate::rng::stream(13, "induced");
        let mut subset: Vec<usize> = (0..g.len()).collect();
        for i in (1..subset.len()).rev() {
            let j = rng.gen_range(0..=i);
            subset.swap(i, j);
        }
        subset.truncate(40);
        let h = induced_spanner(&g, &subset).unwrap();
        // Verify against the induced host graph.
        let sub_pts = g.points.subset(&h.vertices);
        let sub_g = build_udg(sub_pts, NormKind::l2()).unwrap();
        let local_edges = h
            .edges
            .iter()
            .map(|&(u, v, w)| {
                (
                    h.vertices.binary_search(&u).unwrap(),
                    h.vertices.binary_search(&v).unwrap(),
                    w,
                )
            })
            .collect();
        let local =
            PlanarSpanner::from_edges((0..h.vertices.len()).collect(), local_edges, h.alpha, h.metric);
        assert!(verify_stretch(&sub_g, &local).unwrap() <= h.alpha + 1e-9);
    }

    #[test]
    fn induced_spanner_trivial_cases() {
        let points = random_ps(2, 20, 5.0);
        let g = build_udg(points, NormKind::l2()).unwrap();
        let single = induced_spanner(&g, &[3]).unwrap();
        assert!(single.edges.is_empty());
        let full = induced_spanner(&g, &(0..g.len()).collect::<Vec<_>>()).unwrap();
        let direct = udg_spanner(&g).unwrap();
        assert_eq!(full.edges, direct.edges);
    }

    #[test]
    fn verify_stretch_detects_missing_bridge() {
        let g = build_udg(ps(&[(0.0, 0.0), (1.5, 0.0), (3.0, 0.0)]), NormKind::l2()).unwrap();
        // Identity spanner has stretch 1; dropping a bridge gives infinity.
        let full = PlanarSpanner::from_edges(
            (0..3).collect(),
            g.edges().to_vec(),
            1.0,
            g.metric,
        );
        assert_eq!(verify_stretch(&g, &full).unwrap(), 1.0);
        let broken = PlanarSpanner::from_edges(
            (0..3).collect(),
            vec![g.edges()[0]],
            1.0,
            g.metric,
        );
        assert_eq!(verify_stretch(&g, &broken).unwrap(), f64::INFINITY);
    }
}
