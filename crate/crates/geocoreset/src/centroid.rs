//! Centroid sets: candidate centers built from metric nets, a bounded-degree
//! support graph, and landmark-indexed equivalence classes over the
//! decomposition tree, together with the four solution-replacement rules.
//!
//! The three parts cover the three regimes of a center's neighborhood: points
//! with a cheap pivot distance are served by grid nets of balls around them,
//! centers reachable within a bounded hop count are snapped to their support
//! vertex, and centers far from every client are replaced by the
//! representative of their rounded-distance-tuple class.

use crate::coreset::DistCache;
use crate::decomposition::DecompTree;
use crate::error::{Error, Result};
use crate::geometry::{grid_cell, mu_net};
use crate::graphs::{DistTable, GraphFamily, GraphInstance};
use std::collections::{HashMap, HashSet};

/// Constant presets: `Paper` uses the published thresholds (impractically
/// large at desk scale), `Desk` uses configurable small factors and relies on
/// the empirical error checks instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paper,
    Desk,
}

#[derive(Debug, Clone, Copy)]
pub struct CentroidParams {
    pub eps: f64,
    pub z: u32,
    pub preset: Preset,
    /// Hop-radius factor of the support set (1600 under `Paper`).
    pub gamma_support: f64,
    /// Landmark precision factor (1539 under `Paper`); mu = eps/(gamma z).
    pub gamma_landmark: f64,
}

impl CentroidParams {
    pub fn desk(eps: f64, z: u32) -> Result<Self> {
        Self::custom(eps, z, Preset::Desk, 2.0, 2.0)
    }

    pub fn paper(eps: f64, z: u32) -> Result<Self> {
        Self::custom(eps, z, Preset::Paper, 1600.0, 1539.0)
    }

    pub fn custom(
        eps: f64,
        z: u32,
        preset: Preset,
        gamma_support: f64,
        gamma_landmark: f64,
    ) -> Result<Self> {
        if !(0.0 < eps && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1)")));
        }
        if z < 1 {
            return Err(Error::InvalidParameter("z must be >= 1".into()));
        }
        if gamma_support <= 0.0 || gamma_landmark <= 0.0 {
            return Err(Error::InvalidParameter("gamma factors must be positive".into()));
        }
        let p = CentroidParams { eps, z, preset, gamma_support, gamma_landmark };
        if p.mu_landmark() > 0.5 {
            return Err(Error::InvalidParameter(format!(
                "landmark precision mu = {} exceeds 1/2; raise gamma_landmark",
                p.mu_landmark()
            )));
        }
        Ok(p)
    }

    /// Grid precision of the support graph.
    pub fn mu_support(&self) -> f64 {
        self.eps * self.eps / (self.z * self.z) as f64
    }

    /// Landmark rounding precision: eps / (gamma z).
    pub fn mu_landmark(&self) -> f64 {
        self.eps / (self.gamma_landmark * self.z as f64)
    }

    /// Net radius multiplier 10 z / eps.
    pub fn ball_factor(&self) -> f64 {
        10.0 * self.z as f64 / self.eps
    }

    /// Net precision multiplier eps^3 / z^3.
    pub fn net_mu_factor(&self) -> f64 {
        (self.eps / self.z as f64).powi(3)
    }

    /// Hop radius of the support set: gamma z alpha c2' / (c1' eps) for
    /// weighted families; gamma z / eps for the hop metric (the hop spanner's
    /// stretch constant is folded into gamma).
    pub fn hop_bound(&self, g: &GraphInstance) -> Result<f64> {
        match g.metric.family {
            GraphFamily::HopUnitDisk => Ok(self.gamma_support * self.z as f64 / self.eps),
            _ => {
                let alpha = g.metric.spanner_alpha()?;
                Ok(self.gamma_support * self.z as f64 * alpha * g.metric.c2_prime()
                    / (g.metric.c1_prime() * self.eps))
            }
        }
    }
}

/// Bounded-degree grid quotient of the instance: one special vertex per
/// occupied cell of side mu, an edge between cells holding adjacent points,
/// and the cell-collapse mapping f.
#[derive(Debug, Clone)]
pub struct SupportGraph {
    /// Special vertices (host indices), ascending.
    pub vertices: Vec<usize>,
    /// Host vertex -> its cell's special vertex (host index).
    pub f_map: Vec<usize>,
    pub mu: f64,
    /// Certified degree bound from the cell-packing argument.
    pub degree_bound: usize,
    adj: Vec<Vec<usize>>,
}

impl SupportGraph {
    pub fn f(&self, v: usize) -> usize {
        self.f_map[v]
    }

    pub fn local(&self, host: usize) -> Option<usize> {
        self.vertices.binary_search(&host).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// BFS hop counts from a special vertex, local-indexed (u32::MAX when
    /// unreachable).
    pub fn hops_from(&self, host_src: usize) -> Result<Vec<u32>> {
        let src = self.local(host_src).ok_or_else(|| {
            Error::InvalidParameter(format!("{host_src} is not a support vertex"))
        })?;
        let mut hops = vec![u32::MAX; self.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        hops[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if hops[v] == u32::MAX {
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(hops)
    }
}

/// Builds the support graph with cell side `mu` (requires mu < c1/sqrt2 so
/// cell-mates are adjacent).
pub fn build_support_graph(g: &GraphInstance, mu: f64) -> Result<SupportGraph> {
    if g.metric.family == GraphFamily::HopUnitDisk {
        return Err(Error::UnsupportedMetric(
            "hop-udg uses the identity support mapping, not a grid quotient".into(),
        ));
    }
    let c = g.metric.constants()?;
    if !(mu > 0.0 && mu < c.c1 / 2f64.sqrt()) {
        return Err(Error::InvalidParameter(format!(
            "support precision mu = {mu} outside (0, c1/sqrt2 = {})",
            c.c1 / 2f64.sqrt()
        )));
    }
    let n = g.len();
    let mut cell_special: HashMap<(i64, i64), usize> = HashMap::new();
    let mut cells: Vec<(i64, i64)> = Vec::with_capacity(n);
    for v in 0..n {
        let p = g.points.get(v);
        let cell = grid_cell(p.x, p.y, mu);
        cells.push(cell);
        let e = cell_special.entry(cell).or_insert(v);
        if v < *e {
            *e = v;
        }
    }
    let f_map: Vec<usize> = (0..n).map(|v| cell_special[&cells[v]]).collect();
    let mut vertices: Vec<usize> = cell_special.values().copied().collect();
    vertices.sort_unstable();
    let mut adj = vec![HashSet::new(); vertices.len()];
    for &(u, v, _) in g.edges() {
        let (fu, fv) = (f_map[u], f_map[v]);
        if fu != fv {
            let lu = vertices.binary_search(&fu).unwrap();
            let lv = vertices.binary_search(&fv).unwrap();
            adj[lu].insert(lv);
            adj[lv].insert(lu);
        }
    }
    let adj: Vec<Vec<usize>> = adj
        .into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    // Adjacent specials sit within l2_exclusion + sqrt2 mu of each other, so
    // their cells pack into a bounded window.
    let reach = (g.metric.l2_exclusion() + 2f64.sqrt() * mu) / mu;
    let side = 2.0 * reach.ceil() + 1.0;
    let degree_bound = (side * side) as usize;
    Ok(SupportGraph { vertices, f_map, mu, degree_bound, adj })
}

/// Validates the support-graph contract: cell-mates map to an adjacent
/// special within c4 sqrt2 mu, degrees respect the packing bound, and graph
/// paths survive the quotient as walks.
pub fn support_graph_check(g: &GraphInstance, sg: &SupportGraph) -> Result<()> {
    let c = g.metric.constants()?;
    let bound = c.c4 * 2f64.sqrt() * sg.mu + 1e-9;
    for v in 0..g.len() {
        let f = sg.f(v);
        if v == f {
            continue;
        }
        if !g.metric.adjacent(g.points.get(v), g.points.get(f)) {
            return Err(Error::InternalConsistency(format!(
                "cell mates {v} and {f} are not adjacent"
            )));
        }
        let w = g.metric.edge_weight(g.points.get(v), g.points.get(f));
        if w > bound {
            return Err(Error::InternalConsistency(format!(
                "d(v, f(v)) = {w} over bound {bound}"
            )));
        }
    }
    if sg.max_degree() > sg.degree_bound {
        return Err(Error::InternalConsistency(format!(
            "support degree {} over bound {}",
            sg.max_degree(),
            sg.degree_bound
        )));
    }
    for &(u, v, _) in g.edges() {
        let (fu, fv) = (sg.f(u), sg.f(v));
        if fu != fv {
            let lu = sg.local(fu).unwrap();
            let lv = sg.local(fv).unwrap();
            if !sg.adj[lu].contains(&lv) {
                return Err(Error::InternalConsistency(
                    "graph edge has no support-graph image".into(),
                ));
            }
        }
    }
    Ok(())
}

/// One net ball of the nearby-points construction.
#[derive(Debug, Clone)]
pub struct CNetBall {
    /// The cheap client p_i anchoring the ball.
    pub anchor: usize,
    pub radius: f64,
    pub mu: f64,
    pub ball: Vec<usize>,
    pub net: Vec<usize>,
}

/// Rounded tuple entry: either the multiple index of the rounding step or the
/// clamped sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TupleEntry {
    Multiple(i64),
    Clamped,
}

fn round_entry(d: f64, step: f64, clamp: f64) -> TupleEntry {
    if !d.is_finite() || step <= 0.0 {
        return TupleEntry::Clamped;
    }
    let k = ((d / step) - 0.5).ceil() as i64;
    let val = k as f64 * step;
    if val < clamp {
        TupleEntry::Multiple(k)
    } else {
        TupleEntry::Clamped
    }
}

/// Per-separator-path component of a canonical tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathTuple {
    /// First rounding: anchors (q1, q2), per-landmark entries in path order,
    /// the q1 entry, and per-leaf-client entries.
    First {
        q1: usize,
        q2: usize,
        landmarks: Vec<(usize, TupleEntry)>,
        q1_entry: TupleEntry,
        leaf_entries: Vec<(usize, TupleEntry)>,
    },
    /// Second rounding: anchors (q1, q3, q4) and the band indicator.
    Second { q1: usize, q3: Option<usize>, q4: Option<usize>, value: bool },
}

/// The concatenated rounded distance tuple of a candidate center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CanonicalTuple {
    /// (region id, path index, tuple) in root-to-leaf, path order.
    pub entries: Vec<(usize, usize, PathTuple)>,
    /// Leaf tuple: per leaf client, the global rounded distance.
    pub leaf: Vec<(usize, TupleEntry)>,
}

/// The centroid set with provenance.
#[derive(Debug, Clone)]
pub struct CentroidSet {
    pub net: Vec<usize>,
    pub net_balls: Vec<CNetBall>,
    pub support: Vec<usize>,
    pub support_graph: Option<SupportGraph>,
    pub landmark: Vec<usize>,
    /// Hop radius used for the support set / long-path threshold.
    pub ell: f64,
    /// (leaf region, tuple) -> representative, for replacement lookups.
    groups: HashMap<(usize, CanonicalTuple), usize>,
}

impl CentroidSet {
    /// Union of the three parts, ascending.
    pub fn all(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .net
            .iter()
            .chain(self.support.iter())
            .chain(self.landmark.iter())
            .copied()
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.net.len(), self.support.len(), self.landmark.len())
    }
}

/// Landmark set of one (region, path, q1, q2) choice with its checkable
/// ingredients.
#[derive(Debug, Clone)]
pub struct LandmarkSetInfo {
    pub path: Vec<usize>,
    pub landmarks: Vec<usize>,
    /// Path vertices within D/mu^2 of q1 (the covered range).
    pub eligible: Vec<usize>,
    /// Rounding step mu^2 D; every eligible vertex has a landmark within it
    /// along the path.
    pub step: f64,
    pub big_d: f64,
    /// Size bound from the subpath length: 4 alpha / mu^4 + 4.
    pub size_bound: usize,
}

/// Replacement rule applied to a center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplacementRule {
    Net,
    NetSub,
    Support,
    Landmark,
}

#[derive(Debug, Clone)]
pub struct Replacement {
    /// Input centers, ascending.
    pub originals: Vec<usize>,
    /// rho(s) per original.
    pub replaced: Vec<usize>,
    pub rules: Vec<ReplacementRule>,
    /// Deduplicated replacement set.
    pub new_centers: Vec<usize>,
}

/// Builder and replacement engine sharing the per-region distance caches.
pub struct CentroidPipeline<'g> {
    pub g: &'g GraphInstance,
    pub tree: &'g DecompTree,
    pub x: Vec<usize>,
    pub a_centers: Vec<usize>,
    /// d_G(v, A) per vertex.
    pub dist_a: Vec<f64>,
    pub params: CentroidParams,
    x_tables: Vec<DistTable>,
    region_tables: HashMap<(usize, usize), DistTable>,
    region_masks: HashMap<usize, Vec<bool>>,
}

impl<'g> CentroidPipeline<'g> {
    pub fn new(
        g: &'g GraphInstance,
        tree: &'g DecompTree,
        x: &[usize],
        a_centers: &[usize],
        params: CentroidParams,
    ) -> Result<Self> {
        if a_centers.is_empty() {
            return Err(Error::InvalidParameter("pivot solution A is empty".into()));
        }
        let mut xs = x.to_vec();
        xs.sort_unstable();
        xs.dedup();
        let a_tables: Vec<DistTable> =
            a_centers.iter().map(|&c| g.shortest_paths(c)).collect();
        let dist_a: Vec<f64> = (0..g.len())
            .map(|v| a_tables.iter().map(|t| t.dist[v]).fold(f64::INFINITY, f64::min))
            .collect();
        let x_tables = xs.iter().map(|&p| g.shortest_paths(p)).collect();
        Ok(CentroidPipeline {
            g,
            tree,
            x: xs,
            a_centers: a_centers.to_vec(),
            dist_a,
            params,
            x_tables,
            region_tables: HashMap::new(),
            region_masks: HashMap::new(),
        })
    }

    fn region_mask(&mut self, region: usize) -> &Vec<bool> {
        let tree = self.tree;
        let n = self.g.len();
        self.region_masks.entry(region).or_insert_with(|| {
            let mut mask = vec![false; n];
            for &v in &tree.region(region).vertices {
                mask[v] = true;
            }
            mask
        })
    }

    fn region_table(&mut self, region: usize, src: usize) -> &DistTable {
        if !self.region_tables.contains_key(&(region, src)) {
            let mask = self.region_mask(region).clone();
            let t = self.g.shortest_paths_in(src, Some(&mask));
            self.region_tables.insert((region, src), t);
        }
        &self.region_tables[&(region, src)]
    }

    /// Hop length of the canonical shortest path from the i-th client to v.
    fn hops_from_client(&self, xi: usize, v: usize) -> u32 {
        self.x_tables[xi].hops[v]
    }

    /// True iff every client's canonical path to s is longer than ell hops.
    pub fn in_long_range(&self, s: usize, ell: f64) -> bool {
        (0..self.x.len()).all(|xi| {
            let h = self.hops_from_client(xi, s);
            h == u32::MAX || h as f64 > ell
        })
    }

    /// Nearby-points net: for every client p with d(p, A) < 1, a
    /// (eps^3/z^3) d(p,A)-net of the ball of radius (10z/eps) d(p,A).
    pub fn build_c_net(&mut self) -> Result<(Vec<usize>, Vec<CNetBall>)> {
        if self.g.metric.family == GraphFamily::HopUnitDisk {
            return Ok((Vec::new(), Vec::new()));
        }
        let c1 = self.g.metric.constants()?.c1;
        let c3_eff = self.g.metric.c3_eff();
        let mut members = Vec::new();
        let mut balls = Vec::new();
        for (xi, &p) in self.x.clone().iter().enumerate() {
            let da = self.dist_a[p];
            if da >= 1.0 {
                continue;
            }
            let radius = self.params.ball_factor() * da;
            let mu = self.params.net_mu_factor() * da;
            let t = &self.x_tables[xi];
            let ball: Vec<(usize, f64)> = (0..self.g.len())
                .filter(|&v| t.dist[v] <= radius)
                .map(|v| (v, t.dist[v]))
                .collect();
            let net = mu_net(&self.g.points, &ball, mu, radius, c1, c3_eff)?;
            members.extend(net.members.iter().copied());
            balls.push(CNetBall {
                anchor: p,
                radius,
                mu,
                ball: ball.into_iter().map(|(v, _)| v).collect(),
                net: net.members,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok((members, balls))
    }

    /// Short-path support set: support vertices within ell hops of f(p) for
    /// some client p (hop metric: all vertices within ell hops of a client).
    pub fn build_c_support(
        &mut self,
        sg: Option<&SupportGraph>,
        ell: f64,
    ) -> Result<Vec<usize>> {
        let mut members = Vec::new();
        match self.g.metric.family {
            GraphFamily::HopUnitDisk => {
                for (xi, _) in self.x.iter().enumerate() {
                    let t = &self.x_tables[xi];
                    for v in 0..self.g.len() {
                        if t.hops[v] != u32::MAX && (t.hops[v] as f64) <= ell {
                            members.push(v);
                        }
                    }
                }
            }
            _ => {
                let sg = sg.ok_or_else(|| {
                    Error::InvalidParameter("weighted families need the support graph".into())
                })?;
                let sources: HashSet<usize> = self.x.iter().map(|&p| sg.f(p)).collect();
                for src in sources {
                    let hops = sg.hops_from(src)?;
                    for (lv, &h) in hops.iter().enumerate() {
                        if h != u32::MAX && (h as f64) <= ell {
                            members.push(sg.vertices[lv]);
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(members)
    }

    /// Landmarks of a separator path for anchors (q1, q2): the subpath
    /// reaching distance D/mu^2 from q1 is marked every mu^2 D units; marks
    /// landing between vertices contribute both flanks.
    fn landmarks_on_path(
        &mut self,
        region: usize,
        path: &[usize],
        q1: usize,
        big_d: f64,
    ) -> Result<Vec<usize>> {
        let mu = self.params.mu_landmark();
        let reach = big_d / (mu * mu);
        let q1_dist: Vec<f64> = {
            let t = self.region_table(region, q1);
            path.iter().map(|&v| t.dist[v]).collect()
        };
        let in_q: Vec<bool> = q1_dist.iter().map(|&d| d <= reach).collect();
        let first = in_q.iter().position(|&b| b);
        let last = in_q.iter().rposition(|&b| b);
        let (first, last) = match (first, last) {
            (Some(f), Some(l)) if f <= l => (f, l),
            _ => return Ok(Vec::new()),
        };
        // Cumulative along-path positions (spanner edge weights).
        let spanner = self
            .tree
            .region(region)
            .spanner
            .as_ref()
            .ok_or_else(|| Error::InternalConsistency("region lacks spanner".into()))?;
        let mut pos = vec![0.0; path.len()];
        for i in 1..path.len() {
            let w = spanner
                .edges
                .iter()
                .find(|&&(a, b, _)| {
                    (a == path[i - 1] && b == path[i]) || (a == path[i] && b == path[i - 1])
                })
                .map(|&(_, _, w)| w)
                .ok_or_else(|| Error::InternalConsistency("path edge missing in spanner".into()))?;
            pos[i] = pos[i - 1] + w;
        }
        let base = pos[first];
        let beta = pos[last] - base;
        let step = mu * mu * big_d;
        let mut marks = Vec::new();
        if step <= 0.0 {
            marks.push(0.0);
        } else {
            let count = (beta / step).floor() as usize;
            for k in 0..=count {
                marks.push(k as f64 * step);
            }
            if beta - count as f64 * step > 1e-12 * beta.max(1.0) {
                marks.push(beta);
            }
        }
        let mut out = Vec::new();
        for m in marks {
            let target = base + m;
            // Vertex at or flanking the mark within [first, last].
            let mut hit = None;
            for i in first..=last {
                if (pos[i] - target).abs() <= 1e-12 * target.max(1.0) {
                    hit = Some(i);
                    break;
                }
            }
            match hit {
                Some(i) => out.push(path[i]),
                None => {
                    for i in first..last {
                        if pos[i] < target && target < pos[i + 1] {
                            out.push(path[i]);
                            out.push(path[i + 1]);
                            break;
                        }
                    }
                }
            }
        }
        out.dedup();
        Ok(out)
    }

    /// Landmark set of a separator path for anchors (q1, q2), exposed with
    /// the ingredients needed to check the covering property: the eligible
    /// path vertices (those within D/mu^2 of q1), the rounding step mu^2 D,
    /// and the size bound 4 alpha / mu^4 + 4 from the subpath length.
    pub fn landmark_set(
        &mut self,
        region: usize,
        path_idx: usize,
        q1: usize,
        q2: usize,
    ) -> Result<LandmarkSetInfo> {
        let path = {
            let r = self.tree.region(region);
            let sep = r
                .separator
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("region has no separator".into()))?;
            sep.paths
                .get(path_idx)
                .cloned()
                .ok_or_else(|| Error::InvalidParameter("path index out of range".into()))?
        };
        let mu = self.params.mu_landmark();
        let big_d = {
            let t = self.region_table(region, q1);
            t.dist[q2] + self.dist_a[q2]
        };
        let landmarks = self.landmarks_on_path(region, &path, q1, big_d)?;
        let reach = big_d / (mu * mu);
        let eligible: Vec<usize> = {
            let t = self.region_table(region, q1);
            path.iter().copied().filter(|&v| t.dist[v] <= reach).collect()
        };
        let alpha = self.g.metric.spanner_alpha()?;
        let size_bound = (4.0 * alpha / mu.powi(4) + 4.0).ceil() as usize;
        Ok(LandmarkSetInfo { path, landmarks, eligible, step: mu * mu * big_d, big_d, size_bound })
    }

    /// The canonical rounded distance tuple of a long-range candidate s.
    pub fn canonical_tuple(&mut self, s: usize, ell: f64) -> Result<CanonicalTuple> {
        if !self.in_long_range(s, ell) {
            return Err(Error::InvalidParameter(format!(
                "vertex {s} is within {ell} hops of a client; tuple undefined",
            )));
        }
        let mu = self.params.mu_landmark();
        let chain = self.tree.root_leaf_path(s);
        let leaf = *chain.last().unwrap();
        let leaf_clients: Vec<usize> = self
            .x
            .iter()
            .copied()
            .filter(|&p| self.tree.region(leaf).contains(p))
            .collect();
        let mut entries = Vec::new();
        for &rid in chain.iter().take(chain.len().saturating_sub(1)) {
            let (paths, has_sep) = {
                let r = self.tree.region(rid);
                match &r.separator {
                    Some(sep) => (sep.paths.clone(), true),
                    None => (Vec::new(), false),
                }
            };
            if !has_sep {
                continue; // component-split region: no separator paths
            }
            // q1: nearest client of the region to s.
            let region_clients: Vec<usize> = self
                .x
                .iter()
                .copied()
                .filter(|&p| self.tree.region(rid).contains(p))
                .collect();
            if region_clients.is_empty() {
                continue;
            }
            let ds = {
                let t = self.region_table(rid, s);
                region_clients.iter().map(|&p| t.dist[p]).collect::<Vec<f64>>()
            };
            let (mut q1, mut q1d) = (region_clients[0], ds[0]);
            for (i, &p) in region_clients.iter().enumerate() {
                if ds[i] < q1d {
                    q1 = p;
                    q1d = ds[i];
                }
            }
            // Band membership scans every region vertex; D-values come from
            // the q1 table plus the global pivot distances.
            let region_vertices = self.tree.region(rid).vertices.clone();
            let q1_table_dist: Vec<f64> = {
                let t = self.region_table(rid, q1);
                region_vertices.iter().map(|&v| t.dist[v]).collect()
            };
            let lo = mu * q1d;
            let hi = q1d / mu;
            let mut q2 = None;
            let mut q3: Option<(usize, f64)> = None;
            let mut q4: Option<(usize, f64)> = None;
            for (i, &v) in region_vertices.iter().enumerate() {
                let val = q1_table_dist[i] + self.dist_a[v];
                if !val.is_finite() {
                    continue;
                }
                if lo <= val && val <= hi {
                    if q2.is_none() {
                        q2 = Some(v);
                    }
                } else if val > hi {
                    if q3.map_or(true, |(_, best)| val < best) {
                        q3 = Some((v, val));
                    }
                } else if val < lo && q4.map_or(true, |(_, best)| val > best) {
                    q4 = Some((v, val));
                }
            }
            match q2 {
                Some(q2) => {
                    let big_d = {
                        let t = self.region_table(rid, q1);
                        t.dist[q2] + self.dist_a[q2]
                    };
                    for (j, path) in paths.iter().enumerate() {
                        let lms = self.landmarks_on_path(rid, path, q1, big_d)?;
                        let (landmarks, q1_entry, leaf_entries) = {
                            let sdist: Vec<f64> = {
                                let t = self.region_table(rid, s);
                                lms.iter().map(|&l| t.dist[l]).collect()
                            };
                            let step_l = mu * mu * big_d;
                            let clamp_l = 3.0 * big_d / (mu * mu);
                            let landmarks: Vec<(usize, TupleEntry)> = lms
                                .iter()
                                .zip(sdist)
                                .map(|(&l, d)| (l, round_entry(d, step_l, clamp_l)))
                                .collect();
                            let q1_entry =
                                round_entry(q1d, mu * big_d, 3.0 * big_d / mu);
                            let leaf_entries: Vec<(usize, TupleEntry)> = leaf_clients
                                .iter()
                                .map(|&xv| {
                                    let d = {
                                        let t = self.region_table(rid, s);
                                        t.dist[xv]
                                    };
                                    (
                                        xv,
                                        round_entry(
                                            d,
                                            mu * self.dist_a[xv],
                                            self.dist_a[xv] / mu,
                                        ),
                                    )
                                })
                                .collect();
                            (landmarks, q1_entry, leaf_entries)
                        };
                        entries.push((
                            rid,
                            j,
                            PathTuple::First { q1, q2, landmarks, q1_entry, leaf_entries },
                        ));
                    }
                }
                None => {
                    let q3v = q3.map(|(v, _)| v);
                    let q4v = q4.map(|(v, _)| v);
                    if q3v.is_none() && q4v.is_none() {
                        return Err(Error::InternalConsistency(
                            "second rounding with both anchors undefined".into(),
                        ));
                    }
                    // The indicator: 1/mu (d_i(q1,q4)+d(q4,A)) < d_i(q1,s)
                    //              < mu (d_i(q1,q3)+d(q3,A)), sides dropped
                    // with their undefined anchors.
                    let mut value = true;
                    if let Some((_, v4)) = q4 {
                        value &= v4 / mu < q1d;
                    }
                    if let Some((_, v3)) = q3 {
                        value &= q1d < mu * v3;
                    }
                    for (j, _) in paths.iter().enumerate() {
                        entries.push((
                            rid,
                            j,
                            PathTuple::Second { q1, q3: q3v, q4: q4v, value },
                        ));
                    }
                }
            }
        }
        // Leaf tuple over global distances.
        let leaf_tuple: Vec<(usize, TupleEntry)> = leaf_clients
            .iter()
            .map(|&xv| {
                let xi = self.x.binary_search(&xv).unwrap();
                let d = self.x_tables[xi].dist[s];
                (xv, round_entry(d, mu * self.dist_a[xv], self.dist_a[xv] / mu))
            })
            .collect();
        Ok(CanonicalTuple { entries, leaf: leaf_tuple })
    }

    /// Builds the full centroid set.
    pub fn build(&mut self) -> Result<CentroidSet> {
        let ell = self.params.hop_bound(self.g)?;
        let (net, net_balls) = self.build_c_net()?;
        let (support_graph, support) = match self.g.metric.family {
            GraphFamily::HopUnitDisk => (None, self.build_c_support(None, ell)?),
            _ => {
                let sg = build_support_graph(self.g, self.params.mu_support())?;
                let sup = self.build_c_support(Some(&sg), ell)?;
                (Some(sg), sup)
            }
        };

        // Landmark representatives: group the long-range vertices of every
        // leaf by their canonical tuple. The hop metric would need the
        // (out-of-scope) hop spanner here, so its landmark part stays empty.
        let mut groups: HashMap<(usize, CanonicalTuple), usize> = HashMap::new();
        let mut landmark = Vec::new();
        if self.g.metric.family != GraphFamily::HopUnitDisk {
            let leaf_ids: Vec<usize> =
                self.tree.regions.iter().filter(|r| r.is_leaf()).map(|r| r.id).collect();
            for leaf in leaf_ids {
                let vertices = self.tree.region(leaf).vertices.clone();
                for s in vertices {
                    if self.tree.leaf_of(s) != leaf {
                        continue; // shared subpath endpoint counted once
                    }
                    if !self.in_long_range(s, ell) {
                        continue;
                    }
                    let tuple = self.canonical_tuple(s, ell)?;
                    let e = groups.entry((leaf, tuple)).or_insert(s);
                    if s < *e {
                        *e = s;
                    }
                }
            }
            landmark = groups.values().copied().collect();
            landmark.sort_unstable();
            landmark.dedup();
        }
        Ok(CentroidSet { net, net_balls, support, support_graph, landmark, ell, groups })
    }

    /// Applies the four replacement rules in order to a solution S.
    pub fn replace(&mut self, cset: &CentroidSet, s_centers: &[usize]) -> Result<Replacement> {
        let mut originals = s_centers.to_vec();
        originals.sort_unstable();
        originals.dedup();
        let k = originals.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty solution".into()));
        }
        let mut cache = DistCache::new(self.g);
        let support_set: HashSet<usize> = cset.support.iter().copied().collect();

        // Client assignment to nearest centers (ties to the smaller index).
        let mut assignment: Vec<usize> = Vec::with_capacity(self.x.len());
        for &p in &self.x {
            let mut best = (f64::INFINITY, 0usize);
            for (ci, &c) in originals.iter().enumerate() {
                let d = cache.dist(c, p);
                if d < best.0 {
                    best = (d, ci);
                }
            }
            assignment.push(best.1);
        }
        let clusters: Vec<Vec<usize>> = {
            let mut cl = vec![Vec::new(); k];
            for (xi, &ci) in assignment.iter().enumerate() {
                cl[ci].push(self.x[xi]);
            }
            cl
        };

        let is_hop = self.g.metric.family == GraphFamily::HopUnitDisk;
        let f_of = |v: usize| -> usize {
            match &cset.support_graph {
                Some(sg) => sg.f(v),
                None => v,
            }
        };

        let mut replaced: Vec<Option<(usize, ReplacementRule)>> = vec![None; k];

        // Rule 1: net replacement for centers serving a cheap client. The
        // rule only fires when the center actually lies inside the chosen
        // anchor's ball (the construction presumes s in B_i; with arbitrary
        // candidate solutions the membership must be checked, otherwise the
        // net's covering radius says nothing about d(s, rho(s))).
        if !is_hop {
            for ci in 0..k {
                let s = originals[ci];
                let cheap: Vec<usize> = clusters[ci]
                    .iter()
                    .copied()
                    .filter(|&q| self.dist_a[q] < 1.0)
                    .collect();
                if cheap.is_empty() {
                    continue;
                }
                let p_i = cheap
                    .iter()
                    .copied()
                    .min_by(|&a, &b| {
                        let va = self.dist_a[a] + cache.dist(s, a);
                        let vb = self.dist_a[b] + cache.dist(s, b);
                        va.total_cmp(&vb).then(a.cmp(&b))
                    })
                    .unwrap();
                let ball = cset
                    .net_balls
                    .iter()
                    .find(|b| b.anchor == p_i)
                    .ok_or_else(|| {
                        Error::InternalConsistency(format!("no net ball anchored at {p_i}"))
                    })?;
                if cache.dist(p_i, s) > ball.radius {
                    continue; // s outside B_i: fall through to the next rules
                }
                let tilde = ball
                    .net
                    .iter()
                    .copied()
                    .min_by(|&a, &b| {
                        cache.dist(s, a).total_cmp(&cache.dist(s, b)).then(a.cmp(&b))
                    })
                    .ok_or_else(|| Error::InternalConsistency("empty net ball".into()))?;
                replaced[ci] = Some((tilde, ReplacementRule::Net));
            }
        }

        // Rule 2: reuse a net replacement found for a different center.
        // "All clients expensive" is encoded by rule 1 not having fired
        // (the rules fall through sequentially).
        if !is_hop {
            for ci in 0..k {
                if replaced[ci].is_some() {
                    continue;
                }
                let s = originals[ci];
                let fs = f_of(s);
                if !support_set.contains(&fs) {
                    continue;
                }
                let mut pick = None;
                'outer: for (xi, &q) in self.x.iter().enumerate() {
                    let cq = assignment[xi];
                    if cq == ci {
                        continue;
                    }
                    if let Some((tq, ReplacementRule::Net)) = replaced[cq] {
                        let sq = originals[cq];
                        if cache.dist(sq, q) <= self.params.eps / self.params.z as f64
                            && cache.dist(tq, q) > cache.dist(fs, q)
                        {
                            pick = Some(tq);
                            break 'outer;
                        }
                    }
                }
                if let Some(tq) = pick {
                    replaced[ci] = Some((tq, ReplacementRule::NetSub));
                }
            }
        }

        // Rule 3: support replacement.
        for ci in 0..k {
            if replaced[ci].is_some() {
                continue;
            }
            let s = originals[ci];
            let fs = f_of(s);
            if support_set.contains(&fs) {
                replaced[ci] = Some((fs, ReplacementRule::Support));
            }
        }

        // Rule 4: landmark replacement.
        for ci in 0..k {
            if replaced[ci].is_some() {
                continue;
            }
            let s = originals[ci];
            if is_hop {
                return Err(Error::UnsupportedMetric(
                    "hop-udg landmark replacement needs the out-of-scope hop spanner".into(),
                ));
            }
            if !self.in_long_range(s, cset.ell) {
                return Err(Error::InternalConsistency(format!(
                    "center {s} escaped net/support rules yet sits within {} hops of a client",
                    cset.ell
                )));
            }
            let leaf = self.tree.leaf_of(s);
            let tuple = self.canonical_tuple(s, cset.ell)?;
            let rep = cset.groups.get(&(leaf, tuple)).copied().ok_or_else(|| {
                Error::InternalConsistency(format!(
                    "no landmark representative for the tuple class of {s}"
                ))
            })?;
            replaced[ci] = Some((rep, ReplacementRule::Landmark));
        }

        let mut out_centers = Vec::with_capacity(k);
        let mut rules = Vec::with_capacity(k);
        for r in replaced {
            let (v, rule) = r.expect("all centers replaced");
            out_centers.push(v);
            rules.push(rule);
        }
        let mut new_centers = out_centers.clone();
        new_centers.sort_unstable();
        new_centers.dedup();
        Ok(Replacement { originals, replaced: out_centers, rules, new_centers })
    }
}
