//! Recursive decomposition of an intersection graph guided by planar
//! spanners of its induced subgraphs.
//!
//! Each internal region is split by a shortest-path separator of its spanner:
//! the connected components left in the spanner become component children and
//! each separator path is broken into subpaths holding at most two marked
//! vertices (consecutive subpaths may share the marked vertex between them).
//! Recursion stops when a region holds at most two marked vertices.

use crate::error::{Error, Result};
use crate::graphs::GraphInstance;
use crate::separator::{sp_separator, SeparatorOutcome, SeparatorResult};
use crate::spanner::{induced_spanner, PlanarSpanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Root,
    ComponentChild,
    SubpathChild,
}

/// A node of the decomposition tree. Vertex sets are sorted host indices.
#[derive(Debug, Clone)]
pub struct Region {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub kind: RegionKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Separator used to split this region (internal split regions only).
    pub separator: Option<SeparatorResult>,
    /// Spanner of the induced subgraph (internal split regions only).
    pub spanner: Option<PlanarSpanner>,
    pub depth: usize,
}

impl Region {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn marked_count(&self, marked: &[bool]) -> usize {
        self.vertices.iter().filter(|&&v| marked[v]).count()
    }
}

#[derive(Debug, Clone)]
pub struct DecompTree {
    pub regions: Vec<Region>,
    pub root: usize,
    /// The marked set X, sorted host indices.
    pub marked: Vec<usize>,
    pub depth: usize,
}

impl DecompTree {
    pub fn region(&self, id: usize) -> &Region {
        &self.regions[id]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(|r| r.is_leaf())
    }

    /// Maximal root-to-leaf chain of regions containing `v`; when `v` sits in
    /// several children (subpath overlap at a marked vertex) the smallest
    /// child id wins.
    pub fn root_leaf_path(&self, v: usize) -> Vec<usize> {
        let mut chain = vec![self.root];
        let mut cur = self.root;
        loop {
            let r = &self.regions[cur];
            if r.is_leaf() {
                return chain;
            }
            let next = r
                .children
                .iter()
                .copied()
                .find(|&c| self.regions[c].contains(v))
                .expect("children cover the region");
            chain.push(next);
            cur = next;
        }
    }

    pub fn leaf_of(&self, v: usize) -> usize {
        *self.root_leaf_path(v).last().unwrap()
    }
}

/// Builds the decomposition tree of `g` for the marked set `x`.
///
/// A disconnected root decomposes into its connected components first; every
/// later region is connected by construction.
pub fn build_tree(g: &GraphInstance, x: &[usize]) -> Result<DecompTree> {
    let n = g.len();
    let mut marked_set = vec![false; n];
    for &v in x {
        if v >= n {
            return Err(Error::InvalidParameter(format!("marked vertex {v} out of range")));
        }
        marked_set[v] = true;
    }
    let mut marked: Vec<usize> = x.to_vec();
    marked.sort_unstable();
    marked.dedup();

    let mut regions: Vec<Region> = Vec::new();
    let root_vertices: Vec<usize> = (0..n).collect();
    regions.push(Region {
        id: 0,
        vertices: root_vertices,
        kind: RegionKind::Root,
        parent: None,
        children: Vec::new(),
        separator: None,
        spanner: None,
        depth: 0,
    });

    let mut work = vec![0usize];
    while let Some(rid) = work.pop() {
        let (vertices, depth) = {
            let r = &regions[rid];
            (r.vertices.clone(), r.depth)
        };
        let marked_in: Vec<usize> =
            vertices.iter().copied().filter(|&v| marked_set[v]).collect();
        if marked_in.len() <= 2 {
            continue; // leaf
        }

        // A disconnected region splits straight into its components.
        let comps = components_within(g, &vertices);
        if comps.len() > 1 {
            for comp in comps {
                let cid = regions.len();
                regions.push(Region {
                    id: cid,
                    vertices: comp,
                    kind: RegionKind::ComponentChild,
                    parent: Some(rid),
                    children: Vec::new(),
                    separator: None,
                    spanner: None,
                    depth: depth + 1,
                });
                regions[rid].children.push(cid);
                work.push(cid);
            }
            continue;
        }

        let spanner = induced_spanner(g, &vertices)?;
        // The spanner of a connected region must stay connected.
        {
            let t = spanner.shortest_paths(spanner.host_of(0))?;
            if let Some(lv) = t.dist.iter().position(|d| d.is_infinite()) {
                return Err(Error::SpannerDisconnects {
                    a: g.id_of(spanner.host_of(0)),
                    b: g.id_of(spanner.host_of(lv)),
                });
            }
        }
        let weights: Vec<f64> = spanner
            .vertices
            .iter()
            .map(|&v| if marked_set[v] { 1.0 } else { 0.0 })
            .collect();
        let sep = match sp_separator(&spanner, &weights)? {
            SeparatorOutcome::Split(sep) => sep,
            SeparatorOutcome::TrivialRegion => {
                return Err(Error::InternalConsistency(
                    "separator signalled trivial region with >2 marked vertices".into(),
                ))
            }
        };

        let mut removed = vec![false; n];
        for p in &sep.paths {
            for &v in p {
                removed[v] = true;
            }
        }

        // Component children: connected components of the spanner minus the
        // separator paths.
        let remaining: Vec<usize> =
            vertices.iter().copied().filter(|&v| !removed[v]).collect();
        let mut child_ids = Vec::new();
        for comp in spanner_components(&spanner, &remaining, &removed) {
            let cid = regions.len();
            regions.push(Region {
                id: cid,
                vertices: comp,
                kind: RegionKind::ComponentChild,
                parent: Some(rid),
                children: Vec::new(),
                separator: None,
                spanner: None,
                depth: depth + 1,
            });
            child_ids.push(cid);
            work.push(cid);
        }

        // Subpath children: each path broken at its marked vertices into
        // maximal subpaths with at most two of them; a path without marked
        // vertices stays whole.
        for path in &sep.paths {
            for sub in split_path(path, &marked_set) {
                let mut verts = sub;
                verts.sort_unstable();
                let cid = regions.len();
                regions.push(Region {
                    id: cid,
                    vertices: verts,
                    kind: RegionKind::SubpathChild,
                    parent: Some(rid),
                    children: Vec::new(),
                    separator: None,
                    spanner: None,
                    depth: depth + 1,
                });
                child_ids.push(cid);
                work.push(cid);
            }
        }

        let r = &mut regions[rid];
        r.children = child_ids;
        r.separator = Some(sep);
        r.spanner = Some(spanner);
    }

    let depth = regions.iter().map(|r| r.depth).max().unwrap_or(0);
    Ok(DecompTree { regions, root: 0, marked, depth })
}

fn components_within(g: &GraphInstance, vertices: &[usize]) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut inside = vec![false; n];
    for &v in vertices {
        inside[v] = true;
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for &s in vertices {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &(v, _) in g.neighbors(u) {
                if inside[v] && !seen[v] {
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

fn spanner_components(h: &PlanarSpanner, remaining: &[usize], removed: &[bool]) -> Vec<Vec<usize>> {
    use std::collections::HashMap;
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v, _) in &h.edges {
        if !removed[u] && !removed[v] {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
    }
    let mut seen: HashMap<usize, bool> = remaining.iter().map(|&v| (v, false)).collect();
    let mut comps = Vec::new();
    for &s in remaining {
        if seen[&s] {
            continue;
        }
        seen.insert(s, true);
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            if let Some(ns) = adj.get(&u) {
                for &v in ns {
                    if let Some(flag) = seen.get_mut(&v) {
                        if !*flag {
                            *flag = true;
                            stack.push(v);
                        }
                    }
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Breaks a path (vertex sequence) at its marked vertices: marked positions
/// x1 <= … <= xm yield subpaths [start..=x1], [x1..=x2], …, [xm..=end];
/// a path with no marked vertex is returned whole. Zero-length pieces
/// (marked vertex at an end) collapse to singletons and duplicates drop.
fn split_path(path: &[usize], marked: &[bool]) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..path.len()).filter(|&i| marked[path[i]]).collect();
    if idx.is_empty() {
        return vec![path.to_vec()];
    }
    let mut cuts = vec![0usize];
    cuts.extend(idx.iter().copied());
    cuts.push(path.len() - 1);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let piece: Vec<usize> = path[a..=b].to_vec();
        if piece.is_empty() {
            continue;
        }
        if out.last().map_or(false, |last: &Vec<usize>| *last == piece) {
            continue;
        }
        out.push(piece);
    }
    out
}

/// Outcome of locating the separator structure between two vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// The lowest region containing the canonical shortest path is a leaf.
    SameLeaf { region: usize },
    Separated(SeparationInfo),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationInfo {
    /// Lowest region containing the whole canonical shortest path.
    pub region: usize,
    /// Index of the separator path containing `x`.
    pub path_idx: usize,
    /// Separating vertex on the spanner path between `u` and `v`.
    pub x: usize,
    /// Last vertex of the canonical path inside p's child.
    pub u: usize,
    /// Its successor on the canonical path.
    pub v: usize,
}

/// Finds the lowest region containing the canonical shortest path between
/// `p` and `s` and, if it is internal, the separating vertex record.
///
/// The canonical path minimizes (weight, hops, lexicographic parent id) from
/// `p`, matching [`GraphInstance::shortest_paths`].
pub fn separating_vertex(
    tree: &DecompTree,
    g: &GraphInstance,
    p: usize,
    s: usize,
) -> Result<Separation> {
    if p == s {
        return Ok(Separation::SameLeaf { region: tree.leaf_of(p) });
    }
    let t = g.shortest_paths(p);
    let path = t.path_to(s).ok_or(Error::Disconnected { a: g.id_of(p), b: g.id_of(s) })?;

    // Descend while some child contains the whole path.
    let mut cur = tree.root;
    loop {
        let r = tree.region(cur);
        if r.is_leaf() {
            return Ok(Separation::SameLeaf { region: cur });
        }
        let next = r
            .children
            .iter()
            .copied()
            .find(|&c| path.iter().all(|&v| tree.region(c).contains(v)));
        match next {
            Some(c) => cur = c,
            None => break,
        }
    }

    let region = tree.region(cur);
    let spanner = region
        .spanner
        .as_ref()
        .ok_or_else(|| Error::InternalConsistency("split region lacks spanner".into()))?;
    let sep = region
        .separator
        .as_ref()
        .ok_or_else(|| Error::InternalConsistency("split region lacks separator".into()))?;

    // p's child: smallest id among children containing p.
    let p_child = region
        .children
        .iter()
        .copied()
        .filter(|&c| tree.region(c).contains(p))
        .min()
        .ok_or_else(|| Error::InternalConsistency("children do not cover p".into()))?;
    let child = tree.region(p_child);

    // Maximal prefix of the canonical path inside p's child.
    let mut u = path[0];
    let mut v = None;
    for w in path.windows(2) {
        if child.contains(w[1]) {
            u = w[1];
        } else {
            u = w[0];
            v = Some(w[1]);
            break;
        }
    }
    let v = v.ok_or_else(|| {
        Error::InternalConsistency("path never leaves p's child although region split".into())
    })?;

    // Walk the spanner's shortest path from u to v; the first vertex lying on
    // a separator path is the separating vertex.
    let sd = spanner.shortest_paths(u)?;
    let lv = spanner
        .local(v)
        .ok_or_else(|| Error::InternalConsistency("v outside region spanner".into()))?;
    if sd.dist[lv].is_infinite() {
        return Err(Error::InternalConsistency("u, v disconnected in region spanner".into()));
    }
    let mut hp = Vec::new();
    let mut curl = lv;
    hp.push(spanner.host_of(curl));
    while let Some(pr) = sd.parent[curl] {
        hp.push(spanner.host_of(pr));
        curl = pr;
    }
    hp.reverse(); // u … v in host indices

    let mut on_path = vec![usize::MAX; g.len()];
    for (j, sp) in sep.paths.iter().enumerate() {
        for &w in sp {
            if on_path[w] == usize::MAX {
                on_path[w] = j;
            }
        }
    }
    for &w in &hp {
        if on_path[w] != usize::MAX {
            return Ok(Separation::Separated(SeparationInfo {
                region: cur,
                path_idx: on_path[w],
                x: w,
                u,
                v,
            }));
        }
    }
    Err(Error::InternalConsistency(
        "spanner path between u and v misses every separator path".into(),
    ))
}
