//! Desk-scale solvers: the coreset-partition FPT approximation scheme and an
//! exhaustive brute-force oracle.
//!
//! The FPT route builds a weighted coreset, enumerates every partition of its
//! members into at most k groups (restricted-growth strings, so relabelings
//! are never visited twice), places each group's best center by a full vertex
//! scan, and reports the cheapest center set evaluated on the full client
//! set.

use crate::coreset::{iterative_coreset, DESK_SIZE_C};
use crate::error::{Error, Result};
use crate::graphs::{cost_from_tables, DistTable, GraphInstance};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Enumeration guard: refuse when |Y| log2 k exceeds this.
pub const FPT_GUARD_BITS: f64 = 24.0;
/// Brute-force guard on the number of center subsets.
pub const BRUTE_FORCE_GUARD: u128 = 1_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusteringResult {
    /// Center ids (point ids, not indices).
    pub center_ids: Vec<u64>,
    pub cost: f64,
    pub method: String,
    pub wall_ms: f64,
    /// Set partitions visited (FPT method only).
    pub partitions_visited: u64,
}

/// Number of set partitions of n items into at most k nonempty blocks
/// (sum of Stirling numbers of the second kind).
pub fn partition_count(n: usize, k: usize) -> u128 {
    // S(n, j) via the triangle recurrence.
    let mut s = vec![vec![0u128; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = s[i - 1][j - 1] + j as u128 * s[i - 1][j];
        }
    }
    (1..=k).map(|j| s[n][j]).sum()
}

/// Exact optimum over all k-subsets of V. Refuses when C(|V|, k) exceeds
/// [`BRUTE_FORCE_GUARD`].
pub fn brute_force(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    k: usize,
    z: u32,
) -> Result<ClusteringResult> {
    let n = g.len();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside [1, {n}]")));
    }
    let mut subsets: u128 = 1;
    for i in 0..k {
        subsets = subsets * (n - i) as u128 / (i + 1) as u128;
        if subsets > BRUTE_FORCE_GUARD {
            return Err(Error::GuardExceeded(format!(
                "C({n}, {k}) exceeds {BRUTE_FORCE_GUARD} center subsets"
            )));
        }
    }
    let start = Instant::now();
    let tables: Vec<DistTable> = g.apsp();
    let mut centers: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let ctabs: Vec<&DistTable> = centers.iter().map(|&c| &tables[c]).collect();
        let cost: f64 = clients
            .iter()
            .map(|&(p, w)| {
                let d = ctabs.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
                w * d.powi(z as i32)
            })
            .sum();
        let better = match &best {
            None => true,
            Some((bc, bcent)) => cost < *bc || (cost == *bc && centers < *bcent),
        };
        if better {
            best = Some((cost, centers.clone()));
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if centers[i] != i + n - k {
                centers[i] += 1;
                for j in (i + 1)..k {
                    centers[j] = centers[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                let (cost, cs) = best.unwrap();
                return Ok(ClusteringResult {
                    center_ids: cs.iter().map(|&c| g.id_of(c)).collect(),
                    cost,
                    method: "brute".into(),
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    partitions_visited: 0,
                });
            }
        }
        if centers[0] > n - k {
            break;
        }
    }
    let (cost, cs) = best.unwrap();
    Ok(ClusteringResult {
        center_ids: cs.iter().map(|&c| g.id_of(c)).collect(),
        cost,
        method: "brute".into(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        partitions_visited: 0,
    })
}

struct PartitionSearch<'a> {
    /// cost_matrix[y][c] = w_y * d(y, c)^z.
    cost_matrix: &'a [Vec<f64>],
    k: usize,
    n_centers: usize,
    /// Per-group accumulated center costs.
    group_cost: Vec<Vec<f64>>,
    group_size: Vec<usize>,
    best_cost: f64,
    best_assignment: Vec<usize>,
    assignment: Vec<usize>,
    visited: u64,
}

impl<'a> PartitionSearch<'a> {
    /// DFS over restricted-growth strings: with `used` groups open, item i
    /// may join an existing group or open group `used` (when used < k), so
    /// every set partition into at most k blocks is visited exactly once.
    fn run(&mut self, item: usize, used: usize) {
        if item == self.cost_matrix.len() {
            self.visited += 1;
            let total: f64 = (0..used)
                .map(|gid| {
                    self.group_cost[gid]
                        .iter()
                        .fold(f64::INFINITY, |a, &b| a.min(b))
                })
                .sum();
            if total < self.best_cost {
                self.best_cost = total;
                self.best_assignment = self.assignment.clone();
            }
            return;
        }
        let limit = used.min(self.k - 1);
        for gid in 0..=limit {
            self.assignment[item] = gid;
            self.group_size[gid] += 1;
            for c in 0..self.n_centers {
                self.group_cost[gid][c] += self.cost_matrix[item][c];
            }
            self.run(item + 1, used.max(gid + 1));
            for c in 0..self.n_centers {
                self.group_cost[gid][c] -= self.cost_matrix[item][c];
            }
            self.group_size[gid] -= 1;
        }
    }
}

/// FPT approximation: coreset + partition enumeration. The guard refuses
/// instances where |Y| log2 k exceeds [`FPT_GUARD_BITS`]; k = 1 short-cuts to
/// the exact single-center scan.
pub fn fpt_cluster(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    k: usize,
    z: u32,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<ClusteringResult> {
    let n = g.len();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside [1, {n}]")));
    }
    let start = Instant::now();
    if k == 1 {
        let mut best = (f64::INFINITY, 0usize);
        for c in 0..n {
            let t = g.shortest_paths(c);
            let cost: f64 =
                clients.iter().map(|&(p, w)| w * t.dist[p].powi(z as i32)).sum();
            if cost < best.0 {
                best = (cost, c);
            }
        }
        return Ok(ClusteringResult {
            center_ids: vec![g.id_of(best.1)],
            cost: best.0,
            method: "fpt".into(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            partitions_visited: 0,
        });
    }
    let build = iterative_coreset(g, clients, k, z, eps, delta, seed, DESK_SIZE_C)?;
    let members = &build.coreset.members;
    let bits = members.len() as f64 * (k as f64).log2();
    if bits > FPT_GUARD_BITS {
        return Err(Error::GuardExceeded(format!(
            "coreset of {} members with k = {k} needs {bits:.1} enumeration bits (> {})",
            members.len(),
            FPT_GUARD_BITS
        )));
    }
    let tables: Vec<DistTable> = g.apsp();
    let cost_matrix: Vec<Vec<f64>> = members
        .iter()
        .map(|&(y, w)| (0..n).map(|c| w * tables[c].dist[y].powi(z as i32)).collect())
        .collect();
    let mut search = PartitionSearch {
        cost_matrix: &cost_matrix,
        k,
        n_centers: n,
        group_cost: vec![vec![0.0; n]; k],
        group_size: vec![0; k],
        best_cost: f64::INFINITY,
        best_assignment: vec![0; members.len()],
        assignment: vec![0; members.len()],
        visited: 0,
    };
    search.run(0, 0);

    // Recover the best centers from the winning assignment (per group the
    // cheapest center, ties to the smallest index), then evaluate on the full
    // client set.
    let groups = search.best_assignment.iter().copied().max().unwrap_or(0) + 1;
    let mut centers = Vec::new();
    for gid in 0..groups {
        let mut acc = vec![0.0; n];
        for (yi, &(y, w)) in members.iter().enumerate() {
            if search.best_assignment[yi] == gid {
                for c in 0..n {
                    acc[c] += w * tables[c].dist[y].powi(z as i32);
                }
            }
        }
        let best_c = (0..n)
            .min_by(|&a, &b| acc[a].total_cmp(&acc[b]).then(a.cmp(&b)))
            .unwrap();
        centers.push(best_c);
    }
    centers.sort_unstable();
    centers.dedup();
    let ctabs: Vec<&DistTable> = centers.iter().map(|&c| &tables[c]).collect();
    let cost: f64 = clients
        .iter()
        .map(|&(p, w)| {
            let d = ctabs.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
            w * d.powi(z as i32)
        })
        .sum();
    let _ = cost_from_tables;
    Ok(ClusteringResult {
        center_ids: centers.iter().map(|&c| g.id_of(c)).collect(),
        cost,
        method: "fpt".into(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        partitions_visited: search.visited,
    })
}
