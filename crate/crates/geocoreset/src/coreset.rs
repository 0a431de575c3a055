//! Coreset pipeline: constant-factor seed solution, sensitivity sampling,
//! iterative size reduction, and coreset verification.
//!
//! The sampler draws points with probability proportional to the standard
//! sensitivity upper bound (cost share plus inverse cluster mass) and weights
//! each drawn point by the inverse of its expected draw count, so the
//! weighted coreset cost is an unbiased estimator of the true cost for every
//! fixed center set.

use crate::error::{Error, Result};
use crate::graphs::{cost_from_tables, dist_to_centers, DistTable, GraphInstance};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A (k,z)-clustering solution used as the sampling pivot.
#[derive(Debug, Clone)]
pub struct ApproxSolution {
    pub centers: Vec<usize>,
    /// Client position -> index into `centers` (nearest, ties to smaller id).
    pub assignment: Vec<usize>,
    pub cost: f64,
    pub z: u32,
}

/// Lazily filled per-vertex distance tables.
pub struct DistCache<'g> {
    g: &'g GraphInstance,
    tables: HashMap<usize, DistTable>,
}

impl<'g> DistCache<'g> {
    pub fn new(g: &'g GraphInstance) -> Self {
        DistCache { g, tables: HashMap::new() }
    }

    pub fn table(&mut self, v: usize) -> &DistTable {
        self.tables.entry(v).or_insert_with(|| self.g.shortest_paths(v))
    }

    pub fn dist(&mut self, from: usize, to: usize) -> f64 {
        self.table(from).dist[to]
    }
}

fn weighted_cost(clients: &[(usize, f64)], tables: &[&DistTable], z: u32) -> f64 {
    clients
        .iter()
        .map(|&(p, w)| {
            let d = tables.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
            w * d.powi(z as i32)
        })
        .sum()
}

/// Draw an index proportionally to `weights`; infinite weights dominate
/// (uniform among them), all-zero falls back to uniform.
fn weighted_draw<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let infs: Vec<usize> =
        (0..weights.len()).filter(|&i| weights[i].is_infinite()).collect();
    if !infs.is_empty() {
        return infs[rng.gen_range(0..infs.len())];
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return rng.gen_range(0..weights.len());
    }
    let mut target = rng.gen_range(0.0..total);
    for (i, &w) in weights.iter().enumerate() {
        if target < w {
            return i;
        }
        target -= w;
    }
    weights.len() - 1
}

/// Constant-factor seed solution: D^z sampling (k draws proportional to the
/// current cost) followed by single-swap local search run to local optimality.
/// Deterministic given the seed; exact scan when k = 1; zero-cost exact
/// answer when k = |clients|.
pub fn approx_solution(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    k: usize,
    z: u32,
    seed: u64,
) -> Result<ApproxSolution> {
    if clients.is_empty() {
        return Err(Error::InvalidParameter("approx_solution with no clients".into()));
    }
    if k < 1 || k > clients.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside [1, {}]",
            clients.len()
        )));
    }
    let n = g.len();
    let mut cache = DistCache::new(g);

    let finish = |centers: Vec<usize>, cache: &mut DistCache| -> ApproxSolution {
        let tables: Vec<&DistTable> = {
            for &c in &centers {
                cache.table(c);
            }
            centers.iter().map(|&c| &cache.tables[&c]).collect()
        };
        let mut cost = 0.0;
        let assignment = clients
            .iter()
            .map(|&(p, w)| {
                let mut best = 0usize;
                let mut bd = f64::INFINITY;
                for (ci, t) in tables.iter().enumerate() {
                    if t.dist[p] < bd {
                        bd = t.dist[p];
                        best = ci;
                    }
                }
                cost += w * bd.powi(z as i32);
                best
            })
            .collect();
        ApproxSolution { centers, assignment, cost, z }
    };

    if k == clients.len() {
        let mut centers: Vec<usize> = clients.iter().map(|&(p, _)| p).collect();
        centers.sort_unstable();
        centers.dedup();
        while centers.len() < k {
            // Duplicate client vertices: pad with unused vertices.
            let extra = (0..n).find(|v| !centers.contains(v)).unwrap_or(0);
            centers.push(extra);
            centers.sort_unstable();
            centers.dedup();
            if centers.len() == n {
                break;
            }
        }
        return Ok(finish(centers, &mut cache));
    }
    if k == 1 {
        // Exact 1-center scan over all vertices.
        let mut best = (f64::INFINITY, 0usize);
        for c in 0..n {
            let t = g.shortest_paths(c);
            let cost: f64 =
                clients.iter().map(|&(p, w)| w * t.dist[p].powi(z as i32)).sum();
            if cost < best.0 {
                best = (cost, c);
            }
        }
        return Ok(finish(vec![best.1], &mut cache));
    }

    let mut rng = crate::rng::stream(seed, "approx-solution");
    // D^z init.
    let mut centers: Vec<usize> = Vec::new();
    let first_weights: Vec<f64> = clients.iter().map(|&(_, w)| w).collect();
    let first = clients[weighted_draw(&mut rng, &first_weights)].0;
    centers.push(first);
    while centers.len() < k {
        let tables: Vec<&DistTable> = {
            for &c in &centers {
                cache.table(c);
            }
            centers.iter().map(|&c| &cache.tables[&c]).collect()
        };
        let weights: Vec<f64> = clients
            .iter()
            .map(|&(p, w)| {
                let d = tables.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
                if d.is_infinite() {
                    f64::INFINITY
                } else {
                    w * d.powi(z as i32)
                }
            })
            .collect();
        let all_zero = weights.iter().all(|&w| w == 0.0);
        if all_zero {
            // Everything already covered; add the smallest unused vertex.
            let extra = (0..n).find(|v| !centers.contains(v));
            match extra {
                Some(v) => centers.push(v),
                None => break,
            }
            continue;
        }
        let pick = clients[weighted_draw(&mut rng, &weights)].0;
        if centers.contains(&pick) {
            // Re-draw deterministically by falling back to the farthest client.
            let far = clients
                .iter()
                .map(|&(p, _)| p)
                .filter(|p| !centers.contains(p))
                .max_by(|&a, &b| {
                    let da = dist_to_centers(a, &centers.iter().map(|&c| cache.g.shortest_paths(c)).collect::<Vec<_>>());
                    let db = dist_to_centers(b, &centers.iter().map(|&c| cache.g.shortest_paths(c)).collect::<Vec<_>>());
                    da.total_cmp(&db)
                });
            match far {
                Some(v) => centers.push(v),
                None => {
                    let extra = (0..n).find(|v| !centers.contains(v));
                    match extra {
                        Some(v) => centers.push(v),
                        None => break,
                    }
                }
            }
        } else {
            centers.push(pick);
        }
    }
    centers.sort_unstable();

    // Single-swap local search to local optimality (tiny relative tolerance
    // prevents float cycling).
    let eval = |centers: &[usize], cache: &mut DistCache| -> f64 {
        for &c in centers {
            cache.table(c);
        }
        let tables: Vec<&DistTable> = centers.iter().map(|&c| &cache.tables[&c]).collect();
        weighted_cost(clients, &tables, z)
    };
    let mut current_cost = eval(&centers, &mut cache);
    let max_rounds = 100 * k;
    for _ in 0..max_rounds {
        let mut best_swap: Option<(f64, usize, usize)> = None;
        // Nearest and second-nearest center distances per client.
        for &c in &centers {
            cache.table(c);
        }
        let tables: Vec<&DistTable> = centers.iter().map(|&c| &cache.tables[&c]).collect();
        let mut near: Vec<(usize, f64, f64)> = Vec::with_capacity(clients.len());
        for &(p, _) in clients {
            let mut b1 = (usize::MAX, f64::INFINITY);
            let mut d2 = f64::INFINITY;
            for (ci, t) in tables.iter().enumerate() {
                let d = t.dist[p];
                if d < b1.1 {
                    d2 = b1.1;
                    b1 = (ci, d);
                } else if d < d2 {
                    d2 = d;
                }
            }
            near.push((b1.0, b1.1, d2));
        }
        for cand in 0..n {
            if centers.contains(&cand) {
                continue;
            }
            cache.table(cand);
            for out_idx in 0..centers.len() {
                let tc = &cache.tables[&cand];
                let mut cost = 0.0;
                for (ci, &(p, w)) in clients.iter().enumerate() {
                    let (ni, d1, d2) = near[ci];
                    let keep = if ni == out_idx { d2 } else { d1 };
                    let d = keep.min(tc.dist[p]);
                    cost += w * d.powi(z as i32);
                }
                let better = match best_swap {
                    None => cost < current_cost * (1.0 - 1e-9),
                    Some((bc, _, _)) => cost < bc,
                };
                if better {
                    best_swap = Some((cost, out_idx, cand));
                }
            }
        }
        match best_swap {
            Some((cost, out_idx, cand)) if cost < current_cost * (1.0 - 1e-9) => {
                centers[out_idx] = cand;
                centers.sort_unstable();
                current_cost = cost;
            }
            _ => break,
        }
    }
    Ok(finish(centers, &mut cache))
}

/// Build parameters recorded inside a coreset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoresetParams {
    pub k: usize,
    pub z: u32,
    pub eps: f64,
    pub delta: f64,
    pub sample_size: usize,
    pub seed: u64,
    /// Ids of the pivot solution's centers (used by the verifier's
    /// adversarial mixture).
    pub pivot_centers: Vec<u64>,
}

/// A weighted coreset: distinct members with strictly positive weights.
#[derive(Debug, Clone)]
pub struct WeightedCoreset {
    /// (vertex index, weight), sorted by vertex index.
    pub members: Vec<(usize, f64)>,
    pub params: CoresetParams,
}

impl WeightedCoreset {
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|&(_, w)| w).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Sensitivity importance sampler realizing the coreset framework: draw `m`
/// clients i.i.d. with probability proportional to
/// `w(p) d(p,A)^z / cost(X,A) + w(p) / (k W(cluster_A(p)))`, then weight each
/// distinct member by `w(p) count(p) / (m prob(p))`.
pub fn sensitivity_coreset(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    pivot: &ApproxSolution,
    k: usize,
    z: u32,
    m: usize,
    seed: u64,
) -> Result<WeightedCoreset> {
    if m < k {
        return Err(Error::InvalidParameter(format!("sample size {m} below k = {k}")));
    }
    if clients.is_empty() {
        return Err(Error::InvalidParameter("empty client set".into()));
    }
    let tables: Vec<DistTable> =
        pivot.centers.iter().map(|&c| g.shortest_paths(c)).collect();
    let total_cost = cost_from_tables(clients, &tables, z);

    // Cluster weights under the pivot assignment.
    let mut cluster_w = vec![0.0; pivot.centers.len()];
    for (ci, &(_, w)) in clients.iter().enumerate() {
        cluster_w[pivot.assignment[ci]] += w;
    }

    let probs: Vec<f64> = if total_cost <= 0.0 || !total_cost.is_finite() {
        // Degenerate pivot: uniform (weight-proportional) fallback.
        let tw: f64 = clients.iter().map(|&(_, w)| w).sum();
        clients.iter().map(|&(_, w)| w / tw).collect()
    } else {
        let sigmas: Vec<f64> = clients
            .iter()
            .enumerate()
            .map(|(ci, &(p, w))| {
                let d = dist_to_centers(p, &tables);
                let share = w * d.powi(z as i32) / total_cost;
                let mass = w / (k as f64 * cluster_w[pivot.assignment[ci]]);
                share + mass
            })
            .collect();
        let total: f64 = sigmas.iter().sum();
        sigmas.into_iter().map(|s| s / total).collect()
    };

    let mut rng = crate::rng::stream(seed, "sensitivity-coreset");
    let mut counts: HashMap<usize, (f64, u64)> = HashMap::new(); // client idx -> (prob, count)
    for _ in 0..m {
        let ci = weighted_draw(&mut rng, &probs);
        counts.entry(ci).or_insert((probs[ci], 0)).1 += 1;
    }
    let mut member_weights: HashMap<usize, f64> = HashMap::new();
    for (ci, (prob, count)) in counts {
        let (p, w) = clients[ci];
        let weight = w * count as f64 / (m as f64 * prob);
        *member_weights.entry(p).or_insert(0.0) += weight;
    }
    let mut members: Vec<(usize, f64)> = member_weights.into_iter().collect();
    members.sort_by_key(|&(p, _)| p);
    Ok(WeightedCoreset {
        members,
        params: CoresetParams {
            k,
            z,
            // A raw sampling pass has no accuracy target of its own; the
            // iterative builder fills these in. Zero keeps JSON round-trips
            // lossless (non-finite floats do not survive serde_json).
            eps: 0.0,
            delta: 0.0,
            sample_size: m,
            seed,
            pivot_centers: pivot.centers.iter().map(|&c| g.id_of(c)).collect(),
        },
    })
}

/// Desk-scale sample-size rule: ceil(c k log2(k+1)^2 / eps^2).
pub const DESK_SIZE_C: f64 = 20.0;

pub fn desk_sample_size(k: usize, eps: f64, c: f64) -> usize {
    let l = ((k + 1) as f64).log2();
    (c * k as f64 * l * l / (eps * eps)).ceil() as usize
}

/// One iteration of the size-reduction schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub eps_i: f64,
    pub delta_i: f64,
    /// Planned sample size for this round.
    pub target_size: usize,
    /// log^(i) n (base 2), the iterated log controlling eps_i.
    pub iter_log: f64,
}

/// The iterative size-reduction schedule: t rounds with
/// eps_i = eps / (log^(i) n)^(1/rho) and delta_i = delta / |X_{i-1}|,
/// followed by a final pass at (eps, delta).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionSchedule {
    pub t: usize,
    pub rho: f64,
    pub steps: Vec<ScheduleStep>,
    pub final_size: usize,
    pub eps: f64,
    pub delta: f64,
}

impl ReductionSchedule {
    /// Product of (1 + eps_i), which the schedule keeps at most 1 + 10 eps.
    pub fn eps_product(&self) -> f64 {
        self.steps.iter().map(|s| 1.0 + s.eps_i).product()
    }
}

fn iterated_log2(n: f64, times: usize) -> f64 {
    let mut v = n;
    for _ in 0..times {
        if v <= 0.0 {
            return f64::NEG_INFINITY;
        }
        v = v.log2();
    }
    v
}

/// Default rho: max(2, ceil(z log2(z+1))).
pub fn default_rho(z: u32) -> f64 {
    let v = (z as f64 * ((z + 1) as f64).log2()).ceil();
    v.max(2.0)
}

/// Computes the reduction schedule for n input points.
pub fn reduction_schedule(
    n: usize,
    k: usize,
    z: u32,
    eps: f64,
    delta: f64,
    size_c: f64,
) -> Result<ReductionSchedule> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1)")));
    }
    if !(0.0 < delta && delta < 0.25) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1/4)")));
    }
    let rho = default_rho(z);
    let threshold =
        (125.0 * k as f64 * eps.powf(-rho) * (1.0 / delta).log2()).max(rho * 2f64.powf(rho + 1.0));
    // t = largest integer with log^(t-1) n >= threshold.
    let nf = n as f64;
    let mut t = 0usize;
    while iterated_log2(nf, t) >= threshold {
        t += 1;
    }
    let mut steps = Vec::with_capacity(t);
    let mut prev_size = n;
    for i in 1..=t {
        let il = iterated_log2(nf, i);
        let eps_i = eps / il.powf(1.0 / rho);
        let delta_i = delta / prev_size as f64;
        let target = desk_sample_size(k, eps_i, size_c);
        steps.push(ScheduleStep { eps_i, delta_i, target_size: target, iter_log: il });
        prev_size = target.max(il.ceil() as usize);
    }
    let schedule = ReductionSchedule {
        t,
        rho,
        steps,
        final_size: desk_sample_size(k, eps, size_c),
        eps,
        delta,
    };
    if schedule.eps_product() > 1.0 + 10.0 * eps {
        return Err(Error::InternalConsistency(format!(
            "schedule eps product {} exceeds 1 + 10 eps",
            schedule.eps_product()
        )));
    }
    Ok(schedule)
}

/// Report of an iterative coreset build.
#[derive(Debug, Clone)]
pub struct IterativeBuild {
    pub coreset: WeightedCoreset,
    pub schedule: ReductionSchedule,
    /// Distinct-member count after every intermediate round.
    pub intermediate_sizes: Vec<usize>,
    pub pivot: ApproxSolution,
}

/// Chains the sensitivity sampler through the reduction schedule and a final
/// pass at (eps, delta). Intermediate coresets smaller than log^(i) n are
/// padded with fresh vertices at negligible weight, matching the schedule's
/// size floor.
pub fn iterative_coreset(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    k: usize,
    z: u32,
    eps: f64,
    delta: f64,
    seed: u64,
    size_c: f64,
) -> Result<IterativeBuild> {
    let schedule = reduction_schedule(clients.len(), k, z, eps, delta, size_c)?;
    let mut current: Vec<(usize, f64)> = clients.to_vec();
    let mut intermediate_sizes = Vec::new();
    let mut first_pivot: Option<ApproxSolution> = None;
    for (i, step) in schedule.steps.iter().enumerate() {
        let pivot = approx_solution(g, &current, k.min(current.len()), z, seed)?;
        let label_seed = seed.wrapping_add(1 + i as u64);
        let cs = sensitivity_coreset(g, &current, &pivot, k, z, step.target_size, label_seed)?;
        if first_pivot.is_none() {
            first_pivot = Some(pivot);
        }
        current = cs.members;
        // Pad up to the iterated-log floor with fresh vertices at negligible
        // weight (keeps weights strictly positive).
        let floor = step.iter_log.ceil().max(0.0) as usize;
        if current.len() < floor {
            let have: std::collections::HashSet<usize> =
                current.iter().map(|&(p, _)| p).collect();
            for v in 0..g.len() {
                if current.len() >= floor {
                    break;
                }
                if !have.contains(&v) {
                    current.push((v, 1e-300));
                }
            }
            current.sort_by_key(|&(p, _)| p);
        }
        intermediate_sizes.push(current.len());
    }
    let pivot = approx_solution(g, &current, k.min(current.len()), z, seed)?;
    let mut coreset = sensitivity_coreset(
        g,
        &current,
        &pivot,
        k,
        z,
        schedule.final_size,
        seed.wrapping_add(1000),
    )?;
    coreset.params.eps = eps;
    coreset.params.delta = delta;
    let first = first_pivot.unwrap_or_else(|| pivot.clone());
    Ok(IterativeBuild { coreset, schedule, intermediate_sizes, pivot: first })
}

/// One verification trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyTrial {
    pub trial: usize,
    pub true_cost: f64,
    pub coreset_cost: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_rel_err: f64,
    pub trials: Vec<VerifyTrial>,
}

/// Compares true and coreset costs on random center sets: even trials draw
/// uniform k-subsets of V, odd trials draw centers near the recorded pivot
/// (adversarial mixture). Trials whose true cost is infinite (center set
/// missing a client component) are redrawn a bounded number of times.
/// One APSP pass is shared across all trials.
pub fn verify_coreset(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    coreset: &WeightedCoreset,
    z: u32,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let tables = g.apsp();
    verify_coreset_with_tables(g, clients, coreset, z, trials, seed, &tables)
}

/// [`verify_coreset`] with caller-provided APSP tables (one per vertex).
pub fn verify_coreset_with_tables(
    g: &GraphInstance,
    clients: &[(usize, f64)],
    coreset: &WeightedCoreset,
    z: u32,
    trials: usize,
    seed: u64,
    tables: &[DistTable],
) -> Result<VerifyReport> {
    if trials < 1 {
        return Err(Error::InvalidParameter("verify_coreset needs trials >= 1".into()));
    }
    let n = g.len();
    if tables.len() != n {
        return Err(Error::InvalidParameter("need one distance table per vertex".into()));
    }
    let k = coreset.params.k.max(1);
    let pivot: Vec<usize> = coreset
        .params
        .pivot_centers
        .iter()
        .filter_map(|&id| g.points.index_of_id(id))
        .collect();
    // Ten nearest vertices per pivot center for the adversarial mixture.
    let near_pools: Vec<Vec<usize>> = pivot
        .iter()
        .map(|&c| {
            let t = &tables[c];
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| t.dist[a].total_cmp(&t.dist[b]).then(a.cmp(&b)));
            order.truncate(10.min(n));
            order
        })
        .collect();

    let eval = |centers: &[usize], pts: &[(usize, f64)]| -> f64 {
        pts.iter()
            .map(|&(p, w)| {
                let d = centers
                    .iter()
                    .map(|&c| tables[c].dist[p])
                    .fold(f64::INFINITY, f64::min);
                w * d.powi(z as i32)
            })
            .sum()
    };

    let mut rows = Vec::with_capacity(trials);
    let mut max_rel = 0.0f64;
    for trial in 0..trials {
        let mut rng = crate::rng::trial_stream(seed, "verify-coreset", trial as u64);
        let mut centers = Vec::new();
        for _attempt in 0..50 {
            centers.clear();
            let adversarial = trial % 2 == 1 && !near_pools.is_empty();
            while centers.len() < k.min(n) {
                let c = if adversarial {
                    let pool = &near_pools[rng.gen_range(0..near_pools.len())];
                    pool[rng.gen_range(0..pool.len())]
                } else {
                    rng.gen_range(0..n)
                };
                if !centers.contains(&c) {
                    centers.push(c);
                }
            }
            let true_cost = eval(&centers, clients);
            if !true_cost.is_finite() {
                continue;
            }
            let coreset_cost = eval(&centers, &coreset.members);
            let rel_err = if true_cost > 0.0 {
                (true_cost - coreset_cost).abs() / true_cost
            } else if coreset_cost.abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            max_rel = max_rel.max(rel_err);
            rows.push(VerifyTrial { trial, true_cost, coreset_cost, rel_err });
            break;
        }
    }
    Ok(VerifyReport { max_rel_err: max_rel, trials: rows })
}
