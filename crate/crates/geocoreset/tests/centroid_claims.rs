//! Per-rule error bounds of the replacement map, checked empirically with
//! each claim's own hypothesis:
//!
//! * net rule: |d(p, s~) - d(p, s)| <= (eps/z)(d(p, s) + d(p, A)) for points
//!   of the replaced center's cluster passing the relevance filter;
//! * reuse/support rules: d(p, S~) <= d(p, s) + 8 (eps/z) d(p, A) when every
//!   client of s is expensive;
//! * landmark rule, both directions of the dichotomy: either the distance
//!   exceeds (gamma z / eps) d(p, A) or it is preserved within
//!   (1 + eps/z) d + (eps/z) d(p, A);
//! * reverse direction: for points near the replaced solution, the original
//!   solution is within (1 + 8 eps/z) d(p, S~) + 8 (eps/z) d(p, A).

use geocoreset::centroid::{CentroidParams, CentroidPipeline, Preset, ReplacementRule};
use geocoreset::coreset::approx_solution;
use geocoreset::decomposition::build_tree;
use geocoreset::geometry::{NormKind, Point2D, PointSet};
use geocoreset::graphs::{build_udg, DistTable, GraphInstance};
use geocoreset::harness::{generate, Generator};
use rand::Rng;

fn connected(seed: u64, n: usize, side: f64) -> GraphInstance {
    for sub in 0..50 {
        let (pts, _) =
            generate(&Generator::UniformBox { side }, n, seed.wrapping_add(sub * 7919)).unwrap();
        let g = build_udg(pts, NormKind::l2()).unwrap();
        if g.components().len() == 1 {
            return g;
        }
    }
    panic!("no connected instance");
}

fn snake(n: usize) -> GraphInstance {
    let b = (2.0f64 - 1.44).sqrt();
    let pts = PointSet::new(
        (0..n)
            .map(|i| Point2D::new(i as u64, 1.2 * i as f64, if i % 2 == 0 { 0.0 } else { b }))
            .collect(),
    )
    .unwrap();
    build_udg(pts, NormKind::l2()).unwrap()
}

fn min_dist(p: usize, centers: &[usize], tables: &[DistTable]) -> f64 {
    centers.iter().map(|&c| tables[c].dist[p]).fold(f64::INFINITY, f64::min)
}

#[test]
fn forward_and_reverse_rule_bounds() {
    let (eps, z, k) = (0.3f64, 1u32, 3usize);
    let g = connected(700, 120, 6.0);
    let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
    let x: Vec<usize> = (0..g.len()).collect();
    let a = approx_solution(&g, &clients, k, z, 17).unwrap();
    let tree = build_tree(&g, &x).unwrap();
    let params = CentroidParams::desk(eps, z).unwrap();
    let mut pipe = CentroidPipeline::new(&g, &tree, &x, &a.centers, params).unwrap();
    let cset = pipe.build().unwrap();

    let tables = g.apsp();
    let d_a: Vec<f64> = (0..g.len()).map(|p| min_dist(p, &a.centers, &tables)).collect();
    let relevance = 10.0 * z as f64 / eps;
    let ez = eps / z as f64;

    let mut rng = geocoreset::rng::stream(700, "claims");
    let mut net_checked = 0usize;
    let mut other_checked = 0usize;
    let mut reverse_checked = 0usize;
    for _ in 0..40 {
        let mut s = Vec::new();
        while s.len() < k {
            let c = rng.gen_range(0..g.len());
            if !s.contains(&c) {
                s.push(c);
            }
        }
        let rep = pipe.replace(&cset, &s).unwrap();
        // Forward: per client, the rule of its own nearest center.
        for p in 0..g.len() {
            let (ci, d_ps) = rep
                .originals
                .iter()
                .enumerate()
                .map(|(ci, &c)| (ci, tables[c].dist[p]))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if d_ps > relevance * d_a[p] {
                continue;
            }
            let d_rep = min_dist(p, &rep.new_centers, &tables);
            match rep.rules[ci] {
                ReplacementRule::Net => {
                    let tilde = rep.replaced[ci];
                    let diff = (tables[tilde].dist[p] - d_ps).abs();
                    assert!(
                        diff <= ez * (d_ps + d_a[p]) + 1e-9,
                        "net rule: |diff| = {diff} over allowance"
                    );
                    net_checked += 1;
                }
                ReplacementRule::NetSub | ReplacementRule::Support => {
                    // The claim presumes all of the center's clients are
                    // expensive; skip the exceptional gated cases.
                    let s_orig = rep.originals[ci];
                    let cluster_expensive = (0..g.len())
                        .filter(|&q| {
                            let nearest = rep
                                .originals
                                .iter()
                                .map(|&c| tables[c].dist[q])
                                .fold(f64::INFINITY, f64::min);
                            tables[s_orig].dist[q] <= nearest + 1e-12
                        })
                        .all(|q| d_a[q] >= 1.0);
                    if cluster_expensive {
                        assert!(
                            d_rep <= d_ps + 8.0 * ez * d_a[p] + 1e-9,
                            "support/reuse rule: d_rep = {d_rep} over d_ps + 8(eps/z) d_A"
                        );
                        other_checked += 1;
                    }
                }
                ReplacementRule::Landmark => {}
            }
        }
        // Reverse: points near the replaced solution.
        for p in 0..g.len() {
            let d_rep = min_dist(p, &rep.new_centers, &tables);
            if d_rep > relevance * d_a[p] {
                continue;
            }
            let d_s = min_dist(p, &rep.originals, &tables);
            assert!(
                d_s <= (1.0 + 8.0 * ez) * d_rep + 8.0 * ez * d_a[p] + 1e-9,
                "reverse: d_S = {d_s} over (1+8eps/z) d_rep + 8(eps/z) d_A = {}",
                (1.0 + 8.0 * ez) * d_rep + 8.0 * ez * d_a[p]
            );
            reverse_checked += 1;
        }
    }
    assert!(net_checked > 0, "net rule never exercised");
    assert!(other_checked > 0, "support rule never exercised");
    assert!(reverse_checked > 0, "reverse direction never exercised");
}

#[test]
fn landmark_dichotomy_both_directions() {
    let g = snake(130);
    let clients: Vec<(usize, f64)> = (0..24).map(|p| (p, 1.0)).collect();
    let x: Vec<usize> = (0..24).collect();
    let a = approx_solution(&g, &clients, 2, 1, 5).unwrap();
    let tree = build_tree(&g, &x).unwrap();
    let (eps, z) = (0.5f64, 1u32);
    let params = CentroidParams::custom(eps, z, Preset::Desk, 1.0, 2.0).unwrap();
    let mut pipe = CentroidPipeline::new(&g, &tree, &x, &a.centers, params).unwrap();
    let cset = pipe.build().unwrap();
    let tables = g.apsp();
    let d_a: Vec<f64> = (0..g.len()).map(|p| min_dist(p, &a.centers, &tables)).collect();
    let gamma = params.gamma_landmark;
    let ez = eps / z as f64;
    let threshold = gamma * z as f64 / eps;

    let mut rng = geocoreset::rng::stream(5, "dichotomy");
    let mut landmark_count = 0usize;
    for _ in 0..30 {
        let mut s = vec![rng.gen_range(60..g.len())];
        while s.len() < 3 {
            let c = rng.gen_range(0..g.len());
            if !s.contains(&c) {
                s.push(c);
            }
        }
        let rep = pipe.replace(&cset, &s).unwrap();
        for (ci, &rule) in rep.rules.iter().enumerate() {
            if rule != ReplacementRule::Landmark {
                continue;
            }
            landmark_count += 1;
            let orig = rep.originals[ci];
            let tilde = rep.replaced[ci];
            for &p in &x {
                let d_ps = tables[orig].dist[p];
                let d_pt = tables[tilde].dist[p];
                // Forward branch of the dichotomy.
                assert!(
                    d_ps >= threshold * d_a[p] - 1e-9
                        || d_pt <= (1.0 + ez) * d_ps + ez * d_a[p] + 1e-9,
                    "forward dichotomy broken at p = {p}"
                );
                // Reverse branch.
                assert!(
                    d_pt >= threshold * d_a[p] - 1e-9
                        || d_ps <= (1.0 + ez) * d_pt + ez * d_a[p] + 1e-9,
                    "reverse dichotomy broken at p = {p}"
                );
            }
        }
    }
    assert!(landmark_count > 0, "landmark rule never exercised");
}

/// Covering property of the landmark sets: every path vertex within
/// D/mu^2 of q1 has a landmark within mu^2 D along the path, and the set
/// size respects the subpath-length bound.
#[test]
fn landmark_sets_cover_their_paths() {
    let g = snake(120);
    let x: Vec<usize> = (0..g.len()).step_by(6).collect();
    let a = vec![0usize, 60];
    let tree = build_tree(&g, &x).unwrap();
    let params = CentroidParams::custom(0.5, 1, Preset::Desk, 1.0, 2.0).unwrap();
    let mut pipe = CentroidPipeline::new(&g, &tree, &x, &a, params).unwrap();

    let mut checked = 0usize;
    let split_regions: Vec<usize> = tree
        .regions
        .iter()
        .filter(|r| r.separator.is_some())
        .map(|r| r.id)
        .collect();
    for rid in split_regions {
        let region = tree.region(rid);
        let n_paths = region.separator.as_ref().unwrap().paths.len();
        let qs: Vec<usize> =
            x.iter().copied().filter(|&v| region.contains(v)).take(3).collect();
        for j in 0..n_paths {
            for &q1 in &qs {
                for &q2 in region.vertices.iter().step_by(17) {
                    let Ok(info) = pipe.landmark_set(rid, j, q1, q2) else { continue };
                    if info.step <= 0.0 || !info.big_d.is_finite() {
                        continue;
                    }
                    assert!(
                        info.landmarks.len() <= info.size_bound,
                        "landmark set of {} over bound {}",
                        info.landmarks.len(),
                        info.size_bound
                    );
                    // Along-path positions from the region spanner weights.
                    let h = region.spanner.as_ref().unwrap();
                    let mut pos = vec![0.0f64; info.path.len()];
                    for i in 1..info.path.len() {
                        let w = h
                            .edges
                            .iter()
                            .find(|&&(a, b, _)| {
                                (a == info.path[i - 1] && b == info.path[i])
                                    || (a == info.path[i] && b == info.path[i - 1])
                            })
                            .map(|&(_, _, w)| w)
                            .unwrap();
                        pos[i] = pos[i - 1] + w;
                    }
                    let pos_of = |v: usize| {
                        info.path.iter().position(|&p| p == v).map(|i| pos[i]).unwrap()
                    };
                    for &ex in &info.eligible {
                        let px = pos_of(ex);
                        let covered = info
                            .landmarks
                            .iter()
                            .any(|&l| (pos_of(l) - px).abs() <= info.step + 1e-9);
                        assert!(covered, "eligible vertex {ex} uncovered");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10, "covering property exercised only {checked} times");
}
