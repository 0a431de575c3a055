//! Build the three intersection-graph metrics over one point cloud and probe
//! their structure: adjacency counts, shortest paths with hop tracking, and
//! the bounded-distance constants.
//!
//! Run: cargo run --release --example build_graphs

use geocoreset::geometry::{NormKind, Point2D, PointSet};
use geocoreset::graphs::{
    bounded_distance_check, build_hop_udg, build_udg, build_usg, locally_euclidean_check,
};
use geocoreset::harness::{generate, Generator};

fn main() -> geocoreset::Result<()> {
    let (points, _) = generate(&Generator::UniformBox { side: 6.0 }, 100, 42)?;

    for (name, g) in [
        ("udg-l2", build_udg(points.clone(), NormKind::l2())?),
        ("usg-linf", build_usg(points.clone(), NormKind::linf())?),
        ("hop-udg", build_hop_udg(points.clone())?),
    ] {
        println!(
            "{name:9} edges = {:4}  max degree = {:2}  components = {}",
            g.edges().len(),
            g.max_degree(),
            g.components().len()
        );
        if name != "hop-udg" {
            locally_euclidean_check(&g)?;
            bounded_distance_check(&g, None)?;
            println!(
                "{name:9} c1' = {:.4}, c2' = {:.4} verified on all pairs",
                g.metric.c1_prime(),
                g.metric.c2_prime()
            );
        }
    }

    // A zigzag chain where the graph metric disagrees with the plane: the
    // chain steps are exactly sqrt2 long but every shortcut exceeds the disk
    // reach, so the graph distance is 3 sqrt2 while the straight-line gap is
    // only sqrt(13.52).
    let b = (2.0f64 - 1.44).sqrt();
    let zig = PointSet::new(vec![
        Point2D::new(0, 0.0, 0.0),
        Point2D::new(1, 1.2, b),
        Point2D::new(2, 2.4, 0.0),
        Point2D::new(3, 3.6, b),
    ])?;
    let g = build_udg(zig, NormKind::l2())?;
    let t = g.shortest_paths(0);
    println!(
        "zigzag: d_G = {:.6} (= 3 sqrt2), straight-line = {:.6}, hops = {}",
        t.dist[3],
        geocoreset::geometry::dist(g.points.get(0), g.points.get(3), NormKind::l2()),
        t.hops[3]
    );
    Ok(())
}
