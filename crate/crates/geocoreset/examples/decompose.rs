//! Shortest-path separators and the recursive decomposition tree: split one
//! spanner by hand, then build the full tree and inspect its shape.
//!
//! Run: cargo run --release --example decompose

use geocoreset::decomposition::{build_tree, separating_vertex, Separation};
use geocoreset::geometry::NormKind;
use geocoreset::graphs::build_udg;
use geocoreset::harness::{generate, Generator};
use geocoreset::separator::{sp_separator, SeparatorOutcome};
use geocoreset::spanner::spanner_for_metric;

fn main() -> geocoreset::Result<()> {
    let (points, _) = generate(&Generator::UniformBox { side: 6.0 }, 100, 3)?;
    let g = build_udg(points, NormKind::l2())?;

    // One separator split of the full spanner, weighting every vertex.
    let h = spanner_for_metric(&g)?;
    match sp_separator(&h, &vec![1.0; g.len()])? {
        SeparatorOutcome::Split(sep) => println!(
            "single split: {} path(s) of sizes {:?}, balance {:.3}",
            sep.path_count,
            sep.paths.iter().map(Vec::len).collect::<Vec<_>>(),
            sep.balance
        ),
        SeparatorOutcome::TrivialRegion => println!("trivial region"),
    }

    // The recursive tree over a marked subset.
    let marked: Vec<usize> = (0..g.len()).step_by(3).collect();
    let tree = build_tree(&g, &marked)?;
    println!(
        "tree: {} regions, depth {} (bound {:.1}), {} leaves",
        tree.regions.len(),
        tree.depth,
        4.0 * (marked.len() as f64).log2() + 2.0,
        tree.leaves().count()
    );

    // Locate the separator structure between two far-apart vertices.
    let (p, s) = (0usize, g.len() - 1);
    match separating_vertex(&tree, &g, p, s)? {
        Separation::SameLeaf { region } => println!("{p} and {s} share leaf region {region}"),
        Separation::Separated(info) => println!(
            "{p} and {s} separated in region {} by path {} at vertex {} (boundary pair {}-{})",
            info.region, info.path_idx, info.x, info.u, info.v
        ),
    }
    Ok(())
}
