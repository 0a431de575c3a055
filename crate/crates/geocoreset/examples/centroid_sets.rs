//! Build the centroid set (net + support + landmark candidates) and replace
//! random solutions through it, measuring the per-point cost drift.
//!
//! Run: cargo run --release --example centroid_sets

use geocoreset::centroid::{CentroidParams, CentroidPipeline, ReplacementRule};
use geocoreset::coreset::approx_solution;
use geocoreset::decomposition::build_tree;
use geocoreset::geometry::NormKind;
use geocoreset::graphs::build_udg;
use geocoreset::harness::{generate, Generator};
use rand::Rng;

fn main() -> geocoreset::Result<()> {
    let (eps, z, k) = (0.3, 1u32, 3usize);
    let (points, _) = generate(&Generator::UniformBox { side: 6.0 }, 120, 19)?;
    let g = build_udg(points, NormKind::l2())?;
    let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
    let x: Vec<usize> = (0..g.len()).collect();

    let pivot = approx_solution(&g, &clients, k, z, 19)?;
    println!("pivot solution: centers {:?}, cost {:.3}", pivot.centers, pivot.cost);

    let tree = build_tree(&g, &x)?;
    let params = CentroidParams::desk(eps, z)?;
    let mut pipe = CentroidPipeline::new(&g, &tree, &x, &pivot.centers, params)?;
    let cset = pipe.build()?;
    let (net, support, landmark) = cset.sizes();
    println!(
        "centroid set: net {net}, support {support}, landmark {landmark}, union {}",
        cset.all().len()
    );

    let mut rng = geocoreset::rng::stream(19, "example");
    let mut counts = [0usize; 4];
    let mut worst_drift: f64 = 0.0;
    for _ in 0..20 {
        let mut s = Vec::new();
        while s.len() < k {
            let c = rng.gen_range(0..g.len());
            if !s.contains(&c) {
                s.push(c);
            }
        }
        let rep = pipe.replace(&cset, &s)?;
        for &rule in &rep.rules {
            counts[match rule {
                ReplacementRule::Net => 0,
                ReplacementRule::NetSub => 1,
                ReplacementRule::Support => 2,
                ReplacementRule::Landmark => 3,
            }] += 1;
        }
        let before = g.cost(&clients, &rep.originals, z)?;
        let after = g.cost(&clients, &rep.new_centers, z)?;
        if before > 0.0 {
            worst_drift = worst_drift.max((before - after).abs() / before);
        }
    }
    println!(
        "rules over 20 solutions: net {}, net-sub {}, support {}, landmark {}",
        counts[0], counts[1], counts[2], counts[3]
    );
    println!("worst total-cost drift after replacement: {:.4}", worst_drift);
    Ok(())
}
