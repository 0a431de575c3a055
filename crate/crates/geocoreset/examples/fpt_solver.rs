//! The coreset-partition approximation scheme against exhaustive search on a
//! desk-size instance.
//!
//! Run: cargo run --release --example fpt_solver

use geocoreset::geometry::NormKind;
use geocoreset::graphs::build_udg;
use geocoreset::harness::{generate, Generator};
use geocoreset::solver::{brute_force, fpt_cluster};

fn main() -> geocoreset::Result<()> {
    let (k, z, eps) = (2usize, 1u32, 0.3);
    for seed in 0..5u64 {
        let (points, _) = generate(&Generator::UniformBox { side: 4.5 }, 18, 60 + seed)?;
        let g = build_udg(points, NormKind::l2())?;
        if g.components().len() != 1 {
            continue;
        }
        let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
        let fpt = fpt_cluster(&g, &clients, k, z, eps, 0.1, seed)?;
        let opt = brute_force(&g, &clients, k, z)?;
        println!(
            "seed {seed}: fpt {:.4} vs opt {:.4} (ratio {:.4}), {} partitions in {:.1} ms",
            fpt.cost,
            opt.cost,
            if opt.cost > 0.0 { fpt.cost / opt.cost } else { 1.0 },
            fpt.partitions_visited,
            fpt.wall_ms
        );
    }
    Ok(())
}
