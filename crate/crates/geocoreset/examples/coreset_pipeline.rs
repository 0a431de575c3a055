//! The full coreset pipeline: seed solution, size-reduction schedule,
//! sensitivity sampling, and exact verification against random center sets.
//!
//! Run: cargo run --release --example coreset_pipeline

use geocoreset::coreset::{
    approx_solution, iterative_coreset, reduction_schedule, verify_coreset, DESK_SIZE_C,
};
use geocoreset::geometry::NormKind;
use geocoreset::graphs::build_udg;
use geocoreset::harness::{generate, Generator};

fn main() -> geocoreset::Result<()> {
    let (k, z, eps, delta, seed) = (3usize, 2u32, 0.2, 0.1, 5u64);
    let (points, _) = generate(&Generator::GaussianClusters { count: 3, spread: 0.6, side: 6.0 }, 300, seed)?;
    let g = build_udg(points, NormKind::l2())?;
    let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();

    let pivot = approx_solution(&g, &clients, k, z, seed)?;
    println!("seed solution cost: {:.3}", pivot.cost);

    let schedule = reduction_schedule(clients.len(), k, z, eps, delta, DESK_SIZE_C)?;
    println!(
        "schedule: t = {}, rho = {}, final sample size = {}, eps product = {:.4}",
        schedule.t,
        schedule.rho,
        schedule.final_size,
        schedule.eps_product()
    );

    let build = iterative_coreset(&g, &clients, k, z, eps, delta, seed, DESK_SIZE_C)?;
    println!(
        "coreset: {} distinct members (total weight {:.1}) from {} draws",
        build.coreset.len(),
        build.coreset.total_weight(),
        build.coreset.params.sample_size
    );

    let report = verify_coreset(&g, &clients, &build.coreset, z, 200, seed)?;
    println!("verification over 200 center sets: max relative error {:.4}", report.max_rel_err);
    Ok(())
}
