//! Construct planar spanners for every supported metric and verify their
//! declared stretch with the exact all-pairs oracle.
//!
//! Run: cargo run --release --example spanners

use geocoreset::geometry::NormKind;
use geocoreset::graphs::{build_udg, build_usg};
use geocoreset::harness::{generate, Generator};
use geocoreset::spanner::{
    lp_spanner, planarity_check, udg_spanner, usg_per_edge_bound, usg_spanner, verify_stretch,
};

fn main() -> geocoreset::Result<()> {
    let (points, _) = generate(&Generator::UniformBox { side: 6.0 }, 120, 7)?;

    let gd = build_udg(points.clone(), NormKind::l2())?;
    let hd = udg_spanner(&gd)?;
    planarity_check(&gd.points, &hd)?;
    println!(
        "udg-l2   : {:3} of {:4} edges kept, stretch {:.4} (declared 2.42)",
        hd.edges.len(),
        gd.edges().len(),
        verify_stretch(&gd, &hd)?
    );

    let gu = build_usg(points.clone(), NormKind::linf())?;
    let hu = usg_spanner(&gu)?;
    planarity_check(&gu.points, &hu)?;
    println!(
        "usg-linf : {:3} of {:4} edges kept, stretch {:.4} (declared 3.00), per-edge slack {:.3e}",
        hu.edges.len(),
        gu.edges().len(),
        verify_stretch(&gu, &hu)?,
        usg_per_edge_bound(&gu, &hu)?
    );

    // Other norms reuse the family base spanner with a sqrt2 reweighting.
    for (name, norm, declared) in [
        ("udg-l1  ", NormKind::l1(), 3.42),
        ("udg-linf", NormKind::linf(), 4.84),
    ] {
        let g = build_udg(points.clone(), norm)?;
        let h = lp_spanner(&g, &hd)?;
        println!(
            "{name} : reweighted base, stretch {:.4} (declared {declared})",
            verify_stretch(&g, &h)?
        );
    }
    Ok(())
}
