//! (k,z)-clustering coresets on geometric intersection-graph metrics.
//!
//! The pipeline: build a unit-disk or unit-square intersection graph over a
//! planar point set ([`graphs`]), extract a constant-stretch planar spanner
//! ([`spanner`]), decompose the graph recursively along shortest-path
//! separators of the spanners ([`separator`], [`decomposition`]), construct a
//! centroid set with its solution-replacement rules ([`centroid`]), sample a
//! weighted coreset by sensitivity with iterative size reduction
//! ([`coreset`]), and cross-check everything against brute force on small
//! instances ([`solver`]). [`harness`] generates instances and runs
//! experiment matrices; the `geocoreset` binary exposes each stage as a
//! subcommand.
//!
//! Every run is reproducible: all randomness is ChaCha8 keyed by
//! `(seed, stream label)` (see [`rng`]).
//!
//! The runnable examples under `examples/` walk through each capability:
//!
//! ```text
//! cargo run --release --example build_graphs
//! cargo run --release --example spanners
//! cargo run --release --example decompose
//! cargo run --release --example centroid_sets
//! cargo run --release --example coreset_pipeline
//! cargo run --release --example fpt_solver
//! ```

pub mod centroid;
pub mod coreset;
pub mod decomposition;
pub mod error;
pub mod formats;
pub mod geometry;
pub mod graphs;
pub mod harness;
pub mod rng;
pub mod separator;
pub mod solver;
pub mod spanner;

pub use error::{Error, Result};
