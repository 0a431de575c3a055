//! Instance generation and experiment orchestration.
//!
//! Generators are deterministic in `(config, seed)`; the experiment matrix
//! runs one row per (config, seed, trial) cell, isolating per-cell failures,
//! and reports coreset size, verification error, spanner stretch and
//! decomposition depth alongside stage runtimes.

use crate::coreset::{iterative_coreset, verify_coreset, DESK_SIZE_C};
use crate::decomposition::build_tree;
use crate::error::{Error, Result};
use crate::geometry::{Point2D, PointSet};
use crate::graphs::{build_graph, GraphFamily, MetricKind};
use crate::spanner::{planarity_check, spanner_for_metric, verify_stretch};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Point-cloud generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    /// n uniform points in a side x side box.
    UniformBox { side: f64 },
    /// `count` planted centers uniform in the box, points assigned round-robin
    /// with isotropic gaussian offsets of the given spread.
    GaussianClusters { count: usize, spread: f64, side: f64 },
    /// Square grid scaled to the box with uniform jitter per node; the first
    /// node sits at the origin before jitter.
    GridJitter { side: f64, jitter: f64 },
}

impl Generator {
    pub fn parse(name: &str, side: f64, clusters: usize, spread: f64, jitter: f64) -> Result<Self> {
        match name {
            "uniform-box" => Ok(Generator::UniformBox { side }),
            "gaussian-clusters" => {
                Ok(Generator::GaussianClusters { count: clusters, spread, side })
            }
            "grid-jitter" => Ok(Generator::GridJitter { side, jitter }),
            other => Err(Error::InvalidParameter(format!("unknown generator '{other}'"))),
        }
    }
}

/// Standard normal via Box-Muller (two uniforms per pair of normals).
fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let a = 2.0 * std::f64::consts::PI * u2;
    (r * a.cos(), r * a.sin())
}

/// Deterministic point-set generation; planted centers (if any) come back too.
pub fn generate(gen: &Generator, n: usize, seed: u64) -> Result<(PointSet, Vec<(f64, f64)>)> {
    if n < 1 {
        return Err(Error::InvalidParameter("generate needs n >= 1".into()));
    }
    let mut rng = crate::rng::stream(seed, "generate");
    let mut planted = Vec::new();
    let points = match *gen {
        Generator::UniformBox { side } => (0..n)
            .map(|i| {
                Point2D::new(i as u64, rng.gen_range(0.0..side), rng.gen_range(0.0..side))
            })
            .collect(),
        Generator::GaussianClusters { count, spread, side } => {
            if count < 1 {
                return Err(Error::InvalidParameter("gaussian-clusters needs count >= 1".into()));
            }
            planted = (0..count)
                .map(|_| (rng.gen_range(0.0..side), rng.gen_range(0.0..side)))
                .collect::<Vec<_>>();
            (0..n)
                .map(|i| {
                    let (cx, cy) = planted[i % count];
                    let (gx, gy) = normal_pair(&mut rng);
                    Point2D::new(i as u64, cx + spread * gx, cy + spread * gy)
                })
                .collect()
        }
        Generator::GridJitter { side, jitter } => {
            let cols = (n as f64).sqrt().ceil() as usize;
            let step = if cols > 1 { side / (cols - 1) as f64 } else { side };
            (0..n)
                .map(|i| {
                    let (r, c) = (i / cols, i % cols);
                    Point2D::new(
                        i as u64,
                        c as f64 * step + rng.gen_range(0.0..jitter),
                        r as f64 * step + rng.gen_range(0.0..jitter),
                    )
                })
                .collect()
        }
    };
    Ok((PointSet::new(points)?, planted))
}

/// One experiment configuration (plain key-value file format; see
/// [`parse_config`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub generator: Generator,
    pub n: usize,
    pub metric: String,
    pub k: usize,
    pub z: u32,
    pub eps: f64,
    pub delta: f64,
    pub seeds: Vec<u64>,
    pub trials: usize,
    pub preset: String,
    /// Fraction of vertices marked for the decomposition stage.
    pub x_frac: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "default".into(),
            generator: Generator::UniformBox { side: 6.0 },
            n: 120,
            metric: "udg-l2".into(),
            k: 3,
            z: 1,
            eps: 0.3,
            delta: 0.1,
            seeds: vec![1],
            trials: 20,
            preset: "desk".into(),
            x_frac: 0.3,
        }
    }
}

/// Parses the plain `key = value` config format. Unknown keys error with the
/// key name; `seeds` takes a comma list.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut side = 6.0;
    let mut clusters = 3usize;
    let mut spread = 0.5;
    let mut jitter = 0.2;
    let mut gen_name = "uniform-box".to_string();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |k: &str| Error::Format(format!("line {}: bad value for {k}", lineno + 1));
        match key {
            "name" => cfg.name = value.to_string(),
            "generator" => gen_name = value.to_string(),
            "side" => side = value.parse().map_err(|_| bad("side"))?,
            "clusters" => clusters = value.parse().map_err(|_| bad("clusters"))?,
            "spread" => spread = value.parse().map_err(|_| bad("spread"))?,
            "jitter" => jitter = value.parse().map_err(|_| bad("jitter"))?,
            "n" => cfg.n = value.parse().map_err(|_| bad("n"))?,
            "metric" => cfg.metric = value.to_string(),
            "k" => cfg.k = value.parse().map_err(|_| bad("k"))?,
            "z" => cfg.z = value.parse().map_err(|_| bad("z"))?,
            "eps" => cfg.eps = value.parse().map_err(|_| bad("eps"))?,
            "delta" => cfg.delta = value.parse().map_err(|_| bad("delta"))?,
            "trials" => cfg.trials = value.parse().map_err(|_| bad("trials"))?,
            "preset" => cfg.preset = value.to_string(),
            "x_frac" => cfg.x_frac = value.parse().map_err(|_| bad("x_frac"))?,
            "seeds" => {
                cfg.seeds = value
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| bad("seeds")))
                    .collect::<Result<Vec<u64>>>()?;
            }
            other => {
                return Err(Error::Format(format!("line {}: unknown key '{other}'", lineno + 1)))
            }
        }
    }
    cfg.generator = Generator::parse(&gen_name, side, clusters, spread, jitter)?;
    MetricKind::parse(&cfg.metric)?;
    Ok(cfg)
}

/// One matrix cell result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRow {
    pub config: String,
    pub seed: u64,
    pub trial: usize,
    pub n: usize,
    pub metric: String,
    pub k: usize,
    pub z: u32,
    pub eps: f64,
    pub coreset_size: usize,
    pub verify_max_rel_err: f64,
    pub spanner_stretch: f64,
    pub decomp_depth: i64,
    pub gen_ms: f64,
    pub spanner_ms: f64,
    pub decomp_ms: f64,
    pub coreset_ms: f64,
    pub verify_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixReport {
    pub rows: Vec<MatrixRow>,
    pub failures: Vec<String>,
}

impl MatrixReport {
    /// Deterministic result columns: byte-identical for identical
    /// (config, seeds). Wall times live in [`MatrixReport::timings_csv`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "config,seed,trial,n,metric,k,z,eps,coreset_size,verify_max_rel_err,\
             spanner_stretch,decomp_depth\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.config,
                r.seed,
                r.trial,
                r.n,
                r.metric,
                r.k,
                r.z,
                r.eps,
                r.coreset_size,
                r.verify_max_rel_err,
                r.spanner_stretch,
                r.decomp_depth
            ));
        }
        out
    }

    /// Per-cell stage runtimes (inherently run-dependent).
    pub fn timings_csv(&self) -> String {
        let mut out =
            String::from("config,seed,gen_ms,spanner_ms,decomp_ms,coreset_ms,verify_ms\n");
        let mut seen = std::collections::HashSet::new();
        for r in &self.rows {
            if seen.insert((r.config.clone(), r.seed)) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.config, r.seed, r.gen_ms, r.spanner_ms, r.decomp_ms, r.coreset_ms,
                    r.verify_ms
                ));
            }
        }
        out
    }
}

/// Runs the matrix: per (config, seed) build everything once, then one
/// verification row per trial. Hard-invariant violations (stretch beyond the
/// declared constant, unbalanced separators, build errors) land in
/// `failures`; per-cell failures do not abort other cells.
pub fn run_matrix(configs: &[ExperimentConfig]) -> MatrixReport {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for cfg in configs {
        for &seed in &cfg.seeds {
            if let Err(e) = run_cell(cfg, seed, &mut rows) {
                failures.push(format!("{}/seed{}: {e}", cfg.name, seed));
            }
        }
    }
    MatrixReport { rows, failures }
}

fn run_cell(cfg: &ExperimentConfig, seed: u64, rows: &mut Vec<MatrixRow>) -> Result<()> {
    let metric = MetricKind::parse(&cfg.metric)?;
    let t0 = Instant::now();
    let (points, _) = generate(&cfg.generator, cfg.n, seed)?;
    let g = build_graph(points, metric)?;
    let gen_ms = t0.elapsed().as_secs_f64() * 1e3;

    let (stretch, spanner_ms) = if metric.family == GraphFamily::HopUnitDisk {
        (f64::NAN, 0.0)
    } else {
        let t = Instant::now();
        let h = spanner_for_metric(&g)?;
        planarity_check(&g.points, &h)?;
        let stretch = verify_stretch(&g, &h)?;
        if stretch > h.alpha + 1e-9 {
            return Err(Error::InternalConsistency(format!(
                "stretch {stretch} beyond declared {}",
                h.alpha
            )));
        }
        (stretch, t.elapsed().as_secs_f64() * 1e3)
    };

    let (depth, decomp_ms) = if metric.family == GraphFamily::HopUnitDisk {
        (-1i64, 0.0)
    } else {
        let t = Instant::now();
        let x_count = ((cfg.n as f64 * cfg.x_frac).round() as usize).max(1);
        let mut rng = crate::rng::stream(seed, "matrix-marked");
        let mut all: Vec<usize> = (0..g.len()).collect();
        for i in (1..all.len()).rev() {
            let j = rng.gen_range(0..=i);
            all.swap(i, j);
        }
        all.truncate(x_count);
        let tree = build_tree(&g, &all)?;
        (tree.depth as i64, t.elapsed().as_secs_f64() * 1e3)
    };

    let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
    let t = Instant::now();
    let build =
        iterative_coreset(&g, &clients, cfg.k, cfg.z, cfg.eps, cfg.delta, seed, DESK_SIZE_C)?;
    let coreset_ms = t.elapsed().as_secs_f64() * 1e3;
    if build.coreset.members.iter().any(|&(_, w)| w <= 0.0) {
        return Err(Error::InternalConsistency("nonpositive coreset weight".into()));
    }

    let t = Instant::now();
    let report = verify_coreset(&g, &clients, &build.coreset, cfg.z, cfg.trials, seed)?;
    let verify_ms = t.elapsed().as_secs_f64() * 1e3;

    for trial in &report.trials {
        rows.push(MatrixRow {
            config: cfg.name.clone(),
            seed,
            trial: trial.trial,
            n: cfg.n,
            metric: cfg.metric.clone(),
            k: cfg.k,
            z: cfg.z,
            eps: cfg.eps,
            coreset_size: build.coreset.len(),
            verify_max_rel_err: trial.rel_err,
            spanner_stretch: stretch,
            decomp_depth: depth,
            gen_ms,
            spanner_ms,
            decomp_ms,
            coreset_ms,
            verify_ms,
        });
    }
    Ok(())
}
