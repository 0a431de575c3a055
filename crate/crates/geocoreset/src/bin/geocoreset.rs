//! Command-line front end: one subcommand per pipeline stage.

use clap::{Parser, Subcommand};
use geocoreset::centroid::{CentroidParams, CentroidPipeline};
use geocoreset::coreset::{
    approx_solution, iterative_coreset, verify_coreset, DESK_SIZE_C,
};
use geocoreset::decomposition::build_tree;
use geocoreset::error::{Error, Result};
use geocoreset::formats;
use geocoreset::graphs::{build_graph, GraphFamily, MetricKind};
use geocoreset::harness::{self, Generator};
use geocoreset::separator::{sp_separator, SeparatorOutcome};
use geocoreset::solver::{brute_force, fpt_cluster};
use geocoreset::spanner::{
    dump_spanner, planarity_check, spanner_for_metric, usg_per_edge_bound, verify_stretch,
};
use rand::Rng;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "geocoreset", about = "Clustering coresets on intersection-graph metrics")]
struct Cli {
    /// RNG seed shared by all stages.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Constants preset: paper | desk.
    #[arg(long, global = true, default_value = "desk")]
    preset: String,
    /// Output path (stage-specific format).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format where both apply: csv | json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set.
    Gen {
        #[arg(long, default_value_t = 120)]
        n: usize,
        /// uniform-box | gaussian-clusters | grid-jitter
        #[arg(long, default_value = "uniform-box")]
        generator: String,
        #[arg(long, default_value_t = 6.0)]
        side: f64,
        #[arg(long, default_value_t = 3)]
        clusters: usize,
        #[arg(long, default_value_t = 0.5)]
        spread: f64,
        #[arg(long, default_value_t = 0.2)]
        jitter: f64,
    },
    /// Build the intersection graph and dump it as JSON.
    Graph {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
    },
    /// Build the planar spanner; optionally verify stretch and planarity.
    Spanner {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long)]
        verify: bool,
    },
    /// Split the spanner with a shortest-path separator.
    Separator {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long, default_value_t = 0.3)]
        x_frac: f64,
    },
    /// Build the recursive decomposition tree.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long, default_value_t = 0.3)]
        x_frac: f64,
    },
    /// Build the centroid set and report sizes (and replacement errors).
    Centroid {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        /// Comma list: sizes,errors
        #[arg(long, default_value = "sizes")]
        report: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Sample a weighted coreset.
    Coreset {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Check a stored coreset against exact costs on random center sets.
    VerifyCoreset {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long)]
        coreset: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        z: u32,
    },
    /// Solve (k,z)-clustering by the FPT scheme or brute force.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "udg-l2")]
        metric: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        /// fpt | brute
        #[arg(long, default_value = "fpt")]
        method: String,
    },
    /// Run an experiment matrix from a key-value config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn centroid_params(preset: &str, eps: f64, z: u32) -> Result<CentroidParams> {
    match preset {
        "paper" => CentroidParams::paper(eps, z),
        "desk" => CentroidParams::desk(eps, z),
        other => Err(Error::InvalidParameter(format!("unknown preset '{other}'"))),
    }
}

fn marked_subset(n: usize, frac: f64, seed: u64) -> Vec<usize> {
    let count = ((n as f64 * frac).round() as usize).clamp(1, n);
    let mut rng = geocoreset::rng::stream(seed, "cli-marked");
    let mut all: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        all.swap(i, j);
    }
    all.truncate(count);
    all.sort_unstable();
    all
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen { n, generator, side, clusters, spread, jitter } => {
            let gen = Generator::parse(&generator, side, clusters, spread, jitter)?;
            let (points, planted) = harness::generate(&gen, n, cli.seed)?;
            let out = cli.out.unwrap_or_else(|| PathBuf::from("pts.csv"));
            if cli.format == "json" || out.extension().map_or(false, |e| e == "json") {
                formats::save_points_json(&points, &out)?;
            } else {
                formats::save_points_csv(&points, &out)?;
            }
            println!("wrote {} points to {}", points.len(), out.display());
            if !planted.is_empty() {
                println!("planted centers: {planted:?}");
            }
        }
        Command::Graph { input, metric } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            println!(
                "n = {}, edges = {}, max degree = {}, components = {}",
                g.len(),
                g.edges().len(),
                g.max_degree(),
                g.components().len()
            );
            let out = cli.out.unwrap_or_else(|| PathBuf::from("graph.json"));
            formats::save_json(&formats::dump_graph(&g), &out)?;
            println!("wrote {}", out.display());
        }
        Command::Spanner { input, metric, verify } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let h = spanner_for_metric(&g)?;
            println!("spanner edges = {}, declared stretch = {}", h.edges.len(), h.alpha);
            if verify {
                planarity_check(&g.points, &h)?;
                let ratio = verify_stretch(&g, &h)?;
                println!("measured stretch = {ratio:.6}");
                if g.metric.family == GraphFamily::UnitSquare && g.metric.weight_norm.is_inf() {
                    let slack = usg_per_edge_bound(&g, &h)?;
                    println!("per-edge 2D+delta slack = {slack:.3e}");
                }
                if ratio > h.alpha + 1e-9 {
                    return Err(Error::InternalConsistency(format!(
                        "stretch {ratio} beyond declared {}",
                        h.alpha
                    )));
                }
            }
            let out = cli.out.unwrap_or_else(|| PathBuf::from("spanner.json"));
            formats::save_json(&dump_spanner(&g, &h), &out)?;
            println!("wrote {}", out.display());
        }
        Command::Separator { input, metric, x_frac } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let comps = g.components();
            let big = comps.iter().max_by_key(|c| c.len()).unwrap().clone();
            let h = geocoreset::spanner::induced_spanner(&g, &big)?;
            let marked = marked_subset(g.len(), x_frac, cli.seed);
            let weights: Vec<f64> = h
                .vertices
                .iter()
                .map(|v| if marked.binary_search(v).is_ok() { 1.0 } else { 0.0 })
                .collect();
            match sp_separator(&h, &weights)? {
                SeparatorOutcome::Split(sep) => {
                    println!(
                        "paths = {}, balance = {:.4}, path lengths = {:?}",
                        sep.path_count,
                        sep.balance,
                        sep.paths.iter().map(Vec::len).collect::<Vec<_>>()
                    );
                    if let Some(out) = cli.out {
                        formats::save_json(
                            &sep.paths
                                .iter()
                                .map(|p| p.iter().map(|&v| g.id_of(v)).collect::<Vec<u64>>())
                                .collect::<Vec<_>>(),
                            &out,
                        )?;
                        println!("wrote {}", out.display());
                    }
                }
                SeparatorOutcome::TrivialRegion => println!("trivial region (weight < 3)"),
            }
        }
        Command::Decompose { input, metric, x_frac } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let marked = marked_subset(g.len(), x_frac, cli.seed);
            let tree = build_tree(&g, &marked)?;
            let dump = formats::dump_tree(&tree, g.len());
            println!(
                "regions = {}, depth = {}, leaves = {}",
                dump.regions.len(),
                dump.depth,
                tree.leaves().count()
            );
            let out = cli.out.unwrap_or_else(|| PathBuf::from("tree.json"));
            formats::save_json(&dump, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Centroid { input, metric, k, z, eps, report, trials } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
            let x: Vec<usize> = (0..g.len()).collect();
            let a = approx_solution(&g, &clients, k, z, cli.seed)?;
            let tree = build_tree(&g, &x)?;
            let params = centroid_params(&cli.preset, eps, z)?;
            let mut pipe = CentroidPipeline::new(&g, &tree, &x, &a.centers, params)?;
            let cset = pipe.build()?;
            let (n_net, n_sup, n_lm) = cset.sizes();
            println!(
                "centroid set: net = {n_net}, support = {n_sup}, landmark = {n_lm}, union = {}",
                cset.all().len()
            );
            // Monitoring only: the worst-case size shape is exponential in
            // log^2 |X| + z^16 eps^-8 log^8(z/eps) log |X|; report the
            // realized size against n for the record, never asserted.
            let xl = (g.len() as f64).ln();
            let shape = xl * xl
                + (z as f64).powi(16) * eps.powi(-8) * (z as f64 / eps).ln().powi(8) * xl;
            println!(
                "monitor: |C| = {} of n = {} (worst-case exponent shape {:.3e})",
                cset.all().len(),
                g.len(),
                shape
            );
            if report.split(',').any(|r| r.trim() == "errors") {
                let mut rng = geocoreset::rng::stream(cli.seed, "centroid-errors");
                let tol = eps / (z as f64 * (z as f64 / eps).ln());
                let bound = (10.0 * z as f64 / eps).powi(z as i32);
                let mut pairs = 0usize;
                let mut ok = 0usize;
                for _ in 0..trials {
                    let mut s = Vec::new();
                    while s.len() < k {
                        let c = rng.gen_range(0..g.len());
                        if !s.contains(&c) {
                            s.push(c);
                        }
                    }
                    let rep = pipe.replace(&cset, &s)?;
                    let st: Vec<_> = s.iter().map(|&c| g.shortest_paths(c)).collect();
                    let rt: Vec<_> =
                        rep.new_centers.iter().map(|&c| g.shortest_paths(c)).collect();
                    let at: Vec<_> = a.centers.iter().map(|&c| g.shortest_paths(c)).collect();
                    for &p in &x {
                        let cs = st.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
                        let cr = rt.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
                        let ca = at.iter().map(|t| t.dist[p]).fold(f64::INFINITY, f64::min);
                        let (cs, cr, ca) =
                            (cs.powi(z as i32), cr.powi(z as i32), ca.powi(z as i32));
                        if cs <= bound * ca || cr <= bound * ca {
                            pairs += 1;
                            if (cs - cr).abs() <= tol * (cs + ca) {
                                ok += 1;
                            }
                        }
                    }
                }
                println!(
                    "replacement error: {ok}/{pairs} pairs within eps/(z log(z/eps)) bound"
                );
            }
        }
        Command::Coreset { input, metric, k, z, eps, delta } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
            let build = iterative_coreset(&g, &clients, k, z, eps, delta, cli.seed, DESK_SIZE_C)?;
            println!(
                "coreset: {} members, total weight {:.3}, schedule t = {}, sizes = {:?}",
                build.coreset.len(),
                build.coreset.total_weight(),
                build.schedule.t,
                build.intermediate_sizes
            );
            let out = cli.out.unwrap_or_else(|| PathBuf::from("coreset.json"));
            formats::save_json(&formats::dump_coreset(&g, &build.coreset), &out)?;
            println!("wrote {}", out.display());
        }
        Command::VerifyCoreset { input, metric, coreset, trials, z } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let dump: formats::CoresetDump = formats::load_json(&coreset)?;
            let cs = formats::load_coreset(&g, &dump)?;
            let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
            let report = verify_coreset(&g, &clients, &cs, z, trials, cli.seed)?;
            println!("max relative error over {} trials: {:.6}", trials, report.max_rel_err);
            let out = cli.out.unwrap_or_else(|| PathBuf::from("verify.csv"));
            if cli.format == "json" {
                formats::save_json(&report, &out)?;
            } else {
                formats::write_verify_csv(&report, &out)?;
            }
            println!("wrote {}", out.display());
        }
        Command::Solve { input, metric, k, z, eps, method } => {
            let points = formats::load_points(&input)?;
            let g = build_graph(points, MetricKind::parse(&metric)?)?;
            let clients: Vec<(usize, f64)> = (0..g.len()).map(|p| (p, 1.0)).collect();
            let result = match method.as_str() {
                "fpt" => fpt_cluster(&g, &clients, k, z, eps, 0.1, cli.seed)?,
                "brute" => brute_force(&g, &clients, k, z)?,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown method '{other}'")))
                }
            };
            println!(
                "{}: centers = {:?}, cost = {:.6}, {:.1} ms",
                result.method, result.center_ids, result.cost, result.wall_ms
            );
            let out = cli.out.unwrap_or_else(|| PathBuf::from("result.json"));
            formats::save_json(&result, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Bench { config } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = harness::parse_config(&text)?;
            let report = harness::run_matrix(&[cfg]);
            let out = cli.out.unwrap_or_else(|| PathBuf::from("bench.csv"));
            if cli.format == "json" {
                formats::save_json(&report, &out)?;
            } else {
                std::fs::write(&out, report.to_csv())?;
                let timing = out.with_extension("timings.csv");
                std::fs::write(&timing, report.timings_csv())?;
                println!("wrote {} and {}", out.display(), timing.display());
            }
            println!("rows = {}, failures = {}", report.rows.len(), report.failures.len());
            for f in &report.failures {
                eprintln!("failure: {f}");
            }
            if !report.failures.is_empty() {
                return Ok(2);
            }
        }
    }
    Ok(0)
}
