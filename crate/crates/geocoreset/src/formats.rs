//! File formats: point sets (CSV or JSON), graph and spanner dumps, coreset
//! and result JSON, and the verification CSV. Every format round-trips
//! through its own loader.

use crate::coreset::{CoresetParams, VerifyReport, WeightedCoreset};
use crate::error::{Error, Result};
use crate::geometry::{Point2D, PointSet};
use crate::graphs::GraphInstance;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct PointRow {
    id: u64,
    x: f64,
    y: f64,
}

/// Reads a point set from CSV (`id,x,y` header) or a JSON array of
/// `{id, x, y}` objects, chosen by extension (.json) with CSV the default.
pub fn load_points(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().map_or(false, |e| e == "json") {
        let rows: Vec<PointRow> =
            serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
        return PointSet::new(rows.into_iter().map(|r| Point2D::new(r.id, r.x, r.y)).collect());
    }
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.starts_with("id") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("line {}: expected id,x,y", lineno + 1)));
        }
        let id: u64 = fields[0]
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad id", lineno + 1)))?;
        let x: f64 = fields[1]
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad x", lineno + 1)))?;
        let y: f64 = fields[2]
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad y", lineno + 1)))?;
        points.push(Point2D::new(id, x, y));
    }
    PointSet::new(points)
}

pub fn save_points_csv(points: &PointSet, path: &Path) -> Result<()> {
    let mut out = String::from("id,x,y\n");
    for p in points.iter() {
        out.push_str(&format!("{},{},{}\n", p.id, p.x, p.y));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn save_points_json(points: &PointSet, path: &Path) -> Result<()> {
    let rows: Vec<PointRow> =
        points.iter().map(|p| PointRow { id: p.id, x: p.x, y: p.y }).collect();
    let text = serde_json::to_string_pretty(&rows).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Graph dump: `{n, metric, edges: [[u, v, w], …]}` with ids for u, v.
#[derive(Serialize, Deserialize)]
pub struct GraphDump {
    pub n: usize,
    pub metric: String,
    pub edges: Vec<(u64, u64, f64)>,
}

pub fn dump_graph(g: &GraphInstance) -> GraphDump {
    GraphDump {
        n: g.len(),
        metric: g.metric.name(),
        edges: g.edges().iter().map(|&(u, v, w)| (g.id_of(u), g.id_of(v), w)).collect(),
    }
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))
}

/// Coreset dump: `{members: [{id, weight}], params}`.
#[derive(Serialize, Deserialize)]
pub struct CoresetDump {
    pub members: Vec<CoresetMember>,
    pub params: CoresetParams,
}

#[derive(Serialize, Deserialize)]
pub struct CoresetMember {
    pub id: u64,
    pub weight: f64,
}

pub fn dump_coreset(g: &GraphInstance, cs: &WeightedCoreset) -> CoresetDump {
    CoresetDump {
        members: cs
            .members
            .iter()
            .map(|&(p, w)| CoresetMember { id: g.id_of(p), weight: w })
            .collect(),
        params: cs.params.clone(),
    }
}

pub fn load_coreset(g: &GraphInstance, dump: &CoresetDump) -> Result<WeightedCoreset> {
    let mut members = Vec::with_capacity(dump.members.len());
    for m in &dump.members {
        let idx = g
            .points
            .index_of_id(m.id)
            .ok_or_else(|| Error::Format(format!("coreset id {} not in point set", m.id)))?;
        members.push((idx, m.weight));
    }
    members.sort_by_key(|&(p, _)| p);
    Ok(WeightedCoreset { members, params: dump.params.clone() })
}

/// Decomposition dump: per-region summaries plus per-level balance.
#[derive(Serialize, Deserialize)]
pub struct TreeDump {
    pub n: usize,
    pub marked: usize,
    pub depth: usize,
    pub regions: Vec<RegionDump>,
    pub level_balance: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
pub struct RegionDump {
    pub id: usize,
    pub kind: String,
    pub size: usize,
    pub marked: usize,
    pub depth: usize,
    pub children: Vec<usize>,
    pub separator_balance: Option<f64>,
}

pub fn dump_tree(tree: &crate::decomposition::DecompTree, n: usize) -> TreeDump {
    let mut marked = vec![false; n];
    for &v in &tree.marked {
        marked[v] = true;
    }
    let regions: Vec<RegionDump> = tree
        .regions
        .iter()
        .map(|r| RegionDump {
            id: r.id,
            kind: match r.kind {
                crate::decomposition::RegionKind::Root => "root".into(),
                crate::decomposition::RegionKind::ComponentChild => "component".into(),
                crate::decomposition::RegionKind::SubpathChild => "subpath".into(),
            },
            size: r.vertices.len(),
            marked: r.marked_count(&marked),
            depth: r.depth,
            children: r.children.clone(),
            separator_balance: r.separator.as_ref().map(|s| s.balance),
        })
        .collect();
    let mut level_balance = vec![0.0f64; tree.depth + 1];
    for r in &tree.regions {
        if let Some(sep) = &r.separator {
            level_balance[r.depth] = level_balance[r.depth].max(sep.balance);
        }
    }
    TreeDump { n, marked: tree.marked.len(), depth: tree.depth, regions, level_balance }
}

/// Verification CSV: `trial,true_cost,coreset_cost,rel_err`.
pub fn write_verify_csv(report: &VerifyReport, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "trial,true_cost,coreset_cost,rel_err")?;
    for t in &report.trials {
        writeln!(f, "{},{},{},{}", t.trial, t.true_cost, t.coreset_cost, t.rel_err)?;
    }
    Ok(())
}
