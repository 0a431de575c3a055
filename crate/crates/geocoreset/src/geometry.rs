//! Planar geometry kernel: lp norms, grids, mu-nets and the axis-parallel
//! empty-square predicate behind the Chebyshev Delaunay triangulation.
//!
//! Everything here is pure and immutable; callers may share values across
//! threads freely.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Deterministic perturbation magnitude applied before Delaunay predicates.
pub const PERTURB_ZETA: f64 = 1e-9;
/// Modulus for the quadratic perturbation term (2^31 - 1, prime).
pub const PERTURB_MOD: u64 = 2_147_483_647;

/// A point of the embedding, identified by an integer id.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub id: u64,
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(id: u64, x: f64, y: f64) -> Self {
        Point2D { id, x, y }
    }
}

/// An lp norm with p in [1, inf]; `f64::INFINITY` selects the Chebyshev norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormKind {
    p: f64,
}

impl NormKind {
    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(NormKind { p })
        } else {
            Err(Error::InvalidParameter(format!("norm exponent p = {p}, need p >= 1")))
        }
    }

    pub fn l1() -> Self {
        NormKind { p: 1.0 }
    }

    pub fn l2() -> Self {
        NormKind { p: 2.0 }
    }

    pub fn linf() -> Self {
        NormKind { p: f64::INFINITY }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_inf(&self) -> bool {
        self.p.is_infinite()
    }

    /// Norm of the vector (dx, dy).
    pub fn norm(&self, dx: f64, dy: f64) -> f64 {
        let (ax, ay) = (dx.abs(), dy.abs());
        if self.p.is_infinite() {
            ax.max(ay)
        } else if self.p == 1.0 {
            ax + ay
        } else if self.p == 2.0 {
            ax.hypot(ay)
        } else {
            (ax.powf(self.p) + ay.powf(self.p)).powf(1.0 / self.p)
        }
    }
}

/// lp distance between two points.
pub fn dist(p: &Point2D, q: &Point2D, norm: NormKind) -> f64 {
    norm.norm(p.x - q.x, p.y - q.y)
}

/// Coordinate gaps of a pair: dx, dy, their max `d_max` and min `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DxyStats {
    pub dx: f64,
    pub dy: f64,
    /// The Chebyshev distance max(dx, dy).
    pub d_max: f64,
    /// The smaller gap min(dx, dy).
    pub delta: f64,
}

pub fn dxy_stats(p: &Point2D, q: &Point2D) -> DxyStats {
    let dx = (p.x - q.x).abs();
    let dy = (p.y - q.y).abs();
    DxyStats { dx, dy, d_max: dx.max(dy), delta: dx.min(dy) }
}

/// An axis-parallel square given by its center and half side length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSquare {
    pub cx: f64,
    pub cy: f64,
    pub half_side: f64,
}

impl AxisSquare {
    pub fn new(cx: f64, cy: f64, half_side: f64) -> Result<Self> {
        if half_side > 0.0 {
            Ok(AxisSquare { cx, cy, half_side })
        } else {
            Err(Error::InvalidParameter("axis square needs half_side > 0".into()))
        }
    }

    /// True if the point lies in the square's interior or on its boundary.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (x - self.cx).abs().max((y - self.cy).abs()) <= self.half_side
    }
}

/// An immutable set of points with unique ids, stored sorted by id so that
/// index order and id order agree (all deterministic tie-breaks use ids).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point2D>,
}

impl PointSet {
    pub fn new(mut points: Vec<Point2D>) -> Result<Self> {
        points.sort_by_key(|p| p.id);
        for w in points.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidInput(format!("duplicate point id {}", w[0].id)));
            }
        }
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite coordinate on id {}", p.id)));
            }
        }
        Ok(PointSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point2D> {
        self.points.iter()
    }

    /// Point at internal index (indices follow ascending id order).
    pub fn get(&self, idx: usize) -> &Point2D {
        &self.points[idx]
    }

    pub fn index_of_id(&self, id: u64) -> Option<usize> {
        self.points.binary_search_by_key(&id, |p| p.id).ok()
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    /// Restrict to the given indices; ids are preserved.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        let mut pts: Vec<Point2D> = indices.iter().map(|&i| self.points[i]).collect();
        pts.sort_by_key(|p| p.id);
        PointSet { points: pts }
    }

    /// Deterministic general-position perturbation used by Delaunay predicates:
    /// rank i (position in id order) moves by (i*zeta, ((i^2) mod M)*zeta).
    /// Ranks rather than raw ids keep the jitter bounded for sparse id spaces.
    pub fn perturbed(&self) -> PointSet {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let i = i as u64;
                Point2D {
                    id: p.id,
                    x: p.x + i as f64 * PERTURB_ZETA,
                    y: p.y + ((i * i) % PERTURB_MOD) as f64 * PERTURB_ZETA,
                }
            })
            .collect();
        PointSet { points }
    }
}

/// Grid key of a point for cells of side `mu` (used by mu-nets and the
/// bounded-degree support graph).
pub fn grid_cell(x: f64, y: f64, mu: f64) -> (i64, i64) {
    ((x / mu).floor() as i64, (y / mu).floor() as i64)
}

/// A mu-net of a metric ball.
///
/// `ball` lists (index into `points`, graph distance from the ball center).
/// One representative per occupied grid cell of side `mu` is kept, choosing
/// the smallest id. Returns the chosen indices together with the cell of each
/// ball member (provenance).
pub struct MuNet {
    /// Indices of the representatives, ascending.
    pub members: Vec<usize>,
    /// For every ball member, the representative index covering it.
    pub cover: Vec<(usize, usize)>,
    /// Grid-cell-count bound actually used for the size assertion.
    pub size_bound: usize,
}

/// Builds a mu-net over the embedded ball points.
///
/// `c1` is the instance's always-an-edge threshold (cell mates must be
/// adjacent, so mu must stay below c1/sqrt2). `c3_eff` is the lower
/// weight-distortion factor of the metric (weights are at least `c3_eff`
/// times the Euclidean gap), which is what bounds the embedded radius of the
/// ball, and hence the occupied cell count, by `(2r/(c3_eff mu) + 3)^2`.
pub fn mu_net(
    points: &PointSet,
    ball: &[(usize, f64)],
    mu: f64,
    r: f64,
    c1: f64,
    c3_eff: f64,
) -> Result<MuNet> {
    if ball.is_empty() {
        return Err(Error::InvalidParameter("mu_net on empty ball".into()));
    }
    if ball.len() == 1 {
        // Singleton ball: the point is its own net.
        let members: Vec<usize> = ball.iter().map(|&(i, _)| i).collect();
        let cover = members.iter().map(|&i| (i, i)).collect();
        return Ok(MuNet { members, cover, size_bound: 1 });
    }
    if mu <= 0.0 && ball.iter().all(|&(_, d)| d == 0.0) {
        // Radius-zero ball of coincident points: a 0-net is the ball itself.
        let members: Vec<usize> = ball.iter().map(|&(i, _)| i).collect();
        let cover = members.iter().map(|&i| (i, i)).collect();
        return Ok(MuNet { members, cover, size_bound: ball.len() });
    }
    if !(mu > 0.0 && mu < c1 / 2f64.sqrt()) {
        return Err(Error::InvalidParameter(format!(
            "net precision mu = {mu} outside (0, c1/sqrt2 = {})",
            c1 / 2f64.sqrt()
        )));
    }
    use std::collections::HashMap;
    let mut reps: HashMap<(i64, i64), usize> = HashMap::new();
    for &(i, _) in ball {
        let p = points.get(i);
        let cell = grid_cell(p.x, p.y, mu);
        let e = reps.entry(cell).or_insert(i);
        if points.get(i).id < points.get(*e).id {
            *e = i;
        }
    }
    let mut members: Vec<usize> = reps.values().copied().collect();
    members.sort_unstable();
    let cover = ball
        .iter()
        .map(|&(i, _)| {
            let p = points.get(i);
            (i, reps[&grid_cell(p.x, p.y, mu)])
        })
        .collect();
    let side = (2.0 * r / (c3_eff * mu) + 3.0).ceil();
    let size_bound = (side * side) as usize;
    Ok(MuNet { members, cover, size_bound })
}

/// The one-parameter family of axis squares through a normalized pair.
///
/// After translating p to the origin and reflecting/swapping axes so that
/// q = (w, h) with 0 <= h < w, every square with both points on its boundary
/// is S(c, rho(c)) for a center c on the Chebyshev bisector of p and q, which
/// is the polyline: up-left ray from (w/2, w/2), the vertical segment
/// x = w/2 for y in [h - w/2, w/2], and the down-right ray from (w/2, h - w/2).
struct Bisector {
    w: f64,
    h: f64,
}

#[derive(Clone, Copy)]
enum Piece {
    UpLeft,
    Middle,
    DownRight,
}

impl Bisector {
    fn center(&self, piece: Piece, t: f64) -> (f64, f64, f64) {
        let w = self.w;
        match piece {
            // t >= 0
            Piece::UpLeft => (w / 2.0 - t, w / 2.0 + t, w / 2.0 + t),
            // t in [h - w/2, w/2] is the y coordinate
            Piece::Middle => (w / 2.0, t, w / 2.0),
            // t >= 0
            Piece::DownRight => (w / 2.0 + t, self.h - w / 2.0 - t, w / 2.0 + t),
        }
    }

    fn domain(&self, piece: Piece, t_max: f64) -> (f64, f64) {
        match piece {
            Piece::UpLeft | Piece::DownRight => (0.0, t_max),
            Piece::Middle => (self.h - self.w / 2.0, self.w / 2.0),
        }
    }
}

/// Decides whether some axis-parallel square has `p` and `q` on its boundary
/// and no other point of `pts` inside or on it.
///
/// Candidate squares are the bisector family above; for each other point the
/// parameters where it crosses the square boundary are collected as events,
/// and emptiness is tested midway between consecutive events (where the
/// inside/outside status is constant), at the events' flanks, and far out on
/// the two rays.
pub fn empty_axis_square_exists(p: &Point2D, q: &Point2D, pts: &PointSet) -> Result<bool> {
    if p.x == q.x && p.y == q.y {
        return Err(Error::InvalidParameter(format!(
            "empty_axis_square_exists on coincident pair ({}, {})",
            p.id, q.id
        )));
    }
    // Canonical orientation makes the result exactly symmetric in (p, q).
    let (a, b) = if (p.x, p.y, p.id) <= (q.x, q.y, q.id) { (p, q) } else { (q, p) };

    // Normalize: a at origin, q in the first octant (0 <= h < w).
    let mut w = b.x - a.x;
    let mut h = b.y - a.y;
    let mut flip_x = false;
    let mut flip_y = false;
    let mut swap_xy = false;
    if w < 0.0 {
        w = -w;
        flip_x = true;
    }
    if h < 0.0 {
        h = -h;
        flip_y = true;
    }
    if h > w {
        std::mem::swap(&mut w, &mut h);
        swap_xy = true;
    }
    // Exact-diagonal pairs have a two-dimensional bisector this walk cannot
    // parameterize; shrink h by a hair (well below the perturbation scale).
    if w - h < 1e-12 * w.max(1.0) {
        h = w * (1.0 - 1e-9);
    }

    let transform = |r: &Point2D| -> (f64, f64) {
        let mut x = r.x - a.x;
        let mut y = r.y - a.y;
        if flip_x {
            x = -x;
        }
        if flip_y {
            y = -y;
        }
        if swap_xy {
            std::mem::swap(&mut x, &mut y);
        }
        (x, y)
    };

    let others: Vec<(f64, f64)> = pts
        .iter()
        .filter(|r| r.id != p.id && r.id != q.id)
        .map(|r| transform(r))
        .collect();
    if others.is_empty() {
        return Ok(true);
    }

    let spread = others
        .iter()
        .map(|&(x, y)| x.abs().max(y.abs()))
        .fold(w, f64::max);
    let t_max = 4.0 * (spread + w + 1.0);

    let bis = Bisector { w, h };
    let empty_at = |piece: Piece, t: f64| -> bool {
        let (cx, cy, rho) = bis.center(piece, t);
        others.iter().all(|&(x, y)| (x - cx).abs().max((y - cy).abs()) > rho)
    };

    for piece in [Piece::UpLeft, Piece::Middle, Piece::DownRight] {
        let (lo, hi) = bis.domain(piece, t_max);
        if lo > hi {
            continue;
        }
        // Candidate events: for each other point, parameters where either
        // coordinate gap can equal the radius. cx, cy, rho are all linear in
        // t with slopes in {-1, 0, 1}, so each |gap| = rho equation is
        // piecewise linear; solving the four sign combinations per coordinate
        // covers every breakpoint.
        let mut events: Vec<f64> = vec![lo, hi];
        let (cx0, cy0, rho0) = bis.center(piece, 0.0);
        let (cx1, cy1, rho1) = bis.center(piece, 1.0);
        let (mx, my, mr) = (cx1 - cx0, cy1 - cy0, rho1 - rho0);
        for &(x, y) in &others {
            // gap_x(t) = |cx0 + mx t - x|, want gap = rho0 + mr t
            for (c0, m) in [(cx0 - x, mx), (cy0 - y, my)] {
                for sign in [1.0, -1.0] {
                    // sign*(c0 + m t) = rho0 + mr t
                    let denom = sign * m - mr;
                    if denom.abs() > 1e-30 {
                        events.push((rho0 - sign * c0) / denom);
                    }
                }
                // breakpoint of the absolute value
                if m.abs() > 1e-30 {
                    events.push(-c0 / m);
                }
            }
        }
        events.retain(|t| t.is_finite() && *t >= lo && *t <= hi);
        events.sort_by(f64::total_cmp);
        events.dedup();
        for pair in events.windows(2) {
            let mid = 0.5 * (pair[0] + pair[1]);
            if empty_at(piece, mid) {
                return Ok(true);
            }
        }
        if empty_at(piece, lo) || empty_at(piece, hi) {
            return Ok(true);
        }
    }
    Ok(false)
}
