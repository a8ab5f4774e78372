//! Geometric primitives shared by every algorithm: points, polylines,
//! segment/ball intersections and the per-cell free-space intervals.

use crate::error::{Error, Result};

/// Absolute tolerance applied to comparisons of squared distances.
pub const SQ_TOL: f64 = 1e-9;

/// A point in d-dimensional Euclidean space (d >= 2, fixed per instance).
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid_input("point dimension must be >= 2"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid_input("point coordinates must be finite"));
        }
        Ok(Point { coords })
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point { coords: vec![x, y] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Linear interpolation `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        }
    }
}

/// A directed line segment.
#[derive(Debug, Clone)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }

    pub fn at(&self, t: f64) -> Point {
        self.start.lerp(&self.end, t)
    }

    pub fn len_sq(&self) -> f64 {
        self.start.dist_sq(&self.end)
    }

    pub fn len(&self) -> f64 {
        self.start.dist(&self.end)
    }
}

/// Squared distance from `p` to the segment `a`-`b`.
pub fn point_segment_dist_sq(p: &Point, a: &Point, b: &Point) -> f64 {
    let len_sq = a.dist_sq(b);
    if len_sq == 0.0 {
        return p.dist_sq(a);
    }
    let mut t = 0.0;
    for k in 0..p.dim() {
        t += (p.coords[k] - a.coords[k]) * (b.coords[k] - a.coords[k]);
    }
    t = (t / len_sq).clamp(0.0, 1.0);
    p.dist_sq(&a.lerp(b, t))
}

pub fn point_segment_dist(p: &Point, a: &Point, b: &Point) -> f64 {
    point_segment_dist_sq(p, a, b).sqrt()
}

/// An ordered polygonal curve with pre-computed arc lengths.
#[derive(Debug, Clone)]
pub struct Polyline {
    vertices: Vec<Point>,
    cumulative: Vec<f64>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid_input("polyline needs at least one vertex"));
        }
        let dim = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != dim) {
            return Err(Error::invalid_input("polyline vertices must share a dimension"));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        for w in vertices.windows(2) {
            cumulative.push(cumulative.last().unwrap() + w[0].dist(&w[1]));
        }
        Ok(Polyline { vertices, cumulative })
    }

    pub fn from_xy(points: &[(f64, f64)]) -> Result<Self> {
        Polyline::new(points.iter().map(|&(x, y)| Point::xy(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Number of segments (vertices - 1; zero for a single-vertex curve).
    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The i-th segment, 1-based as in `P_i = P(i-1)P(i)`.
    pub fn segment(&self, i: usize) -> Segment {
        Segment::new(self.vertices[i - 1].clone(), self.vertices[i].clone())
    }

    /// Point at global parameter `s` in `[0, num_segments]`.
    pub fn at(&self, s: f64) -> Point {
        let n = self.num_segments();
        if n == 0 {
            return self.vertices[0].clone();
        }
        let s = s.clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        self.vertices[i].lerp(&self.vertices[i + 1], s - i as f64)
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Arc length from the start to global parameter `s`.
    pub fn arc_length_at(&self, s: f64) -> f64 {
        let n = self.num_segments();
        if n == 0 {
            return 0.0;
        }
        let s = s.clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        self.cumulative[i] + (s - i as f64) * self.vertices[i].dist(&self.vertices[i + 1])
    }

    /// Extracts the subcurve between global parameters `s0 <= s1`.
    pub fn subcurve(&self, s0: f64, s1: f64) -> Polyline {
        let n = self.num_segments();
        if n == 0 {
            return self.clone();
        }
        let s0 = s0.clamp(0.0, n as f64);
        let s1 = s1.clamp(s0, n as f64);
        let mut verts = vec![self.at(s0)];
        let mut i = s0.floor() as usize + 1;
        while (i as f64) < s1 {
            verts.push(self.vertices[i].clone());
            i += 1;
        }
        verts.push(self.at(s1));
        Polyline::new(verts).unwrap()
    }

    /// True when the first and last vertices coincide.
    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 2
            && self.vertices.first().unwrap().dist_sq(self.vertices.last().unwrap()) <= SQ_TOL
    }
}

/// A closed sub-interval of [0, 1], used for feasible parts of cell edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Option<Interval> {
        if a <= b {
            Some(Interval { a, b })
        } else {
            None
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.a.max(other.a), self.b.min(other.b))
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// Identifies one side of a free-space cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Bottom,
}

/// A point on the boundary of a free-space cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub cell: (usize, usize),
    pub side: Side,
    pub t: f64,
}

/// The feasible sub-segments of a cell's left and bottom edges.
#[derive(Debug, Clone, Copy, Default)]
pub struct CellIntervals {
    /// `L^F_{ij} = [a, b]`, parametrized bottom-to-top along the left edge.
    pub lf: Option<Interval>,
    /// `B^F_{ij} = [c, d]`, parametrized left-to-right along the bottom edge.
    pub bf: Option<Interval>,
}

/// Maximal parameter interval of `seg` whose points lie within `eps` of `center`.
///
/// Solved from one quadratic in t with the numerically stable form, then
/// clamped to [0, 1]. Tangency within `SQ_TOL` of eps^2 yields a degenerate
/// single-point interval.
pub fn segment_ball_interval(seg: &Segment, center: &Point, eps: f64) -> Option<Interval> {
    let d = seg.len_sq();
    let eps_sq = eps * eps;
    if d <= 0.0 {
        // Degenerate segment: within range iff the endpoint is.
        return if seg.start.dist_sq(center) <= eps_sq + SQ_TOL {
            Interval::new(0.0, 1.0)
        } else {
            None
        };
    }
    // |start + t*(end-start) - center|^2 = d*t^2 + b*t + c
    let mut b = 0.0;
    for k in 0..center.dim() {
        b += 2.0 * (seg.start.coords[k] - center.coords[k]) * (seg.end.coords[k] - seg.start.coords[k]);
    }
    let c = seg.start.dist_sq(center) - eps_sq;
    let disc = b * b - 4.0 * d * c;
    if disc <= 0.0 {
        // Possible tangency: accept when the closest point is within tolerance.
        let t_min = (-b / (2.0 * d)).clamp(0.0, 1.0);
        let closest = seg.at(t_min);
        if closest.dist_sq(center) <= eps_sq + SQ_TOL {
            return Interval::new(t_min, t_min);
        }
        return None;
    }
    let sq = disc.sqrt();
    // Stable root pair: avoid subtracting nearly equal quantities.
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = (q / d, if q != 0.0 { c / q } else { -b / (2.0 * d) });
    let (lo, hi) = (r1.min(r2), r1.max(r2));
    if hi < 0.0 || lo > 1.0 {
        return None;
    }
    Interval::new(lo.max(0.0), hi.min(1.0))
}

/// True iff `distance(P_i(s), Q_j(t)) <= eps` for the cell spanned by the two
/// segments; equivalent to the per-cell ellipse inequality.
pub fn cell_free_space_membership(p_seg: &Segment, q_seg: &Segment, s: f64, t: f64, eps: f64) -> bool {
    p_seg.at(s).dist_sq(&q_seg.at(t)) <= eps * eps + SQ_TOL
}

/// Per-cell feasible boundary intervals for the full diagram, including the
/// virtual row and column used by the decision algorithms.
#[derive(Debug, Clone)]
pub struct FreeSpaceGrid {
    pub n: usize,
    pub m: usize,
    /// `lf[(i-1) + (j-1)*(n+1)]` holds `L^F_{ij}` for i in 1..=n+1, j in 1..=m.
    lf: Vec<Option<Interval>>,
    /// `bf[(i-1) + (j-1)*n]` holds `B^F_{ij}` for i in 1..=n, j in 1..=m+1.
    bf: Vec<Option<Interval>>,
}

impl FreeSpaceGrid {
    /// Feasible interval on the left edge of cell (i, j): points of `Q_j`
    /// within eps of vertex `P(i-1)`.
    pub fn lf(&self, i: usize, j: usize) -> Option<Interval> {
        debug_assert!((1..=self.n + 1).contains(&i) && (1..=self.m).contains(&j));
        self.lf[(i - 1) + (j - 1) * (self.n + 1)]
    }

    /// Feasible interval on the bottom edge of cell (i, j): points of `P_i`
    /// within eps of vertex `Q(j-1)`.
    pub fn bf(&self, i: usize, j: usize) -> Option<Interval> {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.m + 1).contains(&j));
        self.bf[(i - 1) + (j - 1) * self.n]
    }
}

/// Computes all boundary intervals of the free-space diagram of `P` and `Q`.
pub fn build_cell_intervals(p: &Polyline, q: &Polyline, eps: f64) -> FreeSpaceGrid {
    let n = p.num_segments().max(1);
    let m = q.num_segments().max(1);
    let pv = |i: usize| p.vertex(i.min(p.num_segments()));
    let qv = |j: usize| q.vertex(j.min(q.num_segments()));
    let p_seg = |i: usize| {
        if p.num_segments() == 0 {
            Segment::new(p.vertex(0).clone(), p.vertex(0).clone())
        } else {
            p.segment(i)
        }
    };
    let q_seg = |j: usize| {
        if q.num_segments() == 0 {
            Segment::new(q.vertex(0).clone(), q.vertex(0).clone())
        } else {
            q.segment(j)
        }
    };
    let mut lf = vec![None; (n + 1) * m];
    for j in 1..=m {
        let qs = q_seg(j);
        for i in 1..=n + 1 {
            lf[(i - 1) + (j - 1) * (n + 1)] = segment_ball_interval(&qs, pv(i - 1), eps);
        }
    }
    let mut bf = vec![None; n * (m + 1)];
    for i in 1..=n {
        let ps = p_seg(i);
        for j in 1..=m + 1 {
            bf[(i - 1) + (j - 1) * n] = segment_ball_interval(&ps, qv(j - 1), eps);
        }
    }
    FreeSpaceGrid { n, m, lf, bf }
}

/// The paper's boundary order: `p` is before `q` iff `p_x < q_x`, or
/// `p_x = q_x` and `p_y > q_y`.
pub fn before(px: f64, py: f64, qx: f64, qy: f64) -> bool {
    px < qx || (px == qx && py > qy)
}

/// Common distance of `u` and `v` to the intersection of their bisector with
/// the segment `a`-`b`, when that intersection lies within the segment
/// (tolerance 1e-9 in edge parameters). Parallel or degenerate configurations
/// yield none.
pub fn bisector_edge_value(u: &Point, v: &Point, a: &Point, b: &Point) -> Option<f64> {
    let dim = u.dim();
    let mut dw = 0.0;
    let mut aw = 0.0;
    let mut rhs = 0.0;
    for k in 0..dim {
        let w = u.coords[k] - v.coords[k];
        dw += (b.coords[k] - a.coords[k]) * w;
        aw += a.coords[k] * w;
        rhs += 0.5 * (u.coords[k] * u.coords[k] - v.coords[k] * v.coords[k]);
    }
    if dw.abs() < 1e-15 {
        return None;
    }
    let t = (rhs - aw) / dw;
    if !(-1e-9..=1.0 + 1e-9).contains(&t) {
        return None;
    }
    Some(a.lerp(b, t.clamp(0.0, 1.0)).dist(u))
}
