//! Curve-pointset matching: reach pointers, the decision algorithm, curve
//! reconstruction, and optimization; the 3SAT reduction and its feasibility
//! verifier live in [`reduction`].

pub mod reduction;

use crate::classic::{decide_frechet, search_criticals};
use crate::error::{Error, Result};
use crate::fsmap::{propagate_rowset, RowSet, Strip};
use crate::geometry::{
    bisector_edge_value, build_cell_intervals, point_segment_dist, point_segment_dist_sq,
    segment_ball_interval, Point, Polyline, Segment, SQ_TOL,
};

/// A curve-pointset matching instance with its derived cylinder memberships.
#[derive(Debug, Clone)]
pub struct CpmInstance {
    points: Vec<Point>,
    curve: Polyline,
    eps: f64,
    /// s_i[v] is true when point v lies in cylinder C_i (1-based segments;
    /// index 0 is the virtual start cylinder B(s, eps)).
    membership: Vec<Vec<bool>>,
}

impl CpmInstance {
    pub fn new(points: Vec<Point>, curve: Polyline, eps: f64) -> Result<CpmInstance> {
        if points.is_empty() {
            return Err(Error::invalid_input("pointset must be nonempty"));
        }
        if eps < 0.0 || !eps.is_finite() {
            return Err(Error::invalid_input("eps must be finite and nonnegative"));
        }
        let n = curve.num_segments().max(1);
        let eps_sq = eps * eps + SQ_TOL;
        let mut membership = Vec::with_capacity(n + 1);
        membership.push(
            points
                .iter()
                .map(|v| v.dist_sq(curve.vertex(0)) <= eps_sq)
                .collect::<Vec<bool>>(),
        );
        for i in 1..=n {
            let seg = seg_of(&curve, i);
            membership.push(
                points
                    .iter()
                    .map(|v| point_segment_dist_sq(v, &seg.start, &seg.end) <= eps_sq)
                    .collect(),
            );
        }
        Ok(CpmInstance { points, curve, eps, membership })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn curve(&self) -> &Polyline {
        &self.curve
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn num_cylinders(&self) -> usize {
        self.curve.num_segments().max(1)
    }

    pub fn in_cylinder(&self, i: usize, v: usize) -> bool {
        self.membership[i][v]
    }

    /// `P_i[v]` as a parameter interval of segment i, when v is in C_i.
    fn anchor(&self, i: usize, v: usize) -> Option<(f64, f64)> {
        let seg = seg_of(&self.curve, i);
        segment_ball_interval(&seg, &self.points[v], self.eps).map(|iv| (iv.a, iv.b))
    }
}

fn seg_of(curve: &Polyline, i: usize) -> Segment {
    if curve.num_segments() == 0 {
        Segment::new(curve.vertex(0).clone(), curve.vertex(0).clone())
    } else {
        curve.segment(i)
    }
}

/// Reach pointers `ri_i(u, v)` for all cylinders i: the furthest cylinder
/// index attainable by appending segment u->v to a feasible curve whose last
/// vertex u anchors in C_i; 0 when infeasible.
///
/// Computed by one row propagation over the strip of (P, segment uv): the
/// bottom row is P against u, the top row P against v, and the per-interval
/// right pointers land exactly at the furthest cylinder.
pub fn reach_pointers(instance: &CpmInstance, u: usize, v: usize) -> Vec<usize> {
    let p = &instance.curve;
    let n = instance.num_cylinders();
    let uv = Polyline::new(vec![
        instance.points[u].clone(),
        instance.points[v].clone(),
    ])
    .unwrap();
    let grid = build_cell_intervals(p, &uv, instance.eps);
    let strip = Strip::from_grid(&grid, 1);
    let bottom = RowSet {
        cells: (1..=n)
            .map(|k| grid.bf(k, 1).map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b)))
            .collect(),
    };
    let (_top, pointers) = propagate_rowset(&bottom, &strip);
    let mut ri = vec![0usize; n + 1];
    for i in 1..=n {
        if bottom.cells[i - 1].is_none() {
            continue;
        }
        if let Some(rp) = pointers[i - 1].rp {
            // The right pointer lies inside a per-cell feasible interval of
            // the top row; its cylinder index is the furthest reach.
            let cell = top_cell_of(&strip, rp);
            if let Some(cell) = cell {
                if cell >= i {
                    ri[i] = cell;
                }
            }
        }
    }
    ri
}

fn top_cell_of(strip: &Strip, x: f64) -> Option<usize> {
    let k0 = x.floor() as isize;
    for k in [k0, k0 - 1] {
        if k >= 0 && (k as usize) < strip.top.len() {
            if let Some((lo, hi)) = strip.top[k as usize] {
                if lo <= x && x <= hi {
                    return Some(k as usize + 1);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy)]
struct BackPtr {
    prev: usize,
    cylinder: usize,
}

/// Internal run of the decision algorithm, keeping back pointers.
struct DecisionRun {
    accept: Option<usize>,
    back: Vec<Option<BackPtr>>,
    seeds: Vec<bool>,
}

fn run_decision(instance: &CpmInstance) -> DecisionRun {
    let k = instance.points.len();
    let n = instance.num_cylinders();
    let p = &instance.curve;
    let eps_sq = instance.eps * instance.eps + SQ_TOL;

    // ri[u][v][i]
    let mut ri = vec![vec![Vec::new(); k]; k];
    for u in 0..k {
        for v in 0..k {
            ri[u][v] = reach_pointers(instance, u, v);
        }
    }

    let mut ell = vec![0usize; k];
    let mut back: Vec<Option<BackPtr>> = vec![None; k];
    let mut seeds = vec![false; k];
    let mut r0 = vec![false; k];
    for v in 0..k {
        if instance.membership[0][v] {
            r0[v] = true;
            ell[v] = 1;
            seeds[v] = true;
        }
    }
    let mut reachable_at: Vec<Vec<bool>> = vec![vec![false; k]; n + 1];
    reachable_at[0] = r0;

    for i in 1..=n {
        let mut r_i: Vec<bool> = (0..k)
            .map(|v| instance.membership[i][v] && ell[v] >= i)
            .collect();
        // q = min over entry points of Left(P_i[v]).
        let mut q: Option<f64> = None;
        for v in 0..k {
            if r_i[v] {
                if let Some((lo, _)) = instance.anchor(i, v) {
                    q = Some(q.map_or(lo, |c: f64| c.min(lo)));
                }
            }
        }
        if let Some(q) = q {
            let entry = r_i.clone();
            for v in 0..k {
                if instance.membership[i][v] && !r_i[v] {
                    if let Some((_, hi)) = instance.anchor(i, v) {
                        if q <= hi + 1e-12 {
                            r_i[v] = true;
                            // Anchor on the entry point achieving q.
                            if back[v].is_none() {
                                let w = (0..k).find(|&w| {
                                    entry[w]
                                        && instance
                                            .anchor(i, w)
                                            .map_or(false, |(lo, _)| lo <= q + 1e-12)
                                });
                                if let Some(w) = w {
                                    back[v] = Some(BackPtr { prev: w, cylinder: i });
                                }
                            }
                        }
                    }
                }
            }
        }
        for u in 0..k {
            if !r_i[u] {
                continue;
            }
            for v in 0..k {
                let reach = ri[u][v][i];
                if reach > ell[v] {
                    ell[v] = reach;
                    back[v] = Some(BackPtr { prev: u, cylinder: i });
                }
            }
        }
        reachable_at[i] = r_i;
    }

    let t = p.vertex(p.num_segments());
    let accept = (0..k).find(|&v| reachable_at[n][v] && instance.points[v].dist_sq(t) <= eps_sq);
    DecisionRun { accept, back, seeds }
}

/// Decides whether some polygonal curve with vertices from the pointset
/// (repeats allowed, not all points required) stays within eps Fréchet
/// distance of the instance curve.
pub fn cpm_decide(instance: &CpmInstance) -> bool {
    run_decision(instance).accept.is_some()
}

/// Reconstructs a witness curve when the decision succeeds. The returned
/// curve has at most `2 * min(n, k) + 2` vertices and verifies under the
/// classical decision procedure.
pub fn cpm_reconstruct(instance: &CpmInstance) -> Option<Polyline> {
    let run = run_decision(instance);
    let accept = run.accept?;
    let mut rev = vec![accept];
    let mut cur = accept;
    let mut guard = 0usize;
    while !run.seeds[cur] || run.back[cur].is_some() {
        match run.back[cur] {
            Some(bp) => {
                rev.push(bp.prev);
                cur = bp.prev;
            }
            None => break,
        }
        guard += 1;
        if guard > 4 * (instance.num_cylinders() + instance.points.len()) + 8 {
            break;
        }
        if run.seeds[cur] {
            break;
        }
    }
    rev.reverse();
    let verts: Vec<Point> = rev.iter().map(|&v| instance.points[v].clone()).collect();
    let poly = if verts.len() == 1 {
        Polyline::new(vec![verts[0].clone(), verts[0].clone()]).unwrap()
    } else {
        Polyline::new(verts).unwrap()
    };
    Some(poly)
}

/// Minimum eps with a positive decision, by binary search over the candidate
/// critical set (point-vertex, point-edge, and bisector-edge events),
/// validated post hoc against the decision procedure.
pub fn cpm_optimize(points: &[Point], curve: &Polyline) -> f64 {
    let mut cands: Vec<f64> = Vec::new();
    for u in points {
        for v in curve.vertices() {
            cands.push(u.dist(v));
        }
        for i in 1..=curve.num_segments() {
            let s = curve.segment(i);
            cands.push(point_segment_dist(u, &s.start, &s.end));
        }
    }
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            for i in 1..=curve.num_segments() {
                let s = curve.segment(i);
                if let Some(d) = bisector_edge_value(&points[a], &points[b], &s.start, &s.end) {
                    cands.push(d);
                }
            }
        }
    }
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cands.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    let decide = |eps: f64| {
        CpmInstance::new(points.to_vec(), curve.clone(), eps)
            .map(|inst| cpm_decide(&inst))
            .unwrap_or(false)
    };
    let (idx, mut c) = match search_criticals(&cands, decide) {
        Some(r) => r,
        None => return f64::INFINITY,
    };
    let margin = (1e-9 * c).max(1e-12);
    if c > 0.0 && decide(c - margin) {
        let mut lo = if idx > 0 { cands[idx - 1] } else { 0.0 };
        let mut hi = c;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if decide(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        c = hi;
    }
    c
}

/// All-points feasibility: every vertex of q comes from the pointset, every
/// point of the set appears on q (when `all_points` is set), and q stays
/// within eps of the instance curve.
pub fn verify_feasible(instance: &CpmInstance, q: &Polyline, all_points: bool) -> bool {
    let k = instance.points.len();
    let mut used = vec![false; k];
    for vert in q.vertices() {
        match (0..k).find(|&i| instance.points[i].dist_sq(vert) <= 1e-18) {
            Some(i) => used[i] = true,
            None => return false,
        }
    }
    if all_points && used.iter().any(|&u| !u) {
        return false;
    }
    decide_frechet(&instance.curve, q, instance.eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::xy(x, y)).collect()
    }

    fn curve(c: &[(f64, f64)]) -> Polyline {
        Polyline::from_xy(c).unwrap()
    }

    #[test]
    fn decide_coincident_vertices() {
        let inst = CpmInstance::new(
            pts(&[(0.0, 0.0), (1.0, 0.0)]),
            curve(&[(0.0, 0.0), (1.0, 0.0)]),
            0.0,
        )
        .unwrap();
        assert!(cpm_decide(&inst));
        let q = cpm_reconstruct(&inst).unwrap();
        assert!(decide_frechet(inst.curve(), &q, inst.eps()));
    }

    #[test]
    fn decide_far_start_fails() {
        let inst = CpmInstance::new(
            pts(&[(10.0, 10.0), (1.0, 0.0)]),
            curve(&[(0.0, 0.0), (1.0, 0.0)]),
            0.5,
        )
        .unwrap();
        assert!(!cpm_decide(&inst));
        assert!(cpm_reconstruct(&inst).is_none());
    }

    #[test]
    fn single_point_set_constant_curve() {
        let p = curve(&[(0.0, 0.0), (2.0, 0.0)]);
        let s = pts(&[(1.0, 1.0)]);
        // Q must be the constant curve at the point: optimum = max distance
        // from the point to P = sqrt(2).
        let opt = cpm_optimize(&s, &p);
        assert!((opt - 2f64.sqrt()).abs() < 1e-9, "{opt}");
        let inst = CpmInstance::new(s, p, opt + 1e-9).unwrap();
        assert!(cpm_decide(&inst));
        let q = cpm_reconstruct(&inst).unwrap();
        assert!(q.vertices().len() <= 2);
    }

    #[test]
    fn vertices_of_curve_give_zero() {
        let p = curve(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        let s = pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert!(cpm_optimize(&s, &p).abs() < 1e-9);
    }

    #[test]
    fn reach_pointer_basics() {
        // u = v stationary inside two consecutive cylinders.
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 5.0)]);
        let s = pts(&[(1.0, 0.2), (9.0, 9.0)]);
        let inst = CpmInstance::new(s, p, 0.5).unwrap();
        let ri = reach_pointers(&inst, 0, 0);
        // Point (1, 0.2) lies in C_1 and C_2 but not C_3.
        assert_eq!(ri[1], 2);
        assert_eq!(ri[2], 2);
        // Outside point never anchors.
        let ri2 = reach_pointers(&inst, 1, 1);
        assert_eq!(ri2[1], 0);
    }

    #[test]
    fn point_reuse_instance() {
        // A zig-zag that forces the single nearby point to be reused.
        let p = curve(&[(0.0, 0.0), (2.0, 0.0), (0.0, 0.1), (2.0, 0.1)]);
        let s = pts(&[(0.0, 0.05), (2.0, 0.05)]);
        let eps = 1.2;
        let inst = CpmInstance::new(s, p, eps).unwrap();
        assert!(cpm_decide(&inst));
        let q = cpm_reconstruct(&inst).unwrap();
        assert!(decide_frechet(inst.curve(), &q, eps));
        let bound = 2 * inst.num_cylinders().min(inst.points().len()) + 2;
        assert!(q.vertices().len() <= bound);
    }

    #[test]
    fn verify_rejects_foreign_vertices() {
        let inst = CpmInstance::new(
            pts(&[(0.0, 0.0), (1.0, 0.0)]),
            curve(&[(0.0, 0.0), (1.0, 0.0)]),
            1.0,
        )
        .unwrap();
        let q_bad = curve(&[(0.0, 0.0), (0.5, 0.0)]);
        assert!(!verify_feasible(&inst, &q_bad, false));
        let q_ok = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(verify_feasible(&inst, &q_ok, true));
        let q_partial = curve(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(verify_feasible(&inst, &q_partial, false));
        assert!(!verify_feasible(&inst, &q_partial, true));
    }
}
