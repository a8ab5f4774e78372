//! Classical, weak, and discrete Fréchet distance: decision procedures,
//! critical-value enumeration, and optimization by sorted binary search.

use crate::geometry::{
    build_cell_intervals, point_segment_dist, point_segment_dist_sq, FreeSpaceGrid, Interval,
    Polyline, SQ_TOL,
};

/// Containment slack for "does the reach interval touch the corner" checks,
/// in edge-parameter units.
const PARAM_TOL: f64 = 1e-12;

/// Which geometric event produced a critical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    A,
    B,
    C,
}

/// Witness of the configuration that produced a critical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// Distance between the start points or between the end points.
    Endpoints { start: bool },
    /// Distance between a vertex of one curve and a segment of the other.
    /// `p_side` is true when the vertex belongs to P.
    VertexEdge { p_side: bool, vertex: usize, edge: usize },
    /// Common distance of two vertices of one curve to the intersection of
    /// their bisector with an edge of the other curve.
    Bisector { p_side: bool, v1: usize, v2: usize, edge: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalValue {
    pub value: f64,
    pub kind: CriticalKind,
    pub witness: Witness,
}

/// Per-edge reachable intervals of the monotone decision procedure.
///
/// Reachable sets on cell edges are single sub-intervals of the feasible
/// intervals, stored in edge parameters.
#[derive(Debug)]
pub struct ReachTable {
    pub n: usize,
    pub m: usize,
    lr: Vec<Option<Interval>>,
    br: Vec<Option<Interval>>,
}

impl ReachTable {
    /// `L^R_{ij}` for i in 1..=n+1, j in 1..=m.
    pub fn lr(&self, i: usize, j: usize) -> Option<Interval> {
        self.lr[(i - 1) + (j - 1) * (self.n + 1)]
    }

    /// `B^R_{ij}` for i in 1..=n, j in 1..=m+1.
    pub fn br(&self, i: usize, j: usize) -> Option<Interval> {
        self.br[(i - 1) + (j - 1) * self.n]
    }

    /// True iff the top-right corner (n, m) of the diagram is reachable.
    pub fn target_reached(&self) -> bool {
        let top_right_l = self
            .lr(self.n + 1, self.m)
            .map_or(false, |iv| iv.b >= 1.0 - PARAM_TOL);
        let top_right_b = self
            .br(self.n, self.m + 1)
            .map_or(false, |iv| iv.b >= 1.0 - PARAM_TOL);
        top_right_l || top_right_b
    }
}

/// Start seeds for the reach computation: intervals on the outer boundary of
/// the diagram from which traversal may begin.
#[derive(Debug, Clone, Default)]
pub struct ReachSeeds {
    /// Seed the origin (0,0) when it is feasible (standard decision problem).
    pub origin: bool,
    /// Per-row seed on the left diagram edge `L_{1,j}` (edge parameters).
    pub left: Vec<(usize, Interval)>,
    /// Per-column seed on the bottom diagram edge `B_{i,1}` (edge parameters).
    pub bottom: Vec<(usize, Interval)>,
}

impl ReachSeeds {
    pub fn origin() -> Self {
        ReachSeeds { origin: true, ..Default::default() }
    }
}

fn merge_entry(current: &mut Option<f64>, lo: f64) {
    *current = Some(current.map_or(lo, |c: f64| c.min(lo)));
}

/// Row-wise propagation of reachability through the free-space grid.
pub fn reach_table(grid: &FreeSpaceGrid, seeds: &ReachSeeds) -> ReachTable {
    let (n, m) = (grid.n, grid.m);
    let mut lr: Vec<Option<Interval>> = vec![None; (n + 1) * m];
    let mut br: Vec<Option<Interval>> = vec![None; n * (m + 1)];
    let lidx = |i: usize, j: usize| (i - 1) + (j - 1) * (n + 1);
    let bidx = |i: usize, j: usize| (i - 1) + (j - 1) * n;

    // Lowest entry point per edge; the reach interval extends from there to
    // the top of the feasible interval.
    let mut l_entry: Vec<Option<f64>> = vec![None; (n + 1) * m];
    let mut b_entry: Vec<Option<f64>> = vec![None; n * (m + 1)];

    if seeds.origin {
        if let Some(iv) = grid.lf(1, 1) {
            if iv.a <= PARAM_TOL {
                merge_entry(&mut l_entry[lidx(1, 1)], 0.0);
            }
        }
        if let Some(iv) = grid.bf(1, 1) {
            if iv.a <= PARAM_TOL {
                merge_entry(&mut b_entry[bidx(1, 1)], 0.0);
            }
        }
    }
    for &(j, seed) in &seeds.left {
        if let Some(f) = grid.lf(1, j) {
            if let Some(iv) = seed.intersect(&f) {
                merge_entry(&mut l_entry[lidx(1, j)], iv.a);
            }
        }
    }
    for &(i, seed) in &seeds.bottom {
        if let Some(f) = grid.bf(i, 1) {
            if let Some(iv) = seed.intersect(&f) {
                merge_entry(&mut b_entry[bidx(i, 1)], iv.a);
            }
        }
    }

    for i in 1..=n {
        for j in 1..=m {
            // Resolve this cell's entry edges into reach intervals.
            let lr_ij = l_entry[lidx(i, j)].and_then(|lo| {
                grid.lf(i, j).and_then(|f| Interval::new(lo.max(f.a), f.b))
            });
            lr[lidx(i, j)] = lr_ij;
            let br_ij = b_entry[bidx(i, j)].and_then(|lo| {
                grid.bf(i, j).and_then(|f| Interval::new(lo.max(f.a), f.b))
            });
            br[bidx(i, j)] = br_ij;

            // Right edge L_{i+1,j}.
            if let Some(f) = grid.lf(i + 1, j) {
                if br_ij.is_some() {
                    merge_entry(&mut l_entry[lidx(i + 1, j)], f.a);
                } else if let Some(l) = lr_ij {
                    if l.a <= f.b + PARAM_TOL {
                        merge_entry(&mut l_entry[lidx(i + 1, j)], l.a.max(f.a));
                    }
                }
            }
            // Top edge B_{i,j+1}.
            if let Some(f) = grid.bf(i, j + 1) {
                if lr_ij.is_some() {
                    merge_entry(&mut b_entry[bidx(i, j + 1)], f.a);
                } else if let Some(b) = br_ij {
                    if b.a <= f.b + PARAM_TOL {
                        merge_entry(&mut b_entry[bidx(i, j + 1)], b.a.max(f.a));
                    }
                }
            }
        }
    }
    // Materialize the virtual row and column.
    for j in 1..=m {
        lr[lidx(n + 1, j)] = l_entry[lidx(n + 1, j)].and_then(|lo| {
            grid.lf(n + 1, j).and_then(|f| Interval::new(lo.max(f.a), f.b))
        });
    }
    for i in 1..=n {
        br[bidx(i, m + 1)] = b_entry[bidx(i, m + 1)].and_then(|lo| {
            grid.bf(i, m + 1).and_then(|f| Interval::new(lo.max(f.a), f.b))
        });
    }
    ReachTable { n, m, lr, br }
}

/// Decides whether `distF(P, Q) <= eps`.
pub fn decide_frechet(p: &Polyline, q: &Polyline, eps: f64) -> bool {
    let grid = build_cell_intervals(p, q, eps);
    reach_table(&grid, &ReachSeeds::origin()).target_reached()
}

fn push_dedup(values: &mut Vec<CriticalValue>, cv: CriticalValue) {
    values.push(cv);
}

/// All critical values of the classical problem: the two endpoint distances
/// (A), all vertex-edge distances (B), and all bisector-edge events (C),
/// sorted ascending with near-duplicates merged.
pub fn critical_values_classic(p: &Polyline, q: &Polyline) -> Vec<CriticalValue> {
    let mut values = Vec::new();
    let pn = p.num_segments();
    let qm = q.num_segments();
    values.push(CriticalValue {
        value: p.vertex(0).dist(q.vertex(0)),
        kind: CriticalKind::A,
        witness: Witness::Endpoints { start: true },
    });
    values.push(CriticalValue {
        value: p.vertex(pn).dist(q.vertex(qm)),
        kind: CriticalKind::A,
        witness: Witness::Endpoints { start: false },
    });

    let mut type_b = |verts: &Polyline, edges: &Polyline, p_side: bool| {
        for (vi, v) in verts.vertices().iter().enumerate() {
            for e in 1..=edges.num_segments().max(1) {
                let (a, b) = if edges.num_segments() == 0 {
                    (edges.vertex(0), edges.vertex(0))
                } else {
                    (edges.vertex(e - 1), edges.vertex(e))
                };
                push_dedup(
                    &mut values,
                    CriticalValue {
                        value: point_segment_dist(v, a, b),
                        kind: CriticalKind::B,
                        witness: Witness::VertexEdge { p_side, vertex: vi, edge: e },
                    },
                );
            }
        }
    };
    type_b(p, q, true);
    type_b(q, p, false);

    let mut type_c = |verts: &Polyline, edges: &Polyline, p_side: bool| {
        let vs = verts.vertices();
        for v1 in 0..vs.len() {
            for v2 in (v1 + 1)..vs.len() {
                for e in 1..=edges.num_segments() {
                    let a = edges.vertex(e - 1);
                    let b = edges.vertex(e);
                    if let Some(value) = crate::geometry::bisector_edge_value(&vs[v1], &vs[v2], a, b) {
                        push_dedup(
                            &mut values,
                            CriticalValue {
                                value,
                                kind: CriticalKind::C,
                                witness: Witness::Bisector { p_side, v1, v2, edge: e },
                            },
                        );
                    }
                }
            }
        }
    };
    type_c(p, q, true);
    type_c(q, p, false);

    values.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    values.dedup_by(|a, b| (a.value - b.value).abs() <= 1e-12 * a.value.abs().max(1.0));
    values
}

/// Binary search over a sorted candidate list with a monotone decision
/// procedure; returns the smallest accepted candidate (with its index).
pub(crate) fn search_criticals(values: &[f64], mut decide: impl FnMut(f64) -> bool) -> Option<(usize, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut lo = 0usize;
    let mut hi = values.len() - 1;
    if !decide(values[hi]) {
        return None;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if decide(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some((lo, values[lo]))
}

/// The exact Fréchet distance: smallest critical value accepted by the
/// decision procedure.
pub fn compute_frechet(p: &Polyline, q: &Polyline) -> f64 {
    compute_frechet_with_kind(p, q).0
}

/// Like [`compute_frechet`] but also reports the achieving critical value.
pub fn compute_frechet_with_kind(p: &Polyline, q: &Polyline) -> (f64, CriticalValue) {
    let criticals = critical_values_classic(p, q);
    let vals: Vec<f64> = criticals.iter().map(|c| c.value).collect();
    match search_criticals(&vals, |eps| decide_frechet(p, q, eps)) {
        Some((idx, v)) => (v, criticals[idx]),
        None => {
            // The optimum is always a critical value; reaching this branch
            // means floating point has perturbed the candidate list. Fall
            // back to a bisection polish from the largest candidate upward.
            let mut hi = vals.last().copied().unwrap_or(1.0).max(1e-9);
            while !decide_frechet(p, q, hi) {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if decide_frechet(p, q, mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (hi, *criticals.last().unwrap())
        }
    }
}

/// Discrete Fréchet distance: coupling DP over vertex pairs.
pub fn discrete_frechet(p: &Polyline, q: &Polyline) -> f64 {
    let pv = p.vertices();
    let qv = q.vertices();
    let n = pv.len();
    let m = qv.len();
    let mut prev = vec![0.0f64; m];
    let mut curr = vec![0.0f64; m];
    for j in 0..m {
        let d = pv[0].dist(&qv[j]);
        prev[j] = if j == 0 { d } else { prev[j - 1].max(d) };
    }
    for i in 1..n {
        for j in 0..m {
            let d = pv[i].dist(&qv[j]);
            let best = if j == 0 {
                prev[0]
            } else {
                prev[j].min(curr[j - 1]).min(prev[j - 1])
            };
            curr[j] = best.max(d);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[m - 1]
}

/// Cell-adjacency graph of the weak (non-monotone) decision problem.
/// Nodes: one per cell, plus `s` and `t`. Each edge carries the squared
/// minimal eps opening that passage.
struct WeakGraph {
    n: usize,
    m: usize,
    /// (node_a, node_b, weight_squared)
    edges: Vec<(usize, usize, f64)>,
}

impl WeakGraph {
    fn node(&self, i: usize, j: usize) -> usize {
        (i - 1) + (j - 1) * self.n
    }

    fn s(&self) -> usize {
        self.n * self.m
    }

    fn t(&self) -> usize {
        self.n * self.m + 1
    }

    fn build(p: &Polyline, q: &Polyline) -> WeakGraph {
        let n = p.num_segments().max(1);
        let m = q.num_segments().max(1);
        let mut g = WeakGraph { n, m, edges: Vec::new() };
        let pseg = |i: usize| {
            if p.num_segments() == 0 {
                (p.vertex(0), p.vertex(0))
            } else {
                (p.vertex(i - 1), p.vertex(i))
            }
        };
        let qseg = |j: usize| {
            if q.num_segments() == 0 {
                (q.vertex(0), q.vertex(0))
            } else {
                (q.vertex(j - 1), q.vertex(j))
            }
        };
        let s_node = g.s();
        let t_node = g.t();
        g.edges.push((s_node, g.node(1, 1), p.vertex(0).dist_sq(q.vertex(0))));
        g.edges.push((
            t_node,
            g.node(n, m),
            p.vertex(p.num_segments()).dist_sq(q.vertex(q.num_segments())),
        ));
        for j in 1..=m {
            let (qa, qb) = qseg(j);
            for i in 1..n {
                // Passage between cell (i,j) and (i+1,j): vertex P(i) vs Q_j.
                let w = point_segment_dist_sq(p.vertex(i), qa, qb);
                g.edges.push((g.node(i, j), g.node(i + 1, j), w));
            }
        }
        for i in 1..=n {
            let (pa, pb) = pseg(i);
            for j in 1..m {
                let w = point_segment_dist_sq(q.vertex(j), pa, pb);
                g.edges.push((g.node(i, j), g.node(i, j + 1), w));
            }
        }
        g
    }

    fn connected(&self, eps_sq: f64) -> bool {
        let mut dsu: Vec<usize> = (0..self.n * self.m + 2).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while dsu[r] != r {
                r = dsu[r];
            }
            let mut c = x;
            while dsu[c] != r {
                let nx = dsu[c];
                dsu[c] = r;
                c = nx;
            }
            r
        }
        for &(a, b, w) in &self.edges {
            if w <= eps_sq + SQ_TOL {
                let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
                dsu[ra] = rb;
            }
        }
        find(&mut dsu, self.s()) == find(&mut dsu, self.t())
    }
}

/// Decides whether the weak (non-monotone) Fréchet distance is at most `eps`.
pub fn decide_weak_frechet(p: &Polyline, q: &Polyline, eps: f64) -> bool {
    WeakGraph::build(p, q).connected(eps * eps)
}

/// Exact weak Fréchet distance: the bottleneck (minimax-edge) s-t path value,
/// found by binary search over distinct edge weights with union-find
/// connectivity.
pub fn compute_weak_frechet(p: &Polyline, q: &Polyline) -> f64 {
    let g = WeakGraph::build(p, q);
    let mut weights: Vec<f64> = g.edges.iter().map(|e| e.2).collect();
    weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    weights.dedup();
    match search_criticals(&weights, |w| g.connected(w)) {
        Some((_, w)) => w.sqrt(),
        None => f64::INFINITY,
    }
}

/// Longest edge length over both curves; bounds the discrete/continuous gap.
pub fn longest_edge(p: &Polyline, q: &Polyline) -> f64 {
    let mut best = 0.0f64;
    for c in [p, q] {
        for i in 1..=c.num_segments() {
            best = best.max(c.segment(i).len());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(pts: &[(f64, f64)]) -> Polyline {
        Polyline::from_xy(pts).unwrap()
    }

    #[test]
    fn decide_identity() {
        let p = curve(&[(0.0, 0.0), (1.0, 2.0), (3.0, 1.0)]);
        assert!(decide_frechet(&p, &p, 0.0));
    }

    #[test]
    fn decide_parallel_segments() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (1.0, 1.0)]);
        assert!(decide_frechet(&p, &q, 1.0));
        assert!(!decide_frechet(&p, &q, 0.99));
    }

    #[test]
    fn criticals_shared_endpoints() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let crits = critical_values_classic(&p, &p);
        assert!(crits[0].value.abs() < 1e-12);
        let a: Vec<_> = crits.iter().filter(|c| c.kind == CriticalKind::A).collect();
        assert!(!a.is_empty());
    }

    #[test]
    fn compute_identity_and_parallel() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.5, 0.5)]);
        assert_eq!(compute_frechet(&p, &p), 0.0);
        let a = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = curve(&[(0.0, 1.0), (1.0, 1.0)]);
        assert!((compute_frechet(&a, &b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discrete_basics() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(discrete_frechet(&p, &p), 0.0);
        assert!((discrete_frechet(&p, &q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weak_identity_and_bound() {
        let p = curve(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(compute_weak_frechet(&p, &p), 0.0);
        let q = curve(&[(0.0, 0.5), (2.0, 0.5)]);
        assert!(compute_weak_frechet(&p, &q) <= compute_frechet(&p, &q) + 1e-12);
    }

    #[test]
    fn single_vertex_curves() {
        let p = curve(&[(0.0, 0.0)]);
        let q = curve(&[(3.0, 4.0)]);
        assert!(decide_frechet(&p, &q, 5.0));
        assert!(!decide_frechet(&p, &q, 4.9));
        assert!((compute_frechet(&p, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn reach_contained_in_feasible() {
        let p = curve(&[(0.0, 0.0), (2.0, 1.0), (4.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (2.0, 2.0), (4.0, 1.0)]);
        let eps = 1.7;
        let grid = build_cell_intervals(&p, &q, eps);
        let table = reach_table(&grid, &ReachSeeds::origin());
        for i in 1..=table.n {
            for j in 1..=table.m {
                if let Some(r) = table.lr(i, j) {
                    let f = grid.lf(i, j).unwrap();
                    assert!(f.a <= r.a + 1e-12 && r.b <= f.b + 1e-12);
                }
                if let Some(r) = table.br(i, j) {
                    let f = grid.bf(i, j).unwrap();
                    assert!(f.a <= r.a + 1e-12 && r.b <= f.b + 1e-12);
                }
            }
        }
    }

    #[test]
    fn zigzag_needs_backtrack_weak_lower() {
        // A spike that a monotone traversal must pay for, but a weak one can
        // partially dodge.
        let p = curve(&[(0.0, 0.0), (4.0, 0.0)]);
        let q = curve(&[(0.0, 0.0), (2.0, 2.0), (2.0, -1.0), (4.0, 0.0)]);
        let strong = compute_frechet(&p, &q);
        let weak = compute_weak_frechet(&p, &q);
        assert!(weak <= strong + 1e-12);
    }

    #[test]
    fn point_near_endpoint_distance() {
        // compute on a one-point pointset style degenerate Q.
        let p = curve(&[(0.0, 0.0), (2.0, 0.0)]);
        let q = curve(&[(1.0, 1.0)]);
        // Constant curve: distance = max over P of d(p, (1,1)) = sqrt(2).
        assert!((compute_frechet(&p, &q) - 2f64.sqrt()).abs() < 1e-9);
    }
}
