//! The improved speed-constrained decision algorithm: reachable intervals are
//! kept in ordered dictionaries per cell edge, interior interval coordinates
//! are materialized lazily from their boundary ancestors, and each cell is
//! processed with a constant number of dictionary operations plus the
//! intervals it deletes.

use std::collections::BTreeSet;

use super::seq::{IntervalSeq, Rec};
use super::{
    arc_intersect, exit_feasible_arcs, exit_first, exit_last, merge_chain_arcs, slope_bounds, Dp,
    EdgeId, ProjDir, SpeedProfile, SpeedReach, TravelTimeTables,
};
use crate::geometry::{build_cell_intervals, Polyline, SQ_TOL};

struct Ctx<'a> {
    tables: TravelTimeTables,
    p_prof: &'a SpeedProfile,
    q_prof: &'a SpeedProfile,
}

impl Ctx<'_> {
    fn bounds(&self, i: usize, j: usize) -> (f64, f64) {
        slope_bounds(self.p_prof, self.q_prof, i, j)
    }

    /// Endpoints of `rec` interpreted on the exit side of cell (i, j).
    fn mat_exit(&self, rec: &Rec, i: usize, j: usize) -> (Dp, Dp) {
        let bounds = self.bounds(i, j);
        match rec.home {
            EdgeId::L { i: hi, j: hj } | EdgeId::B { i: hi, j: hj } if hi == i && hj == j => {
                // Boundary interval on this cell's entry side: one geometric
                // projection step.
                (
                    exit_first(rec.left, i, j, bounds.1),
                    exit_last(rec.right, i, j, bounds.0),
                )
            }
            _ => (
                self.tables.chain_exit(rec.left, i, j, ProjDir::Max, bounds),
                self.tables.chain_exit(rec.right, i, j, ProjDir::Min, bounds),
            ),
        }
    }

    /// Endpoints of `rec` interpreted on edge `edge` (its current row/column).
    fn mat_edge(&self, rec: &Rec, edge: EdgeId) -> (Dp, Dp) {
        if rec.home == edge {
            return (rec.left, rec.right);
        }
        match edge {
            EdgeId::L { i, j } => {
                debug_assert!(i >= 2, "interior interval on a boundary edge");
                let bounds = self.bounds(i - 1, j);
                (
                    self.tables.chain_exit(rec.left, i - 1, j, ProjDir::Max, bounds),
                    self.tables.chain_exit(rec.right, i - 1, j, ProjDir::Min, bounds),
                )
            }
            EdgeId::B { i, j } => {
                debug_assert!(j >= 2, "interior interval on a boundary edge");
                let bounds = self.bounds(i, j - 1);
                (
                    self.tables.chain_exit(rec.left, i, j - 1, ProjDir::Max, bounds),
                    self.tables.chain_exit(rec.right, i, j - 1, ProjDir::Min, bounds),
                )
            }
        }
    }
}

fn contained(arc: (Dp, Dp), feas: Option<(Dp, Dp)>) -> bool {
    match feas {
        Some(f) => f.0.before_eq(arc.0) && arc.1.before_eq(f.1),
        None => false,
    }
}

struct Trees {
    n: usize,
    lt: Vec<Option<IntervalSeq>>,
    bt: Vec<Option<IntervalSeq>>,
}

impl Trees {
    fn new(n: usize, m: usize) -> Trees {
        Trees {
            n,
            lt: (0..(n + 1) * m).map(|_| Some(IntervalSeq::new())).collect(),
            bt: (0..n * (m + 1)).map(|_| Some(IntervalSeq::new())).collect(),
        }
    }

    fn take_l(&mut self, i: usize, j: usize) -> IntervalSeq {
        self.lt[(i - 1) + (j - 1) * (self.n + 1)].take().unwrap()
    }

    fn take_b(&mut self, i: usize, j: usize) -> IntervalSeq {
        self.bt[(i - 1) + (j - 1) * self.n].take().unwrap()
    }

    fn put_l(&mut self, i: usize, j: usize, t: IntervalSeq) {
        self.lt[(i - 1) + (j - 1) * (self.n + 1)] = Some(t);
    }

    fn put_b(&mut self, i: usize, j: usize, t: IntervalSeq) {
        self.bt[(i - 1) + (j - 1) * self.n] = Some(t);
    }
}

fn run_fast(
    p: &Polyline,
    q: &Polyline,
    p_prof: &SpeedProfile,
    q_prof: &SpeedProfile,
    eps: f64,
    mut collect: Option<&mut SpeedReach>,
) -> bool {
    let grid = build_cell_intervals(p, q, eps);
    let (n, m) = (grid.n, grid.m);
    let ctx = Ctx { tables: TravelTimeTables::new(p_prof, q_prof), p_prof, q_prof };
    let mut trees = Trees::new(n, m);

    if p.vertex(0).dist_sq(q.vertex(0)) <= eps * eps + SQ_TOL {
        let mut seed = trees.take_l(1, 1);
        let origin = Dp::new(0.0, 0.0);
        seed.insert_at(0, Rec { left: origin, right: origin, home: EdgeId::L { i: 1, j: 1 } });
        if let Some(r) = collect.as_deref_mut() {
            r.lr_mut(1, 1).push((origin, origin));
        }
        trees.put_l(1, 1, seed);
    }

    for i in 1..=n {
        for j in 1..=m {
            let lt = trees.take_l(i, j);
            let bt = trees.take_b(i, j);
            let mut t = lt.join(bt);
            let (top_feas, right_feas) = exit_feasible_arcs(&grid, i, j);
            let corner = Dp::new(i as f64, j as f64);

            // Locate S: intervals not fully contained in a feasible exit
            // interval. They form at most three contiguous runs.
            let inside = |rec: &Rec| {
                let arc = ctx.mat_exit(rec, i, j);
                contained(arc, top_feas) || contained(arc, right_feas)
            };
            let len = t.len();
            let mut s_idx: BTreeSet<usize> = BTreeSet::new();
            let mut k = 0;
            while k < len && !inside(t.get(k)) {
                s_idx.insert(k);
                k += 1;
            }
            let mut k = len;
            while k > 0 && !s_idx.contains(&(k - 1)) && !inside(t.get(k - 1)) {
                s_idx.insert(k - 1);
                k -= 1;
            }
            let c = t.partition_point(|rec| ctx.mat_exit(rec, i, j).0.before(corner));
            let mut k = c;
            while k < len && !s_idx.contains(&k) && !inside(t.get(k)) {
                s_idx.insert(k);
                k += 1;
            }
            let mut k = c;
            while k > 0 && !s_idx.contains(&(k - 1)) && !inside(t.get(k - 1)) {
                s_idx.insert(k - 1);
                k -= 1;
            }

            // union(S) on the exit chain, then delete S from the dictionary.
            let mut union_s: Vec<(Dp, Dp)> =
                s_idx.iter().map(|&k| ctx.mat_exit(t.get(k), i, j)).collect();
            merge_chain_arcs(&mut union_s);
            for &k in s_idx.iter().rev() {
                t.remove_at(k);
            }

            // Split at the corner into the two exit edges.
            let split_pos = t.partition_point(|rec| ctx.mat_exit(rec, i, j).0.before(corner));
            let (mut bt_next, mut lt_next) = t.split_at(split_pos);

            // Insert the boundary intervals.
            let b_edge = EdgeId::B { i, j: j + 1 };
            let l_edge = EdgeId::L { i: i + 1, j };
            for &arc in &union_s {
                if let Some(piece) = top_feas.and_then(|f| arc_intersect(arc, f)) {
                    let pos = bt_next
                        .partition_point(|rec| ctx.mat_edge(rec, b_edge).0.before(piece.0));
                    bt_next.insert_at(pos, Rec { left: piece.0, right: piece.1, home: b_edge });
                }
                if let Some(piece) = right_feas.and_then(|f| arc_intersect(arc, f)) {
                    let pos = lt_next
                        .partition_point(|rec| ctx.mat_edge(rec, l_edge).0.before(piece.0));
                    lt_next.insert_at(pos, Rec { left: piece.0, right: piece.1, home: l_edge });
                }
            }

            if let Some(r) = collect.as_deref_mut() {
                for rec in bt_next.iter() {
                    r.br_mut(i, j + 1).push(ctx.mat_edge(rec, b_edge));
                }
                for rec in lt_next.iter() {
                    r.lr_mut(i + 1, j).push(ctx.mat_edge(rec, l_edge));
                }
            }
            trees.put_b(i, j + 1, bt_next);
            trees.put_l(i + 1, j, lt_next);
        }
    }

    let target = Dp::new(n as f64, m as f64);
    let tol = 1e-12;
    let final_l = trees.take_l(n + 1, m);
    let l_hit = final_l.iter().any(|rec| {
        let (l, r) = ctx.mat_edge(rec, EdgeId::L { i: n + 1, j: m });
        l.y >= target.y - tol && r.y <= target.y + tol || l.before_eq(target) && target.before_eq(r)
    });
    let final_b = trees.take_b(n, m + 1);
    let b_hit = final_b.iter().any(|rec| {
        let (l, r) = ctx.mat_edge(rec, EdgeId::B { i: n, j: m + 1 });
        l.before_eq(target) && target.before_eq(r)
    });
    l_hit || b_hit
}

/// Decides whether the speed-constrained Fréchet distance is at most `eps`,
/// in O(n^2 log n) time.
pub fn decide_speed_fast(
    p: &Polyline,
    q: &Polyline,
    p_prof: &SpeedProfile,
    q_prof: &SpeedProfile,
    eps: f64,
) -> bool {
    run_fast(p, q, p_prof, q_prof, eps, None)
}

/// Runs the fast algorithm collecting the materialized interval coordinates
/// per edge, for cross-checking against the eager propagation.
pub fn speed_reach_fast(
    p: &Polyline,
    q: &Polyline,
    p_prof: &SpeedProfile,
    q_prof: &SpeedProfile,
    eps: f64,
) -> (bool, SpeedReach) {
    let n = p.num_segments().max(1);
    let m = q.num_segments().max(1);
    let mut reach = SpeedReach::empty(n, m);
    let hit = run_fast(p, q, p_prof, q_prof, eps, Some(&mut reach));
    (hit, reach)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(pts: &[(f64, f64)]) -> Polyline {
        Polyline::from_xy(pts).unwrap()
    }

    #[test]
    fn fast_matches_simple_on_basics() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.5), (2.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (2.0, 1.0)]);
        let pp = SpeedProfile::unconstrained(&p);
        let qp = SpeedProfile::unconstrained(&q);
        for eps in [0.3, 0.9, 1.0, 1.1, 2.0] {
            assert_eq!(
                decide_speed_fast(&p, &q, &pp, &qp, eps),
                super::super::decide_speed_simple(&p, &q, &pp, &qp, eps),
                "eps={eps}"
            );
        }
    }

    #[test]
    fn fast_lockstep() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let pp = SpeedProfile::new(&p, vec![(1.0, 1.0); 2]).unwrap();
        assert!(decide_speed_fast(&p, &p, &pp, &pp, 0.0));
    }

    #[test]
    fn fast_tight_band() {
        let p = curve(&[(0.0, 0.0), (4.0, 0.0)]);
        let q = curve(&[(0.0, 0.5), (4.0, 0.5)]);
        let pp = SpeedProfile::new(&p, vec![(4.0, 4.0)]).unwrap();
        let qp = SpeedProfile::new(&q, vec![(1.0, 1.0)]).unwrap();
        assert!(!decide_speed_fast(&p, &q, &pp, &qp, 0.6));
        let qp2 = SpeedProfile::new(&q, vec![(4.0, 4.0)]).unwrap();
        assert!(decide_speed_fast(&p, &q, &pp, &qp2, 0.6));
    }
}
