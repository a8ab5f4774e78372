//! The free-space map: per-row reachable sets with right pointers and the
//! leftmost-reachable / rightmost-take-off tables, plus the applications
//! built on it (partial curve matching, closed curves, max/min walk, DAG
//! matching).

pub mod dag;
pub mod ray;

use crate::classic::{critical_values_classic, search_criticals};
use crate::error::{Error, Result};
use crate::geometry::{build_cell_intervals, FreeSpaceGrid, Polyline};
use ray::Level;

/// Reachable (or feasible) subsets of one row of the diagram: at most one
/// interval per cell, in global x coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSet {
    pub cells: Vec<Option<(f64, f64)>>,
}

impl RowSet {
    pub fn empty(n: usize) -> RowSet {
        RowSet { cells: vec![None; n] }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_none())
    }

    /// Leftmost covered point at or after `x`.
    pub fn next_point(&self, x: f64) -> Option<f64> {
        let start = (x.floor() as isize).clamp(0, self.cells.len() as isize - 1) as usize;
        for k in start..self.cells.len() {
            if let Some((lo, hi)) = self.cells[k] {
                if hi >= x {
                    return Some(lo.max(x));
                }
            }
        }
        None
    }

    /// Rightmost covered point at or before `x`.
    pub fn prev_point(&self, x: f64) -> Option<f64> {
        let start = (x.ceil() as isize).clamp(1, self.cells.len() as isize) as usize;
        for k in (0..start).rev() {
            if let Some((lo, hi)) = self.cells[k] {
                if lo <= x {
                    return Some(hi.min(x));
                }
            }
        }
        None
    }

    pub fn contains(&self, x: f64) -> bool {
        let k0 = x.floor() as isize;
        for k in [k0 - 1, k0] {
            if k >= 0 && (k as usize) < self.cells.len() {
                if let Some((lo, hi)) = self.cells[k as usize] {
                    if lo <= x && x <= hi {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// One horizontal strip of the diagram between two rows: per-cell feasibility
/// of the top row and the feasible gaps at the internal cell boundaries.
#[derive(Debug, Clone)]
pub struct Strip {
    /// Feasible interval of the top row within each cell, global x.
    pub top: Vec<Option<(f64, f64)>>,
    /// Boundary gap at x = k (k = 1..=n), in local [0,1] units of the strip
    /// height. `Level { a, b }` means the walls `[0,a]` and `[b,1]`.
    pub walls: Vec<Level>,
    /// Boundary entirely infeasible.
    pub severed: Vec<bool>,
}

impl Strip {
    /// The strip between rows j-1 and j of the grid (1 <= j <= m).
    pub fn from_grid(grid: &FreeSpaceGrid, j: usize) -> Strip {
        let n = grid.n;
        let top = (1..=n)
            .map(|k| grid.bf(k, j + 1).map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b)))
            .collect();
        let mut walls = Vec::with_capacity(n);
        let mut severed = Vec::with_capacity(n);
        for k in 1..=n {
            match grid.lf(k + 1, j) {
                Some(iv) => {
                    walls.push(Level { a: iv.a, b: iv.b });
                    severed.push(false);
                }
                None => {
                    walls.push(Level { a: 1.0, b: 1.0 });
                    severed.push(true);
                }
            }
        }
        Strip { top, walls, severed }
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    /// The strip rotated by 180 degrees: cells reverse, walls mirror, and the
    /// `bottom` of the rotated strip is the original top. `span` is the total
    /// width n used to map x to n - x.
    pub fn reversed(&self, bottom: &[Option<(f64, f64)>]) -> Strip {
        let n = self.n() as f64;
        let top: Vec<Option<(f64, f64)>> = bottom
            .iter()
            .rev()
            .map(|c| c.map(|(lo, hi)| (n - hi, n - lo)))
            .collect();
        // Internal boundary k of the rotated strip is original boundary n-k;
        // the original right diagram boundary (k = n) has no rotated
        // counterpart and the rotated boundary n is the original left side,
        // which is fully open only if every crossing is: treat it as open.
        let mut walls = Vec::with_capacity(self.walls.len());
        let mut severed = Vec::with_capacity(self.walls.len());
        for k in 1..=self.walls.len() {
            if k < self.walls.len() {
                let orig = self.walls[self.walls.len() - 1 - k];
                walls.push(Level { a: 1.0 - orig.b, b: 1.0 - orig.a });
                severed.push(self.severed[self.walls.len() - 1 - k]);
            } else {
                walls.push(Level { a: 0.0, b: 1.0 });
                severed.push(false);
            }
        }
        Strip { top, walls, severed }
    }
}

/// Pointers of one source interval into the next row.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointerPair {
    pub lp: Option<f64>,
    pub rp: Option<f64>,
}

/// Propagates a reachable row set through a strip. Returns the reachable set
/// on the strip's top row and, per source cell, the left/right pointers.
pub fn propagate_rowset(prev: &RowSet, strip: &Strip) -> (RowSet, Vec<PointerPair>) {
    let n = strip.n();
    let top_set = RowSet { cells: strip.top.clone() };
    let mut pointers = vec![PointerPair::default(); n];
    let top_levels = ray::topmost_reachable(&strip.walls);
    // First severed boundary at or after k (1-based boundaries).
    let mut next_severed = vec![n; n + 1];
    for k in (0..n).rev() {
        next_severed[k] = if strip.severed[k] { k + 1 } else { next_severed[k + 1] };
    }

    let mut windows: Vec<(f64, f64)> = Vec::new();
    for (kc, cell) in prev.cells.iter().enumerate() {
        let Some(&(lo, _hi)) = cell.as_ref() else { continue };
        // Rightmost boundary the staircase from cell kc+1 survives to.
        let k_stop = (top_levels[kc] + 1).min(next_severed[kc]);
        let rp = top_set.prev_point(k_stop as f64);
        let lp = top_set.next_point(lo);
        match (lp, rp) {
            (Some(l), Some(r)) if l <= r => {
                pointers[kc] = PointerPair { lp: Some(l), rp: Some(r) };
                windows.push((l, r));
            }
            _ => {}
        }
    }

    // Union of [lp, rp] windows intersected with the top feasibility.
    windows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for w in windows {
        if let Some(last) = merged.last_mut() {
            if w.0 <= last.1 {
                last.1 = last.1.max(w.1);
                continue;
            }
        }
        merged.push(w);
    }
    let mut next = RowSet::empty(n);
    let mut wi = 0usize;
    for k in 0..n {
        let Some((flo, fhi)) = strip.top[k] else { continue };
        while wi < merged.len() && merged[wi].1 < flo {
            wi += 1;
        }
        if wi < merged.len() && merged[wi].0 <= fhi {
            let lo = flo.max(merged[wi].0);
            if lo <= fhi {
                next.cells[k] = Some((lo, fhi));
            }
        }
    }
    (next, pointers)
}

/// One row of the free-space map.
#[derive(Debug, Clone)]
struct RowData {
    /// Feasible interval per cell, global x.
    feas: Vec<Option<(f64, f64)>>,
    /// Reachable interval per cell (within feas).
    reach: Vec<Option<(f64, f64)>>,
    /// Pointers of this row's reachable intervals into the next row,
    /// keyed by this row's cell (item ii holds rp; lp kept alongside).
    ptrs_up: Vec<PointerPair>,
    /// Take-off interval per cell: reachable points from which the next row
    /// is reachable (item iv source data).
    takeoff: Vec<Option<(f64, f64)>>,
    /// lp_m pointer per reachable interval of this row (improved payload):
    /// the x on row m, or None when row m is unreachable from it.
    lp_top: Vec<Option<f64>>,
}

/// Compact reachability answers for a query point on row 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryAnswer {
    pub lp: f64,
    pub rp: f64,
}

/// A subinterval of a feasible interval of row 0 over which the improved
/// query answer is constant.
#[derive(Debug, Clone, Copy)]
struct SubInterval {
    x_hi: f64,
    /// lp_m for points in this subinterval; `None` = unreachable.
    lp: Option<f64>,
    /// Row m directly visible: lp_m(u) = u.x.
    direct: bool,
}

/// The free-space map of two curves at a fixed eps.
#[derive(Debug, Clone)]
pub struct FreeSpaceMap {
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    rows: Vec<RowData>,
    /// Improved payload: rp_m per feasible interval (cell) of row 0.
    rp_m0: Vec<Option<f64>>,
    /// Improved payload: subinterval partition per cell of row 0.
    subs: Vec<Vec<SubInterval>>,
    /// Per cell of row 0, the prefix of the feasible interval whose points
    /// reach row m at all: reach within an interval dies at a cutoff, and
    /// the lp/rp payload is only meaningful left of it. Computed as the
    /// mirrored top-row reach of the reversed diagram.
    alive0: Vec<Option<(f64, f64)>>,
}

impl FreeSpaceMap {
    pub fn build(p: &Polyline, q: &Polyline, eps: f64) -> FreeSpaceMap {
        let grid = build_cell_intervals(p, q, eps);
        let (n, m) = (grid.n, grid.m);
        let mut rows: Vec<RowData> = Vec::with_capacity(m + 1);
        // Row 0 feasibility = bf(k, 1).
        let feas0: Vec<Option<(f64, f64)>> = (1..=n)
            .map(|k| grid.bf(k, 1).map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b)))
            .collect();
        rows.push(RowData {
            feas: feas0.clone(),
            reach: feas0,
            ptrs_up: vec![PointerPair::default(); n],
            takeoff: vec![None; n],
            lp_top: vec![None; n],
        });
        for j in 1..=m {
            let strip = Strip::from_grid(&grid, j);
            let prev = RowSet { cells: rows[j - 1].reach.clone() };
            let (next, ptrs) = propagate_rowset(&prev, &strip);
            rows[j - 1].ptrs_up = ptrs;
            rows.push(RowData {
                feas: strip.top.clone(),
                reach: next.cells,
                ptrs_up: vec![PointerPair::default(); n],
                takeoff: vec![None; n],
                lp_top: vec![None; n],
            });
        }
        // Item (iv): take-off sets per row j < m via the reversed strip.
        for j in 0..m {
            let strip = Strip::from_grid(&grid, j + 1);
            let rev = strip.reversed(&rows[j].feas);
            let full_top = RowSet {
                cells: rows[j + 1]
                    .feas
                    .iter()
                    .rev()
                    .map(|c| c.map(|(lo, hi)| (n as f64 - hi, n as f64 - lo)))
                    .collect(),
            };
            let (rev_reach, _) = propagate_rowset(&full_top, &rev);
            // rev_reach is the set of row-j points (mirrored) reachable from
            // row j+1 in the rotated diagram, i.e. the take-off candidates.
            for k in 0..n {
                let Some((rlo, rhi)) = rev_reach.cells[n - 1 - k] else { continue };
                // The mirror arithmetic n - (n - x) does not round-trip in
                // floating point; snap onto the reach endpoints.
                let snap = |v: f64, anchor: f64| if (v - anchor).abs() < 1e-9 { anchor } else { v };
                let (lo, hi) = (n as f64 - rhi, n as f64 - rlo);
                if let Some((qlo, qhi)) = rows[j].reach[k] {
                    let ilo = snap(lo, qlo).max(qlo);
                    let ihi = snap(hi, qhi).min(qhi);
                    if ilo <= ihi {
                        rows[j].takeoff[k] = Some((ilo, ihi));
                    }
                }
            }
        }
        // Alive prefixes on row 0: reach the reversed diagram from its row 0
        // (= original row m) and mirror the final row back.
        let rev_top = reach_rows_final(&reverse_curve(p), &reverse_curve(q), eps);
        let mut alive0: Vec<Option<(f64, f64)>> = vec![None; n];
        for k in 0..n {
            let Some((rlo, rhi)) = rev_top[n - 1 - k] else { continue };
            let snap = |v: f64, anchor: f64| if (v - anchor).abs() < 1e-9 { anchor } else { v };
            let (lo, hi) = (n as f64 - rhi, n as f64 - rlo);
            if let Some((qlo, qhi)) = rows[0].feas[k] {
                let ilo = snap(lo, qlo).max(qlo);
                let ihi = snap(hi, qhi).min(qhi);
                if ilo <= ihi {
                    alive0[k] = Some((ilo, ihi));
                }
            }
        }
        let mut map = FreeSpaceMap {
            n,
            m,
            eps,
            rows,
            rp_m0: vec![None; n],
            subs: vec![Vec::new(); n],
            alive0,
        };
        map.build_improved();
        map
    }

    /// Leftmost reachable point at or after x on row j.
    fn lr(&self, j: usize, x: f64) -> Option<f64> {
        RowSet { cells: self.rows[j].reach.clone() }.next_point(x)
    }

    /// Rightmost take-off point at or before x on row j.
    fn rl(&self, j: usize, x: f64) -> Option<f64> {
        RowSet { cells: self.rows[j].takeoff.clone() }.prev_point(x)
    }

    fn reach_cell_of(&self, j: usize, x: f64) -> Option<usize> {
        let k0 = x.floor() as isize;
        for k in [k0, k0 - 1] {
            if k >= 0 && (k as usize) < self.n {
                if let Some((lo, hi)) = self.rows[j].reach[k as usize] {
                    if lo <= x && x <= hi {
                        return Some(k as usize);
                    }
                }
            }
        }
        None
    }

    /// True when `u` on row 0 is feasible.
    pub fn feasible_on_row0(&self, x: f64) -> bool {
        RowSet { cells: self.rows[0].feas.clone() }.contains(x)
    }

    /// O(m) reachability query: the compact representation of the reachable
    /// set on row m from the feasible point `(x, 0)`.
    pub fn query_walk(&self, x: f64) -> Result<Option<QueryAnswer>> {
        if !self.feasible_on_row0(x) {
            return Err(Error::contract("query point must be feasible on row 0"));
        }
        let mut l = x;
        let mut r = x;
        for j in 1..=self.m {
            let l_next = match self.lr(j, l) {
                Some(v) => v,
                None => return Ok(None),
            };
            let r_prev = match self.rl(j - 1, r) {
                Some(v) if v >= l - 1e-12 => v,
                _ => return Ok(None),
            };
            let cell = match self.reach_cell_of(j - 1, r_prev) {
                Some(c) => c,
                None => return Ok(None),
            };
            let r_next = match self.rows[j - 1].ptrs_up[cell].rp {
                Some(v) => v,
                None => return Ok(None),
            };
            if l_next > r_next {
                return Ok(None);
            }
            l = l_next;
            r = r_next;
        }
        Ok(Some(QueryAnswer { lp: l, rp: r }))
    }

    /// Builds the improved-query payload: per-interval lp_m pointers top-down
    /// with per-column ray shooting; subinterval partitions of row 0; rp_m
    /// per feasible interval of row 0.
    fn build_improved(&mut self) {
        let (n, m) = (self.n, self.m);
        // lp_top for row m: identity.
        for k in 0..n {
            self.rows[m].lp_top[k] = self.rows[m].reach[k].map(|(lo, _)| lo);
        }
        // Obstacle levels per column: rows 1..=m (index 0 = row 1).
        let col_levels: Vec<Vec<Level>> = (0..n)
            .map(|k| {
                (1..=m)
                    .map(|j| match self.rows[j].reach[k] {
                        Some((lo, hi)) => Level { a: lo - k as f64, b: hi - k as f64 },
                        None => Level { a: 1.0, b: 1.0 },
                    })
                    .collect()
            })
            .collect();
        for j in (0..m).rev() {
            for k in 0..n {
                let Some((lo, _hi)) = self.rows[j].reach[k] else { continue };
                self.rows[j].lp_top[k] = self.lp_via_obstacles(&col_levels, j, k, lo);
            }
        }
        // Subinterval partition of each feasible interval on row 0.
        for k in 0..n {
            let Some((flo, fhi)) = self.rows[0].feas[k] else { continue };
            let mut subs: Vec<SubInterval> = Vec::new();
            let mut cur_lo = flo;
            let mut cur_hi = fhi;
            let mut done = false;
            for j in 1..=m {
                if cur_lo > cur_hi {
                    done = true;
                    break;
                }
                let (blo, bhi) = match self.rows[j].reach[k] {
                    Some(v) => v,
                    None => {
                        // Fully blocked row: the rest of the window resolves
                        // through the first reachable point after this row's
                        // obstacle.
                        let lp = self
                            .next_reach_on_row(j, cur_lo)
                            .and_then(|p| self.lp_of_point(j, p));
                        subs.push(SubInterval { x_hi: cur_hi, lp, direct: false });
                        done = true;
                        break;
                    }
                };
                if cur_lo < blo {
                    // Left piece blocked by the left-attached obstacle of row j.
                    let lp = self
                        .next_reach_on_row(j, cur_lo)
                        .and_then(|p| self.lp_of_point(j, p));
                    subs.push(SubInterval { x_hi: blo.min(cur_hi), lp, direct: false });
                    cur_lo = blo;
                    if cur_lo > cur_hi {
                        done = true;
                        break;
                    }
                }
                if cur_hi > bhi {
                    // Right piece blocked by the right-attached obstacle: the
                    // next reachable point lies beyond this cell.
                    let lp = self
                        .next_reach_on_row(j, k as f64 + 1.0)
                        .and_then(|p| self.lp_of_point(j, p));
                    // Right pieces sort after the surviving window; emit later.
                    // Collect them in a side list keyed by low end.
                    subs.push(SubInterval { x_hi: cur_hi, lp, direct: false });
                    // Mark that the surviving window now ends at bhi; the
                    // emitted piece covers (bhi, cur_hi].
                    cur_hi = bhi;
                    // Reorder below.
                }
            }
            if !done && cur_lo <= cur_hi {
                subs.push(SubInterval { x_hi: cur_hi, lp: None, direct: true });
            }
            // The pieces were emitted out of order (right pieces carry higher
            // x ranges); sort by their upper end and rebuild the boundaries.
            subs.sort_by(|a, b| a.x_hi.partial_cmp(&b.x_hi).unwrap());
            self.subs[k] = subs;
        }
        // rp_m per feasible interval of row 0. All points of I that reach
        // row m share one right pointer, and Left(I) reaches whenever any
        // point of I does, so one walk from Left(I) suffices.
        for k in 0..n {
            let Some((flo, _fhi)) = self.rows[0].feas[k] else { continue };
            self.rp_m0[k] = match self.query_walk(flo) {
                Ok(Some(ans)) => Some(ans.rp),
                _ => None,
            };
        }
    }

    /// First reachable point at or after x on row j.
    fn next_reach_on_row(&self, j: usize, x: f64) -> Option<f64> {
        RowSet { cells: self.rows[j].reach.clone() }.next_point(x)
    }

    /// lp_m of a reachable point on row j: the stored pointer of its interval
    /// when the point is the interval's left endpoint, otherwise resolved
    /// through the obstacle structure. Callers only pass left endpoints.
    fn lp_of_point(&self, j: usize, x: f64) -> Option<f64> {
        let cell = self.reach_cell_of(j, x)?;
        self.rows[j].lp_top[cell]
    }

    /// lp_m(Left(I)) for a reachable interval at (row j, cell k) via the
    /// first obstacle above.
    fn lp_via_obstacles(
        &self,
        col_levels: &[Vec<Level>],
        j: usize,
        k: usize,
        left: f64,
    ) -> Option<f64> {
        let m = self.m;
        let local = left - k as f64;
        // First row above j whose reach does not cover `left`.
        let mut blocked_at: Option<usize> = None;
        for jj in (j + 1)..=m {
            let lv = col_levels[k][jj - 1];
            if !(lv.a <= local && local <= lv.b) {
                blocked_at = Some(jj);
                break;
            }
        }
        match blocked_at {
            None => Some(left),
            Some(jj) => {
                let p = self.next_reach_on_row(jj, left)?;
                self.lp_of_point(jj, p)
            }
        }
    }

    /// Improved O(log) query: table lookups over the subinterval partition.
    pub fn query_fast(&self, x: f64) -> Result<Option<QueryAnswer>> {
        if !self.feasible_on_row0(x) {
            return Err(Error::contract("query point must be feasible on row 0"));
        }
        let k0 = x.floor() as isize;
        let mut cell = None;
        for k in [k0, k0 - 1] {
            if k >= 0 && (k as usize) < self.n {
                if let Some((lo, hi)) = self.rows[0].feas[k as usize] {
                    if lo <= x && x <= hi {
                        cell = Some(k as usize);
                        break;
                    }
                }
            }
        }
        let cell = cell.expect("feasible point must lie in a feasible interval");
        match self.alive0[cell] {
            Some((lo, hi)) if lo <= x && x <= hi => {}
            _ => return Ok(None),
        }
        let subs = &self.subs[cell];
        let idx = subs.partition_point(|s| s.x_hi < x);
        let sub = match subs.get(idx.min(subs.len().saturating_sub(1))) {
            Some(s) => s,
            None => return Ok(None),
        };
        let lp = if sub.direct { Some(x) } else { sub.lp };
        match (lp, self.rp_m0[cell]) {
            (Some(l), Some(r)) if l <= r => Ok(Some(QueryAnswer { lp: l, rp: r })),
            _ => Ok(None),
        }
    }

    /// Reachable intervals on row m (the partial-matching witness row).
    pub fn top_row_reach(&self) -> &[Option<(f64, f64)>] {
        &self.rows[self.m].reach
    }

    pub fn row_reach(&self, j: usize) -> &[Option<(f64, f64)>] {
        &self.rows[j].reach
    }

    pub fn row_feas(&self, j: usize) -> &[Option<(f64, f64)>] {
        &self.rows[j].feas
    }

    pub fn row0_feas(&self) -> &[Option<(f64, f64)>] {
        &self.rows[0].feas
    }

    /// rp_m of the feasible interval in cell k of row 0.
    pub fn interval_rp_m(&self, k: usize) -> Option<f64> {
        self.rp_m0[k]
    }


    /// lp_m of the left endpoint of the feasible interval in cell k of row 0.
    pub fn interval_lp_m(&self, k: usize) -> Option<f64> {
        let (flo, _) = self.rows[0].feas[k]?;
        self.alive0[k]?;
        let sub = self.subs[k].first()?;
        if sub.direct {
            Some(flo)
        } else {
            sub.lp
        }
    }

    /// Prefix of the feasible interval in cell k of row 0 whose points reach
    /// row m.
    pub fn interval_alive(&self, k: usize) -> Option<(f64, f64)> {
        self.alive0[k]
    }
}

fn reverse_curve(p: &Polyline) -> Polyline {
    let mut verts: Vec<crate::geometry::Point> = p.vertices().to_vec();
    verts.reverse();
    Polyline::new(verts).unwrap()
}

/// Top-row reachable set of (p, q) at eps, seeded from the whole feasible
/// bottom row; the row-propagation core without any payload.
fn reach_rows_final(p: &Polyline, q: &Polyline, eps: f64) -> Vec<Option<(f64, f64)>> {
    let grid = build_cell_intervals(p, q, eps);
    let (n, m) = (grid.n, grid.m);
    let mut reach = RowSet {
        cells: (1..=n)
            .map(|k| grid.bf(k, 1).map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b)))
            .collect(),
    };
    for j in 1..=m {
        let strip = Strip::from_grid(&grid, j);
        let (next, _) = propagate_rowset(&reach, &strip);
        reach = next;
    }
    reach.cells
}

/// Partial curve matching: is there a subcurve R of P with distF(R, Q) <= eps?
pub fn partial_match_decide(p: &Polyline, q: &Polyline, eps: f64) -> bool {
    let map = FreeSpaceMap::build(p, q, eps);
    map.top_row_reach().iter().any(|c| c.is_some())
}

/// Matched subcurve bounds of P for a partial match, if any: start and end in
/// P's global parameter.
pub fn partial_match_witness(p: &Polyline, q: &Polyline, eps: f64) -> Option<(f64, f64)> {
    let map = FreeSpaceMap::build(p, q, eps);
    for k in 0..map.n {
        if let Some((flo, _)) = map.row0_feas()[k] {
            if let Ok(Some(ans)) = map.query_walk(flo) {
                return Some((flo, ans.lp));
            }
        }
    }
    None
}

/// Smallest eps admitting a partial match, by binary search over the
/// classical critical values.
pub fn partial_match_optimize(p: &Polyline, q: &Polyline) -> f64 {
    let crits = critical_values_classic(p, q);
    let vals: Vec<f64> = crits.iter().map(|c| c.value).collect();
    match search_criticals(&vals, |eps| partial_match_decide(p, q, eps)) {
        Some((_, v)) => v,
        None => f64::INFINITY,
    }
}

fn doubled_open_curve(p: &Polyline) -> Polyline {
    let mut verts = Vec::with_capacity(2 * p.num_segments() + 1);
    for v in p.vertices().iter().take(p.num_segments()) {
        verts.push(v.clone());
    }
    for v in p.vertices() {
        verts.push(v.clone());
    }
    Polyline::new(verts).unwrap()
}

/// Closed-curve Fréchet decision: both curves closed; true iff some shift t
/// admits a monotone path (t, 0) -> (n + t, m) in the doubled diagram.
pub fn closed_frechet_decide(p: &Polyline, q: &Polyline, eps: f64) -> Result<bool> {
    Ok(closed_frechet_shift(p, q, eps)?.is_some())
}

/// As [`closed_frechet_decide`] but returns a witness shift t in [0, n].
pub fn closed_frechet_shift(p: &Polyline, q: &Polyline, eps: f64) -> Result<Option<f64>> {
    if !p.is_closed() || !q.is_closed() {
        return Err(Error::contract("closed Fréchet distance needs closed curves"));
    }
    let n = p.num_segments();
    let p2 = doubled_open_curve(p);
    let map = FreeSpaceMap::build(&p2, q, eps);
    for i in 1..=n {
        let Some((a, b)) = map.row0_feas()[i - 1] else { continue };
        let Some((c, d)) = map.row_feas(map.m)[i + n - 1] else { continue };
        let Some(lp) = map.interval_lp_m(i - 1) else { continue };
        let Some(rp) = map.interval_rp_m(i - 1) else { continue };
        let lo = lp.max(c);
        let hi = rp.min(d);
        // A shift t in [i-1, i] exists iff some start s in [a, b] reaches a
        // point at s + n on row m.
        if lo <= b + n as f64 && hi >= a + n as f64 && lo <= hi {
            let t = (lo - n as f64).max(a).min(b);
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Exact closed-curve Fréchet distance via the doubled diagram's critical
/// values.
pub fn closed_frechet_optimize(p: &Polyline, q: &Polyline) -> Result<f64> {
    if !p.is_closed() || !q.is_closed() {
        return Err(Error::contract("closed Fréchet distance needs closed curves"));
    }
    let p2 = doubled_open_curve(p);
    let crits = critical_values_classic(&p2, q);
    let vals: Vec<f64> = crits.iter().map(|c| c.value).collect();
    match search_criticals(&vals, |eps| closed_frechet_decide(p, q, eps).unwrap()) {
        Some((_, v)) => Ok(v),
        None => Ok(f64::INFINITY),
    }
}

/// A walk result: subcurve bounds in P's parameter space plus arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Walk {
    pub start: f64,
    pub end: f64,
    pub length: f64,
}

/// Maximum-length subcurve R of P with distF(R, Q) <= eps.
pub fn max_walk(p: &Polyline, q: &Polyline, eps: f64) -> Option<Walk> {
    let map = FreeSpaceMap::build(p, q, eps);
    let mut best: Option<Walk> = None;
    for k in 0..map.n {
        let Some((flo, _)) = map.row0_feas()[k] else { continue };
        let Some(lp) = map.interval_lp_m(k) else { continue };
        let Some(rp) = map.interval_rp_m(k) else { continue };
        if lp > rp {
            continue;
        }
        let length = p.arc_length_at(rp) - p.arc_length_at(flo);
        if best.map_or(true, |b| length > b.length) {
            best = Some(Walk { start: flo, end: rp, length });
        }
    }
    best
}

/// Minimum-length subcurve R of P with distF(R, Q) <= eps, scanning the right
/// endpoints of the improved-query subinterval partition.
pub fn min_walk(p: &Polyline, q: &Polyline, eps: f64) -> Option<Walk> {
    let map = FreeSpaceMap::build(p, q, eps);
    let mut best: Option<Walk> = None;
    for k in 0..map.n {
        let Some((flo, _)) = map.row0_feas()[k] else { continue };
        let Some((_, alive_hi)) = map.alive0[k] else { continue };
        let mut span_lo = flo;
        for sub in &map.subs[k] {
            // Rightmost alive start within this subinterval's span.
            let start = sub.x_hi.min(alive_hi);
            let usable = start >= span_lo;
            span_lo = sub.x_hi;
            if !usable {
                continue;
            }
            let end = if sub.direct { Some(start) } else { sub.lp };
            let Some(end) = end else { continue };
            if end < start {
                continue;
            }
            let length = p.arc_length_at(end) - p.arc_length_at(start);
            if best.map_or(true, |b| length < b.length) {
                best = Some(Walk { start, end, length });
            }
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
    fn propagate_empty_stays_empty() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (2.0, 1.0)]);
        let grid = build_cell_intervals(&p, &q, 1.5);
        let strip = Strip::from_grid(&grid, 1);
        let (next, _) = propagate_rowset(&RowSet::empty(2), &strip);
        assert!(next.is_empty());
    }

    #[test]
    fn identity_zero_eps_diagonal() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let map = FreeSpaceMap::build(&p, &p, 1e-9);
        // Each row's reachable set pinches to the diagonal point.
        for j in 0..=map.m {
            let reach: Vec<(f64, f64)> = map.row_reach(j).iter().flatten().copied().collect();
            assert!(!reach.is_empty(), "row {j} unreachable");
            for (lo, hi) in reach {
                assert!(lo <= j as f64 + 1e-6 && hi >= j as f64 - 1e-6);
            }
        }
    }

    #[test]
    fn huge_eps_everything_reachable() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let q = curve(&[(0.0, 1.0), (2.0, 2.0)]);
        let map = FreeSpaceMap::build(&p, &q, 100.0);
        let ans = map.query_walk(0.0).unwrap().unwrap();
        assert!((ans.lp - 0.0).abs() < 1e-9);
        assert!((ans.rp - 2.0).abs() < 1e-9);
        let fast = map.query_fast(0.0).unwrap().unwrap();
        assert_eq!(ans, fast);
    }

    #[test]
    fn partial_match_basics() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let q = curve(&[(1.0, 0.0), (2.0, 0.0)]);
        assert!(partial_match_decide(&p, &q, 1e-9));
        // Start of Q too far from every point of P.
        let q2 = curve(&[(0.0, 5.0), (1.0, 5.0)]);
        assert!(!partial_match_decide(&p, &q2, 1.0));
        let opt = partial_match_optimize(&p, &q);
        assert!(opt.abs() < 1e-9);
    }

    #[test]
    fn closed_concentric_squares() {
        let sq = |half: f64| {
            curve(&[
                (-half, -half),
                (half, -half),
                (half, half),
                (-half, half),
                (-half, -half),
            ])
        };
        let p = sq(1.0);
        let q = sq(2.0);
        assert!(closed_frechet_decide(&p, &p, 1e-9).unwrap());
        // The corner of the outer square forces sqrt(2): values frozen from
        // the scan-over-shifts oracle.
        let d = 2f64.sqrt();
        assert!(closed_frechet_decide(&p, &q, d + 1e-4).unwrap());
        assert!(!closed_frechet_decide(&p, &q, d - 1e-4).unwrap());
        assert!(!closed_frechet_decide(&p, &q, 1.0).unwrap());
        let opt = closed_frechet_optimize(&p, &q).unwrap();
        assert!((opt - d).abs() < 1e-9, "{opt}");
        let open = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(closed_frechet_decide(&open, &p, 1.0).is_err());
    }

    #[test]
    fn walks_on_identity() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let w = max_walk(&p, &p, 1e-9).unwrap();
        assert!((w.length - p.total_length()).abs() < 1e-6);
        let w2 = min_walk(&p, &p, 1e-9).unwrap();
        assert!((w2.length - p.total_length()).abs() < 1e-6);
    }

    #[test]
    fn min_walk_single_point() {
        // Q within eps of a single point of P: the minimum walk degenerates.
        let p = curve(&[(0.0, 0.0), (4.0, 0.0)]);
        let q = curve(&[(2.0, 0.5), (2.0, 1.0), (2.0, 0.5)]);
        let w = min_walk(&p, &q, 1.2).unwrap();
        assert!(w.length.abs() < 1e-9, "{w:?}");
        let wmax = max_walk(&p, &q, 1.2).unwrap();
        assert!(wmax.length > 0.5);
    }
}
