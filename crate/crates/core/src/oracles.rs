//! Deliberately slow brute-force reference implementations.
//!
//! These are correctness anchors for the main algorithms. They discretize the
//! parameter rectangle, so they are only trustworthy when eps is separated
//! from every critical value by a margin the caller guarantees.

use crate::classic::decide_frechet;
use crate::geometry::{Point, Polyline};
use crate::speed::SpeedProfile;

/// Boolean feasibility samples over the parameter rectangle at resolution
/// `r` samples per unit.
pub struct SampledFreeSpace {
    pub r: usize,
    pub width: usize,
    pub height: usize,
    pub feasible: Vec<bool>,
}

impl SampledFreeSpace {
    pub fn build(p: &Polyline, q: &Polyline, eps: f64, r: usize) -> SampledFreeSpace {
        let n = p.num_segments().max(1);
        let m = q.num_segments().max(1);
        let width = n * r + 1;
        let height = m * r + 1;
        let eps_sq = eps * eps;
        let p_samples: Vec<Point> = (0..width).map(|a| p.at(a as f64 / r as f64)).collect();
        let q_samples: Vec<Point> = (0..height).map(|b| q.at(b as f64 / r as f64)).collect();
        let mut feasible = vec![false; width * height];
        for b in 0..height {
            for a in 0..width {
                feasible[a + b * width] = p_samples[a].dist_sq(&q_samples[b]) <= eps_sq;
            }
        }
        SampledFreeSpace { r, width, height, feasible }
    }

    pub fn at(&self, a: usize, b: usize) -> bool {
        self.feasible[a + b * self.width]
    }
}

/// BFS over feasible samples from (0,0) to (n,m). With `monotone` set, moves
/// are restricted to {+x, +y, +x+y}; otherwise all 8 neighbours are allowed.
pub fn grid_bfs_decide(p: &Polyline, q: &Polyline, eps: f64, r: usize, monotone: bool) -> bool {
    assert!(r >= 8, "resolution too coarse for the BFS oracle");
    let fs = SampledFreeSpace::build(p, q, eps, r);
    grid_bfs_on(&fs, monotone)
}

fn grid_bfs_on(fs: &SampledFreeSpace, monotone: bool) -> bool {
    let (w, h) = (fs.width, fs.height);
    if !fs.at(0, 0) || !fs.at(w - 1, h - 1) {
        return false;
    }
    let mut seen = vec![false; w * h];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back((0usize, 0usize));
    let moves_monotone: &[(isize, isize)] = &[(1, 0), (0, 1), (1, 1)];
    let moves_free: &[(isize, isize)] = &[
        (1, 0),
        (0, 1),
        (1, 1),
        (-1, 0),
        (0, -1),
        (-1, -1),
        (1, -1),
        (-1, 1),
    ];
    let moves = if monotone { moves_monotone } else { moves_free };
    while let Some((a, b)) = queue.pop_front() {
        if a == w - 1 && b == h - 1 {
            return true;
        }
        for &(dx, dy) in moves {
            let na = a as isize + dx;
            let nb = b as isize + dy;
            if na < 0 || nb < 0 || na as usize >= w || nb as usize >= h {
                continue;
            }
            let (na, nb) = (na as usize, nb as usize);
            if !seen[na + nb * w] && fs.at(na, nb) {
                seen[na + nb * w] = true;
                queue.push_back((na, nb));
            }
        }
    }
    false
}

/// Per-point reachability of every sample from (0,0) under monotone moves.
pub fn grid_reachability(fs: &SampledFreeSpace) -> Vec<bool> {
    let (w, h) = (fs.width, fs.height);
    let mut reach = vec![false; w * h];
    if !fs.at(0, 0) {
        return reach;
    }
    reach[0] = true;
    for b in 0..h {
        for a in 0..w {
            if reach[a + b * w] || !fs.at(a, b) {
                continue;
            }
            let from_left = a > 0 && reach[(a - 1) + b * w];
            let from_below = b > 0 && reach[a + (b - 1) * w];
            let from_diag = a > 0 && b > 0 && reach[(a - 1) + (b - 1) * w];
            reach[a + b * w] = from_left || from_below || from_diag;
        }
    }
    reach
}

/// Monotone reachability between arbitrary sample sets: every sample reachable
/// from any seed sample.
pub fn grid_reachability_from(fs: &SampledFreeSpace, seeds: &[(usize, usize)]) -> Vec<bool> {
    let (w, h) = (fs.width, fs.height);
    let mut reach = vec![false; w * h];
    for &(a, b) in seeds {
        if fs.at(a, b) {
            reach[a + b * w] = true;
        }
    }
    for b in 0..h {
        for a in 0..w {
            if reach[a + b * w] || !fs.at(a, b) {
                continue;
            }
            let from_left = a > 0 && reach[(a - 1) + b * w];
            let from_below = b > 0 && reach[a + (b - 1) * w];
            let from_diag = a > 0 && b > 0 && reach[(a - 1) + (b - 1) * w];
            reach[a + b * w] = from_left || from_below || from_diag;
        }
    }
    reach
}

/// Discretized slope-constrained decision. The per-cell slope cones are
/// widened (`slack` = +1) or tightened (`slack` = -1) by roughly one sample
/// step so that loose and tight runs bracket the exact answer.
pub fn slope_grid_decide(
    p: &Polyline,
    q: &Polyline,
    p_profile: &SpeedProfile,
    q_profile: &SpeedProfile,
    eps: f64,
    r: usize,
    slack: i32,
) -> bool {
    assert!(r >= 16, "resolution too coarse for the slope oracle");
    let n = p.num_segments().max(1);
    let m = q.num_segments().max(1);
    let pad_eps = slack as f64 * longest_step(p, q, r);
    let fs = SampledFreeSpace::build(p, q, (eps + pad_eps).max(0.0), r);
    let (w, h) = (fs.width, fs.height);
    if !fs.at(0, 0) {
        return false;
    }
    let pad_t = slack as f64 * 1.5 / r as f64;
    let mut reach = vec![false; w * h];
    reach[0] = true;
    // March samples in lexicographic order; each reachable feasible sample
    // relaxes the samples inside its (padded) slope cone one cell ahead.
    for b in 0..h {
        for a in 0..w {
            if !reach[a + b * w] {
                continue;
            }
            let x = a as f64 / r as f64;
            let y = b as f64 / r as f64;
            let ci = (x.floor() as usize + 1).min(n);
            let cj = (y.floor() as usize + 1).min(m);
            let (min_s, max_s) = crate::speed::slope_bounds(p_profile, q_profile, ci, cj);
            // Step targets within the current cell.
            for (da, db) in [(1usize, 0usize), (0, 1), (1, 1)] {
                let (na, nb) = (a + da, b + db);
                if na >= w || nb >= h || reach[na + nb * w] || !fs.at(na, nb) {
                    continue;
                }
                let slope = match (da, db) {
                    (1, 0) => 0.0,
                    (0, 1) => f64::INFINITY,
                    _ => 1.0,
                };
                if slope_in_cone(slope, min_s, max_s, pad_t, r) {
                    reach[na + nb * w] = true;
                }
            }
            // Long moves: jump to any sample on the cell's exit lines whose
            // average slope fits the cone. This captures cones narrower than
            // one step.
            let cell_right = (ci * r).min(w - 1);
            let cell_top = (cj * r).min(h - 1);
            for nb in b..=cell_top {
                let na = cell_right;
                if na == a && nb == b {
                    continue;
                }
                relax_jump(&mut reach, &fs, (a, b), (na, nb), min_s, max_s, pad_t, r, w);
            }
            for na in a..=cell_right {
                let nb = cell_top;
                if na == a && nb == b {
                    continue;
                }
                relax_jump(&mut reach, &fs, (a, b), (na, nb), min_s, max_s, pad_t, r, w);
            }
        }
    }
    reach[(w - 1) + (h - 1) * w]
}

#[allow(clippy::too_many_arguments)]
fn relax_jump(
    reach: &mut [bool],
    fs: &SampledFreeSpace,
    from: (usize, usize),
    to: (usize, usize),
    min_s: f64,
    max_s: f64,
    pad: f64,
    r: usize,
    w: usize,
) {
    if reach[to.0 + to.1 * w] || !fs.at(to.0, to.1) {
        return;
    }
    let dx = (to.0 - from.0) as f64;
    let dy = (to.1 - from.1) as f64;
    let slope = if dx == 0.0 { f64::INFINITY } else { dy / dx };
    if slope_in_cone(slope, min_s, max_s, pad, r) {
        reach[to.0 + to.1 * w] = true;
    }
}

fn slope_in_cone(slope: f64, min_s: f64, max_s: f64, pad: f64, r: usize) -> bool {
    // Compare in angle space so infinity behaves.
    let ang = slope.atan();
    let lo = min_s.atan() - pad;
    let hi = max_s.atan() + pad;
    let _ = r;
    ang >= lo && ang <= hi
}

fn longest_step(p: &Polyline, q: &Polyline, r: usize) -> f64 {
    let mut s = 0.0f64;
    for c in [p, q] {
        for i in 1..=c.num_segments() {
            s = s.max(c.segment(i).len());
        }
    }
    2.0 * s / r as f64
}

/// All vertex sequences from `points` with lengths 1..=max_len, streamed to
/// the visitor. With `cover_all` only sequences visiting every point are
/// emitted.
pub fn enumerate_pointset_curves(
    points: &[Point],
    max_len: usize,
    cover_all: bool,
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    assert!(max_len <= 12, "enumeration bound too large");
    let k = points.len();
    let mut seq: Vec<usize> = Vec::new();
    fn rec(
        k: usize,
        max_len: usize,
        cover_all: bool,
        seq: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if !seq.is_empty() {
            let covered = !cover_all || {
                let mut seen = vec![false; k];
                for &i in seq.iter() {
                    seen[i] = true;
                }
                seen.iter().all(|&s| s)
            };
            if covered && !visit(seq) {
                return false;
            }
        }
        if seq.len() == max_len {
            return true;
        }
        for i in 0..k {
            seq.push(i);
            if !rec(k, max_len, cover_all, seq, visit) {
                return false;
            }
            seq.pop();
        }
        true
    }
    rec(k, max_len, cover_all, &mut seq, &mut visit);
}

/// Exhaustive curve-pointset decision: does any curve through `points` of at
/// most `max_len` vertices stay within eps Fréchet distance of `p`?
///
/// Prefixes that cannot match any prefix of `p` are pruned, which keeps the
/// search tractable without consulting the reach-pointer machinery under
/// test.
pub fn cpm_bruteforce_decide(points: &[Point], p: &Polyline, eps: f64, max_len: usize) -> bool {
    let mut found = false;
    let mut seq: Vec<usize> = Vec::new();
    fn viable_prefix(points: &[Point], seq: &[usize], p: &Polyline, eps: f64) -> bool {
        // The prefix must match some prefix of P (monotone, anchored at the
        // start of both curves).
        let q = Polyline::new(seq.iter().map(|&i| points[i].clone()).collect()).unwrap();
        let grid = crate::geometry::build_cell_intervals(p, &q, eps);
        let table = crate::classic::reach_table(&grid, &crate::classic::ReachSeeds::origin());
        // Reachable anywhere on the top row of the (P x Q-prefix) diagram.
        let m = table.m;
        (1..=table.n).any(|i| table.br(i, m + 1).is_some())
            || table.lr(table.n + 1, m).is_some()
    }
    fn rec(
        points: &[Point],
        p: &Polyline,
        eps: f64,
        max_len: usize,
        seq: &mut Vec<usize>,
        found: &mut bool,
    ) {
        if *found || seq.len() == max_len {
            return;
        }
        for i in 0..points.len() {
            seq.push(i);
            if viable_prefix(points, seq, p, eps) {
                let q = Polyline::new(seq.iter().map(|&j| points[j].clone()).collect()).unwrap();
                if decide_frechet(p, &q, eps) {
                    *found = true;
                }
                if !*found {
                    rec(points, p, eps, max_len, seq, found);
                }
            }
            seq.pop();
            if *found {
                return;
            }
        }
    }
    rec(points, p, eps, max_len, &mut seq, &mut found);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_identity() {
        let p = Polyline::from_xy(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert!(grid_bfs_decide(&p, &p, 0.01, 32, true));
    }

    #[test]
    fn bfs_parallel() {
        let p = Polyline::from_xy(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let q = Polyline::from_xy(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(!grid_bfs_decide(&p, &q, 0.5, 32, true));
        assert!(grid_bfs_decide(&p, &q, 1.2, 32, true));
    }

    #[test]
    fn enumeration_counts() {
        let pts = vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)];
        let mut count = 0;
        enumerate_pointset_curves(&pts, 2, false, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 6); // 2 + 4 sequences

        let single = vec![Point::xy(0.0, 0.0)];
        let mut lens = Vec::new();
        enumerate_pointset_curves(&single, 3, false, |s| {
            lens.push(s.len());
            true
        });
        assert_eq!(lens, vec![1, 2, 3]);
    }
}
