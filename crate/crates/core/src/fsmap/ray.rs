//! Vertical ray shooting in a slab with boundary-attached segments, and the
//! topmost/rightmost reachable-segment recurrences built on it.

/// One level of the slab: a left-attached segment `[0, a]` and a
/// right-attached segment `[b, 1]`, with `0 <= a <= b <= 1`. Either may be
/// empty (`a = 0` resp. `b = 1`).
#[derive(Debug, Clone, Copy)]
pub struct Level {
    pub a: f64,
    pub b: f64,
}

/// Target of an up pointer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Up {
    None,
    /// Left-attached segment at this level.
    S(usize),
    /// Right-attached segment at this level.
    T(usize),
}

/// For each left-attached segment `s_i`, the first segment directly above its
/// right endpoint. Deque sweep, O(m) total. Levels are 0-indexed here.
pub fn ray_shoot_up(levels: &[Level]) -> Vec<Up> {
    let m = levels.len();
    let mut up = vec![Up::None; m];
    if m == 0 {
        return up;
    }
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    deque.push_back(0);
    for i in 1..m {
        // Segments covered from above by s_i.
        while let Some(&top) = deque.back() {
            if levels[top].a <= levels[i].a {
                up[top] = Up::S(i);
                deque.pop_back();
            } else {
                break;
            }
        }
        // Segments covered from above by t_i.
        while let Some(&bottom) = deque.front() {
            if levels[bottom].a >= levels[i].b {
                up[bottom] = Up::T(i);
                deque.pop_front();
            } else {
                break;
            }
        }
        deque.push_back(i);
    }
    up
}

/// Naive quadratic version of [`ray_shoot_up`] for cross-checking.
pub fn ray_shoot_up_naive(levels: &[Level]) -> Vec<Up> {
    let m = levels.len();
    let mut up = vec![Up::None; m];
    for i in 0..m {
        let x = levels[i].a;
        for j in (i + 1)..m {
            if levels[j].a >= x {
                up[i] = Up::S(j);
                break;
            }
            if levels[j].b <= x {
                up[i] = Up::T(j);
                break;
            }
        }
    }
    up
}

/// For each left-attached segment, the topmost right-attached segment
/// reachable by a monotone path avoiding all segments. `t_m` (the last
/// level) is the ceiling: segments with nothing above reach it.
pub fn topmost_reachable(levels: &[Level]) -> Vec<usize> {
    let m = levels.len();
    let up = ray_shoot_up(levels);
    let mut top = vec![m - 1; m];
    for i in (0..m).rev() {
        top[i] = match up[i] {
            Up::None => m - 1,
            Up::T(j) => j,
            Up::S(j) => top[j],
        };
    }
    top
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_level_no_up() {
        let up = ray_shoot_up(&[Level { a: 0.4, b: 0.8 }]);
        assert_eq!(up, vec![Up::None]);
    }

    #[test]
    fn nested_staircase_no_up() {
        // s_1 ⊃ s_2 ⊃ ...: nothing above covers a longer segment below.
        let levels: Vec<Level> = (0..6)
            .map(|i| Level { a: 0.9 - 0.1 * i as f64, b: 1.0 })
            .collect();
        let up = ray_shoot_up(&levels);
        assert!(up.iter().all(|&u| u == Up::None));
    }

    #[test]
    fn deque_matches_naive_on_random_slabs() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..1000 {
            let m = rng.gen_range(1..=64);
            let levels: Vec<Level> = (0..m)
                .map(|_| {
                    let a = rng.gen_range(0.0..=1.0f64);
                    let b = rng.gen_range(a..=1.0f64);
                    Level { a, b }
                })
                .collect();
            assert_eq!(ray_shoot_up(&levels), ray_shoot_up_naive(&levels));
        }
    }

    #[test]
    fn topmost_matches_path_existence_bfs() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..300 {
            let m = rng.gen_range(1..=16);
            let levels: Vec<Level> = (0..m)
                .map(|_| {
                    let a = rng.gen_range(0.0..=0.9f64);
                    let b = rng.gen_range((a + 0.02).min(1.0)..=1.0f64);
                    Level { a, b }
                })
                .collect();
            let top = topmost_reachable(&levels);
            for i in 0..m {
                assert_eq!(top[i], topmost_by_bfs(&levels, i), "level {i} in {levels:?}");
            }
        }
    }

    /// Path-existence by a set DP over compressed coordinates: monotone paths
    /// start at Right(s_i), may only slide right between levels, and cross a
    /// level strictly inside its gap. The topmost touchable t-segment is the
    /// last level the alive set survives to (or the ceiling t_m).
    fn topmost_by_bfs(levels: &[Level], start: usize) -> usize {
        let m = levels.len();
        // Representative x values: all endpoints plus midpoints of gaps
        // between them, so that strict interiors are witnessed exactly.
        let mut xs: Vec<f64> = vec![0.0, 1.0];
        for l in levels {
            xs.push(l.a);
            xs.push(l.b);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let mut reps = xs.clone();
        for w in xs.windows(2) {
            reps.push(0.5 * (w[0] + w[1]));
        }
        reps.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut alive: Vec<bool> = reps.iter().map(|&x| x >= levels[start].a).collect();
        let mut last_alive = start;
        for level in (start + 1)..m {
            // Slide right below the level line, then filter by the open gap.
            let mut seen = false;
            let mut next = vec![false; reps.len()];
            for (k, &x) in reps.iter().enumerate() {
                seen = seen || alive[k];
                next[k] = seen && x > levels[level].a && x < levels[level].b;
            }
            alive = next;
            if alive.iter().any(|&v| v) {
                last_alive = level;
            } else {
                break;
            }
        }
        if last_alive == m - 1 || (start == m - 1) {
            return m - 1;
        }
        // Died while crossing level `last_alive + 1`: that level's t-segment
        // is still touchable from below.
        last_alive + 1
    }
}
