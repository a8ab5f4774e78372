//! Randomized validation of the free-space map: the O(m) walk query, the
//! improved lookup query, and per-point sampled reachability must agree on
//! margin-guarded instances.

use frechet::classic::critical_values_classic;
use frechet::fsmap::FreeSpaceMap;
use frechet::geometry::Polyline;
use frechet::oracles::{grid_reachability_from, SampledFreeSpace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_curve(rng: &mut StdRng, max_segs: usize) -> Polyline {
    let segs = rng.gen_range(1..=max_segs);
    let pts: Vec<(f64, f64)> = (0..=segs)
        .map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
        .collect();
    Polyline::from_xy(&pts).unwrap()
}

fn margin_guarded_eps(p: &Polyline, q: &Polyline, rng: &mut StdRng) -> Option<f64> {
    let mut vals: Vec<f64> = critical_values_classic(p, q).iter().map(|c| c.value).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let gaps: Vec<(f64, f64)> = vals
        .windows(2)
        .filter(|w| w[1] - w[0] > 0.05)
        .map(|w| (w[0], w[1]))
        .collect();
    if gaps.is_empty() {
        return None;
    }
    let (lo, hi) = gaps[rng.gen_range(0..gaps.len())];
    Some(0.5 * (lo + hi))
}

/// Reachability of every sample on the top row from a single start sample on
/// the bottom row, via the monotone grid oracle.
fn oracle_reach_top(fs: &SampledFreeSpace, start_a: usize) -> Vec<bool> {
    let reach = grid_reachability_from(fs, &[(start_a, 0)]);
    let top = fs.height - 1;
    (0..fs.width).map(|a| reach[a + top * fs.width]).collect()
}

#[test]
fn queries_agree_with_each_other_and_with_sampled_bfs() {
    let mut rng = StdRng::seed_from_u64(21);
    let r = 32usize;
    let mut instances = 0;
    while instances < 100 {
        let p = random_curve(&mut rng, 5);
        let q = random_curve(&mut rng, 4);
        let Some(eps) = margin_guarded_eps(&p, &q, &mut rng) else { continue };
        instances += 1;
        let map = FreeSpaceMap::build(&p, &q, eps);
        let fs = SampledFreeSpace::build(&p, &q, eps, r);
        let n = p.num_segments() as f64;
        for probe in 0..20 {
            // Sample a feasible start point on row 0 aligned to the grid.
            let a = ((probe as f64 + 0.5) / 20.0 * (fs.width - 1) as f64).round() as usize;
            let x = a as f64 / r as f64;
            if x > n || !fs.at(a, 0) || !map.feasible_on_row0(x) {
                continue;
            }
            let walk = map.query_walk(x).unwrap();
            let fast = map.query_fast(x).unwrap();
            match (walk, fast) {
                (Some(w), Some(f)) => {
                    assert!(
                        (w.lp - f.lp).abs() < 1e-9 && (w.rp - f.rp).abs() < 1e-9,
                        "walk {w:?} vs fast {f:?} at x={x} eps={eps}"
                    );
                }
                (None, None) => {}
                other => panic!("walk/fast disagree at x={x} eps={eps}: {other:?}"),
            }
            // Compare with per-point sampled reachability.
            let top = oracle_reach_top(&fs, a);
            let reached: Vec<usize> = (0..fs.width).filter(|&k| top[k]).collect();
            match walk {
                None => {
                    assert!(
                        reached.is_empty(),
                        "map says empty, oracle reaches {reached:?} at x={x} eps={eps} p={p:?} q={q:?}"
                    );
                }
                Some(w) => {
                    assert!(!reached.is_empty(), "map nonempty, oracle empty at x={x} eps={eps}");
                    let lo = *reached.first().unwrap() as f64 / r as f64;
                    let hi = *reached.last().unwrap() as f64 / r as f64;
                    let step = 1.5 / r as f64;
                    assert!(
                        (w.lp - lo).abs() < step + 1e-9,
                        "lp {} vs oracle {} at x={x} eps={eps}",
                        w.lp,
                        lo
                    );
                    assert!(
                        (w.rp - hi).abs() < step + 1e-9,
                        "rp {} vs oracle {} at x={x} eps={eps}",
                        w.rp,
                        hi
                    );
                }
            }
        }
    }
}

#[test]
fn row_sets_match_reachability_from_full_bottom_row() {
    let mut rng = StdRng::seed_from_u64(23);
    let r = 32usize;
    let mut instances = 0;
    while instances < 60 {
        let p = random_curve(&mut rng, 5);
        let q = random_curve(&mut rng, 4);
        let Some(eps) = margin_guarded_eps(&p, &q, &mut rng) else { continue };
        instances += 1;
        let map = FreeSpaceMap::build(&p, &q, eps);
        let fs = SampledFreeSpace::build(&p, &q, eps, r);
        // Seed every feasible bottom sample.
        let seeds: Vec<(usize, usize)> = (0..fs.width).filter(|&a| fs.at(a, 0)).map(|a| (a, 0)).collect();
        let reach = grid_reachability_from(&fs, &seeds);
        for j in 0..=q.num_segments().max(1) {
            let b = j * r;
            for a in 0..fs.width {
                let x = a as f64 / r as f64;
                let oracle = reach[a + b * fs.width];
                let mine = map
                    .row_reach(j)
                    .iter()
                    .flatten()
                    .any(|&(lo, hi)| lo - 1e-9 <= x && x <= hi + 1e-9);
                // Near interval endpoints the sampled oracle is off by a step.
                let near_edge = map.row_reach(j).iter().flatten().any(|&(lo, hi)| {
                    (x - lo).abs() <= 1.5 / r as f64 || (x - hi).abs() <= 1.5 / r as f64
                }) || map.row_feas(j).iter().flatten().any(|&(lo, hi)| {
                    (x - lo).abs() <= 1.5 / r as f64 || (x - hi).abs() <= 1.5 / r as f64
                });
                if near_edge {
                    continue;
                }
                assert_eq!(
                    mine, oracle,
                    "row {j} x={x} eps={eps} p={p:?} q={q:?}"
                );
            }
        }
    }
}
