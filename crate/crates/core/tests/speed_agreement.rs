//! Randomized agreement checks between the two speed-constrained decision
//! procedures, the classical decision, and the discretized oracles.

use frechet::classic::{critical_values_classic, decide_frechet};
use frechet::geometry::Polyline;
use frechet::speed::{
    decide_speed_fast, decide_speed_simple, speed_reach_fast, speed_reach_simple, SpeedProfile,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_curve(rng: &mut StdRng, max_segs: usize) -> Polyline {
    let segs = rng.gen_range(1..=max_segs);
    let pts: Vec<(f64, f64)> = (0..=segs)
        .map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
        .collect();
    Polyline::from_xy(&pts).unwrap()
}

fn random_profile(rng: &mut StdRng, curve: &Polyline) -> SpeedProfile {
    let limits: Vec<(f64, f64)> = (0..curve.num_segments())
        .map(|_| match rng.gen_range(0..4) {
            0 => (0.0, f64::INFINITY),
            1 => {
                let v = rng.gen_range(0.5..3.0);
                (v, v)
            }
            2 => {
                let lo = rng.gen_range(0.1..2.0);
                (lo, lo + rng.gen_range(0.1..3.0))
            }
            _ => (0.0, rng.gen_range(0.5..4.0)),
        })
        .collect();
    SpeedProfile::new(curve, limits).unwrap()
}

/// Midpoints of gaps between consecutive critical values, plus points below
/// and above the whole list. Gaps narrower than `min_gap` are skipped.
fn gap_midpoints(p: &Polyline, q: &Polyline, min_gap: f64) -> Vec<f64> {
    let crits = critical_values_classic(p, q);
    let mut vals: Vec<f64> = crits.iter().map(|c| c.value).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::new();
    if vals[0] > min_gap {
        out.push(0.5 * vals[0]);
    }
    for w in vals.windows(2) {
        if w[1] - w[0] > min_gap {
            out.push(0.5 * (w[0] + w[1]));
        }
    }
    out.push(vals.last().unwrap() + 0.5);
    out
}

#[test]
fn unconstrained_profiles_reduce_to_classical() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let p = random_curve(&mut rng, 5);
        let q = random_curve(&mut rng, 5);
        let pp = SpeedProfile::unconstrained(&p);
        let qp = SpeedProfile::unconstrained(&q);
        for eps in gap_midpoints(&p, &q, 1e-5) {
            let classical = decide_frechet(&p, &q, eps);
            assert_eq!(
                decide_speed_simple(&p, &q, &pp, &qp, eps),
                classical,
                "simple vs classical at eps={eps}"
            );
            assert_eq!(
                decide_speed_fast(&p, &q, &pp, &qp, eps),
                classical,
                "fast vs classical at eps={eps}"
            );
        }
    }
}

#[test]
fn fast_agrees_with_simple_on_random_speed_instances() {
    let mut rng = StdRng::seed_from_u64(11);
    for case in 0..500 {
        let p = random_curve(&mut rng, 8);
        let q = random_curve(&mut rng, 8);
        let pp = random_profile(&mut rng, &p);
        let qp = random_profile(&mut rng, &q);
        let eps = rng.gen_range(0.0..12.0);
        let simple = decide_speed_simple(&p, &q, &pp, &qp, eps);
        let fast = decide_speed_fast(&p, &q, &pp, &qp, eps);
        assert_eq!(simple, fast, "case {case}: eps={eps:.6} p={p:?} q={q:?}");
    }
}

#[test]
fn lazy_endpoints_match_eager_propagation() {
    let mut rng = StdRng::seed_from_u64(13);
    let mut compared = 0usize;
    for case in 0..120 {
        let p = random_curve(&mut rng, 6);
        let q = random_curve(&mut rng, 6);
        let pp = random_profile(&mut rng, &p);
        let qp = random_profile(&mut rng, &q);
        let eps = rng.gen_range(0.5..8.0);
        let eager = speed_reach_simple(&p, &q, &pp, &qp, eps);
        let (_, lazy) = speed_reach_fast(&p, &q, &pp, &qp, eps);
        let n = p.num_segments().max(1);
        let m = q.num_segments().max(1);
        for i in 1..=n + 1 {
            for j in 1..=m {
                let mut a = eager.lr(i, j).to_vec();
                let mut b = lazy.lr(i, j).to_vec();
                frechet::speed::merge_intervals_for_test(&mut a);
                frechet::speed::merge_intervals_for_test(&mut b);
                assert_eq!(a.len(), b.len(), "case {case} L({i},{j}): {a:?} vs {b:?}");
                for (x, y) in a.iter().zip(&b) {
                    assert!(
                        (x.0.x - y.0.x).abs() < 1e-9
                            && (x.0.y - y.0.y).abs() < 1e-9
                            && (x.1.x - y.1.x).abs() < 1e-9
                            && (x.1.y - y.1.y).abs() < 1e-9,
                        "case {case} L({i},{j}): {a:?} vs {b:?}"
                    );
                }
                compared += 1;
            }
        }
    }
    assert!(compared > 0);
}
