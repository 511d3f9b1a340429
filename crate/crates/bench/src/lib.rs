//! Instance generators and timing helpers shared by the benchmarks and the
//! scaling harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subtraj_core::{Point, PolygonalCurve};

/// Side of the square loop and vertex jitter of [`corridor`].
pub const LOOP_SIDE: f64 = 10.0;
pub const JITTER: f64 = 0.05;
/// Radius that makes every lap of [`corridor`] cover every other one.
pub const CORRIDOR_DELTA: f64 = 0.5;

/// `n` vertices walking laps of a square corridor, `per_side` vertices per
/// side, each jittered by at most `JITTER`. The optimal cover size does not
/// grow with `n`: one lap covers all of them.
pub fn corridor(n: usize, per_side: usize, seed: u64) -> PolygonalCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corners = [[0.0, 0.0], [LOOP_SIDE, 0.0], [LOOP_SIDE, LOOP_SIDE], [0.0, LOOP_SIDE]];
    let per_lap = 4 * per_side;
    let pts = (0..n)
        .map(|k| {
            let side = (k % per_lap) / per_side;
            let f = (k % per_side) as f64 / per_side as f64;
            let (a, b) = (corners[side], corners[(side + 1) % 4]);
            Point(vec![
                a[0] + f * (b[0] - a[0]) + rng.gen_range(-JITTER..JITTER),
                a[1] + f * (b[1] - a[1]) + rng.gen_range(-JITTER..JITTER),
            ])
        })
        .collect();
    PolygonalCurve::new(pts).expect("corridor has at least two vertices")
}

/// Random walk with `n` vertices, steps biased towards `+x`.
pub fn walk(n: usize, seed: u64) -> PolygonalCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut at = [0.0, 0.0];
    let mut pts = vec![Point(at.to_vec())];
    for _ in 1..n {
        at[0] += rng.gen_range(-1.0..1.5);
        at[1] += rng.gen_range(-1.0..1.0);
        pts.push(Point(at.to_vec()));
    }
    PolygonalCurve::new(pts).expect("walk has at least two vertices")
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn loglog_slope(ns: &[f64], ts: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
