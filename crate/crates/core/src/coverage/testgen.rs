//! Random single-edge rows for the coverage tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{Point, PolygonalCurve};
use crate::frechet::{FreeSpace, Row};

/// `P` with up to 12 edges against one edge of `S`; returns the free space
/// (one row) so callers can also run reachability on it.
pub fn random_instance(rng: &mut ChaCha8Rng, lattice: bool, max_n: usize) -> (FreeSpace, PolygonalCurve, PolygonalCurve, f64) {
    let n = rng.gen_range(1..=max_n);
    let pts: Vec<Point> = (0..=n)
        .map(|k| {
            if lattice {
                // integer coordinates: many coinciding feature heights
                Point(vec![k as f64, rng.gen_range(-2..=2) as f64])
            } else {
                Point(vec![k as f64 * 0.6 + rng.gen_range(0.0..0.4), rng.gen_range(-1.0..1.0)])
            }
        })
        .collect();
    let p = PolygonalCurve::new(pts).unwrap();
    let end = n as f64 * if lattice { 1.0 } else { 0.6 };
    let s = if lattice {
        PolygonalCurve::new(vec![
            Point(vec![0.0, rng.gen_range(-1..=1) as f64]),
            Point(vec![end, rng.gen_range(-1..=1) as f64]),
        ])
    } else {
        PolygonalCurve::new(vec![
            Point(vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]),
            Point(vec![end + rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]),
        ])
    }
    .unwrap();
    let delta = if lattice { rng.gen_range(1..=3) as f64 } else { rng.gen_range(0.3..1.5) };
    (FreeSpace::exact(&s, &p, delta), s, p, delta)
}

pub fn random_row(rng: &mut ChaCha8Rng, lattice: bool) -> Row {
    random_instance(rng, lattice, 12).0.row(0)
}
