//! Molecular boundaries of one edge as two implicitly sorted lists.
//!
//! Inside cell `i`, `l_i` falls until the left boundary span is reached and
//! rises after it; `r_i` rises until the right span and falls after it. Cutting
//! each cell's heights at those spans gives four monotone runs. The lower list
//! chains falling-`l` (read top-down) then rising-`r`, the upper list chains
//! rising-`l` then falling-`r` (read top-down), cell after cell. Both lists
//! stay sorted because cell `i` only produces values in `[i/n, (i+1)/n]`.

use std::cmp::Ordering;

use super::rank::ImplicitSortedList;
use crate::frechet::Row;

/// A list element: the x value, then the list and position as tie-breaks.
#[derive(Clone, Copy, Debug)]
pub struct Key {
    pub value: f64,
    pub list: u32,
    pub pos: u32,
}

impl Key {
    /// Sorts before every element with value `≥ v`.
    pub fn below(v: f64) -> Key {
        Key { value: v, list: 0, pos: 0 }
    }

    /// Sorts after every element with value `≤ v`.
    pub fn above(v: f64) -> Key {
        Key {
            value: v,
            list: u32::MAX,
            pos: u32::MAX,
        }
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.value
            .total_cmp(&o.value)
            .then(self.list.cmp(&o.list))
            .then(self.pos.cmp(&o.pos))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Key {}

#[derive(Clone, Copy, Debug)]
struct Run {
    cell: usize,
    right: bool,
    /// height index range `[lo, hi)`
    lo: usize,
    hi: usize,
    descending: bool,
}

/// One implicit list over the heights of a row.
#[derive(Clone, Debug)]
pub struct EdgeList<'a> {
    row: &'a Row,
    heights: &'a [f64],
    id: u32,
    runs: Vec<Run>,
    /// `start[k]` = position of the first element of run `k`
    start: Vec<usize>,
}

impl<'a> EdgeList<'a> {
    fn from_runs(row: &'a Row, heights: &'a [f64], id: u32, runs: Vec<Run>) -> Self {
        let runs: Vec<Run> = runs.into_iter().filter(|r| r.hi > r.lo).collect();
        let mut start = Vec::with_capacity(runs.len() + 1);
        let mut acc = 0;
        for r in &runs {
            start.push(acc);
            acc += r.hi - r.lo;
        }
        start.push(acc);
        EdgeList {
            row,
            heights,
            id,
            runs,
            start,
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn value_at(&self, j: usize) -> f64 {
        let k = self.start.partition_point(|&s| s <= j) - 1;
        let r = &self.runs[k];
        let off = j - self.start[k];
        let h = if r.descending { r.hi - 1 - off } else { r.lo + off };
        let (l, rr) = self.row.lr(r.cell, self.heights[h]);
        if r.right {
            rr
        } else {
            l
        }
    }

    /// Values in `[a, b]`, in list order.
    pub fn values_in(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        let lo = self.rank_below(&Key::below(a));
        let hi = self.rank_below(&Key::above(b)).max(lo);
        (lo..hi).map(move |j| self.value_at(j))
    }

    /// Largest value `≤ x`.
    pub fn pred(&self, x: f64) -> Option<f64> {
        let k = self.rank_below(&Key::above(x));
        (k > 0).then(|| self.value_at(k - 1))
    }

    /// Smallest value `≥ x`.
    pub fn succ(&self, x: f64) -> Option<f64> {
        let k = self.rank_below(&Key::below(x));
        (k < self.len()).then(|| self.value_at(k))
    }
}

impl ImplicitSortedList for EdgeList<'_> {
    type Key = Key;

    fn len(&self) -> usize {
        *self.start.last().expect("start has a sentinel")
    }

    fn item_at(&self, j: usize) -> Key {
        Key {
            value: self.value_at(j),
            list: self.id,
            pos: j as u32,
        }
    }
}

/// The lower and upper lists of edge `edge`, over sorted distinct heights.
pub fn edge_lists<'a>(row: &'a Row, heights: &'a [f64], edge: usize) -> [EdgeList<'a>; 2] {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..row.n() {
        let Some(f) = row.features(i) else { continue };
        let a = heights.partition_point(|&y| y < f.bottom.y);
        let b = heights.partition_point(|&y| y <= f.top.y).max(a);
        let pl = heights.partition_point(|&y| y <= f.left.1).clamp(a, b);
        let pr = heights.partition_point(|&y| y < f.right.0).clamp(a, b);
        let run = |right, lo, hi, descending| Run {
            cell: i,
            right,
            lo,
            hi,
            descending,
        };
        lower.push(run(false, a, pl, true));
        lower.push(run(true, a, pr, false));
        upper.push(run(false, pl, b, false));
        upper.push(run(true, pr, b, true));
    }
    let id = 2 * edge as u32;
    [
        EdgeList::from_runs(row, heights, id, lower),
        EdgeList::from_runs(row, heights, id + 1, upper),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::extremal_points;
    use crate::curve::{Point, PolygonalCurve};
    use crate::frechet::FreeSpace;
    use crate::sc::atomic::{dedup_tol, distinct_heights, molecular_bounds};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn walk(rng: &mut ChaCha8Rng, n: usize) -> PolygonalCurve {
        let mut at = [0.0, 0.0];
        let mut pts = vec![Point(at.to_vec())];
        for _ in 0..n {
            at[0] += rng.gen_range(-1.0..1.5);
            at[1] += rng.gen_range(-1.0..1.0);
            pts.push(Point(at.to_vec()));
        }
        PolygonalCurve::new(pts).unwrap()
    }

    #[test]
    fn lists_are_sorted_and_cover_the_molecular_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let n = rng.gen_range(2..12);
            let p = walk(&mut rng, n);
            let ns = rng.gen_range(1..4);
            let s = walk(&mut rng, ns);
            let fs = FreeSpace::exact(&s, &p, rng.gen_range(0.3..2.0));
            for e in 0..fs.ny() {
                let row = fs.row(e);
                let h = distinct_heights(&extremal_points(&row, false));
                let lists = edge_lists(&row, &h, e);
                let mut all = vec![0.0, 1.0];
                for l in &lists {
                    let vals: Vec<f64> = (0..l.len()).map(|j| l.value_at(j)).collect();
                    for w in vals.windows(2) {
                        assert!(w[0] <= w[1] + 1e-9, "list out of order: {} > {}", w[0], w[1]);
                    }
                    all.extend(vals);
                }
                dedup_tol(&mut all);
                let want = molecular_bounds(&row, &h);
                assert_eq!(all.len(), want.len());
                for (x, y) in all.iter().zip(&want) {
                    assert!((x - y).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn neighbours_and_ranges() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]).unwrap();
        let s = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[2.0, 0.0]]).unwrap();
        let fs = FreeSpace::exact(&s, &p, 0.25);
        let row = fs.row(0);
        let h = distinct_heights(&extremal_points(&row, false));
        let [lo, up] = edge_lists(&row, &h, 0);
        let mut all: Vec<f64> = lo.values_in(0.0, 1.0).chain(up.values_in(0.0, 1.0)).collect();
        dedup_tol(&mut all);
        assert_eq!(all, molecular_bounds(&row, &h));
        let x = 0.3;
        let p_ = [lo.pred(x), up.pred(x)].into_iter().flatten().fold(f64::NEG_INFINITY, f64::max);
        let s_ = [lo.succ(x), up.succ(x)].into_iter().flatten().fold(f64::INFINITY, f64::min);
        let b = molecular_bounds(&row, &h);
        let k = b.partition_point(|&v| v <= x);
        assert!((b[k - 1] - p_).abs() < 1e-9 && (b[k] - s_).abs() < 1e-9);
    }
}
