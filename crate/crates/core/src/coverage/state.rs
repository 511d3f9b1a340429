//! Combinatorial representation of coverage at one window, computed from scratch.
//!
//! Heights are compared through [`HKey`], a symbolic perturbation: at equal
//! height, bottoms < lower ends of boundary spans < sweep positions < upper ends
//! of boundary spans < tops. At a sweep position this reproduces plain closed
//! comparisons; between two positions it orders the features crossed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::frechet::Row;
use crate::interval::IntervalUnion;

#[derive(Clone, Copy, Debug)]
pub struct HKey {
    pub y: f64,
    rank: u8,
    ty: u8,
    idx: usize,
    /// −1: infinitesimally below the feature (virtual sweep position)
    off: i8,
}

impl HKey {
    fn feature(y: f64, rank: u8, ty: u8, idx: usize) -> Self {
        HKey {
            y: y + 0.0,
            rank,
            ty,
            idx,
            off: 0,
        }
    }

    /// A sweep position at height `y`.
    pub fn at(y: f64) -> Self {
        HKey::feature(y, 1, 0, 0)
    }

    /// Just below this key.
    pub fn below(self) -> Self {
        HKey { off: -1, ..self }
    }
}

impl PartialEq for HKey {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for HKey {}
impl PartialOrd for HKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.y
            .total_cmp(&o.y)
            .then(self.rank.cmp(&o.rank))
            .then(self.ty.cmp(&o.ty))
            .then(self.idx.cmp(&o.idx))
            .then(self.off.cmp(&o.off))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feat {
    Bottom(usize),
    Lo(usize),
    Hi(usize),
    Top(usize),
}

/// Keyed features of one row: cell bottoms/tops and boundary span ends.
#[derive(Clone, Debug)]
pub struct RowKeys {
    pub n: usize,
    pub bot: Vec<Option<HKey>>,
    pub top: Vec<Option<HKey>>,
    /// per boundary `k ∈ 0..=n`
    pub lo: Vec<Option<HKey>>,
    pub hi: Vec<Option<HKey>>,
    /// all features sorted by key
    pub feats: Vec<(HKey, Feat)>,
}

impl RowKeys {
    pub fn new(row: &Row) -> Self {
        let n = row.n();
        let mut bot = vec![None; n];
        let mut top = vec![None; n];
        let mut lo = vec![None; n + 1];
        let mut hi = vec![None; n + 1];
        let mut feats = Vec::new();
        for i in 0..n {
            if let Some(f) = row.features(i) {
                let b = HKey::feature(f.bottom.y, 0, 0, i);
                let t = HKey::feature(f.top.y, 2, 1, i);
                bot[i] = Some(b);
                top[i] = Some(t);
                feats.push((b, Feat::Bottom(i)));
                feats.push((t, Feat::Top(i)));
            }
        }
        for k in 0..=n {
            if let Some((a, b)) = row.boundary(k) {
                let l = HKey::feature(a, 0, 1, k);
                let h = HKey::feature(b, 2, 0, k);
                lo[k] = Some(l);
                hi[k] = Some(h);
                feats.push((l, Feat::Lo(k)));
                feats.push((h, Feat::Hi(k)));
            }
        }
        feats.sort_by_key(|a| a.0);
        RowKeys {
            n,
            bot,
            top,
            lo,
            hi,
            feats,
        }
    }

    pub fn alive(&self, i: usize, p: HKey) -> bool {
        matches!((self.bot[i], self.top[i]), (Some(b), Some(t)) if b <= p && p <= t)
    }

    /// Can a path at running height `r` cross boundary `k` and stay ≤ `pt`?
    /// Returns the height after crossing.
    pub fn cross(&self, k: usize, r: HKey, pt: HKey) -> Option<HKey> {
        let (lo, hi) = (self.lo[k]?, self.hi[k]?);
        let r = r.max(lo);
        (r <= hi && r <= pt).then_some(r)
    }

    /// Features with keys strictly between `lo` and `hi`, highest first.
    pub fn between(&self, lo: HKey, hi: HKey) -> impl Iterator<Item = &(HKey, Feat)> {
        let a = self.feats.partition_point(|f| f.0 <= lo);
        let b = self.feats.partition_point(|f| f.0 < hi);
        self.feats[a..b.max(a)].iter().rev()
    }
}

/// `i` is bad for the window `(s, t)`: every top-most point lies left of both
/// `l_i(s)` and `r_i(t)`, which both lie left of every bottom-most point.
///
/// Only `top.x_hi < l_i(s)` and `r_i(t) < bottom.x_lo` are tested. The other
/// two comparisons follow from these (the left chain is convex with ends at
/// the bottom and top, the right chain concave), and testing them separately
/// only adds rounding noise at corners where a boundary span meets an extreme
/// point.
pub fn bad_index_test(row: &Row, i: usize, s: f64, t: f64) -> bool {
    let Some(f) = row.features(i) else {
        return false;
    };
    let l = row.l(i, s);
    let r = row.r(i, t);
    l.is_finite() && r.is_finite() && f.top.x_hi < l && r < f.bottom.x_lo
}

/// Index-pair sets at one window. `l` holds `L ∖ B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombinatorialState {
    pub u: BTreeMap<usize, usize>,
    pub g: BTreeMap<usize, usize>,
    pub gt: BTreeMap<usize, usize>,
    pub l: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
}

/// Merge consecutive global pairs `(a,b)`, `(c,d)` with `c < b`, or `c = b` and `b` good.
pub fn reduce_global(g: &BTreeMap<usize, usize>, bad: impl Fn(usize) -> bool) -> BTreeMap<usize, usize> {
    let mut out: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cur: Option<(usize, usize)> = None;
    for (&c, &d) in g {
        cur = match cur {
            Some((a, b)) if c < b || (c == b && !bad(b)) => Some((a, d)),
            Some(p) => {
                out.insert(p.0, p.1);
                Some((c, d))
            }
            None => Some((c, d)),
        };
    }
    if let Some(p) = cur {
        out.insert(p.0, p.1);
    }
    out
}

/// From-scratch state at heights `s ≤ t` of a row (walk over boundary spans).
pub fn scratch_state(row: &Row, keys: &RowKeys, s: f64, t: f64) -> CombinatorialState {
    let (ps, pt) = (HKey::at(s), HKey::at(t));
    let n = keys.n;
    let b: BTreeSet<usize> = (0..n).filter(|&i| bad_index_test(row, i, s, t)).collect();
    let mut jmax: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if !keys.alive(i, ps) {
            continue;
        }
        let mut r = ps;
        let mut j = i;
        while j + 1 < n {
            match keys.cross(j + 1, r, pt) {
                Some(nr) => {
                    r = nr;
                    j += 1;
                }
                None => break,
            }
        }
        jmax[i] = Some(j);
    }
    let maximal = |pairs: Vec<(usize, usize)>| {
        let mut out = BTreeMap::new();
        let mut best: Option<usize> = None;
        for (i, j) in pairs {
            if best.is_none_or(|bj| j > bj) {
                out.insert(i, j);
                best = Some(j);
            }
        }
        out
    };
    let u = maximal((0..n).filter_map(|i| jmax[i].map(|j| (i, j))).collect());
    let g = maximal(
        (0..n)
            .filter_map(|i| {
                let j = jmax[i]?;
                (i + 1..=j).rev().find(|&c| keys.alive(c, pt)).map(|c| (i, c))
            })
            .collect(),
    );
    let covered = |i: usize| g.range(..=i).next_back().is_some_and(|(_, &e)| e >= i);
    let l = (0..n)
        .filter(|&i| keys.alive(i, ps) && keys.alive(i, pt) && !covered(i) && !b.contains(&i))
        .collect();
    let gt = reduce_global(&g, |c| b.contains(&c));
    CombinatorialState { u, g, gt, l, b }
}

/// `l̂_i(s)`: `l_i(s)` if `i` is good, else `r_i(s)`.
pub fn l_hat(row: &Row, i: usize, s: f64, bad: bool) -> f64 {
    if bad {
        row.r(i, s)
    } else {
        row.l(i, s)
    }
}

/// `r̂_j(t)`: `r_j(t)` if `j` is good, else `l_j(t)`.
pub fn r_hat(row: &Row, j: usize, t: f64, bad: bool) -> f64 {
    if bad {
        row.l(j, t)
    } else {
        row.r(j, t)
    }
}

/// The proxy-coverage intervals of a state, one per pair, in emission order.
pub fn proxy_parts(row: &Row, s: f64, t: f64, st: &CombinatorialState) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &i in &st.l {
        out.push((row.l(i, s), row.r(i, t)));
    }
    for (&i, &j) in &st.gt {
        out.push((l_hat(row, i, s, st.b.contains(&i)), r_hat(row, j, t, st.b.contains(&j))));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `Ĉov(e[s,t])` from the combinatorial state at that window.
pub fn proxy_cov(row: &Row, s: f64, t: f64, st: &CombinatorialState) -> IntervalUnion {
    IntervalUnion::from_intervals(proxy_parts(row, s, t, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{extremal_points, PolyCell};
    use crate::coverage::testgen::random_instance;
    use crate::frechet::{reach_cover, CellShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly_row(verts: &[(f64, f64)]) -> Row {
        Row::new(vec![CellShape::Poly(PolyCell::new(verts.to_vec()))], vec![None, None], false)
    }

    #[test]
    fn symmetric_cell_is_never_bad() {
        let row = poly_row(&[(0.5, 0.1), (0.9, 0.5), (0.5, 0.9), (0.1, 0.5)]);
        for a in 0..=20 {
            for b in a..=20 {
                assert!(!bad_index_test(&row, 0, a as f64 / 20.0, b as f64 / 20.0));
            }
        }
    }

    #[test]
    fn slanted_cell_is_bad_in_the_middle() {
        // top-most point far left, bottom-most point far right
        let row = poly_row(&[(0.8, 0.1), (0.9, 0.3), (0.2, 0.9), (0.1, 0.7)]);
        let f = row.features(0).unwrap();
        let (l, r) = (row.l(0, 0.5), row.r(0, 0.5));
        assert!(f.top.x_hi < l && l <= f.bottom.x_lo && f.top.x_hi <= r && r < f.bottom.x_lo);
        assert!(bad_index_test(&row, 0, 0.5, 0.5));
        assert!(!bad_index_test(&row, 0, 0.1, 0.35));
        // bad for the window, good for its reversal, endpoints inside [l(t), r(s)]
        let m = row.mirror();
        assert!(!bad_index_test(&m, 0, 0.45, 0.55));
        assert!(bad_index_test(&row, 0, 0.45, 0.55));
        let (ls, rt) = (row.l(0, 0.45), row.r(0, 0.55));
        let (lt, rs) = (row.l(0, 0.55), row.r(0, 0.45));
        assert!(lt <= ls && ls <= rs && lt <= rt && rt <= rs);
    }

    #[test]
    fn good_finite_index_has_ordered_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..200 {
            let row = random_instance(&mut rng, k % 2 == 0, 12).0.row(0);
            let ext = extremal_points(&row, false);
            for a in 0..ext.len() {
                for b in a..ext.len() {
                    let (s, t) = (ext.y(a), ext.y(b));
                    for i in 0..row.n() {
                        let (l, r) = (row.l(i, s), row.r(i, t));
                        if !bad_index_test(&row, i, s, t) && l.is_finite() && r.is_finite() {
                            assert!(l <= r, "cell {i} at ({s}, {t}): {l} > {r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn proxy_is_sandwiched_by_reachability() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..120 {
            let fs = random_instance(&mut rng, k % 2 == 0, 10).0;
            let fs_rev = fs.mirrored();
            let row = fs.row(0);
            let mir = row.mirror();
            let (keys, mkeys) = (RowKeys::new(&row), RowKeys::new(&mir));
            let ext = extremal_points(&row, false);
            for a in 0..ext.len() {
                for b in a..ext.len() {
                    let (ys, yt) = (ext.y(a), ext.y(b));
                    let fwd = proxy_cov(&row, ys, yt, &scratch_state(&row, &keys, ys, yt));
                    let (ms, mt) = (1.0 - yt, 1.0 - ys);
                    let rev = proxy_cov(&mir, ms, mt, &scratch_state(&mir, &mkeys, ms, mt));
                    let reach = reach_cover(&fs, ys, yt);
                    assert!(fwd.is_subset_of(&reach, 1e-9), "forward proxy escapes at ({ys}, {yt}): {:?} vs {:?}", fwd.parts(), reach.parts());
                    let rreach = reach_cover(&fs_rev, ms, mt);
                    assert!(rev.is_subset_of(&rreach, 1e-9), "reverse proxy escapes at ({ms}, {mt}): {:?} vs {:?}", rev.parts(), rreach.parts());
                    assert!(reach.is_subset_of(&fwd.union(&rev), 1e-9), "pair misses coverage at ({ys}, {yt})");
                }
            }
        }
    }

    #[test]
    fn proxy_parts_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..150 {
            let row = random_instance(&mut rng, k % 2 == 1, 12).0.row(0);
            let keys = RowKeys::new(&row);
            let ext = extremal_points(&row, false);
            for a in 0..ext.len() {
                for b in a..ext.len() {
                    let (s, t) = (ext.y(a), ext.y(b));
                    let parts = proxy_parts(&row, s, t, &scratch_state(&row, &keys, s, t));
                    for w in parts.windows(2) {
                        assert!(w[0].0 <= w[0].1 && w[0].1 <= w[1].0, "overlap at ({s}, {t}): {parts:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_window_on_free_edge_is_the_slice() {
        let row = poly_row(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let keys = RowKeys::new(&row);
        let st = scratch_state(&row, &keys, 0.3, 0.3);
        assert_eq!(proxy_cov(&row, 0.3, 0.3, &st).parts(), &[(0.0, 1.0)]);
    }
}
