//! Incremental maintenance of the combinatorial state along a sweep-sequence.
//!
//! The sequence is walked backwards so both heights only decrease; per step
//! the start height moves first, then the end height. Every feature crossed is
//! one event with a local update:
//!
//! start height `s` passes below
//! - a top: the cell comes alive and contributes `(i,i)`;
//! - a bottom: the cell dies, its pairs restart at the next alive cell;
//! - an upper span end `hi_k`: boundary `k` opens, the pairs reaching it
//!   re-anchor at the shoot-left index and join the pair starting at `k`;
//!
//! end height `t` passes below
//! - a lower span end `lo_k`: paths through boundary `k` stop, pairs split;
//! - a bottom: the cell can no longer be an end cell;
//! - a top: the cell becomes an end cell for the first pair reaching it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::coverage::ds::ShootLeftDS;
use crate::coverage::state::{reduce_global, CombinatorialState, Feat, HKey, RowKeys};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    Local,
    Global,
}

/// A pair of `G̃ ∪ (L∖B)` present with constant endpoint flags over the
/// contiguous positions `first..=last` of the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalEvent {
    pub kind: PairKind,
    pub i: usize,
    pub j: usize,
    pub first: usize,
    pub last: usize,
    pub bad_i: bool,
    pub bad_j: bool,
}

type Id = (PairKind, usize, usize);

pub struct Maintainer<'a> {
    keys: &'a RowKeys,
    shoot: ShootLeftDS<HKey>,
    n: usize,
    ps: HKey,
    pt: HKey,
    u: BTreeMap<usize, usize>,
    u_end: BTreeMap<usize, usize>,
    g: BTreeMap<usize, usize>,
    /// starts of `G` pairs not merged into their predecessor
    brk: BTreeSet<usize>,
    gt: BTreeMap<usize, usize>,
    /// local pairs before removing bad indices
    l: BTreeSet<usize>,
    bad: Vec<bool>,
    alive_s: BTreeSet<usize>,
    alive_t: BTreeSet<usize>,
    // per-step bookkeeping
    dirty: Vec<(usize, usize)>,
    touched_l: Vec<usize>,
    touched: Vec<Id>,
    open: HashMap<Id, (bool, bool, usize)>,
    events: Vec<IntervalEvent>,
}

impl<'a> Maintainer<'a> {
    /// State at the window `(y, y)`, built directly (no path rises when `s = t`).
    pub fn new(keys: &'a RowKeys, y: f64, bad: Vec<bool>) -> Self {
        let n = keys.n;
        let p = HKey::at(y);
        let spans: Vec<Option<(HKey, HKey)>> = (0..=n)
            .map(|k| Some((keys.lo[k]?, keys.hi[k]?)))
            .collect();
        let alive: BTreeSet<usize> = (0..n).filter(|&i| keys.alive(i, p)).collect();
        let mut jmax = vec![0; n];
        for i in (0..n).rev() {
            jmax[i] = if i + 1 < n && keys.cross(i + 1, p, p).is_some() {
                jmax[i + 1]
            } else {
                i
            };
        }
        let mut u = BTreeMap::new();
        let mut last: Option<usize> = None;
        for &i in &alive {
            if last.is_none_or(|e| jmax[i] > e) {
                u.insert(i, jmax[i]);
                last = Some(jmax[i]);
            }
        }
        let g: BTreeMap<usize, usize> = u.iter().filter(|(a, b)| b > a).map(|(&a, &b)| (a, b)).collect();
        let mut m = Maintainer {
            keys,
            shoot: ShootLeftDS::new(&spans),
            n,
            ps: p,
            pt: p,
            u_end: u.iter().map(|(&a, &b)| (b, a)).collect(),
            u,
            g,
            brk: BTreeSet::new(),
            gt: BTreeMap::new(),
            l: BTreeSet::new(),
            bad,
            alive_s: alive.clone(),
            alive_t: alive,
            dirty: Vec::new(),
            touched_l: Vec::new(),
            touched: Vec::new(),
            open: HashMap::new(),
            events: Vec::new(),
        };
        m.gt = reduce_global(&m.g, |c| m.bad[c]);
        let starts: Vec<usize> = m.g.keys().copied().collect();
        for p in starts {
            if m.is_break(p) {
                m.brk.insert(p);
            }
        }
        for i in 0..n {
            if m.local(i) {
                m.l.insert(i);
            }
        }
        m
    }

    pub fn snapshot(&self) -> CombinatorialState {
        CombinatorialState {
            u: self.u.clone(),
            g: self.g.clone(),
            gt: self.gt.clone(),
            l: self.l.iter().copied().filter(|&i| !self.bad[i]).collect(),
            b: (0..self.n).filter(|&i| self.bad[i]).collect(),
        }
    }

    pub fn is_bad(&self, i: usize) -> bool {
        self.bad[i]
    }

    /// Move the start height down to `s` (not above the current one).
    pub fn advance_start(&mut self, s: f64) {
        let target = HKey::at(s);
        assert!(target <= self.ps, "start height may only decrease");
        let feats: Vec<(HKey, Feat)> = self.keys.between(target, self.ps).copied().collect();
        for (k, f) in feats {
            self.ps = k.below();
            self.cross_s(k, f);
        }
        self.ps = target;
    }

    /// Move the end height down to `t` (not below the start height).
    pub fn advance_end(&mut self, t: f64) {
        let target = HKey::at(t);
        assert!(target <= self.pt && target >= self.ps, "end height must decrease and stay ≥ start");
        let feats: Vec<(HKey, Feat)> = self.keys.between(target, self.pt).copied().collect();
        for (k, f) in feats {
            self.pt = k.below();
            self.cross_t(f);
        }
        self.pt = target;
    }

    /// Apply new bad flags and bring `G̃` and `L` up to date.
    pub fn settle(&mut self, flips: &[usize]) {
        for &c in flips {
            self.bad[c] = !self.bad[c];
            self.dirty.push((c, c));
            self.touched_l.push(c);
            self.touched.push((PairKind::Local, c, c));
            if let Some(&e) = self.gt.get(&c) {
                self.touched.push((PairKind::Global, c, e));
            }
            if let Some((&a, &e)) = self.gt.range(..c).next_back() {
                self.touched.push((PairKind::Global, a, e));
            }
        }
        let mut dirty = std::mem::take(&mut self.dirty);
        dirty.sort_unstable();
        dirty.dedup();
        for &(x0, x1) in &dirty {
            self.refresh_breaks(x0, x1);
        }
        for &(x0, x1) in &dirty {
            self.rebuild_runs(x0, x1);
        }
        let cells = std::mem::take(&mut self.touched_l);
        for c in cells {
            if c >= self.n {
                continue;
            }
            let want = self.local(c);
            if want != self.l.contains(&c) {
                if want {
                    self.l.insert(c);
                } else {
                    self.l.remove(&c);
                }
            }
            self.touched.push((PairKind::Local, c, c));
        }
    }

    fn covered(&self, i: usize) -> bool {
        self.g.range(..=i).next_back().is_some_and(|(_, &e)| e >= i)
    }

    fn local(&self, i: usize) -> bool {
        self.alive_s.contains(&i) && self.alive_t.contains(&i) && !self.covered(i)
    }

    fn u_insert(&mut self, a: usize, b: usize) {
        self.u.insert(a, b);
        self.u_end.insert(b, a);
    }

    fn u_remove(&mut self, a: usize) -> Option<usize> {
        let b = self.u.remove(&a)?;
        self.u_end.remove(&b);
        Some(b)
    }

    fn g_insert(&mut self, a: usize, b: usize) {
        self.g.insert(a, b);
        self.dirty.push((a, a));
        let newly: Vec<usize> = self.l.range(a + 1..=b).copied().collect();
        self.touched_l.extend(newly);
    }

    fn g_remove(&mut self, a: usize) -> Option<usize> {
        let b = self.g.remove(&a)?;
        self.dirty.push((a, a));
        self.touched_l.push(a);
        Some(b)
    }

    fn cross_s(&mut self, key: HKey, f: Feat) {
        match f {
            Feat::Top(i) => {
                self.alive_s.insert(i);
                let dominated = self.u.range(..=i).next_back().is_some_and(|(_, &e)| e >= i);
                if !dominated {
                    self.u_insert(i, i);
                }
                self.touched_l.push(i);
            }
            Feat::Bottom(i) => {
                self.alive_s.remove(&i);
                let next = self.alive_s.range(i + 1..).next().copied();
                if let Some(b) = self.u_remove(i) {
                    if let Some(j) = next.filter(|&j| j <= b) {
                        if !self.u.contains_key(&j) {
                            self.u_insert(j, b);
                        }
                    }
                }
                if let Some(g) = self.g_remove(i) {
                    if let Some(j) = next.filter(|&j| j < g) {
                        if !self.g.contains_key(&j) {
                            self.g_insert(j, g);
                        }
                    }
                }
                self.touched_l.push(i);
                if let Some(j) = next {
                    self.touched_l.push(j);
                }
            }
            Feat::Hi(k) => {
                if k == 0 || k == self.n {
                    return;
                }
                let p = key.below();
                let j = match self.shoot.query(k - 1, p) {
                    None => k - 1,
                    Some(0) => 0,
                    Some(jj) => jj - 1,
                };
                let Some(&end) = self.u.get(&k) else {
                    debug_assert!(false, "cell right of an opening boundary starts a pair");
                    return;
                };
                let new_g = self
                    .g
                    .get(&k)
                    .copied()
                    .or_else(|| self.alive_t.contains(&k).then_some(k))
                    .or_else(|| self.g.get(&j).copied());
                let us: Vec<usize> = self.u.range(j..=k).map(|(&a, _)| a).collect();
                for a in us {
                    self.u_remove(a);
                }
                self.u_insert(j, end);
                let gs: Vec<usize> = self.g.range(j..=k).map(|(&a, _)| a).collect();
                for a in gs {
                    self.g_remove(a);
                }
                if let Some(ng) = new_g.filter(|&ng| ng > j) {
                    self.g_insert(j, ng);
                }
                self.dirty.push((j, k));
                self.touched_l.extend([j, k]);
            }
            Feat::Lo(_) => {}
        }
    }

    fn cross_t(&mut self, f: Feat) {
        match f {
            Feat::Lo(k) => {
                if k == 0 || k == self.n {
                    return;
                }
                let next = self.alive_s.range(k..).next().copied();
                // U pairs whose paths cross boundary k
                let crossing: Vec<(usize, usize)> = self
                    .u
                    .range(..k)
                    .rev()
                    .take_while(|(_, &e)| e >= k)
                    .map(|(&a, &e)| (a, e))
                    .collect();
                if !crossing.is_empty() {
                    let a0 = crossing.iter().map(|p| p.0).min().unwrap();
                    let bmax = crossing.iter().map(|p| p.1).max().unwrap();
                    for &(a, _) in &crossing {
                        self.u_remove(a);
                    }
                    let dominated = self.u.range(..a0).next_back().is_some_and(|(_, &e)| e >= k - 1);
                    if !dominated {
                        self.u_insert(a0, k - 1);
                    }
                    if let Some(c) = next.filter(|&c| c <= bmax) {
                        if !self.u.contains_key(&c) {
                            self.u_insert(c, bmax);
                        }
                    }
                }
                let crossing: Vec<(usize, usize)> = self
                    .g
                    .range(..k)
                    .rev()
                    .take_while(|(_, &e)| e >= k)
                    .map(|(&a, &e)| (a, e))
                    .collect();
                if !crossing.is_empty() {
                    let a0 = crossing.iter().map(|p| p.0).min().unwrap();
                    let gmax = crossing.iter().map(|p| p.1).max().unwrap();
                    for &(a, _) in &crossing {
                        self.g_remove(a);
                    }
                    if let Some(&g1) = self.alive_t.range(a0 + 1..k).next_back() {
                        let dominated = self.g.range(..a0).next_back().is_some_and(|(_, &e)| e >= g1);
                        if !dominated {
                            self.g_insert(a0, g1);
                        }
                    }
                    if let Some(c) = next.filter(|&c| c < gmax) {
                        if !self.g.contains_key(&c) {
                            self.g_insert(c, gmax);
                        }
                    }
                    self.dirty.push((a0, next.unwrap_or(k).max(k)));
                    self.touched_l.push(a0);
                    if let Some(c) = next {
                        self.touched_l.push(c);
                    }
                }
            }
            Feat::Bottom(j) => {
                self.alive_t.remove(&j);
                self.touched_l.push(j);
                let ending = self.g.range(..j).next_back().filter(|(_, &e)| e == j).map(|(&a, _)| a);
                if let Some(a) = ending {
                    self.g_remove(a);
                    if let Some(&g1) = self.alive_t.range(a + 1..j).next_back() {
                        let dominated = self.g.range(..a).next_back().is_some_and(|(_, &e)| e >= g1);
                        if !dominated {
                            self.g_insert(a, g1);
                        }
                    }
                    self.touched_l.push(a);
                }
            }
            Feat::Top(j) => {
                self.alive_t.insert(j);
                self.touched_l.push(j);
                let first = self.u_end.range(j..).next().map(|(_, &a)| a);
                if let Some(a) = first.filter(|&a| a < j) {
                    if self.g.get(&a).is_some_and(|&e| e > j) {
                        return;
                    }
                    let doomed: Vec<usize> = self
                        .g
                        .range(a..)
                        .take_while(|(_, &e)| e <= j)
                        .map(|(&s, _)| s)
                        .collect();
                    for s in doomed {
                        self.g_remove(s);
                    }
                    self.g_insert(a, j);
                    self.dirty.push((a, j));
                    self.touched_l.push(a);
                }
            }
            Feat::Hi(_) => {}
        }
    }

    fn linked(&self, prev: (usize, usize), c: usize) -> bool {
        c < prev.1 || (c == prev.1 && !self.bad[c])
    }

    fn is_break(&self, p: usize) -> bool {
        match self.g.range(..p).next_back() {
            None => true,
            Some((&a, &b)) => !self.linked((a, b), p),
        }
    }

    /// Recompute merge breaks for `G` starts in `[x0, x1]` and the next start.
    fn refresh_breaks(&mut self, x0: usize, x1: usize) {
        let stale: Vec<usize> = self.brk.range(x0..=x1).copied().collect();
        for p in stale {
            self.brk.remove(&p);
        }
        let mut starts: Vec<usize> = self.g.range(x0..=x1).map(|(&a, _)| a).collect();
        let succ = self.g.range(x1 + 1..).next().map(|(&a, _)| a);
        starts.extend(succ);
        for p in starts {
            if self.is_break(p) {
                self.brk.insert(p);
            } else {
                self.brk.remove(&p);
            }
        }
    }

    /// Rebuild the `G̃` runs meeting `G` starts in `[x0, x1]`; breaks must be current.
    fn rebuild_runs(&mut self, x0: usize, x1: usize) {
        let succ = self.g.range(x1 + 1..).next().map(|(&a, _)| a);
        let r0 = match self.g.range(..x0).next_back() {
            Some((&a, _)) => self.brk.range(..=a).next_back().copied().unwrap_or(a),
            None => x0,
        };
        let upper = succ.unwrap_or(usize::MAX);
        let old: Vec<(usize, usize)> = self.gt.range(r0..=upper).map(|(&a, &b)| (a, b)).collect();
        for &(a, _) in &old {
            self.gt.remove(&a);
        }
        let runs: Vec<usize> = self.brk.range(r0..=upper).copied().collect();
        let mut new = Vec::with_capacity(runs.len());
        for r in runs {
            let last = match self.brk.range(r + 1..).next() {
                Some(&nb) => self.g.range(..nb).next_back(),
                None => self.g.iter().next_back(),
            };
            let end = *last.expect("a run has at least one pair").1;
            new.push((r, end));
        }
        for &(a, b) in &new {
            self.gt.insert(a, b);
        }
        for (a, b) in old.into_iter().chain(new) {
            self.touched.push((PairKind::Global, a, b));
        }
    }

    fn present(&self, id: Id) -> Option<(bool, bool)> {
        match id.0 {
            PairKind::Local => (self.l.contains(&id.1) && !self.bad[id.1]).then_some((false, false)),
            PairKind::Global => (self.gt.get(&id.1) == Some(&id.2)).then(|| (self.bad[id.1], self.bad[id.2])),
        }
    }

    /// Close/open events for everything touched since the last call; the
    /// state now describes sequence position `pos`.
    fn record(&mut self, pos: usize) {
        let mut ids = std::mem::take(&mut self.touched);
        ids.sort();
        ids.dedup();
        for id in ids {
            let now = self.present(id);
            let was = self.open.get(&id).map(|&(a, b, _)| (a, b));
            if now == was {
                continue;
            }
            if let Some((bi, bj, hi)) = self.open.remove(&id) {
                self.events.push(IntervalEvent {
                    kind: id.0,
                    i: id.1,
                    j: id.2,
                    first: pos + 1,
                    last: hi,
                    bad_i: bi,
                    bad_j: bj,
                });
            }
            if let Some((bi, bj)) = now {
                self.open.insert(id, (bi, bj, pos));
            }
        }
    }

    fn record_all(&mut self, pos: usize) {
        for i in self.l.clone() {
            self.touched.push((PairKind::Local, i, i));
        }
        for (a, b) in self.gt.clone() {
            self.touched.push((PairKind::Global, a, b));
        }
        self.record(pos);
    }

    fn finish(mut self) -> Vec<IntervalEvent> {
        let open = std::mem::take(&mut self.open);
        for (id, (bi, bj, hi)) in open {
            self.events.push(IntervalEvent {
                kind: id.0,
                i: id.1,
                j: id.2,
                first: 0,
                last: hi,
                bad_i: bi,
                bad_j: bj,
            });
        }
        self.events.sort_by_key(|e| (e.first, e.kind, e.i, e.j));
        self.events
    }
}

/// Run the maintenance pass over a sequence given by its forward-order
/// heights. `visit(pos, m)` sees the state at every position, last to first.
/// Returns the events of `G̃ ∪ (L∖B)`.
pub fn maintain(
    keys: &RowKeys,
    heights: &[(f64, f64)],
    bad_windows: &[Option<(usize, usize)>],
    mut visit: impl FnMut(usize, &Maintainer),
) -> Vec<IntervalEvent> {
    let n = keys.n;
    let last = heights.len() - 1;
    let (y0, y1) = heights[last];
    assert_eq!(y0, y1, "a sweep-sequence ends on the diagonal");
    let mut enter: Vec<Vec<usize>> = vec![Vec::new(); heights.len()];
    let mut leave: Vec<Vec<usize>> = vec![Vec::new(); heights.len() + 1];
    let mut bad = vec![false; n];
    for (c, w) in bad_windows.iter().enumerate() {
        if let Some((a, b)) = *w {
            if b == last {
                bad[c] = true;
            } else {
                enter[b].push(c);
            }
            leave[a].push(c);
        }
    }
    let mut m = Maintainer::new(keys, y0, bad);
    m.record_all(last);
    visit(last, &m);
    for pos in (0..last).rev() {
        let (s, t) = heights[pos];
        m.advance_start(s);
        m.advance_end(t);
        let mut flips = enter[pos].clone();
        flips.extend(leave[pos + 1].iter().copied());
        m.settle(&flips);
        m.record(pos);
        visit(pos, &m);
    }
    m.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::extremal_points;
    use crate::candidates::build_sweep_sequences;
    use crate::coverage::bad::compute_bad_windows;
    use crate::coverage::state::scratch_state;
    use crate::coverage::testgen::random_row;
    use crate::frechet::Row;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_row(row: &Row) {
        let keys = RowKeys::new(row);
        let ext = extremal_points(row, false);
        for seq in build_sweep_sequences(&ext, row.is_mirrored()).unwrap() {
            let h: Vec<(f64, f64)> = seq.pairs.iter().map(|&(a, b)| (ext.y(a), ext.y(b))).collect();
            let bw = compute_bad_windows(row, &h);
            for (i, w) in bw.iter().enumerate() {
                for (k, &(s, t)) in h.iter().enumerate() {
                    let inside = w.is_some_and(|(a, b)| a <= k && k <= b);
                    assert_eq!(inside, crate::coverage::state::bad_index_test(row, i, s, t), "cell {i} pos {k}");
                }
            }
            let mut snaps = vec![None; h.len()];
            let events = maintain(&keys, &h, &bw, |pos, m| {
                let want = scratch_state(row, &keys, h[pos].0, h[pos].1);
                assert_eq!(m.snapshot(), want, "pos {pos} of {:?} at {:?}", seq.kind, h[pos]);
                snaps[pos] = Some(want);
            });
            for (pos, snap) in snaps.iter().enumerate() {
                let snap = snap.as_ref().unwrap();
                let mut from_events: Vec<(PairKind, usize, usize, bool, bool)> = events
                    .iter()
                    .filter(|e| e.first <= pos && pos <= e.last)
                    .map(|e| (e.kind, e.i, e.j, e.bad_i, e.bad_j))
                    .collect();
                from_events.sort();
                let mut want: Vec<_> = snap
                    .l
                    .iter()
                    .map(|&i| (PairKind::Local, i, i, false, false))
                    .chain(
                        snap.gt
                            .iter()
                            .map(|(&a, &b)| (PairKind::Global, a, b, snap.b.contains(&a), snap.b.contains(&b))),
                    )
                    .collect();
                want.sort();
                assert_eq!(from_events, want, "events at pos {pos}");
            }
        }
    }

    #[test]
    fn maintained_state_matches_scratch() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let row = random_row(&mut rng, false);
            check_row(&row);
            check_row(&row.mirror());
        }
    }

    #[test]
    fn maintained_state_matches_scratch_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..300 {
            let row = random_row(&mut rng, true);
            check_row(&row);
            check_row(&row.mirror());
        }
    }

    #[test]
    fn bad_windows_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let fwd = random_row(&mut rng, false);
            for row in [fwd.mirror(), fwd] {
            let ext = extremal_points(&row, false);
            for seq in build_sweep_sequences(&ext, false).unwrap() {
                let h: Vec<(f64, f64)> = seq.pairs.iter().map(|&(a, b)| (ext.y(a), ext.y(b))).collect();
                let bw = compute_bad_windows(&row, &h);
                for (i, w) in bw.iter().enumerate() {
                    for (k, &(s, t)) in h.iter().enumerate() {
                        let inside = w.is_some_and(|(a, b)| a <= k && k <= b);
                        assert_eq!(inside, crate::coverage::state::bad_index_test(&row, i, s, t), "cell {i} pos {k} {w:?}");
                    }
                }
            }
            }
        }
    }
}
