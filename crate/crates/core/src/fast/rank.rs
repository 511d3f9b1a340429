//! Coarsening a family of sorted lists into `O(K)` buckets of `O(Σm/K)`
//! elements each, touching only `O(K n)` list positions.
//!
//! A subproblem is a set of index ranges, one per list. Small subproblems
//! (at most 20 elements per list on average) are sorted once and cut into
//! runs of the target size. Larger ones cut every range into five
//! near-equal pieces and split at the first piece start `c` whose weight
//! below is at least the weight above. Pieces straddling `c` hold at most a quarter of the
//! elements, so both sides keep a quarter or more.

/// Random access into a sorted list, `O(log m)` per call.
pub trait ImplicitSortedList {
    type Key: Ord + Copy;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn item_at(&self, j: usize) -> Self::Key;

    /// Number of items strictly below `v`.
    fn rank_below(&self, v: &Self::Key) -> usize {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.item_at(mid) < *v {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// A plain sorted vector.
#[derive(Clone, Debug)]
pub struct VecList<K>(pub Vec<K>);

impl<K: Ord + Copy> ImplicitSortedList for VecList<K> {
    type Key = K;

    fn len(&self) -> usize {
        self.0.len()
    }

    fn item_at(&self, j: usize) -> K {
        self.0[j]
    }

    fn rank_below(&self, v: &K) -> usize {
        self.0.partition_point(|x| x < v)
    }
}

/// Boundaries `v₁ < v₂ < …` and the number of elements in each closed
/// bucket `[v_i, v_{i+1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarsePartition<K> {
    pub boundaries: Vec<K>,
    pub occupancy: Vec<usize>,
}

/// Base-case threshold and bucket constant.
pub const C_BUCKET: usize = 20;

type Ranges = Vec<(usize, usize, usize)>;

fn size(r: &Ranges) -> usize {
    r.iter().map(|&(_, a, b)| b - a).sum()
}

fn split_at<L: ImplicitSortedList>(lists: &[L], r: &Ranges, c: &L::Key) -> (Ranges, Ranges) {
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for &(l, a, b) in r {
        let k = lists[l].rank_below(c).clamp(a, b);
        if k > a {
            lo.push((l, a, k));
        }
        if b > k {
            hi.push((l, k, b));
        }
    }
    (lo, hi)
}

/// Halves the subproblem by position. Only reached when rounding makes an
/// implicit list locally unsorted and the value split is one-sided.
fn split_by_position(r: &Ranges) -> (Ranges, Ranges) {
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    if r.len() > 1 {
        let h = r.len() / 2;
        return (r[..h].to_vec(), r[h..].to_vec());
    }
    let (l, a, b) = r[0];
    let mid = a + (b - a) / 2;
    lo.push((l, a, mid));
    hi.push((l, mid, b));
    (lo, hi)
}

fn pivot<L: ImplicitSortedList>(lists: &[L], r: &Ranges) -> L::Key {
    // five pieces per range: (min, max, weight)
    let mut pieces: Vec<(L::Key, L::Key, usize)> = Vec::new();
    for &(l, a, b) in r {
        let len = b - a;
        for p in 0..5 {
            let (s, e) = (a + len * p / 5, a + len * (p + 1) / 5);
            if e > s {
                pieces.push((lists[l].item_at(s), lists[l].item_at(e - 1), e - s));
            }
        }
    }
    let mut by_max: Vec<(L::Key, usize)> = pieces.iter().map(|p| (p.1, p.2)).collect();
    let mut by_min: Vec<(L::Key, usize)> = pieces.iter().map(|p| (p.0, p.2)).collect();
    by_max.sort();
    by_min.sort();
    let total: usize = pieces.iter().map(|p| p.2).sum();
    // w(c) = Σ_{max < c} w − Σ_{min ≥ c} w grows with c
    let (mut below, mut im) = (0usize, 0usize);
    let mut above = total;
    for (k, &(c, _)) in by_min.iter().enumerate() {
        while im < by_max.len() && by_max[im].0 < c {
            below += by_max[im].1;
            im += 1;
        }
        if k > 0 {
            above -= by_min[k - 1].1;
        }
        if below >= above {
            return c;
        }
    }
    by_min.last().expect("non-empty").0
}

/// Partition of `⋃ lists` into buckets of at most `Σm/K` elements plus the
/// shared right boundary.
pub fn rank_select_coarsen<L: ImplicitSortedList>(lists: &[L], k: usize) -> CoarsePartition<L::Key> {
    let total: usize = lists.iter().map(|l| l.len()).sum();
    if total == 0 {
        return CoarsePartition {
            boundaries: Vec::new(),
            occupancy: Vec::new(),
        };
    }
    let k = k.clamp(1, total);
    let target = total as f64 / k as f64;
    let n = lists.len();
    let root: Ranges = lists.iter().enumerate().filter(|(_, l)| !l.is_empty()).map(|(i, l)| (i, 0, l.len())).collect();
    let mut stack = vec![root];
    let mut leaves: Vec<L::Key> = Vec::new();
    while let Some(r) = stack.pop() {
        let m = size(&r);
        if m as f64 <= target {
            leaves.push(r.iter().map(|&(l, a, _)| lists[l].item_at(a)).min().expect("non-empty"));
            continue;
        }
        if m <= C_BUCKET * n {
            // one sort, then cut into runs of ⌊target⌋ instead of halving
            let mut all: Vec<L::Key> = r.iter().flat_map(|&(l, a, b)| (a..b).map(move |j| lists[l].item_at(j))).collect();
            all.sort();
            let step = (target.floor() as usize).max(1);
            leaves.extend(all.iter().step_by(step).copied());
            continue;
        }
        let c = pivot(lists, &r);
        let (mut lo, mut hi) = split_at(lists, &r, &c);
        if lo.is_empty() || hi.is_empty() {
            (lo, hi) = split_by_position(&r);
        }
        stack.push(hi);
        stack.push(lo);
    }
    leaves.sort();
    let last = lists
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| l.item_at(l.len() - 1))
        .max()
        .expect("non-empty");
    let mut boundaries = leaves;
    if *boundaries.last().expect("non-empty") < last {
        boundaries.push(last);
    }
    let below = |v: &L::Key| lists.iter().map(|l| l.rank_below(v)).sum::<usize>();
    let at_most = |v: &L::Key| lists.iter().map(|l| count_le(l, v)).sum::<usize>();
    let occupancy = boundaries.windows(2).map(|w| at_most(&w[1]).saturating_sub(below(&w[0]))).collect();
    CoarsePartition { boundaries, occupancy }
}

fn count_le<L: ImplicitSortedList>(l: &L, v: &L::Key) -> usize {
    let r = l.rank_below(v);
    if r < l.len() && l.item_at(r) == *v {
        r + 1
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn family(vals: Vec<Vec<u32>>) -> Vec<VecList<(u32, usize, usize)>> {
        vals.into_iter()
            .enumerate()
            .map(|(i, mut v)| {
                v.sort();
                VecList(v.into_iter().enumerate().map(|(p, x)| (x, i, p)).collect())
            })
            .collect()
    }

    fn check(lists: &[VecList<(u32, usize, usize)>], k: usize) {
        let total: usize = lists.iter().map(|l| l.0.len()).sum();
        let part = rank_select_coarsen(lists, k);
        let mut all: Vec<_> = lists.iter().flat_map(|l| l.0.iter().copied()).collect();
        all.sort();
        let b = &part.boundaries;
        assert_eq!(b[0], all[0]);
        assert_eq!(*b.last().unwrap(), *all.last().unwrap());
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.len() <= 8 * k.min(total), "{} boundaries for K = {k}", b.len());
        let cap = C_BUCKET as f64 * total as f64 / k.min(total) as f64;
        for (w, &occ) in b.windows(2).zip(&part.occupancy) {
            let direct = all.iter().filter(|x| w[0] <= **x && **x <= w[1]).count();
            assert_eq!(occ, direct);
            assert!(occ as f64 <= cap, "bucket of {occ} > {cap}");
        }
    }

    #[test]
    fn one_list_of_hundred() {
        let lists = family(vec![(0..100).map(|x| x * 3).collect()]);
        check(&lists, 10);
        let part = rank_select_coarsen(&lists, 10);
        // direct equi-partition has buckets of 10; we stay within one extra boundary element
        assert!(part.occupancy.iter().all(|&o| o <= 11));
    }

    #[test]
    fn full_refinement() {
        let lists = family(vec![vec![5, 1, 9], vec![2, 2, 8], vec![7]]);
        let part = rank_select_coarsen(&lists, 7);
        assert!(part.occupancy.iter().all(|&o| o <= 2));
        assert_eq!(part.boundaries.len(), 7);
    }

    #[test]
    fn skewed_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut vals: Vec<Vec<u32>> = vec![Vec::new(); 50];
        vals[17] = (0..5000).map(|_| rng.gen_range(0..1_000_000)).collect();
        vals[3] = vec![1];
        let lists = family(vals);
        for k in [1, 3, 10, 100, 1000, 5001] {
            check(&lists, k);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn covers_and_bounds(
            vals in prop::collection::vec(prop::collection::vec(0u32..500, 0..80), 1..12),
            k in 1usize..300,
        ) {
            let lists = family(vals);
            if lists.iter().any(|l| !l.0.is_empty()) {
                check(&lists, k);
            }
        }
    }
}
