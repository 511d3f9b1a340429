//! Brute-force references for the test suites. Slow on purpose and never
//! used by a solver.

use crate::error::{Error, Result};
use crate::frechet::FreeSpace;
use crate::interval::IntervalUnion;

/// Default grid subdivisions per cell and the ceiling for adaptive refinement.
pub const RHO: usize = 256;
pub const RHO_MAX: usize = 2048;

/// Free-space sampled on a grid with `rho` steps per cell side.
pub struct GridReachability<'a> {
    fs: &'a FreeSpace,
    rho: usize,
}

impl<'a> GridReachability<'a> {
    pub fn new(fs: &'a FreeSpace, rho: usize) -> Self {
        GridReachability { fs, rho: rho.max(1) }
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    /// Grid step in P's global parameter.
    pub fn step(&self) -> f64 {
        1.0 / (self.fs.nx() * self.rho) as f64
    }

    /// x values on a monotone grid path from height `s` to height `t`.
    pub fn cover(&self, s: f64, t: f64) -> IntervalUnion {
        let cols = self.fs.nx() * self.rho + 1;
        let rows = self.fs.ny() * self.rho;
        let ys = (s.clamp(0.0, 1.0) * rows as f64).round() as usize;
        let yt = ((t.clamp(0.0, 1.0) * rows as f64).round() as usize).max(ys);
        let h = yt - ys + 1;
        let x_of = |c: usize| c as f64 / (cols - 1) as f64;
        let y_of = |r: usize| (ys + r) as f64 / rows as f64;
        let free: Vec<Vec<bool>> = (0..h)
            .map(|r| (0..cols).map(|c| self.fs.contains_global(x_of(c), y_of(r))).collect())
            .collect();
        let mut fwd = vec![vec![false; cols]; h];
        for r in 0..h {
            for c in 0..cols {
                fwd[r][c] = free[r][c]
                    && (r == 0
                        || fwd[r - 1][c]
                        || (c > 0 && (fwd[r][c - 1] || fwd[r - 1][c - 1])));
            }
        }
        let mut bwd = vec![vec![false; cols]; h];
        for r in (0..h).rev() {
            for c in (0..cols).rev() {
                bwd[r][c] = free[r][c]
                    && (r == h - 1
                        || bwd[r + 1][c]
                        || (c + 1 < cols && (bwd[r][c + 1] || bwd[r + 1][c + 1])));
            }
        }
        let hit: Vec<bool> = (0..cols).map(|c| (0..h).any(|r| fwd[r][c] && bwd[r][c])).collect();
        let mut out = Vec::new();
        let mut c = 0;
        while c < cols {
            if hit[c] {
                let a = c;
                while c + 1 < cols && hit[c + 1] {
                    c += 1;
                }
                out.push((x_of(a), x_of(c)));
            }
            c += 1;
        }
        IntervalUnion::from_intervals(out)
    }
}

/// `Cov_A(S[s,t])` by monotone grid search at the default resolution.
pub fn brute_cov(fs: &FreeSpace, s: f64, t: f64) -> IntervalUnion {
    GridReachability::new(fs, RHO).cover(s, t)
}

/// Hausdorff distance between two unions; infinite when exactly one is empty.
pub fn hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed(a, b).max(directed(b, a)),
    }
}

fn dist(x: f64, u: &IntervalUnion) -> f64 {
    u.parts()
        .iter()
        .map(|&(l, r)| if x < l { l - x } else if x > r { x - r } else { 0.0 })
        .fold(f64::INFINITY, f64::min)
}

fn directed(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    let gaps: Vec<f64> = b.parts().windows(2).map(|w| 0.5 * (w[0].1 + w[1].0)).collect();
    let mut worst = 0.0f64;
    for &(l, r) in a.parts() {
        worst = worst.max(dist(l, b)).max(dist(r, b));
        for &g in &gaps {
            if l <= g && g <= r {
                worst = worst.max(dist(g, b));
            }
        }
    }
    worst
}

/// Compares `engine` against grid search, refining from `RHO` to `RHO_MAX`
/// until the Hausdorff distance is within two grid steps. Returns the
/// resolution that agreed, or the last distance and step on failure.
pub fn agrees_with_grid(fs: &FreeSpace, s: f64, t: f64, engine: &IntervalUnion) -> std::result::Result<usize, (f64, f64)> {
    let mut rho = RHO;
    loop {
        let g = GridReachability::new(fs, rho);
        let d = hausdorff(&g.cover(s, t), engine);
        if d <= 2.0 * g.step() {
            return Ok(rho);
        }
        if rho >= RHO_MAX {
            return Err((d, g.step()));
        }
        rho *= 2;
    }
}

/// Bitset footprints after removing duplicate and dominated sets and
/// elements.
fn reduce(sets: &[Vec<usize>], ground: usize) -> Result<Vec<u128>> {
    // element signature: which sets contain it
    let mut sig: Vec<Vec<usize>> = vec![Vec::new(); ground];
    for (k, s) in sets.iter().enumerate() {
        for &x in s {
            if x >= ground {
                return Err(Error::OutOfRange(format!("element {x} outside ground set of {ground}")));
            }
            sig[x].push(k);
        }
    }
    for s in &mut sig {
        s.sort_unstable();
        s.dedup();
    }
    if sig.iter().any(|s| s.is_empty()) {
        return Err(Error::Uncoverable("an element lies in no set".into()));
    }
    sig.sort();
    sig.dedup();
    // an element whose sets include another element's sets is covered for free
    let keep: Vec<&Vec<usize>> = sig
        .iter()
        .enumerate()
        .filter(|(i, s)| {
            !sig.iter().enumerate().any(|(j, o)| j != *i && o.len() < s.len() && o.iter().all(|k| s.binary_search(k).is_ok()))
        })
        .map(|(_, s)| s)
        .collect();
    if keep.len() > 128 {
        return Err(Error::TooLarge(format!("{} distinct ground elements after reduction", keep.len())));
    }
    let mut masks = vec![0u128; sets.len()];
    for (bit, s) in keep.iter().enumerate() {
        for &k in s.iter() {
            masks[k] |= 1u128 << bit;
        }
    }
    masks.retain(|&m| m != 0);
    masks.sort_unstable();
    masks.dedup();
    let dominated = |m: u128, all: &[u128]| all.iter().any(|&o| o != m && o & m == m);
    let masks: Vec<u128> = masks.iter().copied().filter(|&m| !dominated(m, &masks)).collect();
    Ok(masks)
}

fn full(masks: &[u128]) -> u128 {
    masks.iter().fold(0, |a, &m| a | m)
}

/// Minimum cover size by trying all `k`-subsets for `k = 1, 2, …` of the
/// raw sets, without any reduction.
pub fn setcover_by_combinations(sets: &[Vec<usize>], ground: usize) -> Result<usize> {
    if ground == 0 {
        return Ok(0);
    }
    let words = ground.div_ceil(64);
    let bits: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| {
            let mut b = vec![0u64; words];
            for &x in s.iter().filter(|&&x| x < ground) {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        })
        .collect();
    let mut all = vec![0u64; words];
    for x in 0..ground {
        all[x / 64] |= 1 << (x % 64);
    }
    let union = bits.iter().fold(vec![0u64; words], |a, b| a.iter().zip(b).map(|(x, y)| x | y).collect());
    if union != all {
        return Err(Error::Uncoverable("an element lies in no set".into()));
    }
    fn any_k(bits: &[Vec<u64>], from: usize, k: usize, acc: &[u64], all: &[u64]) -> bool {
        if k == 0 {
            return acc == all;
        }
        (from..bits.len()).any(|i| {
            bits.len() - i >= k && {
                let next: Vec<u64> = acc.iter().zip(&bits[i]).map(|(x, y)| x | y).collect();
                any_k(bits, i + 1, k - 1, &next, all)
            }
        })
    }
    let mut budget = 0.0;
    for k in 1..=bits.len() {
        budget += binom(bits.len(), k);
        if budget > 2e6 {
            return Err(Error::TooLarge(format!("more than 2e6 subsets of {} sets", bits.len())));
        }
        if any_k(&bits, 0, k, &vec![0u64; words], &all) {
            return Ok(k);
        }
    }
    unreachable!("the union of all sets covers the ground set")
}

/// Minimum cover size by branching on the lowest uncovered element.
pub fn setcover_by_branching(sets: &[Vec<usize>], ground: usize) -> Result<usize> {
    if ground == 0 {
        return Ok(0);
    }
    let masks = reduce(sets, ground)?;
    let all = full(&masks);
    fn go(masks: &[u128], covered: u128, all: u128, depth: usize, best: &mut usize) {
        if covered == all {
            *best = (*best).min(depth);
            return;
        }
        if depth + 1 >= *best {
            return;
        }
        let x = (!covered & all).trailing_zeros();
        for &m in masks.iter().filter(|&&m| m >> x & 1 == 1) {
            go(masks, covered | m, all, depth + 1, best);
        }
    }
    let mut best = masks.len();
    go(&masks, 0, all, 0, &mut best);
    Ok(best)
}

/// Exact minimum cover of `0..ground` by the given sets. Where the raw
/// enumeration is affordable, both search orders must agree.
pub fn brute_setcover(sets: &[Vec<usize>], ground: usize) -> Result<usize> {
    let a = setcover_by_branching(sets, ground)?;
    if let Ok(b) = setcover_by_combinations(sets, ground) {
        assert_eq!(a, b, "set cover enumerations disagree");
    }
    Ok(a)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Drops empty footprints and every footprint contained in another one
/// (keeping the first of equal ones). The best `k`-subset measure is unchanged.
pub fn reduce_footprints(mut covs: Vec<IntervalUnion>) -> Vec<IntervalUnion> {
    covs.retain(|c| c.measure() > 0.0);
    let mut keep = vec![true; covs.len()];
    for a in 0..covs.len() {
        for b in 0..covs.len() {
            if a == b || !keep[b] {
                continue;
            }
            let inside = covs[a].is_subset_of(&covs[b], 0.0);
            let equal = inside && covs[b].is_subset_of(&covs[a], 0.0);
            if inside && (!equal || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    covs.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

/// `max ‖⋃_{c ∈ Q} cov(c)‖` over subsets `Q` of size `min(k, |cands|)`.
pub fn brute_best_k_measure(covs: &[IntervalUnion], k: usize) -> Result<f64> {
    let k = k.min(covs.len());
    if binom(covs.len(), k) > 1e6 {
        return Err(Error::TooLarge(format!("C({}, {k}) subsets", covs.len())));
    }
    fn go(covs: &[IntervalUnion], from: usize, k: usize, acc: &IntervalUnion, best: &mut f64) {
        if k == 0 {
            *best = best.max(acc.measure());
            return;
        }
        for i in from..=covs.len() - k {
            go(covs, i + 1, k - 1, &acc.union(&covs[i]), best);
        }
    }
    let mut best = 0.0;
    go(covs, 0, k, &IntervalUnion::new(), &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Point, PolygonalCurve};
    use crate::frechet::reach_cover;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seg(a: [f64; 2], b: [f64; 2]) -> PolygonalCurve {
        PolygonalCurve::from_coords(&[&a, &b]).unwrap()
    }

    #[test]
    fn all_free_and_empty() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]).unwrap();
        let fs = FreeSpace::exact(&seg([0.0, 0.0], [2.0, 0.0]), &p, 100.0);
        assert_eq!(GridReachability::new(&fs, 16).cover(0.0, 1.0).parts(), &[(0.0, 1.0)]);
        let fs = FreeSpace::exact(&seg([0.0, 9.0], [2.0, 9.0]), &p, 1.0);
        assert!(brute_cov(&fs, 0.0, 1.0).is_empty());
    }

    #[test]
    fn random_instances_agree_with_reachability() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut checked = 0;
        for _ in 0..30 {
            let n = rng.gen_range(2..6);
            let mk = |rng: &mut ChaCha8Rng, n: usize| {
                PolygonalCurve::new(
                    (0..=n)
                        .map(|k| Point(vec![k as f64 + rng.gen_range(-0.3..0.3), rng.gen_range(-0.6..0.6)]))
                        .collect(),
                )
                .unwrap()
            };
            let p = mk(&mut rng, n);
            let ns = rng.gen_range(1..3).min(n);
            let s = mk(&mut rng, ns);
            let fs = FreeSpace::exact(&s, &p, rng.gen_range(0.4..1.2));
            let (a, b) = (rng.gen_range(0.0..0.5), rng.gen_range(0.5..1.0));
            let engine = reach_cover(&fs, a, b);
            match agrees_with_grid(&fs, a, b, &engine) {
                Ok(_) => checked += 1,
                Err((d, step)) => panic!("grid and engine differ by {d} (step {step})"),
            }
        }
        assert_eq!(checked, 30);
    }

    #[test]
    fn hausdorff_of_unions() {
        let a = IntervalUnion::from_intervals([(0.0, 0.2), (0.6, 1.0)]);
        let b = IntervalUnion::from_intervals([(0.0, 1.0)]);
        assert!((hausdorff(&a, &b) - 0.2).abs() < 1e-12);
        assert_eq!(hausdorff(&a, &a), 0.0);
        assert!(hausdorff(&a, &IntervalUnion::new()).is_infinite());
    }

    #[test]
    fn setcover_trivial_cases() {
        assert_eq!(brute_setcover(&[vec![0, 1, 2], vec![0]], 3).unwrap(), 1);
        let singles: Vec<Vec<usize>> = (0..7).map(|i| vec![i]).collect();
        assert_eq!(brute_setcover(&singles, 7).unwrap(), 7);
        assert!(matches!(brute_setcover(&[vec![0]], 2), Err(Error::Uncoverable(_))));
    }

    #[test]
    fn setcover_orders_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let ground = rng.gen_range(1..25);
            let m = rng.gen_range(1..20);
            let mut sets: Vec<Vec<usize>> = (0..m)
                .map(|_| (0..ground).filter(|_| rng.gen_bool(0.25)).collect())
                .collect();
            sets.push((0..ground).filter(|x| x % 3 == 0).collect());
            sets.push((0..ground).filter(|x| x % 3 != 0).collect());
            let a = setcover_by_branching(&sets, ground).unwrap();
            let b = setcover_by_combinations(&sets, ground).unwrap();
            assert_eq!(a, b);
            assert!(a <= 2);
        }
    }

    #[test]
    fn footprint_reduction() {
        let u = |v: &[(f64, f64)]| IntervalUnion::from_intervals(v.iter().copied());
        let r = reduce_footprints(vec![
            u(&[(0.0, 0.5)]),
            u(&[(0.1, 0.2)]),
            u(&[(0.0, 0.5)]),
            u(&[]),
            u(&[(0.4, 0.9)]),
        ]);
        assert_eq!(r, vec![u(&[(0.0, 0.5)]), u(&[(0.4, 0.9)])]);
    }

    #[test]
    fn best_k_measure() {
        let covs: Vec<IntervalUnion> = (0..20)
            .map(|i| IntervalUnion::from_intervals([(i as f64 * 0.04, i as f64 * 0.04 + 0.1)]))
            .collect();
        let all = covs.iter().fold(IntervalUnion::new(), |a, c| a.union(c)).measure();
        assert!((brute_best_k_measure(&covs, 20).unwrap() - all).abs() < 1e-12);
        let one = covs.iter().map(|c| c.measure()).fold(0.0, f64::max);
        assert!((brute_best_k_measure(&covs, 1).unwrap() - one).abs() < 1e-12);
        let mut best2 = 0.0f64;
        for i in 0..20 {
            for j in i + 1..20 {
                best2 = best2.max(covs[i].union(&covs[j]).measure());
            }
        }
        assert!((brute_best_k_measure(&covs, 2).unwrap() - best2).abs() < 1e-12);
        let many: Vec<IntervalUnion> = (0..200).map(|_| IntervalUnion::new()).collect();
        assert!(brute_best_k_measure(&many, 5).is_err());
    }
}
