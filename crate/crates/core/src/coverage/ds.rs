//! Shoot-left over a list of intervals and jump-right over a list of values.

/// Balanced tree over closed intervals; a node stores the intersection of its leaves.
#[derive(Clone, Debug)]
pub struct ShootLeftDS<T> {
    size: usize,
    /// `None` = empty intersection
    node: Vec<Option<(T, T)>>,
    len: usize,
}

impl<T: Copy + PartialOrd> ShootLeftDS<T> {
    pub fn new(intervals: &[Option<(T, T)>]) -> Self {
        let len = intervals.len();
        let size = len.next_power_of_two().max(1);
        let mut node = vec![None; 2 * size];
        for (k, iv) in intervals.iter().enumerate() {
            node[size + k] = iv.filter(|(a, b)| a <= b);
        }
        for k in (1..size).rev() {
            node[k] = meet(node[2 * k], node[2 * k + 1]);
        }
        ShootLeftDS { size, node, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Smallest `j ≤ i` with `x ∈ I_j ∩ … ∩ I_i`, or `None` if `x ∉ I_i`.
    /// A read-only walk: the rightmost interval in `[0, i]` missing `x`, plus one.
    pub fn query(&self, i: usize, x: T) -> Option<usize> {
        assert!(i < self.len);
        if !self.inside(self.size + i, x) {
            return None;
        }
        Some(self.rightmost_miss(1, 0, self.size - 1, i, x).map_or(0, |k| k + 1))
    }

    fn inside(&self, v: usize, x: T) -> bool {
        self.node[v].is_some_and(|(a, b)| a <= x && x <= b)
    }

    fn rightmost_miss(&self, v: usize, lo: usize, hi: usize, i: usize, x: T) -> Option<usize> {
        if lo > i || (hi <= i && self.inside(v, x)) {
            return None;
        }
        if lo == hi {
            return Some(lo);
        }
        let mid = (lo + hi) / 2;
        self.rightmost_miss(2 * v + 1, mid + 1, hi, i, x)
            .or_else(|| self.rightmost_miss(2 * v, lo, mid, i, x))
    }
}

fn meet<T: Copy + PartialOrd>(a: Option<(T, T)>, b: Option<(T, T)>) -> Option<(T, T)> {
    let (a0, a1) = a?;
    let (b0, b1) = b?;
    let lo = if a0 >= b0 { a0 } else { b0 };
    let hi = if a1 <= b1 { a1 } else { b1 };
    (lo <= hi).then_some((lo, hi))
}

/// `answer(i) = min{j > i : a_j < a_i}`, precomputed with a monotone stack.
#[derive(Clone, Debug)]
pub struct JumpRightDS {
    next: Vec<Option<usize>>,
}

impl JumpRightDS {
    pub fn new<T: PartialOrd>(a: &[T]) -> Self {
        let mut next = vec![None; a.len()];
        let mut stack: Vec<usize> = Vec::new();
        for j in 0..a.len() {
            while let Some(&i) = stack.last() {
                if a[j] < a[i] {
                    next[i] = Some(j);
                    stack.pop();
                } else {
                    break;
                }
            }
            stack.push(j);
        }
        JumpRightDS { next }
    }

    pub fn query(&self, i: usize) -> Option<usize> {
        self.next[i]
    }
}
