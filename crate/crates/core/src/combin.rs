//! Small combinatorial helpers: factorials, lexicographic permutation stepping,
//! Lehmer ranks, integer partitions and equal-block set partitions.

use num_bigint::BigUint;
use num_traits::One;

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= (n - t) as u64;
        acc /= (t + 1) as u64;
    }
    acc
}

/// `n!` as a `u64`; panics past 20.
pub fn factorial_u64(n: usize) -> u64 {
    assert!(n <= 20, "{n}! overflows u64");
    (1..=n as u64).product()
}

/// Steps `xs` to the next permutation in lexicographic order. Returns `false`
/// (leaving `xs` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Lehmer rank of a 0-based image table, i.e. its index in lexicographic order.
/// Degree at most 20.
pub fn lehmer_rank(images: &[u32]) -> u64 {
    let n = images.len();
    debug_assert!(n <= 20);
    let mut used: u32 = 0;
    let mut rank = 0u64;
    for (i, &v) in images.iter().enumerate() {
        let smaller_unused = (!used & ((1u32 << v) - 1)).count_ones() as u64;
        rank += smaller_unused * factorial_u64(n - 1 - i);
        used |= 1 << v;
    }
    rank
}

/// Inverse of [`lehmer_rank`].
pub fn lehmer_unrank(n: usize, mut rank: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial_u64(n - 1 - i);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// All partitions of `n` into positive parts, each sorted non-increasing,
/// listed in reverse lexicographic order (`[n]` first).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `points` into `m` blocks of `d` points each. Blocks are
/// sorted and ordered by their minimum element.
pub fn equal_block_partitions(points: &[u32], d: usize, m: usize) -> Vec<Vec<Vec<u32>>> {
    assert_eq!(
        points.len(),
        d * m,
        "points must split into {m} blocks of {d}"
    );
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    partition_rec(&sorted, d, &mut Vec::new(), &mut out);
    out
}

fn partition_rec(rest: &[u32], d: usize, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
    if rest.is_empty() {
        out.push(cur.clone());
        return;
    }
    let head = rest[0];
    let tail = &rest[1..];
    for_each_combination(tail, d - 1, |chosen| {
        let mut block = Vec::with_capacity(d);
        block.push(head);
        block.extend_from_slice(chosen);
        let remaining: Vec<u32> = tail
            .iter()
            .copied()
            .filter(|x| !chosen.contains(x))
            .collect();
        cur.push(block);
        partition_rec(&remaining, d, cur, out);
        cur.pop();
    });
}

/// Calls `f` on every `k`-element combination of `pool`, in lexicographic order
/// of positions.
pub fn for_each_combination<T: Copy>(pool: &[T], k: usize, mut f: impl FnMut(&[T])) {
    if k > pool.len() {
        return;
    }
    let n = pool.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| pool[i]).collect();
    loop {
        f(&buf);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = pool[idx[j]];
        }
    }
}

/// `reach[s]` is true iff some sub-multiset of `parts` sums to `s`, for
/// `s <= max`.
pub fn subset_sums(parts: &[usize], max: usize) -> Vec<bool> {
    let mut reach = vec![false; max + 1];
    reach[0] = true;
    for &p in parts {
        for s in (p..=max).rev() {
            if reach[s - p] {
                reach[s] = true;
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(10), BigUint::from(3_628_800u32));
        assert_eq!(binomial(8, 4), BigUint::from(70u32));
        assert_eq!(binomial(3, 5), BigUint::default());
    }

    #[test]
    fn permutation_stepping_visits_all() {
        let mut xs = [0u32, 1, 2, 3];
        let mut count = 1;
        let mut ranks = vec![lehmer_rank(&xs)];
        while next_permutation(&mut xs) {
            count += 1;
            ranks.push(lehmer_rank(&xs));
        }
        assert_eq!(count, 24);
        assert_eq!(ranks, (0..24).collect::<Vec<u64>>());
        assert_eq!(xs, [0, 1, 2, 3]);
    }

    #[test]
    fn unrank_inverts_rank() {
        for r in 0..120 {
            assert_eq!(lehmer_rank(&lehmer_unrank(5, r)), r);
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| integer_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let pts: Vec<u32> = (1..=6).collect();
        assert_eq!(equal_block_partitions(&pts, 2, 3).len(), 15);
        assert_eq!(equal_block_partitions(&pts, 3, 2).len(), 10);
        let pts: Vec<u32> = (1..=8).collect();
        assert_eq!(equal_block_partitions(&pts, 2, 4).len(), 105);
    }

    #[test]
    fn combinations_in_order() {
        let mut seen = Vec::new();
        for_each_combination(&[1, 2, 3, 4], 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut n0 = 0;
        for_each_combination(&[1, 2, 3], 0, |_| n0 += 1);
        assert_eq!(n0, 1);
        let mut n3 = 0;
        for_each_combination(&[1, 2, 3], 3, |_| n3 += 1);
        assert_eq!(n3, 1);
    }
}
