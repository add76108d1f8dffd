//! Binomial coefficients and colex enumeration of k-subsets.

/// `C(n, k)`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// `C(n, k)` extended to integer tops: zero whenever `n < k` (including negative `n`).
pub fn binom_signed(n: i64, k: u64) -> i64 {
    if n < 0 {
        return 0;
    }
    binom(n as u64, k) as i64
}

/// Colex rank of a strictly increasing tuple: `sum_i C(v_i, i + 1)`.
pub fn colex_rank(sorted: &[u32]) -> u64 {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| binom(u64::from(v), i as u64 + 1))
        .sum()
}

/// All `k`-subsets of `0..n` in colex order.
pub fn k_subsets_colex(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(binom(n as u64, k as u64) as usize);
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    // Successor in colex: bump the lowest position that can move up.
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(cur.clone());
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n as u32 };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j as u32;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

/// Calls `f` on every `k`-subset of `items` (as index positions), lexicographically.
/// Stops early when `f` returns `true`; returns whether it stopped.
pub fn for_each_combination(len: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > len {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < len - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(9, 3), 84);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom_signed(-1, 2), 0);
        assert_eq!(binom_signed(4, 3), 4);
    }

    #[test]
    fn colex_order_matches_rank() {
        for (n, k) in [(5, 2), (6, 3), (7, 4), (4, 0), (3, 3)] {
            let subsets = k_subsets_colex(n, k);
            assert_eq!(subsets.len() as u64, binom(n as u64, k as u64));
            for (i, s) in subsets.iter().enumerate() {
                assert_eq!(colex_rank(s), i as u64, "{s:?}");
            }
        }
    }

    #[test]
    fn combinations_visit_all() {
        let mut count = 0;
        for_each_combination(6, 3, |c| {
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            count += 1;
            false
        });
        assert_eq!(count, 20);
        let mut empty = 0;
        for_each_combination(4, 0, |_| {
            empty += 1;
            false
        });
        assert_eq!(empty, 1);
    }
}
