//! Indexing of unordered vertex pairs `(i, j)` with `i < j` in
//! lexicographic order. This fixes the bit layout used by tournament codes,
//! graph codes and the state spaces of the breadth-first oracles.

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the pair `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, k: usize) -> (usize, usize) {
    debug_assert!(k < pair_count(n));
    let mut i = 0;
    let mut k = k;
    while k >= n - i - 1 {
        k -= n - i - 1;
        i += 1;
    }
    (i, i + 1 + k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        for n in 2..=12 {
            let mut seen = vec![false; pair_count(n)];
            for i in 0..n {
                for j in i + 1..n {
                    let k = pair_index(n, i, j);
                    assert!(!seen[k]);
                    seen[k] = true;
                    assert_eq!(pair_at(n, k), (i, j));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(pair_at(4, 0), (0, 1));
        assert_eq!(pair_at(4, 1), (0, 2));
        assert_eq!(pair_at(4, 2), (0, 3));
        assert_eq!(pair_at(4, 3), (1, 2));
        assert_eq!(pair_at(4, 5), (2, 3));
    }
}
