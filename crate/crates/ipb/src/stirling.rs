//! Stirling numbers of the second kind, classical and incomplete.
//!
//! `S(n, k)` counts partitions of an n-set into k nonempty blocks. The
//! restricted variant `S(n, k)_{<=m}` admits only blocks of size at most m,
//! the associated variant `S(n, k)_{>=m}` only blocks of size at least m.
//!
//! Tables are filled row by row from one recurrence per variant, obtained by
//! conditioning on the block containing the largest element:
//!
//! ```text
//! classical:   S(n+1, k) = k*S(n, k) + S(n, k-1)
//! restricted:  S(n+1, k)_{<=m} = sum_{i=0}^{m-1} C(n, i) * S(n-i, k-1)_{<=m}
//! associated:  S(n+1, k)_{>=m} = k*S(n, k)_{>=m} + C(n, m-1)*S(n-m+1, k-1)_{>=m}
//! ```
//!
//! Each variant's triangle is built once per requested size and memoized
//! behind a lock; callers see pure functions. Everything is exact `BigInt`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result, Variant};

/// Default ceiling for the brute-force partition oracle; enumeration beyond
/// this is desk-hostile (Bell(16) is already ~1e10 partitions).
pub const DEFAULT_ENUM_CAP: usize = 16;

static ZERO: OnceLock<BigInt> = OnceLock::new();

fn zero() -> &'static BigInt {
    ZERO.get_or_init(BigInt::zero)
}

/// Rows 0..=n_max of one variant's triangle: `rows[n][k]` for 0 <= k <= n.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    variant: Variant,
    n_max: usize,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn build(variant: Variant, n_max: usize) -> Self {
        variant.assert_valid();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max {
            // Row n is computed from rows < n; entry (n, 0) is 0 for n >= 1.
            let mut row = vec![BigInt::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                *slot = match variant {
                    Variant::Classical => {
                        let mut v = rows[n - 1][k - 1].clone();
                        if k <= n - 1 {
                            v += &rows[n - 1][k] * BigInt::from(k);
                        }
                        v
                    }
                    Variant::Restricted(m) => {
                        // Largest element sits in a block of size i+1 <= m.
                        let mut v = BigInt::zero();
                        for i in 0..m.min(n) {
                            let prev = &rows[n - 1 - i];
                            if k - 1 < prev.len() {
                                v += binomial(n - 1, i) * &prev[k - 1];
                            }
                        }
                        v
                    }
                    Variant::Associated(m) => {
                        let mut v = BigInt::zero();
                        if k <= n - 1 {
                            v += &rows[n - 1][k] * BigInt::from(k);
                        }
                        if n >= m {
                            let prev = &rows[n - m];
                            if k - 1 < prev.len() {
                                v += binomial(n - 1, m - 1) * &prev[k - 1];
                            }
                        }
                        v
                    }
                };
            }
            rows.push(row);
        }
        StirlingTable {
            variant,
            n_max,
            rows,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Entry (n, k); zero outside the stored triangle (in particular k > n).
    pub fn value(&self, n: usize, k: usize) -> &BigInt {
        assert!(n <= self.n_max, "row {n} beyond table size {}", self.n_max);
        self.rows[n].get(k).unwrap_or_else(|| zero())
    }

    /// Row n as a slice: `[S(n, 0), ..., S(n, n)]`.
    pub fn row(&self, n: usize) -> &[BigInt] {
        assert!(n <= self.n_max, "row {n} beyond table size {}", self.n_max);
        &self.rows[n]
    }
}

static TABLES: OnceLock<Mutex<HashMap<Variant, Arc<StirlingTable>>>> = OnceLock::new();

/// Shared table for `variant` covering at least rows 0..=n. Tables grow
/// geometrically so repeated scalar queries do not rebuild per call.
pub fn table(variant: Variant, n: usize) -> Arc<StirlingTable> {
    variant.assert_valid();
    let mut map = TABLES
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap();
    if let Some(t) = map.get(&variant) {
        if t.n_max >= n {
            return Arc::clone(t);
        }
    }
    let have = map.get(&variant).map_or(0, |t| t.n_max);
    let target = n.max(2 * have).max(16);
    let built = Arc::new(StirlingTable::build(variant, target));
    map.insert(variant, Arc::clone(&built));
    built
}

/// Classical Stirling number of the second kind S(n, k).
pub fn stirling2(n: usize, k: usize) -> BigInt {
    table(Variant::Classical, n).value(n, k).clone()
}

/// Restricted Stirling number S(n, k)_{<=m}: all blocks of size at most m.
pub fn stirling2_restricted(n: usize, k: usize, m: usize) -> BigInt {
    table(Variant::Restricted(m), n).value(n, k).clone()
}

/// Associated Stirling number S(n, k)_{>=m}: all blocks of size at least m.
pub fn stirling2_associated(n: usize, k: usize, m: usize) -> BigInt {
    table(Variant::Associated(m), n).value(n, k).clone()
}

/// Row n of a variant's triangle: `[S(n, 0), ..., S(n, n)]`.
pub fn stirling_row(n: usize, variant: Variant) -> Vec<BigInt> {
    table(variant, n).row(n).to_vec()
}

/// Counts partitions of {1..n} into exactly k blocks whose sizes lie in
/// `[min_size, max_size]` by direct enumeration, independent of every
/// recurrence in this module. Intended as an oracle for small n.
pub fn partition_count_oracle(
    n: usize,
    k: usize,
    min_size: usize,
    max_size: Option<usize>,
) -> Result<BigInt> {
    partition_count_oracle_with_cap(n, k, min_size, max_size, DEFAULT_ENUM_CAP)
}

/// Same as [`partition_count_oracle`] with an explicit enumeration cap.
pub fn partition_count_oracle_with_cap(
    n: usize,
    k: usize,
    min_size: usize,
    max_size: Option<usize>,
    cap: usize,
) -> Result<BigInt> {
    assert!(min_size >= 1, "min_size must be positive");
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let max_size = max_size.unwrap_or(n.max(1));
    let mut sizes = Vec::with_capacity(k);
    let mut count: u128 = 0;
    place(0, n, k, min_size, max_size, &mut sizes, &mut count);
    Ok(BigInt::from(count))
}

/// Assigns element `next` to an existing block or opens a new one. Blocks are
/// identified by their least element, so each partition is reached exactly
/// once. Prunes when the remaining elements cannot fill every block to
/// `min_size`.
fn place(
    next: usize,
    n: usize,
    k: usize,
    min_size: usize,
    max_size: usize,
    sizes: &mut Vec<usize>,
    count: &mut u128,
) {
    if next == n {
        if sizes.len() == k && sizes.iter().all(|&s| s >= min_size) {
            *count += 1;
        }
        return;
    }
    let remaining = n - next;
    let deficit: usize = sizes
        .iter()
        .map(|&s| min_size.saturating_sub(s))
        .sum::<usize>()
        + (k - sizes.len()) * min_size;
    if deficit > remaining {
        return;
    }
    for j in 0..sizes.len() {
        if sizes[j] < max_size {
            sizes[j] += 1;
            place(next + 1, n, k, min_size, max_size, sizes, count);
            sizes[j] -= 1;
        }
    }
    if sizes.len() < k {
        sizes.push(1);
        place(next + 1, n, k, min_size, max_size, sizes, count);
        sizes.pop();
    }
}

static PASCAL: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();

/// Binomial coefficient C(n, k) from a shared, growable Pascal triangle.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut rows = PASCAL
        .get_or_init(|| Mutex::new(vec![vec![BigInt::one()]]))
        .lock()
        .unwrap();
    while rows.len() <= n {
        let prev = rows.last().unwrap();
        let mut row = vec![BigInt::one(); prev.len() + 1];
        for j in 1..prev.len() {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows[n][k].clone()
}

pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for j in 2..=n {
        f *= BigInt::from(j);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn classical_small_values() {
        assert_eq!(stirling2(0, 0), big(1));
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(stirling2(6, 3), big(90));
        for n in 0..=10 {
            assert_eq!(stirling2(n, n), big(1));
        }
        assert_eq!(stirling2(5, 0), big(0));
        assert_eq!(stirling2(3, 5), big(0));
    }

    #[test]
    fn restricted_small_values() {
        assert_eq!(stirling2_restricted(4, 2, 2), big(3));
        assert_eq!(stirling2_restricted(5, 2, 2), big(0));
        assert_eq!(stirling2_restricted(5, 3, 2), big(15));
        // m >= n removes the restriction entirely.
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(stirling2_restricted(n, k, 8), stirling2(n, k));
            }
        }
    }

    #[test]
    fn associated_small_values() {
        assert_eq!(stirling2_associated(4, 2, 2), big(3));
        assert_eq!(stirling2_associated(3, 2, 2), big(0));
        assert_eq!(stirling2_associated(5, 2, 2), big(10));
        // m = 1 is no restriction.
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(stirling2_associated(n, k, 1), stirling2(n, k));
            }
        }
    }

    #[test]
    fn support_windows() {
        // Restricted: nonzero only for k <= n <= m*k (plus (0,0)).
        let m = 3;
        for n in 0..=12 {
            for k in 0..=n {
                let v = stirling2_restricted(n, k, m);
                if n > m * k {
                    assert!(v.is_zero(), "S({n},{k})_<={m} should vanish");
                }
            }
        }
        // Associated: nonzero only for m*k <= n.
        for n in 0..=12 {
            for k in 0..=n {
                let v = stirling2_associated(n, k, m);
                if n < m * k {
                    assert!(v.is_zero(), "S({n},{k})_>={m} should vanish");
                }
            }
        }
    }

    #[test]
    fn rows_match_examples() {
        let r = stirling_row(3, Variant::Classical);
        assert_eq!(r, vec![big(0), big(1), big(3), big(1)]);
        let r = stirling_row(0, Variant::Restricted(2));
        assert_eq!(r, vec![big(1)]);
        let r = stirling_row(4, Variant::Associated(2));
        assert_eq!(r, vec![big(0), big(1), big(3), big(0), big(0)]);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(partition_count_oracle(4, 2, 1, Some(2)).unwrap(), big(3));
        assert_eq!(partition_count_oracle(4, 2, 2, None).unwrap(), big(3));
        assert_eq!(partition_count_oracle(4, 2, 1, None).unwrap(), big(7));
        assert_eq!(partition_count_oracle(0, 0, 1, None).unwrap(), big(1));
        assert_eq!(partition_count_oracle(3, 0, 1, None).unwrap(), big(0));
        // Empty window counts nothing.
        assert_eq!(partition_count_oracle(4, 2, 3, Some(2)).unwrap(), big(0));
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let err = partition_count_oracle(17, 3, 1, None).unwrap_err();
        assert_eq!(err, Error::EnumerationCap { n: 17, cap: 16 });
        // And the cap is adjustable.
        assert!(partition_count_oracle_with_cap(17, 16, 1, None, 17).is_ok());
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(6, 2), big(15));
        assert_eq!(binomial(10, 5), big(252));
        assert_eq!(binomial(4, 7), big(0));
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(6), big(720));
    }

    #[test]
    fn tables_are_shared_and_grow() {
        let t1 = table(Variant::Restricted(4), 5);
        let t2 = table(Variant::Restricted(4), 3);
        assert!(t2.n_max() >= 5);
        assert_eq!(t1.value(5, 2), t2.value(5, 2));
        let t3 = table(Variant::Restricted(4), 40);
        assert!(t3.n_max() >= 40);
        assert_eq!(t3.value(5, 2), t1.value(5, 2));
    }

    #[test]
    fn concurrent_queries_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| {
                std::thread::spawn(move || {
                    let m = 2 + (i % 3);
                    stirling2_associated(20 + i, 5, m)
                })
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            let got = h.join().unwrap();
            let m = 2 + (i % 3);
            assert_eq!(got, stirling2_associated(20 + i, 5, m));
        }
    }
}
