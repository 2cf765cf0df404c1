//! Exact binomial coefficients and partial row sums.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)`, taken as 0 whenever `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{i=lo}^{hi} C(n, i)`; out-of-range indices contribute 0.
pub fn binom_sum(n: i64, lo: i64, hi: i64) -> BigUint {
    let lo = lo.max(0);
    let hi = hi.min(n);
    (lo..=hi).map(|i| binom(n, i)).sum()
}
