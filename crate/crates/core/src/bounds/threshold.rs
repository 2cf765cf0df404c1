//! Exact comparison against `(15 + sqrt 33)/24 * k^2`.

use num_bigint::BigInt;

/// Whether `n < (15 + sqrt 33)/24 * k^2`, decided in integer arithmetic:
/// `24n - 15k^2 <= 0` or `(24n - 15k^2)^2 < 33k^4`.
pub fn threshold_below(n: u64, k: u64) -> bool {
    let n = BigInt::from(n);
    let k2 = BigInt::from(k) * BigInt::from(k);
    let d = BigInt::from(24) * n - BigInt::from(15) * &k2;
    d <= BigInt::from(0) || &d * &d < BigInt::from(33) * &k2 * &k2
}

/// Largest `n` with `threshold_below(n, k)`, or 0 when there is none.
pub fn threshold_floor(k: u64) -> u64 {
    // the real threshold is below 0.87 k^2, so this bracket always holds
    let (mut lo, mut hi) = (0u64, k * k + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if threshold_below(mid, k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if threshold_below(lo, k) && lo > 0 {
        lo
    } else {
        0
    }
}
