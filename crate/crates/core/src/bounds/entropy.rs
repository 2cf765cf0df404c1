//! Binary entropy, its inverse on `[0, 1/2]`, and the constants `delta` and
//! `epsilon(n)` used by the two-frameproof bound.

use super::binomial::binom;
use super::interval::{exp2, int, ln, ln2, log2, rat, round_down, sqrt, Interval};
use crate::error::{domain, input, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Enclosure of `H(x)` at a rational point of `[0, 1]`.
pub fn entropy(x: &BigRational, prec: u32) -> Result<Interval> {
    if x.is_negative() || x > &int(1) {
        return input(format!("entropy argument {x} outside [0, 1]"));
    }
    Ok(entropy_point(x, prec))
}

fn entropy_point(x: &BigRational, prec: u32) -> Interval {
    if x.is_zero() || x.is_one() {
        return Interval::point(BigRational::zero());
    }
    if x == &rat(1, 2) {
        return Interval::point(int(1));
    }
    let wp = prec + 16;
    let y = int(1) - x;
    let a = ln(&Interval::point(x.clone()), wp).scale(x, wp);
    let b = ln(&Interval::point(y.clone()), wp).scale(&y, wp);
    a.add(&b, wp).neg().div(&ln2(wp), wp).round_out(prec)
}

/// Enclosure of `H` over an interval inside `[0, 1]`.
pub fn entropy_interval(x: &Interval, prec: u32) -> Result<Interval> {
    if x.lo().is_negative() || x.hi() > &int(1) {
        return input("entropy argument outside [0, 1]");
    }
    let half = rat(1, 2);
    let a = entropy_point(x.lo(), prec);
    let b = entropy_point(x.hi(), prec);
    Ok(if x.hi() <= &half {
        Interval::new(a.lo().clone(), b.hi().clone())
    } else if x.lo() >= &half {
        Interval::new(b.lo().clone(), a.hi().clone())
    } else {
        Interval::new(a.lo().min(b.lo()).clone(), int(1))
    })
}

/// Enclosure of the `x` in `[0, 1/2]` with `H(x) = y`, for `y` inside `[0, 1]`.
///
/// Two bisections run on dyadic points, one keeping `H(lo) <= y.lo` and one
/// keeping `H(hi) >= y.hi`; each step is decided with certified enclosures.
pub fn entropy_inverse(y: &Interval, prec: u32) -> Result<Interval> {
    if y.lo().is_negative() || y.hi() > &int(1) {
        return input("entropy inverse argument outside [0, 1]");
    }
    let wp = prec + 8;
    let steps = prec + 4;
    let mut a = BigRational::zero();
    let mut b = rat(1, 2);
    for _ in 0..steps {
        let mid = (&a + &b) / int(2);
        if entropy_point(&mid, wp).hi() <= y.lo() {
            a = mid;
        } else {
            b = mid;
        }
    }
    let lo = a;
    let (mut a, mut b) = (BigRational::zero(), rat(1, 2));
    for _ in 0..steps {
        let mid = (&a + &b) / int(2);
        if entropy_point(&mid, wp).lo() >= y.hi() {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Interval::new(lo, b))
}

/// Working precision for `delta`; the result is a dyadic rational.
const DELTA_BITS: u32 = 64;

/// Certified lower bound on `C(n, floor((n-1)/2)) * sqrt(n) / 2^n`.
fn delta_term(n: u64) -> BigRational {
    let c = BigInt::from(binom(n as i64, (n as i64 - 1) / 2));
    let s = sqrt(&int(n), DELTA_BITS + 8);
    let v = BigRational::from_integer(c) * s.lo() / BigRational::from_integer(BigInt::one() << n);
    round_down(&v, DELTA_BITS)
}

/// A rational lower bound for `min_{lo <= n <= hi} C(n, floor((n-1)/2)) sqrt(n) / 2^n`.
pub fn delta_for_range(n_lo: u64, n_hi: u64) -> Result<BigRational> {
    if n_lo < 2 || n_lo > n_hi {
        return domain(format!("need 2 <= n_lo <= n_hi, got {n_lo}..{n_hi}"));
    }
    Ok((n_lo..=n_hi)
        .map(delta_term)
        .min()
        .expect("nonempty range"))
}

/// Default `delta`, taken over `2..=4096`.
pub fn default_delta() -> BigRational {
    delta_for_range(2, 4096).expect("valid range")
}

/// Smallest `n` for which the `epsilon(n)` recipe is stated:
/// `ceil(2(1 - log2 delta)/(1 - H(1/4))) + 30`, certified from above.
pub fn epsilon_validity(delta: &BigRational, prec: u32) -> Result<u64> {
    if !delta.is_positive() || delta >= &int(1) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    let ld = log2(&Interval::point(delta.clone()), prec);
    let num = Interval::point(int(1)).sub(&ld, prec).scale(&int(2), prec);
    let den = Interval::point(int(1)).sub(&entropy_point(&rat(1, 4), prec), prec);
    let t = num.div(&den, prec);
    let c: u64 = t
        .hi()
        .ceil()
        .to_integer()
        .try_into()
        .expect("threshold fits in u64");
    Ok(c + 30)
}

/// Enclosure of `epsilon(n) = max{1/n, 1 - 2 H^-1(1 - (2 + log2 n - 2 log2 delta)/(2n))}`.
///
/// When `1/n` wins the maximum with certainty the result is exactly `1/n`.
pub fn epsilon_n(n: u64, delta: &BigRational, prec: u32) -> Result<Interval> {
    let valid = epsilon_validity(delta, prec)?;
    if n < valid {
        return domain(format!("epsilon(n) is stated for n >= {valid}, got {n}"));
    }
    let wp = prec + 16;
    let ln_n = log2(&Interval::point(int(n)), wp);
    let ld = log2(&Interval::point(delta.clone()), wp);
    let numer = Interval::point(int(2))
        .add(&ln_n, wp)
        .sub(&ld.scale(&int(2), wp), wp);
    let arg = Interval::point(int(1)).sub(&numer.scale(&rat(1, 2 * n as i64), wp), wp);
    let hinv = entropy_inverse(&arg, wp)?;
    let e = Interval::point(int(1)).sub(&hinv.scale(&int(2), wp), wp);
    let inv_n = rat(1, n as i64);
    let out = if e.hi() < &inv_n {
        Interval::point(inv_n)
    } else if e.lo() > &inv_n {
        e.round_out(prec)
    } else {
        Interval::new(inv_n.clone(), e.hi().clone().max(inv_n)).round_out(prec)
    };
    if !out.lo().is_positive() || out.hi() >= &rat(1, 2) {
        return Err(crate::Error::Consistency(format!(
            "epsilon({n}) enclosure {out:?} leaves (0, 1/2)"
        )));
    }
    Ok(out)
}

/// Enclosure of `2^(n (1 - H(eps))) / sqrt(n)` scaled by `delta`; the
/// subtracted term in the upper bound on `phi(n, epsilon(n))`.
pub fn gap_term(n: u64, eps: &Interval, delta: &BigRational, prec: u32) -> Result<Interval> {
    let wp = prec + 16;
    let h = entropy_interval(eps, wp)?;
    let expo = Interval::point(int(1)).sub(&h, wp).scale(&int(n), wp);
    let p = exp2(&expo, wp);
    let s = sqrt(&int(n), wp);
    Ok(p.scale(delta, wp).div(&s, wp).round_out(prec))
}

/// Enclosure of `2^(n H(x))`.
pub fn entropy_power(n: u64, x: &Interval, prec: u32) -> Result<Interval> {
    let wp = prec + 16;
    let h = entropy_interval(x, wp)?;
    Ok(exp2(&h.scale(&int(n), wp), wp).round_out(prec))
}
