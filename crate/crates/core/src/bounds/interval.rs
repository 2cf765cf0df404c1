//! Certified real arithmetic on closed intervals with rational endpoints.
//!
//! Every operation rounds its endpoints outward to dyadic rationals carrying
//! roughly `prec` significant bits, so the true real value always stays
//! inside the returned interval while endpoint sizes stay bounded.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Extra bits carried by series evaluations beyond the requested precision.
const GUARD: u32 = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `floor(log2 |x|)` for nonzero `x`.
pub fn ilog2(x: &BigRational) -> i64 {
    let num = x.numer().abs();
    let den = x.denom().clone();
    let mut e = num.bits() as i64 - den.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after at most one correction
    if BigRational::new(num.clone(), den.clone()) < pow2(e) {
        e -= 1;
    }
    e
}

fn round(x: &BigRational, prec: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = prec as i64 - ilog2(x);
    let scaled = x * pow2(shift);
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let q = if up && !r.is_zero() { q + 1 } else { q };
    BigRational::from_integer(q) * pow2(-shift)
}

/// Largest dyadic rational with about `prec` significant bits that is `<= x`.
pub fn round_down(x: &BigRational, prec: u32) -> BigRational {
    round(x, prec, false)
}

/// Smallest dyadic rational with about `prec` significant bits that is `>= x`.
pub fn round_up(x: &BigRational, prec: u32) -> BigRational {
    round(x, prec, true)
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn round_out(&self, prec: u32) -> Self {
        Self {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Self {
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
        .round_out(prec)
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Self {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().expect("four products").clone();
        let hi = p.iter().max().expect("four products").clone();
        Self { lo, hi }.round_out(prec)
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Self {
        assert!(
            o.lo.is_positive() || o.hi.is_negative(),
            "division by an interval containing zero"
        );
        let inv = Self {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        self.mul(&inv, prec)
    }

    pub fn scale(&self, k: &BigRational, prec: u32) -> Self {
        self.mul(&Interval::point(k.clone()), prec)
    }
}

/// Integer square root with floor semantics.
fn isqrt(x: &BigUint) -> BigUint {
    x.sqrt()
}

/// Enclosure of `sqrt(x)` for `x >= 0`.
pub fn sqrt(x: &BigRational, prec: u32) -> Interval {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return Interval::point(x.clone());
    }
    let s = (prec as i64 - ilog2(x) / 2 + 2).max(0);
    let scaled = x * pow2(2 * s);
    let floor = scaled.floor().to_integer().to_biguint().expect("nonnegative");
    let ceil = scaled.ceil().to_integer().to_biguint().expect("nonnegative");
    let lo = isqrt(&floor);
    let mut hi = isqrt(&ceil);
    if &hi * &hi < ceil {
        hi += 1u32;
    }
    let to_rat = |v: BigUint| BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v)) * pow2(-s);
    Interval::new(to_rat(lo), to_rat(hi))
}

/// `floor(a / b)` and `ceil(a / b)` for `b > 0`.
fn div_floor_ceil(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let (q, r) = a.div_mod_floor(b);
    let c = if r.is_zero() { q.clone() } else { &q + 1 };
    (q, c)
}

/// Fixed-point sums `[lo, hi] * 2^-w` become an interval rounded to `prec` bits.
fn from_fixed(lo: BigInt, hi: BigInt, w: u32, prec: u32) -> Interval {
    let scale = pow2(-(w as i64));
    Interval::new(
        BigRational::from_integer(lo) * &scale,
        BigRational::from_integer(hi) * &scale,
    )
    .round_out(prec)
}

/// `atanh(z)` for rational `0 <= z <= 1/3`, by its odd power series.
///
/// Runs in fixed point with `w` fractional bits, keeping a floor track and a
/// ceiling track so every truncation stays on the correct side.
fn atanh(z: &BigRational, prec: u32) -> Interval {
    assert!(!z.is_negative() && z <= &rat(1, 3), "atanh argument outside [0, 1/3]");
    let w = prec + GUARD + 8;
    let (p, q) = (z.numer().clone(), z.denom().clone());
    let (p2, q2) = (&p * &p, &q * &q);
    let one = BigInt::one() << w;
    let (mut pw_lo, mut pw_hi) = div_floor_ceil(&(&one * &p), &q);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut j: u64 = 0;
    while pw_hi > BigInt::zero() {
        let d = BigInt::from(2 * j + 1);
        lo += div_floor_ceil(&pw_lo, &d).0;
        hi += div_floor_ceil(&pw_hi, &d).1;
        pw_lo = div_floor_ceil(&(&pw_lo * &p2), &q2).0;
        pw_hi = div_floor_ceil(&(&pw_hi * &p2), &q2).1;
        j += 1;
        if pw_hi <= BigInt::one() {
            // tail is below pw / (1 - z^2) <= 9/8 pw, at most 2 ulps here
            hi += 2;
            break;
        }
    }
    from_fixed(lo, hi, w, prec + GUARD / 2)
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let a = atanh(&rat(1, 3), prec + 4);
    a.add(&a, prec + 4).round_out(prec)
}

/// `ln x` for rational `x > 0`.
fn ln_point(x: &BigRational, prec: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    let wp = prec + GUARD;
    let k = ilog2(x);
    let y = x * pow2(-k);
    let z = (&y - int(1)) / (&y + int(1));
    let t = atanh(&z, wp);
    let body = t.add(&t, wp);
    let l2 = ln2(wp + 16);
    l2.scale(&int(k), wp).add(&body, wp).round_out(prec)
}

/// `ln` of a positive interval.
pub fn ln(x: &Interval, prec: u32) -> Interval {
    let a = ln_point(x.lo(), prec);
    let b = ln_point(x.hi(), prec);
    Interval::new(a.lo, b.hi)
}

/// `log2` of a positive interval.
pub fn log2(x: &Interval, prec: u32) -> Interval {
    let wp = prec + GUARD;
    ln(x, wp).div(&ln2(wp), wp).round_out(prec)
}

/// `e^u` for rational `0 <= u < 1`, Taylor series plus tail bound.
fn exp_unit(u: &BigRational, prec: u32) -> Interval {
    assert!(!u.is_negative() && u < &int(1), "exponent outside [0, 1)");
    let w = prec + GUARD + 8;
    let (p, q) = (u.numer().clone(), u.denom().clone());
    let mut t_lo = BigInt::one() << w;
    let mut t_hi = t_lo.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut j: u64 = 1;
    loop {
        lo += &t_lo;
        hi += &t_hi;
        let d = &q * BigInt::from(j);
        t_lo = div_floor_ceil(&(&t_lo * &p), &d).0;
        t_hi = div_floor_ceil(&(&t_hi * &p), &d).1;
        j += 1;
        if t_hi <= BigInt::one() {
            break;
        }
    }
    // remaining terms shrink by at least half each step once j >= 2
    hi += &t_hi * 2;
    from_fixed(lo, hi, w, prec + GUARD / 2)
}

/// `2^v` for rational `v`.
fn exp2_point(v: &BigRational, prec: u32) -> Interval {
    let wp = prec + GUARD;
    let k = v.floor();
    let f = v - &k;
    let k: i64 = k.to_integer().try_into().expect("exponent fits in i64");
    if f.is_zero() {
        return Interval::point(pow2(k));
    }
    let u = ln2(wp + 8).scale(&f, wp + 8);
    let lo = exp_unit(u.lo(), wp).lo;
    let hi = exp_unit(u.hi(), wp).hi;
    let p = pow2(k);
    Interval::new(lo * &p, hi * &p).round_out(prec)
}

/// `2^x` for an interval `x`.
pub fn exp2(x: &Interval, prec: u32) -> Interval {
    let a = exp2_point(x.lo(), prec);
    let b = exp2_point(x.hi(), prec);
    Interval::new(a.lo, b.hi)
}

/// Rational enclosure printed as `[lo,hi]` in decimal with `digits` places.
pub fn decimal(iv: &Interval, digits: usize) -> String {
    format!(
        "[{},{}]",
        to_decimal(iv.lo(), digits, false),
        to_decimal(iv.hi(), digits, true)
    )
}

/// Decimal rendering of a rational, rounded toward `-inf` or `+inf`.
pub fn to_decimal(x: &BigRational, digits: usize, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let v = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = v.is_negative();
    let mut s = v.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}
