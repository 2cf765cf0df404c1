//! The catalogue of closed-form bounds and the selection of the best one.

use super::binomial::{binom, binom_sum};
use super::interval::{int, log2, rat, Interval};
use super::threshold::threshold_below;
use crate::code::Mode;
use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    ZhouZhou,
    StinsonWei,
    BlackburnLeading,
    ShangguanQ,
    GeneralT,
    AsymptoticRate,
    Kleitman,
    NagyPatkos,
    XuYip,
    FurediCf,
    PropSperner,
    Phi,
    /// `m <= n` below the cover-free threshold for `t - 1`.
    TightBound,
    /// `q^n`, every word of the space.
    Trivial,
}

impl BoundName {
    pub const ALL: [BoundName; 14] = [
        BoundName::ZhouZhou,
        BoundName::StinsonWei,
        BoundName::BlackburnLeading,
        BoundName::ShangguanQ,
        BoundName::GeneralT,
        BoundName::AsymptoticRate,
        BoundName::Kleitman,
        BoundName::NagyPatkos,
        BoundName::XuYip,
        BoundName::FurediCf,
        BoundName::PropSperner,
        BoundName::Phi,
        BoundName::TightBound,
        BoundName::Trivial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::ZhouZhou => "zhou_zhou",
            BoundName::StinsonWei => "stinson_wei",
            BoundName::BlackburnLeading => "blackburn_leading",
            BoundName::ShangguanQ => "shangguan_q",
            BoundName::GeneralT => "general_t",
            BoundName::AsymptoticRate => "asymptotic_rate",
            BoundName::Kleitman => "kleitman",
            BoundName::NagyPatkos => "nagy_patkos",
            BoundName::XuYip => "xu_yip",
            BoundName::FurediCf => "furedi_cf",
            BoundName::PropSperner => "prop_sperner",
            BoundName::Phi => "phi",
            BoundName::TightBound => "tight_bound",
            BoundName::Trivial => "trivial",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| crate::Error::Input(format!("unknown bound name {s:?}")))
    }
}

/// Parameters a bound may consume. Absent fields make bounds that need them
/// inapplicable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundParams {
    pub n: Option<u64>,
    pub t: Option<u64>,
    pub q: Option<u64>,
    pub s: Option<u64>,
    pub eps: Option<BigRational>,
}

impl BoundParams {
    pub fn code(n: u64, t: u64, q: u64) -> Self {
        Self {
            n: Some(n),
            t: Some(t),
            q: Some(q),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Integer(BigInt),
    Rational(BigRational),
    /// A real number known only through a certified enclosure.
    Real(Interval),
}

/// One evaluated bound. `floor` is the integer usable as a size bound;
/// `exact = false` marks estimates that must not be treated as bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: BoundName,
    /// Parameter echo as ordered `(key, value)` pairs.
    pub params: Vec<(&'static str, String)>,
    pub value: BoundValue,
    pub floor: BigInt,
    pub exact: bool,
}

impl BoundReport {
    fn integer(name: BoundName, params: Vec<(&'static str, String)>, v: BigInt) -> Self {
        Self {
            name,
            params,
            floor: v.clone(),
            value: BoundValue::Integer(v),
            exact: true,
        }
    }

    fn rational(name: BoundName, params: Vec<(&'static str, String)>, v: BigRational, exact: bool) -> Self {
        let floor = v.floor().to_integer();
        let value = if v.is_integer() {
            BoundValue::Integer(v.to_integer())
        } else {
            BoundValue::Rational(v)
        };
        Self {
            name,
            params,
            value,
            floor,
            exact,
        }
    }

    /// Parameters as `k=v` pairs joined by `;`.
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Value as a decimal integer, a reduced fraction `p/q`, or an interval.
    pub fn value_string(&self) -> String {
        match &self.value {
            BoundValue::Integer(v) => v.to_string(),
            BoundValue::Rational(v) => format!("{}/{}", v.numer(), v.denom()),
            BoundValue::Real(iv) => super::interval::decimal(iv, 12),
        }
    }
}

fn need(v: Option<u64>, name: BoundName, key: &str) -> Result<u64> {
    v.ok_or_else(|| crate::Error::Domain(format!("{name} needs parameter {key}")))
}

fn bi(x: u64) -> BigInt {
    BigInt::from(x)
}

fn c2(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn eps_str(e: &BigRational) -> String {
    format!("{}/{}", e.numer(), e.denom())
}

/// Wide-sense 2-frameproof bound, even `n >= 8` and odd `n >= 7`.
pub fn zhou_zhou(n: u64) -> Result<BoundReport> {
    let p = vec![("n", n.to_string())];
    let ni = n as i64;
    let v = if n.is_multiple_of(2) {
        if n < 8 {
            return domain("zhou_zhou needs n >= 8 for even n");
        }
        BigInt::from(binom(ni, ni / 2 - 1)) - bi(n / 2) + 1
    } else {
        if n < 7 {
            return domain("zhou_zhou needs n >= 7 for odd n");
        }
        let c = BigInt::from(binom(ni, (ni - 1) / 2));
        if n % 4 == 1 {
            c - bi((n * n - 9) / 8) - bi((n - 5) * (n - 5) / 64)
        } else {
            c - bi(((n + 1) * (n + 1) - 8) / 8) - bi((n - 3) * (n - 3) / 64)
        }
    };
    Ok(BoundReport::integer(BoundName::ZhouZhou, p, v))
}

/// `t - 1 + C(n - t + 2, ceil((n - t + 2)/2))`.
pub fn stinson_wei(n: u64, t: u64) -> Result<BoundReport> {
    if t < 2 || n < 1 {
        return domain("stinson_wei needs t >= 2 and n >= 1");
    }
    let top = n as i64 - t as i64 + 2;
    let k = if top > 0 { (top + 1) / 2 } else { 0 };
    let v = bi(t - 1) + BigInt::from(binom(top, k));
    Ok(BoundReport::integer(
        BoundName::StinsonWei,
        vec![("n", n.to_string()), ("t", t.to_string())],
        v,
    ))
}

/// Leading term `n/(n - (r-1) ceil(n/t)) * q^ceil(n/t)` with `r = n mod t` in `[t]`.
pub fn blackburn_leading(n: u64, t: u64, q: u64) -> Result<BoundReport> {
    if n < 1 || t < 1 || q < 2 {
        return domain("blackburn_leading needs n >= 1, t >= 1, q >= 2");
    }
    let r = match n % t {
        0 => t,
        r => r,
    };
    let c = ceil_div(n, t);
    let den = n as i64 - (r as i64 - 1) * c as i64;
    if den <= 0 {
        return Err(crate::Error::Consistency(format!(
            "blackburn_leading denominator {den} not positive"
        )));
    }
    let v = BigRational::new(bi(n) * bi(q).pow(c as u32), BigInt::from(den));
    Ok(BoundReport::rational(
        BoundName::BlackburnLeading,
        vec![("n", n.to_string()), ("t", t.to_string()), ("q", q.to_string())],
        v,
        false,
    ))
}

/// `C(n, k) q^k + t` with `k = ceil(n(q-1)/C(t,2))`, stated for `k <= n`.
pub fn shangguan_q(n: u64, t: u64, q: u64) -> Result<BoundReport> {
    if t < 2 || q < 2 || n < 1 {
        return domain("shangguan_q needs t >= 2, q >= 2, n >= 1");
    }
    let k = ceil_div(n * (q - 1), c2(t));
    if k > n {
        return domain(format!(
            "shangguan_q exponent ceil(n(q-1)/C(t,2)) = {k} exceeds n = {n}"
        ));
    }
    let v = BigInt::from(binom(n as i64, k as i64)) * bi(q).pow(k as u32) + bi(t);
    Ok(BoundReport::integer(
        BoundName::ShangguanQ,
        vec![("n", n.to_string()), ("t", t.to_string()), ("q", q.to_string())],
        v,
    ))
}

/// `C(n, ceil((n - t + 1)/C(t,2))) + t` for `t >= 3`.
pub fn general_t(n: u64, t: u64) -> Result<BoundReport> {
    if t < 3 || n < 1 {
        return domain("general_t needs t >= 3 and n >= 1");
    }
    let top = n as i64 - t as i64 + 1;
    let k = if top > 0 { ceil_div(top as u64, c2(t)) as i64 } else { 0 };
    let v = BigInt::from(binom(n as i64, k)) + bi(t);
    Ok(BoundReport::integer(
        BoundName::GeneralT,
        vec![("n", n.to_string()), ("t", t.to_string())],
        v,
    ))
}

/// Rate `2 log2(t) / t^2`, an asymptotic estimate.
pub fn asymptotic_rate(t: u64, prec: u32) -> Result<BoundReport> {
    if t < 2 {
        return domain("asymptotic_rate needs t >= 2");
    }
    let l = log2(&Interval::point(int(t)), prec);
    let v = l.scale(&rat(2, (t * t) as i64), prec);
    let floor = v.lo().floor().to_integer();
    Ok(BoundReport {
        name: BoundName::AsymptoticRate,
        params: vec![("t", t.to_string())],
        value: BoundValue::Real(v),
        floor,
        exact: false,
    })
}

/// Kleitman: families with every pairwise symmetric difference in `[s]`,
/// split by the parity of `s`. Valid for `s < n`; at `s >= n` the whole
/// cube qualifies.
pub fn kleitman(n: u64, s: u64) -> Result<BoundReport> {
    if s < 1 || s >= n {
        return domain("kleitman needs 1 <= s < n");
    }
    let (ni, h) = (n as i64, (s / 2) as i64);
    let v = if s.is_multiple_of(2) {
        binom_sum(ni, 0, h)
    } else {
        binom_sum(ni - 1, 0, h) * 2u32
    };
    Ok(BoundReport::integer(
        BoundName::Kleitman,
        vec![("n", n.to_string()), ("s", s.to_string())],
        v.into(),
    ))
}

/// `sum_{i=0}^{s} C(n, i)` for `L`-close Sperner families with `|L| = s`.
pub fn nagy_patkos(n: u64, s: u64) -> Result<BoundReport> {
    if s < 1 || n < 1 {
        return domain("nagy_patkos needs s >= 1 and n >= 1");
    }
    Ok(BoundReport::integer(
        BoundName::NagyPatkos,
        vec![("n", n.to_string()), ("s", s.to_string())],
        binom_sum(n as i64, 0, s as i64).into(),
    ))
}

/// `sum_{i=3s-n}^{s} C(n, i)` for `(n+1)/3 <= s <= n/2`.
pub fn xu_yip(n: u64, s: u64) -> Result<BoundReport> {
    if 3 * s < n + 1 || 2 * s > n {
        return domain(format!("xu_yip needs (n+1)/3 <= s <= n/2, got n={n}, s={s}"));
    }
    let (ni, si) = (n as i64, s as i64);
    Ok(BoundReport::integer(
        BoundName::XuYip,
        vec![("n", n.to_string()), ("s", s.to_string())],
        binom_sum(ni, 3 * si - ni, si).into(),
    ))
}

/// `t + C(n, ceil((n - t)/C(t+1, 2)))` for `t`-cover-free families, `t >= 2`.
pub fn furedi_cf(n: u64, t: u64) -> Result<BoundReport> {
    if t < 2 || n < 1 {
        return domain("furedi_cf needs t >= 2 and n >= 1");
    }
    let top = n as i64 - t as i64;
    let k = if top > 0 { ceil_div(top as u64, c2(t + 1)) as i64 } else { 0 };
    Ok(BoundReport::integer(
        BoundName::FurediCf,
        vec![("n", n.to_string()), ("t", t.to_string())],
        bi(t) + BigInt::from(binom(n as i64, k)),
    ))
}

fn check_eps(n: u64, eps: &BigRational, name: BoundName) -> Result<i64> {
    if !eps.is_positive() || eps >= &rat(1, 2) {
        return domain(format!("{name} needs 0 < eps < 1/2"));
    }
    let a = (eps * int(n)).floor().to_integer();
    if a < BigInt::one() {
        return domain(format!("{name} needs floor(eps n) >= 1"));
    }
    Ok(a.to_i64().expect("floor(eps n) <= n"))
}

/// `(1 - 1/C(n, floor(eps n))) C(n, floor((n-1)/2)) + 1`.
pub fn prop_sperner(n: u64, eps: &BigRational) -> Result<BoundReport> {
    let a = check_eps(n, eps, BoundName::PropSperner)?;
    let v = second_branch(n, a) - int(1);
    Ok(BoundReport::rational(
        BoundName::PropSperner,
        vec![("n", n.to_string()), ("eps", eps_str(eps))],
        v,
        true,
    ))
}

fn second_branch(n: u64, a: i64) -> BigRational {
    let ni = n as i64;
    let c = BigRational::from_integer(binom(ni, (ni - 1) / 2).into());
    let ca = BigRational::from_integer(binom(ni, a).into());
    (int(1) - ca.recip()) * c + int(2)
}

/// The two branches of `phi(n, eps)`: the binomial sum plus one, and the
/// rational Sperner-type term.
pub fn phi_branches(n: u64, eps: &BigRational) -> Result<(BigInt, BigRational)> {
    let a = check_eps(n, eps, BoundName::Phi)?;
    let ni = n as i64;
    // s' = ceil((1 - eps) n / 2)
    let sp = ((int(1) - eps) * int(n) / int(2)).ceil().to_integer();
    let sp = sp.to_i64().expect("s' <= n");
    let sum = BigInt::from(binom_sum(ni, 3 * sp - ni - 3, sp - 1)) + 1;
    Ok((sum, second_branch(n, a)))
}

/// `phi(n, eps)`, the maximum of its two branches.
pub fn phi(n: u64, eps: &BigRational) -> Result<BoundReport> {
    let (a, b) = phi_branches(n, eps)?;
    let a = BigRational::from_integer(a);
    Ok(BoundReport::rational(
        BoundName::Phi,
        vec![("n", n.to_string()), ("eps", eps_str(eps))],
        a.max(b),
        true,
    ))
}

/// One `eps` per distinct value of `phi(n, .)`: `phi` only depends on
/// `floor(eps n)` and `ceil((1 - eps) n / 2)`, which are constant on each
/// `(a/n, (a+1)/n)` and may change at `a/n`.
pub fn phi_eps_grid(n: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for a in 1..n {
        for x in [int(a), int(a) + rat(1, 2)] {
            let e = x / int(n);
            if e < rat(1, 2) {
                out.push(e);
            }
        }
    }
    out
}

/// `q^n`.
pub fn trivial(n: u64, q: u64) -> BoundReport {
    BoundReport::integer(
        BoundName::Trivial,
        vec![("n", n.to_string()), ("q", q.to_string())],
        bi(q).pow(n as u32),
    )
}

/// `m <= n` for wide-sense `t`-frameproof codes when `t >= 3`, `n >= 2` and
/// `n` lies below the cover-free threshold for `t - 1`.
pub fn tight_bound(n: u64, t: u64) -> Result<BoundReport> {
    if t < 3 || n < 2 || !threshold_below(n, t - 1) {
        return domain("tight_bound needs t >= 3, n >= 2 and n below the threshold for t - 1");
    }
    Ok(BoundReport::integer(
        BoundName::TightBound,
        vec![("n", n.to_string()), ("t", t.to_string())],
        bi(n),
    ))
}

/// Evaluates a named bound from whichever parameters it uses.
pub fn evaluate_bound(name: BoundName, p: &BoundParams, prec: u32) -> Result<BoundReport> {
    let n = || need(p.n, name, "n");
    let t = || need(p.t, name, "t");
    let q = || need(p.q, name, "q");
    let s = || need(p.s, name, "s");
    let eps = || {
        p.eps
            .clone()
            .ok_or_else(|| crate::Error::Domain(format!("{name} needs parameter eps")))
    };
    match name {
        BoundName::ZhouZhou => zhou_zhou(n()?),
        BoundName::StinsonWei => stinson_wei(n()?, t()?),
        BoundName::BlackburnLeading => blackburn_leading(n()?, t()?, q()?),
        BoundName::ShangguanQ => shangguan_q(n()?, t()?, q()?),
        BoundName::GeneralT => general_t(n()?, t()?),
        BoundName::AsymptoticRate => asymptotic_rate(t()?, prec),
        BoundName::Kleitman => kleitman(n()?, s()?),
        BoundName::NagyPatkos => nagy_patkos(n()?, s()?),
        BoundName::XuYip => xu_yip(n()?, s()?),
        BoundName::FurediCf => furedi_cf(n()?, t()?),
        BoundName::PropSperner => prop_sperner(n()?, &eps()?),
        BoundName::Phi => phi(n()?, &eps()?),
        BoundName::TightBound => tight_bound(n()?, t()?),
        BoundName::Trivial => {
            let q = q()?;
            if q < 2 {
                return domain("trivial needs q >= 2");
            }
            Ok(trivial(n()?, q))
        }
    }
}

/// Every catalogue entry that evaluates for these parameters. Bounds tied
/// to `t = 2` are skipped when another `t` is given.
pub fn applicable_bounds(p: &BoundParams, prec: u32) -> Vec<BoundReport> {
    BoundName::ALL
        .into_iter()
        .filter(|b| {
            let two_only = matches!(b, BoundName::ZhouZhou | BoundName::Phi | BoundName::PropSperner);
            !(two_only && p.t.is_some_and(|t| t != 2))
        })
        .filter_map(|b| evaluate_bound(b, p, prec).ok())
        .collect()
}

/// Exact bounds valid for the maximum size of a `q`-ary `t`-frameproof code
/// of length `n` in the given mode, in catalogue order.
///
/// Narrow-sense codes over `q >= 3` only get the bounds stated for narrow
/// codes; the wide-sense list applies to binary narrow codes too since the
/// notions coincide there.
pub fn code_bounds(n: u64, t: u64, q: u64, mode: Mode) -> Vec<BoundReport> {
    let mut out = Vec::new();
    let wide = mode == Mode::Wide || q == 2;
    if wide && t >= 2 {
        out.extend(stinson_wei(n, t).ok());
    }
    out.extend(shangguan_q(n, t, q).ok());
    if wide {
        out.extend(general_t(n, t).ok());
        if t == 2 {
            out.extend(zhou_zhou(n).ok());
            let best_phi = phi_eps_grid(n)
                .iter()
                .filter_map(|e| phi(n, e).ok())
                .min_by(|a, b| a.floor.cmp(&b.floor));
            out.extend(best_phi);
        }
        out.extend(tight_bound(n, t).ok());
    }
    if q >= 2 && n >= 1 {
        out.push(trivial(n, q));
    }
    out
}

/// Smallest floor among [`code_bounds`]; the first bound wins ties.
pub fn best_bound(n: u64, t: u64, q: u64, mode: Mode) -> Result<BoundReport> {
    if n < 1 || q < 2 || t < 1 {
        return domain("best_bound needs n >= 1, t >= 1, q >= 2");
    }
    let all = code_bounds(n, t, q, mode);
    let mut best: Option<BoundReport> = None;
    for b in all {
        if best.as_ref().is_none_or(|x| b.floor < x.floor) {
            best = Some(b);
        }
    }
    Ok(best.expect("the trivial bound always applies"))
}

/// Integer floor of a nonnegative rational as `u64`, saturating.
pub fn floor_u64(v: &BigInt) -> u64 {
    if v.is_negative() {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

/// `C(n, floor((n-1)/2))`, the comparison point for two-frameproof bounds.
pub fn middle_binom(n: u64) -> BigInt {
    let ni = n as i64;
    binom(ni, (ni - 1) / 2).into()
}
