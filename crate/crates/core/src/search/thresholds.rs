use super::{codes_of_size, max_code, max_cover_free, SearchOptions};
use crate::bounds::threshold_below;
use crate::code::Mode;
use crate::error::{input, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// Least `n` with a `t`-cover-free family on `[n]` of size above `n`.
    NStar,
    /// Least `n >= 2` with a wide-sense `t`-frameproof code in `[q]^n` of
    /// size above `n`.
    NQ,
    /// Least `n >= 3` with a wide-sense `t`-frameproof code in `[q]^n` of
    /// size `n` that is not a permutation code.
    NQPrime,
}

impl ThresholdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdKind::NStar => "n_star",
            ThresholdKind::NQ => "n_q",
            ThresholdKind::NQPrime => "n_q_prime",
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThresholdKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_star" => Ok(ThresholdKind::NStar),
            "n_q" => Ok(ThresholdKind::NQ),
            "n_q_prime" => Ok(ThresholdKind::NQPrime),
            _ => input(format!("unknown threshold kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThresholdOutcome {
    Found { n: u64 },
    NotFound { cap: u64 },
}

fn uncertified(kind: ThresholdKind, n: u64) -> Error {
    Error::Uncertified(format!("{kind} scan: the run at n={n} did not finish within budget"))
}

/// Scans `n` upwards to `cap`; every length is decided by a certified run.
pub fn n_threshold(
    kind: ThresholdKind,
    t: u64,
    q: u64,
    cap: u64,
    opts: &SearchOptions,
) -> Result<ThresholdOutcome> {
    let (tu, qu) = (t as usize, q as usize);
    let start = match kind {
        ThresholdKind::NStar => {
            if t < 1 {
                return input("n_star needs t >= 1");
            }
            1
        }
        ThresholdKind::NQ | ThresholdKind::NQPrime => {
            if t < 2 || q < 2 {
                return input("code thresholds need t >= 2 and q >= 2");
            }
            if kind == ThresholdKind::NQ {
                2
            } else {
                3
            }
        }
    };
    for n in start..=cap {
        let nu = n as usize;
        let hit = match kind {
            ThresholdKind::NStar => {
                let r = max_cover_free(nu, tu, false, opts)?;
                if !r.certified {
                    return Err(uncertified(kind, n));
                }
                r.max_size > nu
            }
            ThresholdKind::NQ => {
                let r = max_code(nu, tu, qu, Mode::Wide, opts)?;
                if !r.certified {
                    return Err(uncertified(kind, n));
                }
                r.max_size > nu
            }
            ThresholdKind::NQPrime => {
                let r = codes_of_size(nu, tu, qu, Mode::Wide, nu, opts)?;
                if !r.certified {
                    return Err(uncertified(kind, n));
                }
                r.optima
                    .unwrap_or_default()
                    .iter()
                    .any(|c| !c.is_permutation_code())
            }
        };
        if hit {
            let below = match kind {
                ThresholdKind::NStar => threshold_below(n, t),
                _ => t >= 3 && threshold_below(n, t - 1),
            };
            if below {
                return Err(Error::Consistency(format!(
                    "{kind}({t}) = {n} lies below the cover-free threshold"
                )));
            }
            return Ok(ThresholdOutcome::Found { n });
        }
    }
    Ok(ThresholdOutcome::NotFound { cap })
}

/// Known threshold values for one `t`; unknown entries are skipped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ThresholdValues {
    pub t: u64,
    pub n_star: Option<u64>,
    pub n_star_t_minus_2: Option<u64>,
    pub n_q: Option<u64>,
    pub n_2: Option<u64>,
    pub n_q_prime: Option<u64>,
}

/// Checks `N*(t-2) + 2 <= N_q(t) <= N_2(t) <= N*(t)` and `N'_q(t) <= N_q(t)`
/// for `t >= 3` on whichever values are present.
pub fn check_threshold_relations(v: &ThresholdValues) -> Result<()> {
    if v.t < 3 {
        return Ok(());
    }
    let chain = [
        (v.n_star_t_minus_2.map(|x| x + 2), v.n_q, "N*(t-2) + 2 <= N_q(t)"),
        (v.n_q, v.n_2, "N_q(t) <= N_2(t)"),
        (v.n_2, v.n_star, "N_2(t) <= N*(t)"),
        (v.n_q, v.n_star, "N_q(t) <= N*(t)"),
        (v.n_q_prime, v.n_q, "N'_q(t) <= N_q(t)"),
    ];
    for (a, b, what) in chain {
        if let (Some(a), Some(b)) = (a, b) {
            if a > b {
                return Err(Error::Consistency(format!("{what} fails for t = {}", v.t)));
            }
        }
    }
    Ok(())
}
