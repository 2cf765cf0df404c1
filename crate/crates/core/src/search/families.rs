use super::engine::{greedy, run, Goal, Outcome, Space};
use super::group::{family_group, family_universe};
use super::{SearchOptions, SearchResult};
use crate::bitset::BitSet;
use crate::bounds::binomial::binom;
use crate::bounds::catalogue::furedi_cf;
use crate::bounds::threshold_below;
use crate::error::{input, Error, Result};
use crate::family::SetFamily;
use num_bigint::BigInt;

/// Subsets of `[n]`; the property is `t`-cover-freeness.
struct FamilySpace {
    masks: Vec<u64>,
    t: usize,
}

fn covers(need: u64, sets: &[u64], depth: usize) -> bool {
    if need == 0 {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let bit = need & need.wrapping_neg();
    sets.iter()
        .any(|&s| s & bit != 0 && covers(need & !s, sets, depth - 1))
}

impl Space for FamilySpace {
    fn size(&self) -> usize {
        self.masks.len()
    }

    fn pair_ok(&self, chosen: &[u32], y: u32, x: u32) -> bool {
        let (mx, my) = (self.masks[x as usize], self.masks[y as usize]);
        let sets: Vec<u64> = chosen.iter().map(|&i| self.masks[i as usize]).collect();
        let t = self.t;
        if covers(mx & !my, &sets, t - 1) || covers(my & !mx, &sets, t - 1) {
            return false;
        }
        if t < 2 {
            return true;
        }
        (0..sets.len()).all(|k| {
            let rest: Vec<u64> = sets.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &s)| s).collect();
            !covers(sets[k] & !(mx | my), &rest, t - 2)
        })
    }
}

fn to_family(set: &[u32], n: usize, masks: &[u64]) -> SetFamily {
    let members = set
        .iter()
        .map(|&i| BitSet::from_mask(n, masks[i as usize]))
        .collect();
    SetFamily::new(n, members).expect("distinct members")
}

fn search(n: usize, t: usize, goal: Goal, opts: &SearchOptions) -> Result<(Outcome, Vec<u64>)> {
    if n == 0 || n > 12 || t == 0 {
        return input("cover-free search needs 1 <= n <= 12 and t >= 1");
    }
    let masks = family_universe(n);
    let group = family_group(n, &masks);
    let space = FamilySpace {
        masks: masks.clone(),
        t,
    };
    let start = match goal {
        Goal::Exactly(_) => Vec::new(),
        _ => greedy(&space),
    };
    let ceiling = if opts.use_bounds && goal == Goal::Maximum {
        family_ceiling(n, t)
    } else {
        usize::MAX
    };
    Ok((run(&space, &group, goal, start, opts.budget, ceiling), masks))
}

/// Exact closed-form caps on the size of a `t`-cover-free family.
fn family_caps(n: usize, t: usize) -> Vec<(String, BigInt)> {
    let mut caps = vec![(
        "antichain".to_string(),
        BigInt::from(binom(n as i64, n as i64 / 2)),
    )];
    if let Ok(b) = furedi_cf(n as u64, t as u64) {
        caps.push((b.name.to_string(), b.floor));
    }
    if threshold_below(n as u64, t as u64) {
        caps.push(("threshold".to_string(), BigInt::from(n)));
    }
    caps
}

fn family_ceiling(n: usize, t: usize) -> usize {
    family_caps(n, t)
        .into_iter()
        .map(|(_, v)| usize::try_from(v).unwrap_or(usize::MAX))
        .min()
        .unwrap_or(usize::MAX)
}

fn finish(out: Outcome, masks: &[u64], n: usize, t: usize, with_optima: bool) -> Result<SearchResult<SetFamily>> {
    let verify = |f: &SetFamily| -> Result<()> {
        if !f.is_cover_free(t)?.holds {
            return Err(Error::Consistency(format!(
                "search produced a family that is not {t}-cover-free"
            )));
        }
        Ok(())
    };
    let incumbent = (!out.example.is_empty()).then(|| to_family(&out.example, n, masks));
    if let Some(f) = &incumbent {
        verify(f)?;
    }
    let optima = if with_optima {
        let v: Vec<SetFamily> = out.found.iter().map(|s| to_family(s, n, masks)).collect();
        for f in &v {
            verify(f)?;
        }
        Some(v)
    } else {
        None
    };
    // every visited family is genuine, so the caps apply to any run
    for (name, cap) in family_caps(n, t) {
        if BigInt::from(out.best) > cap {
            return Err(Error::Consistency(format!(
                "family of size {} exceeds the {name} cap {cap} at n={n}, t={t}",
                out.best
            )));
        }
    }
    Ok(SearchResult {
        max_size: out.best,
        optima,
        nodes: out.nodes,
        certified: out.complete,
        incumbent,
    })
}

/// Maximum size of a `t`-cover-free family on `[n]`; with `optima` also
/// every maximum family up to relabelling of the ground set, each the
/// least member of its class with members in (size, value) order.
pub fn max_cover_free(n: usize, t: usize, optima: bool, opts: &SearchOptions) -> Result<SearchResult<SetFamily>> {
    let goal = if optima { Goal::AllMaxima } else { Goal::Maximum };
    let (out, masks) = search(n, t, goal, opts)?;
    finish(out, &masks, n, t, optima)
}

/// Every `t`-cover-free family on `[n]` with exactly `size` members, one
/// per relabelling class.
pub fn cover_free_families_of_size(
    n: usize,
    t: usize,
    size: usize,
    opts: &SearchOptions,
) -> Result<SearchResult<SetFamily>> {
    let (out, masks) = search(n, t, Goal::Exactly(size), opts)?;
    let mut res = finish(out, &masks, n, t, true)?;
    let any = res.optima.as_ref().is_some_and(|v| !v.is_empty());
    res.max_size = if any { size } else { 0 };
    res.incumbent = res.optima.as_ref().and_then(|v| v.first().cloned());
    Ok(res)
}
