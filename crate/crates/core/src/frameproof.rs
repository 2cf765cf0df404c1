//! Frameproof and separating-hash verifiers.
//!
//! Every failing verdict carries the lexicographically least violation:
//! targets in codeword order, then coalitions as sorted index lists in
//! lexicographic order. Violations are closed under enlarging the
//! coalition, so a depth-first scan in that order meets the least one first.

use crate::bitset::BitSet;
use crate::code::{descendant_contains, Code, Mode, Symbol};
use crate::error::{input, Error, Result};
use crate::family::cover_free_witness;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `coalition` has codeword `target` among its descendants.
    Coalition { target: usize, coalition: Vec<usize> },
    /// No position separates `c1` from `c2`.
    Separation { c1: Vec<usize>, c2: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// The coalition bound exceeds the number of available codewords, so
    /// only the existing subsets were tested.
    pub vacuous_range: bool,
}

impl Verdict {
    fn from_witness(witness: Option<Witness>, vacuous_range: bool) -> Self {
        Self {
            holds: witness.is_none(),
            witness,
            vacuous_range,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Position-by-position scan of the definition.
    Definitional,
    /// Cover-freeness of the complemented coincidence families.
    #[default]
    CoverFree,
    /// Both, failing loudly if they disagree.
    Crosscheck,
}

/// Depth-first search over coalitions drawn from `pool` (ascending), at most
/// `depth` deep, with an incremental state. `hit` decides whether the
/// current coalition violates. Returns the first violating coalition.
fn first_coalition<S>(
    pool: &[usize],
    depth: usize,
    init: S,
    step: &dyn Fn(&S, usize) -> S,
    hit: &dyn Fn(&S) -> bool,
) -> Option<Vec<usize>> {
    fn go<S>(
        pool: &[usize],
        start: usize,
        depth: usize,
        state: &S,
        step: &dyn Fn(&S, usize) -> S,
        hit: &dyn Fn(&S) -> bool,
        path: &mut Vec<usize>,
    ) -> bool {
        for k in start..pool.len() {
            let next = step(state, pool[k]);
            path.push(pool[k]);
            if hit(&next) {
                return true;
            }
            if depth > 1 && go(pool, k + 1, depth - 1, &next, step, hit, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::new();
    go(pool, 0, depth, &init, step, hit, &mut path).then_some(path)
}

fn others(m: usize, i: usize) -> Vec<usize> {
    (0..m).filter(|&j| j != i).collect()
}

/// Narrow-sense `t`-frameproof: no coalition of at most `t` codewords has
/// another codeword among its descendants.
pub fn is_frameproof_narrow(code: &Code, t: usize) -> Result<Verdict> {
    if t < 1 {
        return input("coalition size t must be at least 1");
    }
    let m = code.m();
    let full = BitSet::full(code.n());
    // y is a narrow descendant of X iff the sets I(y, x) for x in X cover [n]
    let witness = (0..m).into_par_iter().find_map_first(|i| {
        let pool = others(m, i);
        first_coalition(
            &pool,
            t,
            BitSet::new(code.n()),
            &|acc: &BitSet, j| acc.union(&code.agreement(i, j)),
            &|acc: &BitSet| acc == &full,
        )
        .map(|coalition| Witness::Coalition {
            target: i,
            coalition,
        })
    });
    Ok(Verdict::from_witness(witness, t > m.saturating_sub(1)))
}

/// Wide-sense `t`-frameproof test with the chosen strategy.
pub fn is_wide_sense_frameproof(code: &Code, t: usize, strategy: Strategy) -> Result<Verdict> {
    if t < 2 {
        return input("wide-sense frameproof tests need t >= 2");
    }
    let vacuous = t > code.m().saturating_sub(1);
    if code.m() < 2 {
        return Ok(Verdict::from_witness(None, true));
    }
    match strategy {
        Strategy::Definitional => Ok(Verdict::from_witness(wide_definitional(code, t), vacuous)),
        Strategy::CoverFree => Ok(Verdict::from_witness(wide_coverfree(code, t), vacuous)),
        Strategy::Crosscheck => {
            let a = wide_definitional(code, t);
            let b = wide_coverfree(code, t);
            if a != b {
                return Err(Error::Consistency(format!(
                    "definitional verdict {a:?} disagrees with cover-free verdict {b:?}"
                )));
            }
            Ok(Verdict::from_witness(a, vacuous))
        }
    }
}

/// Literal scan: the coalition frames `i` when every position where the
/// coalition agrees shows the coalition's symbol on `i` as well.
fn wide_definitional(code: &Code, t: usize) -> Option<Witness> {
    let m = code.m();
    let n = code.n();
    let words = code.codewords();
    (0..m).into_par_iter().find_map_first(|i| {
        let pool = others(m, i);
        // state: (first member, positions where the coalition agrees)
        let init: (Option<usize>, Vec<bool>) = (None, vec![true; n]);
        let step = |s: &(Option<usize>, Vec<bool>), j: usize| {
            let first = s.0.unwrap_or(j);
            let agree = (0..n)
                .map(|l| s.1[l] && words[j][l] == words[first][l])
                .collect();
            (Some(first), agree)
        };
        let hit = |s: &(Option<usize>, Vec<bool>)| {
            let first = s.0.expect("nonempty coalition");
            (0..n).all(|l| !s.1[l] || words[i][l] == words[first][l])
        };
        first_coalition(&pool, t, init, &step, &hit).map(|coalition| Witness::Coalition {
            target: i,
            coalition,
        })
    })
}

/// Cover-free criterion: for every owner `j`, the complements of `I(j, k)`,
/// `k != j`, are pairwise distinct and `(t-1)`-cover-free.
///
/// Whether the code passes is decided from the families alone. A failing
/// code then gets its least violation from the same coincidence masks:
/// `(i, X)` violates iff the positions where `X` agrees lie inside `I(i, x)`
/// for any `x` in `X`.
fn wide_coverfree(code: &Code, t: usize) -> Option<Witness> {
    let m = code.m();
    let n = code.n();
    let fails = (0..m).into_par_iter().any(|j| {
        let prof = code.profile(j);
        if prof.distinct_count != m - 1 {
            return true;
        }
        let comp: Vec<BitSet> = prof.sets.iter().map(|(_, s)| s.complement()).collect();
        cover_free_witness(&comp, n, 1, t - 1).is_some()
    });
    if !fails {
        return None;
    }
    let found = (0..m).into_par_iter().find_map_first(|i| {
        let pool = others(m, i);
        let init: (Option<usize>, BitSet) = (None, BitSet::full(n));
        let step = |s: &(Option<usize>, BitSet), j: usize| match s.0 {
            None => (Some(j), s.1.clone()),
            Some(f) => (Some(f), s.1.intersection(&code.agreement(f, j))),
        };
        let hit = |s: &(Option<usize>, BitSet)| {
            let f = s.0.expect("nonempty coalition");
            s.1.is_subset(&code.agreement(i, f))
        };
        first_coalition(&pool, t, init, &step, &hit).map(|coalition| Witness::Coalition {
            target: i,
            coalition,
        })
    });
    Some(found.unwrap_or_else(|| {
        panic!("cover-free criterion failed but no violating coalition exists")
    }))
}

/// Re-checks a witness against the code with the literal descendant test
/// (coalition witnesses) or the literal separation test (SHF witnesses).
/// Returns true iff the witness really exhibits a violation.
pub fn check_witness(code: &Code, w: &Witness, mode: Mode) -> Result<bool> {
    let m = code.m();
    match w {
        Witness::Coalition { target, coalition } => {
            let ok_idx = *target < m
                && !coalition.is_empty()
                && coalition.iter().all(|&j| j < m && j != *target)
                && coalition.iter().collect::<BTreeSet<_>>().len() == coalition.len();
            if !ok_idx {
                return input("witness indices out of range or repeated");
            }
            let x: Vec<&[Symbol]> = coalition.iter().map(|&j| code.codeword(j)).collect();
            descendant_contains(&x, code.codeword(*target), mode)
        }
        Witness::Separation { c1, c2 } => {
            let all: BTreeSet<usize> = c1.iter().chain(c2).copied().collect();
            if c1.is_empty()
                || c2.is_empty()
                || all.len() != c1.len() + c2.len()
                || all.iter().any(|&j| j >= m)
            {
                return input("separation witness needs disjoint nonempty index sets");
            }
            let wide = mode == Mode::Wide;
            Ok(!(0..code.n()).any(|l| separates(code, c1, c2, l, wide)))
        }
    }
}

fn separates(code: &Code, c1: &[usize], c2: &[usize], l: usize, wide: bool) -> bool {
    let s1: BTreeSet<Symbol> = c1.iter().map(|&j| code.codeword(j)[l]).collect();
    let s2: BTreeSet<Symbol> = c2.iter().map(|&j| code.codeword(j)[l]).collect();
    s1.is_disjoint(&s2) && (!wide || s2.len() == 1)
}

fn check_w(w1: usize, w2: usize, min_w2: usize) -> Result<()> {
    if w1 < 1 || w2 < min_w2 {
        return input(format!("separating parameters need w1 >= 1 and w2 >= {min_w2}"));
    }
    Ok(())
}

/// Least `(C1, C2)` pair, both nonempty and disjoint, with no position where
/// `separates_at` holds.
fn shf_scan(code: &Code, w1: usize, w2: usize, wide: bool) -> Option<Witness> {
    let m = code.m();
    let n = code.n();
    let all: Vec<usize> = (0..m).collect();
    let mut found = None;
    // outer scan over C1 in lexicographic order
    let mut try_c1 = |c1: &[usize]| -> bool {
        let pool: Vec<usize> = (0..m).filter(|j| !c1.contains(j)).collect();
        // bad[k]: positions where codeword k shows a symbol of C1
        let bad: Vec<BitSet> = (0..m)
            .map(|k| {
                BitSet::from_indices(
                    n,
                    (0..n).filter(|&l| c1.iter().any(|&j| code.codeword(j)[l] == code.codeword(k)[l])),
                )
            })
            .collect();
        let hit = if wide {
            first_coalition(
                &pool,
                w2,
                (None, BitSet::full(n)),
                &|s: &(Option<usize>, BitSet), k| match s.0 {
                    None => (Some(k), s.1.clone()),
                    Some(f) => (Some(f), s.1.intersection(&code.agreement(f, k))),
                },
                &|s: &(Option<usize>, BitSet)| s.1.is_subset(&bad[s.0.expect("nonempty")]),
            )
        } else {
            let full = BitSet::full(n);
            first_coalition(
                &pool,
                w2,
                BitSet::new(n),
                &|acc: &BitSet, k| acc.union(&bad[k]),
                &|acc: &BitSet| acc == &full,
            )
        };
        if let Some(c2) = hit {
            found = Some(Witness::Separation {
                c1: c1.to_vec(),
                c2,
            });
            true
        } else {
            false
        }
    };
    // lexicographic enumeration of C1 by depth-first preorder
    fn walk(all: &[usize], start: usize, depth: usize, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        for k in start..all.len() {
            path.push(all[k]);
            if f(path) {
                return true;
            }
            if depth > 1 && walk(all, k + 1, depth - 1, path, f) {
                return true;
            }
            path.pop();
        }
        false
    }
    walk(&all, 0, w1, &mut Vec::new(), &mut try_c1);
    found
}

/// Separating hash family of type `{w1, w2}`.
pub fn is_shf(code: &Code, w1: usize, w2: usize) -> Result<Verdict> {
    check_w(w1, w2, 1)?;
    let w = shf_scan(code, w1, w2, false);
    Ok(Verdict::from_witness(w, code.m() < w1 + w2))
}

/// Wide-sense separating hash family: the separating position must also see
/// `C2` on a single symbol.
pub fn is_wide_sense_shf(code: &Code, w1: usize, w2: usize) -> Result<Verdict> {
    check_w(w1, w2, 2)?;
    let w = shf_scan(code, w1, w2, true);
    Ok(Verdict::from_witness(w, code.m() < w1 + w2))
}

/// Coincidence-family criterion for wide-sense separating hash families:
/// for every `i` the complements of `I(i, j)` are pairwise distinct,
/// `(w1, w2 - 1)`-cover-free and `min(w1, m-1)`-wise intersecting.
///
/// The intersecting condition covers `|C2| = 1`; cover-freeness alone does
/// not imply it once `C1` may use every other codeword. With `crosscheck`
/// the verdict is compared against [`is_wide_sense_shf`].
pub fn wshf_coincidence_check(code: &Code, w1: usize, w2: usize, crosscheck: bool) -> Result<Verdict> {
    check_w(w1, w2, 2)?;
    let m = code.m();
    if m < 2 {
        return input("the coincidence criterion needs at least two codewords");
    }
    let n = code.n();
    let witness = (0..m).find_map(|i| {
        let prof = code.profile(i);
        let idx: Vec<usize> = prof.sets.iter().map(|(j, _)| *j).collect();
        let comp: Vec<BitSet> = prof.sets.iter().map(|(_, s)| s.complement()).collect();
        for a in 0..comp.len() {
            for b in a + 1..comp.len() {
                if comp[a] == comp[b] {
                    return Some(Witness::Separation {
                        c1: vec![idx[a]],
                        c2: sorted(vec![i, idx[b]]),
                    });
                }
            }
        }
        if let Some(w) = empty_intersection(&comp, n, w1.min(m - 1)) {
            return Some(Witness::Separation {
                c1: w.iter().map(|&k| idx[k]).collect(),
                c2: vec![i],
            });
        }
        cover_free_witness(&comp, n, w1, w2 - 1).map(|(a, b)| Witness::Separation {
            c1: a.iter().map(|&k| idx[k]).collect(),
            c2: sorted(b.iter().map(|&k| idx[k]).chain([i]).collect()),
        })
    });
    let verdict = Verdict::from_witness(witness, m < w1 + w2);
    if crosscheck {
        let direct = is_wide_sense_shf(code, w1, w2)?;
        if direct.holds != verdict.holds {
            return Err(Error::Consistency(format!(
                "coincidence criterion says {} but the definition says {}",
                verdict.holds, direct.holds
            )));
        }
    }
    Ok(verdict)
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Least subfamily of at most `r` members with empty intersection.
fn empty_intersection(ms: &[BitSet], n: usize, r: usize) -> Option<Vec<usize>> {
    let pool: Vec<usize> = (0..ms.len()).collect();
    first_coalition(
        &pool,
        r,
        BitSet::full(n),
        &|acc: &BitSet, k| acc.intersection(&ms[k]),
        &|acc: &BitSet| acc.is_empty(),
    )
}
