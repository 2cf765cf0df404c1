//! Families of subsets of a ground set `0..n`.

use crate::bitset::BitSet;
use crate::bounds::binomial::binom;
use crate::error::{input, Result};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

/// A family of pairwise distinct subsets of `0..n`, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    members: Vec<BitSet>,
}

/// Outcome of a cover-free test. `witness` holds the lexicographically least
/// violating pair of member-index lists `(intersected, covering)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverFreeVerdict {
    pub holds: bool,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    /// Fewer than `r1 + r2` members, so only part of the quantifier range exists.
    pub vacuous_range: bool,
}

impl SetFamily {
    pub fn new(n: usize, members: Vec<BitSet>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (k, m) in members.iter().enumerate() {
            if m.len() != n {
                return input(format!(
                    "member {} lives on a ground set of size {}, expected {n}",
                    k + 1,
                    m.len()
                ));
            }
            if !seen.insert(m) {
                return input(format!("member {} repeats an earlier member", k + 1));
            }
        }
        Ok(Self { n, members })
    }

    /// Builds a family from 0-based element lists.
    pub fn from_lists<I, J>(n: usize, lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        let mut members = Vec::new();
        for l in lists {
            let l: Vec<usize> = l.into_iter().collect();
            if let Some(&e) = l.iter().find(|&&e| e >= n) {
                return input(format!("element {e} outside ground set of size {n}"));
            }
            members.push(BitSet::from_indices(n, l));
        }
        Self::new(n, members)
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            members: (0..n).map(|i| BitSet::from_indices(n, [i])).collect(),
        }
    }

    /// All `k`-subsets of `0..n` in lexicographic order.
    pub fn level(n: usize, k: usize) -> Self {
        let members = (0..n)
            .combinations(k)
            .map(|c| BitSet::from_indices(n, c))
            .collect();
        Self { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BitSet] {
        &self.members
    }

    /// Common member size, if every member has the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.members.first()?.count();
        self.members.iter().all(|m| m.count() == k).then_some(k)
    }

    /// Same family with members in `BitSet` order.
    pub fn sorted(&self) -> Self {
        let mut members = self.members.clone();
        members.sort();
        Self { n: self.n, members }
    }

    pub fn complement_family(&self) -> Self {
        Self {
            n: self.n,
            members: self.members.iter().map(BitSet::complement).collect(),
        }
    }

    pub fn is_sperner(&self) -> bool {
        let ms = &self.members;
        (0..ms.len()).all(|a| (0..ms.len()).all(|b| a == b || !ms[a].is_subset(&ms[b])))
    }

    /// Sum of `1 / C(n, |A|)` over the members, exactly.
    pub fn lym_sum(&self) -> BigRational {
        self.members.iter().fold(BigRational::zero(), |acc, m| {
            acc + BigRational::new(BigInt::from(1), binom(self.n as i64, m.count() as i64).into())
        })
    }

    /// The `r`-fold shadow for `r > 0` and the `|r|`-fold upper shadow for
    /// `r < 0`, as a sorted family.
    pub fn shadow(&self, r: i64) -> Result<Self> {
        if r == 0 {
            return input("shadow order must be nonzero");
        }
        let k = r.unsigned_abs() as usize;
        if k > self.n {
            return input(format!("shadow order {r} exceeds ground set size {}", self.n));
        }
        let mut out = BTreeSet::new();
        for m in &self.members {
            let pool: Vec<usize> = if r > 0 {
                m.to_vec()
            } else {
                m.complement().to_vec()
            };
            for c in pool.into_iter().combinations(k) {
                let mut s = m.clone();
                for e in c {
                    if r > 0 {
                        s.remove(e);
                    } else {
                        s.insert(e);
                    }
                }
                out.insert(s);
            }
        }
        Ok(Self {
            n: self.n,
            members: out.into_iter().collect(),
        })
    }

    /// Every subfamily of at most `r` members has a common element.
    pub fn is_r_wise_intersecting(&self, r: usize) -> bool {
        fn go(ms: &[BitSet], start: usize, depth: usize, acc: &BitSet) -> bool {
            if depth == 0 {
                return true;
            }
            (start..ms.len()).all(|i| {
                let next = acc.intersection(&ms[i]);
                !next.is_empty() && go(ms, i + 1, depth - 1, &next)
            })
        }
        go(&self.members, 0, r, &BitSet::full(self.n))
    }

    /// No union of at most `t` members is the whole ground set.
    pub fn is_non_t_covering(&self, t: usize) -> bool {
        fn go(ms: &[BitSet], start: usize, depth: usize, acc: &BitSet) -> bool {
            if depth == 0 {
                return true;
            }
            (start..ms.len()).all(|i| {
                let next = acc.union(&ms[i]);
                !next.is_full() && go(ms, i + 1, depth - 1, &next)
            })
        }
        go(&self.members, 0, t, &BitSet::new(self.n))
    }

    /// Every pair has skew distance `min(|A\B|, |B\A|)` in `l`.
    pub fn is_l_close_sperner(&self, l: &BTreeSet<usize>) -> bool {
        let ms = &self.members;
        (0..ms.len()).all(|a| {
            (a + 1..ms.len()).all(|b| {
                let d = ms[a].difference(&ms[b]).count().min(ms[b].difference(&ms[a]).count());
                l.contains(&d)
            })
        })
    }

    /// No intersection of at most `r1` members lies inside the union of at
    /// most `r2` other members.
    pub fn is_cover_free_general(&self, r1: usize, r2: usize) -> Result<CoverFreeVerdict> {
        if r1 == 0 || r2 == 0 {
            return input("cover-free parameters must be positive");
        }
        let witness = cover_free_witness(&self.members, self.n, r1, r2);
        Ok(CoverFreeVerdict {
            holds: witness.is_none(),
            witness,
            vacuous_range: self.len() < r1 + r2,
        })
    }

    /// Classical t-cover-free test: no member inside the union of `t` others.
    pub fn is_cover_free(&self, t: usize) -> Result<CoverFreeVerdict> {
        self.is_cover_free_general(1, t)
    }
}

/// Depth-first search in lexicographic order over member-index lists; the
/// first hit is therefore the least violating `(A, B)` pair.
pub(crate) fn cover_free_witness(
    ms: &[BitSet],
    n: usize,
    r1: usize,
    r2: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    fn cover(
        ms: &[BitSet],
        target: &BitSet,
        used: &[usize],
        start: usize,
        depth: usize,
        acc: &BitSet,
        picked: &mut Vec<usize>,
    ) -> bool {
        for i in start..ms.len() {
            if used.contains(&i) {
                continue;
            }
            let next = acc.union(&ms[i]);
            picked.push(i);
            if target.is_subset(&next) {
                return true;
            }
            if depth > 1 && cover(ms, target, used, i + 1, depth - 1, &next, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    fn inter(
        ms: &[BitSet],
        n: usize,
        start: usize,
        r1: usize,
        r2: usize,
        acc: &BitSet,
        a: &mut Vec<usize>,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        for i in start..ms.len() {
            let next = acc.intersection(&ms[i]);
            a.push(i);
            let mut b = Vec::new();
            if cover(ms, &next, a, 0, r2, &BitSet::new(n), &mut b) {
                return Some((a.clone(), b));
            }
            if r1 > 1 {
                if let Some(w) = inter(ms, n, i + 1, r1 - 1, r2, &next, a) {
                    return Some(w);
                }
            }
            a.pop();
        }
        None
    }
    inter(ms, n, 0, r1, r2, &BitSet::full(n), &mut Vec::new())
}
