//! Seeded generators and brute-force oracles shared by the integration tests.
//! The oracles restate the definitions directly and share no code with the
//! library.

#![allow(dead_code)]

use frameproof::{BitSet, Code, Mode, Symbol};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random code with `m` distinct codewords, or `None` when
/// `m > q^n`.
pub fn random_code(r: &mut impl Rng, q: usize, n: usize, m: usize) -> Option<Code> {
    if (q as f64).powi(n as i32) < m as f64 {
        return None;
    }
    let mut seen = BTreeSet::new();
    while seen.len() < m {
        let w: Vec<Symbol> = (0..n).map(|_| r.gen_range(0..q as Symbol)).collect();
        seen.insert(w);
    }
    let mut words: Vec<Vec<Symbol>> = seen.into_iter().collect();
    words.shuffle(r);
    Some(Code::new(q, n, words).unwrap())
}

/// Random code with parameters drawn from the given inclusive ranges.
pub fn random_code_in(r: &mut impl Rng, q_max: usize, n_max: usize, m_range: (usize, usize)) -> Code {
    loop {
        let q = r.gen_range(2..=q_max);
        let n = r.gen_range(1..=n_max);
        let m = r.gen_range(m_range.0..=m_range.1);
        if let Some(c) = random_code(r, q, n, m) {
            return c;
        }
    }
}

/// Every subset of `items` with `1..=k` elements, each ascending.
pub fn subsets_up_to(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << items.len()) {
        if mask.count_ones() as usize <= k {
            out.push((0..items.len()).filter(|&b| mask >> b & 1 == 1).map(|b| items[b]).collect());
        }
    }
    out
}

fn word(c: &Code, i: usize) -> &[Symbol] {
    c.codeword(i)
}

/// Whether `y` descends from `coalition`.
pub fn naive_descends(c: &Code, coalition: &[usize], y: usize, mode: Mode) -> bool {
    (0..c.n()).all(|l| {
        let vals: BTreeSet<Symbol> = coalition.iter().map(|&x| word(c, x)[l]).collect();
        let yl = word(c, y)[l];
        match mode {
            Mode::Narrow => vals.contains(&yl),
            Mode::Wide => vals.len() > 1 || vals.contains(&yl),
        }
    })
}

/// The least `(target, coalition)` in lexicographic order that frames
/// `target`, if any.
pub fn naive_fp_witness(c: &Code, t: usize, mode: Mode) -> Option<(usize, Vec<usize>)> {
    for y in 0..c.m() {
        let others: Vec<usize> = (0..c.m()).filter(|&x| x != y).collect();
        let mut bad: Vec<Vec<usize>> = subsets_up_to(&others, t)
            .into_iter()
            .filter(|x| naive_descends(c, x, y, mode))
            .collect();
        bad.sort();
        if let Some(x) = bad.into_iter().next() {
            return Some((y, x));
        }
    }
    None
}

pub fn naive_fp(c: &Code, t: usize, mode: Mode) -> bool {
    naive_fp_witness(c, t, mode).is_none()
}

/// Separating hash family test; `wide` also asks `c2` to be constant at the
/// separating position.
pub fn naive_shf(c: &Code, w1: usize, w2: usize, wide: bool) -> bool {
    let all: Vec<usize> = (0..c.m()).collect();
    for c1 in subsets_up_to(&all, w1) {
        let rest: Vec<usize> = all.iter().copied().filter(|x| !c1.contains(x)).collect();
        for c2 in subsets_up_to(&rest, w2) {
            let separated = (0..c.n()).any(|l| {
                let a: BTreeSet<Symbol> = c1.iter().map(|&x| word(c, x)[l]).collect();
                let b: BTreeSet<Symbol> = c2.iter().map(|&x| word(c, x)[l]).collect();
                a.is_disjoint(&b) && (!wide || b.len() == 1)
            });
            if !separated {
                return false;
            }
        }
    }
    true
}

/// Positions where codewords `i` and `j` agree, as a bitmask.
pub fn agree_mask(c: &Code, i: usize, j: usize) -> u64 {
    (0..c.n()).filter(|&l| word(c, i)[l] == word(c, j)[l]).fold(0, |m, l| m | 1 << l)
}

/// `t`-cover-freeness of a list of masks: no member lies inside the union
/// of at most `t` others.
pub fn naive_cover_free(sets: &[u64], t: usize) -> bool {
    let idx: Vec<usize> = (0..sets.len()).collect();
    for (i, &a) in sets.iter().enumerate() {
        let others: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
        for s in subsets_up_to(&others, t) {
            let u = s.iter().fold(0, |u, &j| u | sets[j]);
            if a & !u == 0 {
                return false;
            }
        }
    }
    true
}

pub fn masks_of(members: &[BitSet]) -> Vec<u64> {
    members.iter().map(|b| b.to_mask()).collect()
}

/// Binomial coefficient by Pascal's rule, as exact `u128`.
pub fn pascal(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k as usize]
}

/// Proptest strategy for codes with `q <= q_max`, `n <= n_max` and
/// `m_min..=m_max` distinct codewords in random order.
pub fn code_strategy(
    q_max: usize,
    n_max: usize,
    m_min: usize,
    m_max: usize,
) -> impl proptest::strategy::Strategy<Value = Code> {
    use proptest::prelude::*;
    (2..=q_max, 1..=n_max)
        .prop_filter("space smaller than m_min", move |&(q, n)| q.pow(n as u32) >= m_min)
        .prop_flat_map(move |(q, n)| {
            let size = q.pow(n as u32);
            let all: Vec<u32> = (0..size as u32).collect();
            prop::sample::subsequence(all, m_min..=m_max.min(size))
                .prop_shuffle()
                .prop_map(move |idx| {
                    let words = idx
                        .into_iter()
                        .map(|mut x| {
                            (0..n)
                                .map(|_| {
                                    let s = x % q as u32;
                                    x /= q as u32;
                                    s
                                })
                                .collect()
                        })
                        .collect();
                    Code::new(q, n, words).unwrap()
                })
        })
}
