//! q-ary codes, descendant sets, coincidence sets and canonical forms.

use crate::bitset::BitSet;
use crate::error::{input, Error, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type Symbol = u32;

/// Positions of a code, `0..n`.
pub type PositionSet = BitSet;

/// How far a coalition may stray from its own symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Each position carries a symbol already seen in the coalition.
    Narrow,
    /// Only positions where the coalition agrees are constrained.
    Wide,
}

/// A code of length `n` over `{0, .., q-1}` with pairwise distinct codewords.
///
/// Codeword order is part of the value: indices returned by the verifiers
/// and by coincidence profiles refer to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCode")]
pub struct Code {
    q: usize,
    n: usize,
    codewords: Vec<Vec<Symbol>>,
}

#[derive(Deserialize)]
struct RawCode {
    q: usize,
    n: usize,
    codewords: Vec<Vec<Symbol>>,
}

impl TryFrom<RawCode> for Code {
    type Error = Error;
    fn try_from(r: RawCode) -> Result<Self> {
        Code::new(r.q, r.n, r.codewords)
    }
}

impl Code {
    pub fn new(q: usize, n: usize, codewords: Vec<Vec<Symbol>>) -> Result<Self> {
        if q < 2 {
            return input(format!("alphabet size must be at least 2, got {q}"));
        }
        if n == 0 {
            return input("code length must be at least 1");
        }
        if codewords.is_empty() {
            return input("a code needs at least one codeword");
        }
        for (k, w) in codewords.iter().enumerate() {
            if w.len() != n {
                return input(format!(
                    "codeword {} has length {}, expected {n}",
                    k + 1,
                    w.len()
                ));
            }
            if let Some(&s) = w.iter().find(|&&s| s as usize >= q) {
                return input(format!("codeword {} uses symbol {s} outside 0..{q}", k + 1));
            }
        }
        let mut seen = BTreeSet::new();
        for (k, w) in codewords.iter().enumerate() {
            if !seen.insert(w) {
                return input(format!("codeword {} repeats an earlier codeword", k + 1));
            }
        }
        Ok(Self { q, n, codewords })
    }

    /// Builds a code from its `n x m` representation matrix, one row per
    /// position and one column per codeword.
    pub fn from_matrix(q: usize, rows: &[Vec<Symbol>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return input("representation matrix rows differ in length");
        }
        let words = (0..m)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::new(q, n, words)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Vec<Symbol>] {
        &self.codewords
    }

    pub fn codeword(&self, i: usize) -> &[Symbol] {
        &self.codewords[i]
    }

    /// Representation matrix: entry `[l][j]` is symbol `l` of codeword `j`.
    pub fn matrix(&self) -> Vec<Vec<Symbol>> {
        (0..self.n)
            .map(|l| self.codewords.iter().map(|w| w[l]).collect())
            .collect()
    }

    fn index(&self, i: usize) -> Result<()> {
        if i >= self.m() {
            return input(format!("codeword index {i} out of range for m = {}", self.m()));
        }
        Ok(())
    }

    /// I(i, j): positions where codewords `i` and `j` agree.
    pub fn coincidence_set(&self, i: usize, j: usize) -> Result<PositionSet> {
        self.index(i)?;
        self.index(j)?;
        if i == j {
            return input("coincidence set needs two distinct codewords");
        }
        Ok(self.agreement(i, j))
    }

    pub(crate) fn agreement(&self, i: usize, j: usize) -> PositionSet {
        let (a, b) = (&self.codewords[i], &self.codewords[j]);
        BitSet::from_indices(self.n, (0..self.n).filter(|&l| a[l] == b[l]))
    }

    pub fn coincidence_families(&self) -> Result<Vec<CoincidenceProfile>> {
        if self.m() < 2 {
            return input("coincidence families need at least two codewords");
        }
        Ok((0..self.m()).map(|i| self.profile(i)).collect())
    }

    pub(crate) fn profile(&self, i: usize) -> CoincidenceProfile {
        let sets: Vec<(usize, PositionSet)> = (0..self.m())
            .filter(|&j| j != i)
            .map(|j| (j, self.agreement(i, j)))
            .collect();
        let distinct_count = sets.iter().map(|(_, s)| s).collect::<BTreeSet<_>>().len();
        CoincidenceProfile {
            owner: i,
            sets,
            distinct_count,
        }
    }

    /// Relabels every row so symbol frequencies are non-increasing in the
    /// label. Ties go to the symbol whose first occurrence comes earlier in
    /// codeword order; unused symbols take the remaining labels in order.
    pub fn standard_form(&self) -> Code {
        let maps: Vec<Vec<Symbol>> = (0..self.n).map(|l| self.first_occurrence_map(l)).collect();
        self.relabel(&maps)
    }

    fn first_occurrence_map(&self, l: usize) -> Vec<Symbol> {
        let stats = self.row_stats(l);
        let mut order: Vec<usize> = (0..self.q).collect();
        order.sort_by_key(|&s| (std::cmp::Reverse(stats[s].0), stats[s].1, s));
        let mut map = vec![0; self.q];
        for (label, &s) in order.iter().enumerate() {
            map[s] = label as Symbol;
        }
        map
    }

    /// Per symbol: (frequency, first codeword index using it or `usize::MAX`).
    fn row_stats(&self, l: usize) -> Vec<(usize, usize)> {
        let mut stats = vec![(0usize, usize::MAX); self.q];
        for (k, w) in self.codewords.iter().enumerate() {
            let e = &mut stats[w[l] as usize];
            e.0 += 1;
            e.1 = e.1.min(k);
        }
        stats
    }

    /// Applies one symbol map per row. Maps must be bijections of `0..q`.
    pub fn relabel(&self, maps: &[Vec<Symbol>]) -> Code {
        let codewords = self
            .codewords
            .iter()
            .map(|w| w.iter().zip(maps).map(|(&s, m)| m[s as usize]).collect())
            .collect();
        Code {
            q: self.q,
            n: self.n,
            codewords,
        }
    }

    /// Permutes positions: row `l` of the result is row `perm[l]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Code {
        let codewords = self
            .codewords
            .iter()
            .map(|w| perm.iter().map(|&p| w[p]).collect())
            .collect();
        Code {
            q: self.q,
            n: self.n,
            codewords,
        }
    }

    /// Same code with codewords in lexicographic order.
    pub fn sorted(&self) -> Code {
        let mut codewords = self.codewords.clone();
        codewords.sort();
        Code {
            q: self.q,
            n: self.n,
            codewords,
        }
    }

    pub fn canonical(&self, level: CanonLevel) -> Canonical {
        match level {
            CanonLevel::Symbol => symbol_canonical(self),
            CanonLevel::Full => full_canonical(self),
        }
    }

    /// True iff `m = n` and some per-row relabeling turns the representation
    /// matrix into a permutation matrix.
    pub fn is_permutation_code(&self) -> bool {
        let (n, m) = (self.n, self.m());
        if m != n || n < 2 {
            return false;
        }
        // owner[l] = the codeword that alone differs at row l, if any
        let mut owners = vec![None; n];
        for (l, owner) in owners.iter_mut().enumerate() {
            for i in 0..m {
                let others: BTreeSet<Symbol> = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| self.codewords[j][l])
                    .collect();
                if others.len() == 1 && !others.contains(&self.codewords[i][l]) {
                    // for m = 2 both codewords qualify; keep the choice open
                    owner.get_or_insert_with(Vec::new).push(i);
                }
            }
        }
        let Some(cands) = owners.into_iter().collect::<Option<Vec<Vec<usize>>>>() else {
            return false;
        };
        perfect_matching(&cands, m)
    }
}

fn perfect_matching(cands: &[Vec<usize>], m: usize) -> bool {
    fn go(row: usize, cands: &[Vec<usize>], used: &mut [bool]) -> bool {
        if row == cands.len() {
            return true;
        }
        for &c in &cands[row] {
            if !used[c] {
                used[c] = true;
                if go(row + 1, cands, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    go(0, cands, &mut vec![false; m])
}

/// Coincidence family of one codeword: I(owner, j) for every other `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceProfile {
    pub owner: usize,
    pub sets: Vec<(usize, PositionSet)>,
    pub distinct_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonLevel {
    /// Invariant under per-row symbol relabeling and codeword order.
    Symbol,
    /// Additionally invariant under permutations of the positions.
    Full,
}

/// A canonical representative. `exact` is false when a size cap forced a
/// heuristic; such forms may differ between equivalent inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub code: Code,
    pub exact: bool,
}

/// Largest number of tie-resolving relabelings tried per code.
const SYMBOL_TIE_CAP: usize = 1 << 16;
/// Full canonical forms enumerate all `n!` row orders up to this length.
pub const FULL_CANON_MAX_N: usize = 8;

/// Minimum sorted codeword list over all standard-form relabelings.
///
/// Standard form fixes which label each frequency class receives but not the
/// order inside a class of equal frequency; every such order is tried.
fn symbol_canonical(code: &Code) -> Canonical {
    // per row: groups of used symbols sharing a frequency, in label order
    let mut rows: Vec<Vec<Vec<Symbol>>> = Vec::with_capacity(code.n);
    let mut total: usize = 1;
    for l in 0..code.n {
        let stats = code.row_stats(l);
        let mut used: Vec<usize> = (0..code.q).filter(|&s| stats[s].0 > 0).collect();
        used.sort_by_key(|&s| (std::cmp::Reverse(stats[s].0), s));
        let groups: Vec<Vec<Symbol>> = used
            .chunk_by(|&a, &b| stats[a].0 == stats[b].0)
            .map(|g| g.iter().map(|&s| s as Symbol).collect())
            .collect();
        for g in &groups {
            total = total.saturating_mul(factorial(g.len()));
        }
        rows.push(groups);
    }
    if total > SYMBOL_TIE_CAP {
        return Canonical {
            code: code.standard_form().sorted(),
            exact: false,
        };
    }
    let per_row: Vec<Vec<Vec<Symbol>>> = rows
        .iter()
        .map(|groups| row_maps(groups, code.q))
        .collect();
    let mut best: Option<Vec<Vec<Symbol>>> = None;
    let mut choice = vec![0usize; code.n];
    loop {
        let maps: Vec<Vec<Symbol>> = (0..code.n).map(|l| per_row[l][choice[l]].clone()).collect();
        let mut words = code.relabel(&maps).codewords;
        words.sort();
        if best.as_ref().is_none_or(|b| words < *b) {
            best = Some(words);
        }
        // odometer over the per-row choices
        let mut l = 0;
        while l < code.n {
            choice[l] += 1;
            if choice[l] < per_row[l].len() {
                break;
            }
            choice[l] = 0;
            l += 1;
        }
        if l == code.n {
            break;
        }
    }
    Canonical {
        code: Code {
            q: code.q,
            n: code.n,
            codewords: best.expect("at least one relabeling"),
        },
        exact: true,
    }
}

/// Every symbol map consistent with the given frequency groups. Unused
/// symbols receive the trailing labels in increasing order.
fn row_maps(groups: &[Vec<Symbol>], q: usize) -> Vec<Vec<Symbol>> {
    let mut maps = vec![Vec::<(Symbol, Symbol)>::new()];
    let mut next: Symbol = 0;
    for g in groups {
        let base = next;
        next += g.len() as Symbol;
        let mut out = Vec::new();
        for partial in &maps {
            for perm in permutations(g.len()) {
                let mut m = partial.clone();
                for (k, &p) in perm.iter().enumerate() {
                    m.push((g[k], base + p as Symbol));
                }
                out.push(m);
            }
        }
        maps = out;
    }
    maps.into_iter()
        .map(|pairs| {
            let mut map = vec![Symbol::MAX; q];
            for (s, lab) in pairs {
                map[s as usize] = lab;
            }
            for (lab, slot) in (next..).zip(map.iter_mut().filter(|x| **x == Symbol::MAX)) {
                *slot = lab;
            }
            map
        })
        .collect()
}

fn full_canonical(code: &Code) -> Canonical {
    if code.n > FULL_CANON_MAX_N {
        // sort rows by their symbol-canonical column signature as a proxy
        let base = symbol_canonical(code).code;
        let mut perm: Vec<usize> = (0..code.n).collect();
        let m = base.matrix();
        perm.sort_by(|&a, &b| m[a].cmp(&m[b]));
        let c = symbol_canonical(&base.permute_rows(&perm));
        return Canonical {
            code: c.code,
            exact: false,
        };
    }
    let mut best: Option<Canonical> = None;
    for perm in permutations(code.n) {
        let c = symbol_canonical(&code.permute_rows(&perm));
        let better = match &best {
            None => true,
            Some(b) => c.code.codewords < b.code.codewords,
        };
        let exact = c.exact && best.as_ref().is_none_or(|b| b.exact);
        if better {
            best = Some(Canonical { code: c.code, exact });
        } else if let Some(b) = best.as_mut() {
            b.exact = exact;
        }
    }
    best.expect("n >= 1")
}

pub(crate) fn factorial(k: usize) -> usize {
    (1..=k).fold(1usize, |a, b| a.saturating_mul(b))
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn check_words<W: AsRef<[Symbol]>>(x: &[W]) -> Result<usize> {
    let Some(first) = x.first() else {
        return input("coalition must be nonempty");
    };
    let n = first.as_ref().len();
    if x.iter().any(|w| w.as_ref().len() != n) {
        return input("coalition codewords differ in length");
    }
    Ok(n)
}

/// U(X): positions where every word of the coalition agrees.
pub fn undetectable_positions<W: AsRef<[Symbol]>>(x: &[W]) -> Result<PositionSet> {
    let n = check_words(x)?;
    let first = x[0].as_ref();
    Ok(BitSet::from_indices(
        n,
        (0..n).filter(|&l| x.iter().all(|w| w.as_ref()[l] == first[l])),
    ))
}

/// Whether `y` is a descendant of coalition `x`.
pub fn descendant_contains<W: AsRef<[Symbol]>>(x: &[W], y: &[Symbol], mode: Mode) -> Result<bool> {
    let n = check_words(x)?;
    if y.len() != n {
        return input(format!("word has length {}, coalition has {n}", y.len()));
    }
    Ok(match mode {
        Mode::Wide => {
            let first = x[0].as_ref();
            (0..n).all(|l| x.iter().any(|w| w.as_ref()[l] != first[l]) || y[l] == first[l])
        }
        Mode::Narrow => (0..n).all(|l| x.iter().any(|w| w.as_ref()[l] == y[l])),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descendants {
    Words(Vec<Vec<Symbol>>),
    Overflow { count: BigUint },
}

/// Lists all descendants in lexicographic order, or reports how many there
/// are when that exceeds `cap`.
pub fn enumerate_descendants<W: AsRef<[Symbol]>>(
    x: &[W],
    q: usize,
    mode: Mode,
    cap: usize,
) -> Result<Descendants> {
    let n = check_words(x)?;
    if x.iter().flat_map(|w| w.as_ref()).any(|&s| s as usize >= q) {
        return input(format!("coalition uses symbols outside 0..{q}"));
    }
    let choices: Vec<Vec<Symbol>> = (0..n)
        .map(|l| {
            let seen: BTreeSet<Symbol> = x.iter().map(|w| w.as_ref()[l]).collect();
            match mode {
                Mode::Narrow => seen.into_iter().collect(),
                Mode::Wide if seen.len() == 1 => seen.into_iter().collect(),
                Mode::Wide => (0..q as Symbol).collect(),
            }
        })
        .collect();
    let count: BigUint = choices.iter().map(|c| BigUint::from(c.len())).product();
    if count > BigUint::from(cap) {
        return Ok(Descendants::Overflow { count });
    }
    let mut words = vec![Vec::with_capacity(n)];
    for c in &choices {
        words = words
            .into_iter()
            .flat_map(|w: Vec<Symbol>| {
                c.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    Ok(Descendants::Words(words))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(q: usize, words: &[&[Symbol]]) -> Code {
        Code::new(q, words[0].len(), words.iter().map(|w| w.to_vec()).collect()).unwrap()
    }

    fn identity(n: usize) -> Code {
        let words = (0..n)
            .map(|j| (0..n).map(|l| Symbol::from(l == j)).collect())
            .collect();
        Code::new(2, n, words).unwrap()
    }

    #[test]
    fn construction_rejects_bad_codes() {
        assert!(Code::new(2, 2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(Code::new(2, 2, vec![vec![0, 2]]).is_err());
        assert!(Code::new(2, 2, vec![vec![0]]).is_err());
        assert!(Code::new(1, 2, vec![vec![0, 0]]).is_err());
        assert!(Code::new(2, 2, vec![]).is_err());
    }

    #[test]
    fn undetectable_examples() {
        let u = undetectable_positions(&[[0, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(u.to_vec(), vec![0, 2]);
        assert_eq!(undetectable_positions(&[[0, 0, 1]]).unwrap().count(), 3);
        assert!(undetectable_positions(&[[0, 1], [1, 0]]).unwrap().is_empty());
        assert!(undetectable_positions(&[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn descendant_examples() {
        let x = [[0, 0, 1], [0, 1, 1]];
        assert!(descendant_contains(&x, &[0, 1, 1], Mode::Wide).unwrap());
        assert!(!descendant_contains(&x, &[1, 1, 1], Mode::Narrow).unwrap());
        assert!(descendant_contains(&x, &[0, 2, 1], Mode::Wide).unwrap());
        assert!(!descendant_contains(&x, &[0, 2, 1], Mode::Narrow).unwrap());
    }

    #[test]
    fn enumeration_and_overflow() {
        let x = [[0, 0, 1], [0, 1, 1]];
        assert_eq!(
            enumerate_descendants(&x, 2, Mode::Wide, 10).unwrap(),
            Descendants::Words(vec![vec![0, 0, 1], vec![0, 1, 1]])
        );
        let y = [[0, 1], [1, 0]];
        match enumerate_descendants(&y, 2, Mode::Wide, 10).unwrap() {
            Descendants::Words(w) => assert_eq!(w.len(), 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            enumerate_descendants(&y, 2, Mode::Wide, 1).unwrap(),
            Descendants::Overflow { count: 4u32.into() }
        );
    }

    #[test]
    fn coincidence_examples() {
        let c = code(2, &[&[0, 0, 1], &[0, 1, 1]]);
        assert_eq!(c.coincidence_set(0, 1).unwrap().to_vec(), vec![0, 2]);
        assert!(c.coincidence_set(0, 0).is_err());
        let i3 = identity(3);
        assert_eq!(i3.coincidence_set(0, 1).unwrap().to_vec(), vec![2]);
        let prof = &i3.coincidence_families().unwrap()[0];
        assert_eq!(prof.sets[0], (1, BitSet::from_indices(3, [2])));
        assert_eq!(prof.sets[1], (2, BitSet::from_indices(3, [1])));
        assert_eq!(prof.distinct_count, 2);
        let c = code(2, &[&[0, 0], &[0, 1], &[1, 0]]);
        let prof = &c.coincidence_families().unwrap()[0];
        assert_eq!(prof.sets[0].1.to_vec(), vec![0]);
        assert_eq!(prof.sets[1].1.to_vec(), vec![1]);
    }

    #[test]
    fn standard_form_examples() {
        let c = Code::from_matrix(2, &[vec![1, 1, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]])
            .unwrap();
        assert_eq!(c.standard_form().matrix()[0], vec![0, 0, 0, 1]);
        assert_eq!(identity(3).standard_form(), identity(3));
        // {(1,0),(0,0)}: row 1 ties, codeword 1's symbol becomes 0
        let c = code(2, &[&[1, 0], &[0, 0]]);
        let s = c.standard_form();
        assert_eq!(s.codewords(), &[vec![0, 0], vec![1, 0]]);
        assert_eq!(s.standard_form(), s);
    }

    #[test]
    fn canonical_examples() {
        let i3 = identity(3);
        let relabeled = i3.relabel(&[vec![1, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(
            i3.canonical(CanonLevel::Symbol),
            relabeled.canonical(CanonLevel::Symbol)
        );
        let rowperm = i3.permute_rows(&[2, 0, 1]);
        assert_eq!(
            i3.canonical(CanonLevel::Full),
            rowperm.canonical(CanonLevel::Full)
        );
        // flipping the middle row turns this code into I3
        let flipped = code(2, &[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(
            i3.canonical(CanonLevel::Symbol),
            flipped.canonical(CanonLevel::Symbol)
        );
        let other = code(2, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        for level in [CanonLevel::Symbol, CanonLevel::Full] {
            assert_ne!(i3.canonical(level).code, other.canonical(level).code);
        }
    }

    #[test]
    fn permutation_code_examples() {
        assert!(identity(4).is_permutation_code());
        assert!(identity(2).is_permutation_code());
        let mut words = identity(3).codewords().to_vec();
        words.push(vec![1, 1, 1]);
        assert!(!Code::new(2, 3, words).unwrap().is_permutation_code());
        let heavy = Code::from_matrix(2, &[vec![1, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(!heavy.is_permutation_code());
        // a ternary relabeling of I3 is still a permutation code
        let t = identity(3).relabel(&[vec![2, 1, 0], vec![0, 2, 1], vec![1, 0, 2]]);
        let t = Code::new(3, 3, t.codewords().to_vec()).unwrap();
        assert!(t.is_permutation_code());
    }

    #[test]
    fn lexicographic_permutations() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[1], vec![0, 2, 1]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
