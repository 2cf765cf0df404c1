//! Disjunct matrices: the incidence-matrix view of cover-free families.

use crate::bitset::BitSet;
use crate::bounds::binomial::binom;
use crate::bounds::threshold_below;
use crate::error::{input, Error, Result};
use crate::family::{cover_free_witness, SetFamily};
use num_traits::ToPrimitive;
use serde::Serialize;

/// An `n x w` 0/1 matrix stored by columns. Columns may repeat; use
/// [`BinaryMatrix::to_family`] for the distinct-column view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    columns: Vec<BitSet>,
}

impl BinaryMatrix {
    pub fn new(n: usize, columns: Vec<BitSet>) -> Result<Self> {
        if n == 0 || columns.is_empty() {
            return input("matrix dimensions must be positive");
        }
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return input(format!("column of length {} in a matrix with {n} rows", c.len()));
        }
        Ok(Self { n, columns })
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let w = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != w) {
            return input("rows have different lengths");
        }
        if rows.iter().flatten().any(|&x| x > 1) {
            return input("matrix entries must be 0 or 1");
        }
        let columns = (0..w)
            .map(|c| BitSet::from_indices(n, (0..n).filter(|&r| rows[r][c] == 1)))
            .collect();
        Self::new(n, columns)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_family(&SetFamily::singletons(n))
    }

    pub fn from_family(f: &SetFamily) -> Self {
        Self {
            n: f.n(),
            columns: f.members().to_vec(),
        }
    }

    /// The column family; fails when columns repeat.
    pub fn to_family(&self) -> Result<SetFamily> {
        SetFamily::new(self.n, self.columns.clone())
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[BitSet] {
        &self.columns
    }

    pub fn column(&self, c: usize) -> &BitSet {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].contains(r)
    }

    pub fn row(&self, r: usize) -> Vec<u8> {
        self.columns.iter().map(|c| u8::from(c.contains(r))).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.columns.iter().filter(|c| c.contains(r)).count()
    }

    pub fn has_distinct_columns(&self) -> bool {
        self.to_family().is_ok()
    }

    pub fn is_permutation_matrix(&self) -> bool {
        self.n == self.cols()
            && self.columns.iter().all(|c| c.count() == 1)
            && (0..self.n).all(|r| self.row_weight(r) == 1)
    }

    fn check_col(&self, u: usize) -> Result<()> {
        if u >= self.cols() {
            return input(format!("column {u} out of range for {} columns", self.cols()));
        }
        Ok(())
    }
}

/// A column covered by the boolean sum of `cover`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjunctWitness {
    pub column: usize,
    pub cover: Vec<usize>,
}

/// `t`-disjunctness with the least witness `(column, cover)`.
pub fn disjunct_witness(m: &BinaryMatrix, t: usize) -> Result<Option<DisjunctWitness>> {
    if t == 0 {
        return input("t must be at least 1");
    }
    Ok(
        cover_free_witness(&m.columns, m.n, 1, t).map(|(a, cover)| DisjunctWitness {
            column: a[0],
            cover,
        }),
    )
}

/// No boolean sum of at most `t` columns contains a different column.
pub fn is_disjunct(m: &BinaryMatrix, t: usize) -> Result<bool> {
    Ok(disjunct_witness(m, t)?.is_none())
}

/// Columns with a private row, each with the least such row.
pub fn isolated_columns(m: &BinaryMatrix) -> Vec<(usize, usize)> {
    (0..m.cols())
        .filter_map(|c| {
            m.columns[c]
                .iter()
                .find(|&r| m.row_weight(r) == 1)
                .map(|r| (c, r))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelResult {
    pub matrix: BinaryMatrix,
    /// Every row met the peeled column, so the result has no rows.
    pub degenerate: bool,
}

/// Deletes column `u` and every row where `u` has a 1.
pub fn peel_column(m: &BinaryMatrix, u: usize) -> Result<PeelResult> {
    m.check_col(u)?;
    if m.cols() < 2 {
        return input("peeling needs at least two columns");
    }
    let keep: Vec<usize> = (0..m.n).filter(|&r| !m.columns[u].contains(r)).collect();
    let columns = (0..m.cols())
        .filter(|&c| c != u)
        .map(|c| {
            BitSet::from_indices(
                keep.len(),
                keep.iter().enumerate().filter(|&(_, &r)| m.columns[c].contains(r)).map(|(i, _)| i),
            )
        })
        .collect();
    Ok(PeelResult {
        matrix: BinaryMatrix {
            n: keep.len(),
            columns,
        },
        degenerate: keep.is_empty(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrivatePairStats {
    pub column: usize,
    /// Pairs of the support that lie in no other column.
    pub p_count: u64,
    /// Pairs of the support that some other column also contains.
    pub n_count: u64,
}

pub fn private_pair_stats(m: &BinaryMatrix, u: usize) -> Result<PrivatePairStats> {
    m.check_col(u)?;
    let support = m.columns[u].to_vec();
    let (mut p, mut q) = (0, 0);
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            let shared = (0..m.cols()).any(|c| c != u && m.columns[c].contains(a) && m.columns[c].contains(b));
            if shared {
                q += 1;
            } else {
                p += 1;
            }
        }
    }
    Ok(PrivatePairStats {
        column: u,
        p_count: p,
        n_count: q,
    })
}

/// `max{C(2s-1, 2), C(t+s, 2) - C(t+1, 2)}`, the cap on non-private pairs of
/// a weight `t+s` column.
pub fn matching_bound(t: u64, s: u64) -> u64 {
    let c2 = |x: u64| x * x.saturating_sub(1) / 2;
    c2((2 * s).saturating_sub(1)).max(c2(t + s) - c2(t + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MatchingStatus {
    Checked { n_count: u64, bound: u64, holds: bool },
    /// Weight outside `[t+1, 2t-1]`.
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingColumn {
    pub column: usize,
    pub weight: usize,
    pub status: MatchingStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    /// False when the matrix is not `t`-disjunct or has an isolated column;
    /// no columns are checked then.
    pub applicable: bool,
    pub columns: Vec<MatchingColumn>,
}

/// Checks the non-private pair cap on every column of weight `t+s` with
/// `1 <= s <= t-1`. A failed inequality is an internal error.
pub fn check_matching_bound(m: &BinaryMatrix, t: usize) -> Result<MatchingReport> {
    if !is_disjunct(m, t)? || !isolated_columns(m).is_empty() {
        return Ok(MatchingReport {
            applicable: false,
            columns: Vec::new(),
        });
    }
    let mut columns = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let weight = m.columns[c].count();
        let status = if weight > t && weight < 2 * t {
            let s = (weight - t) as u64;
            let n_count = private_pair_stats(m, c)?.n_count;
            let bound = matching_bound(t as u64, s);
            if n_count > bound {
                return Err(Error::Consistency(format!(
                    "column {c} of weight {weight} has {n_count} non-private pairs, above {bound}"
                )));
            }
            MatchingStatus::Checked {
                n_count,
                bound,
                holds: true,
            }
        } else {
            MatchingStatus::OutOfRange
        };
        columns.push(MatchingColumn {
            column: c,
            weight,
            status,
        });
    }
    Ok(MatchingReport {
        applicable: true,
        columns,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SquareClass {
    /// `perm[r]` is the column with a 1 in row `r`.
    Permutation { perm: Vec<usize> },
    Counterexample,
}

fn require_disjunct(m: &BinaryMatrix, t: usize) -> Result<()> {
    if !is_disjunct(m, t)? {
        return input(format!("matrix is not {t}-disjunct"));
    }
    Ok(())
}

fn below_threshold(n: usize, t: usize) -> bool {
    threshold_below(n as u64, t as u64)
}

/// Classifies a square `t`-disjunct matrix. Below the threshold anything
/// other than a permutation matrix is reported as an internal error.
pub fn classify_square(m: &BinaryMatrix, t: usize) -> Result<SquareClass> {
    let n = m.rows();
    if m.cols() != n || n < 2 {
        return input(format!("need a square matrix with n > 1, got {}x{}", n, m.cols()));
    }
    require_disjunct(m, t)?;
    if m.is_permutation_matrix() {
        let perm = (0..n)
            .map(|r| (0..n).find(|&c| m.get(r, c)).expect("row weight one"))
            .collect();
        return Ok(SquareClass::Permutation { perm });
    }
    if below_threshold(n, t) {
        return Err(Error::Consistency(format!(
            "{n}x{n} {t}-disjunct matrix below the threshold is not a permutation matrix"
        )));
    }
    Ok(SquareClass::Counterexample)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TallClass {
    /// Reading rows in `order` gives a permutation matrix on top (row `k`
    /// carries column `k`) followed by the free row.
    StackedPermutation { order: Vec<usize> },
    Counterexample,
}

/// Classifies an `n x (n-1)` `t`-disjunct matrix by trying each row as the
/// free one; the least free row is chosen.
pub fn classify_tall(m: &BinaryMatrix, t: usize) -> Result<TallClass> {
    let n = m.rows();
    if n < 3 || m.cols() + 1 != n {
        return input(format!("need an n x (n-1) matrix with n > 2, got {}x{}", n, m.cols()));
    }
    require_disjunct(m, t)?;
    let w = m.cols();
    let owner: Vec<Option<usize>> = (0..n)
        .map(|r| {
            let row = m.row(r);
            (row.iter().map(|&x| x as usize).sum::<usize>() == 1)
                .then(|| row.iter().position(|&x| x == 1).expect("weight one"))
        })
        .collect();
    for free in 0..n {
        let mut slot = vec![None; w];
        let ok = (0..n).filter(|&r| r != free).all(|r| match owner[r] {
            Some(c) if slot[c].is_none() => {
                slot[c] = Some(r);
                true
            }
            _ => false,
        });
        if ok {
            let mut order: Vec<usize> = slot.into_iter().map(|r| r.expect("filled")).collect();
            order.push(free);
            return Ok(TallClass::StackedPermutation { order });
        }
    }
    if below_threshold(n, t) {
        return Err(Error::Consistency(format!(
            "{n}x{w} {t}-disjunct matrix below the threshold has no stacked permutation form"
        )));
    }
    Ok(TallClass::Counterexample)
}

/// `C(weight, 2)`.
pub fn pairs(weight: usize) -> u64 {
    binom(weight as i64, 2).to_u64().expect("fits")
}
