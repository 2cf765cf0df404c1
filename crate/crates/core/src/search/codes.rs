use super::engine::{greedy, run, Goal, Outcome, Space};
use super::group::{code_group, index_word, CodeSymmetry, MAX_UNIVERSE};
use super::{SearchOptions, SearchResult};
use crate::bounds::catalogue::{best_bound, code_bounds, floor_u64};
use crate::code::{permutations, CanonLevel, Code, Mode};
use crate::error::{input, Error, Result};
use crate::frameproof::{is_frameproof_narrow, is_wide_sense_frameproof, Strategy};
use std::collections::BTreeSet;

/// All words of `[q]^n`; agreement masks are tabulated for pair checks.
struct CodeSpace {
    size: usize,
    t: usize,
    mode: Mode,
    full: u32,
    agree: Vec<u32>,
}

impl CodeSpace {
    fn new(n: usize, q: usize, t: usize, mode: Mode) -> Self {
        let size = q.pow(n as u32);
        let words: Vec<Vec<u32>> = (0..size as u32).map(|i| index_word(i, n, q)).collect();
        let mut agree = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                agree[a * size + b] = (0..n).filter(|&l| words[a][l] == words[b][l]).fold(0, |m, l| m | 1 << l);
            }
        }
        Self {
            size,
            t,
            mode,
            full: (1u32 << n) - 1,
            agree,
        }
    }

    fn ag(&self, a: u32, b: u32) -> u32 {
        self.agree[a as usize * self.size + b as usize]
    }
}

/// Whether at most `depth` of `sets` cover every bit of `need`.
fn covers(need: u32, sets: &[u32], depth: usize) -> bool {
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

impl Space for CodeSpace {
    fn size(&self) -> usize {
        self.size
    }

    fn pair_ok(&self, chosen: &[u32], y: u32, x: u32) -> bool {
        let t = self.t;
        let xy = self.ag(x, y);
        match self.mode {
            // (target, coalition) frames when the coalition's agreement
            // positions all lie in I(target, coalition member)
            Mode::Wide => {
                let from_y: Vec<u32> = chosen.iter().map(|&z| !self.ag(y, z) & self.full).collect();
                let from_x: Vec<u32> = chosen.iter().map(|&z| !self.ag(x, z) & self.full).collect();
                let need = !xy & self.full;
                if covers(need, &from_y, t - 1) || covers(need, &from_x, t - 1) {
                    return false;
                }
                chosen.iter().enumerate().all(|(k, &a)| {
                    let need = xy & !self.ag(a, x);
                    if need == 0 {
                        return false;
                    }
                    if t < 3 {
                        return true;
                    }
                    let rest: Vec<u32> = from_x.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &s)| s).collect();
                    !covers(need, &rest, t - 2)
                })
            }
            // (target, coalition) frames when the target agrees with some
            // coalition member at every position
            Mode::Narrow => {
                let need = !xy & self.full;
                let at_x: Vec<u32> = chosen.iter().map(|&z| self.ag(x, z)).collect();
                let at_y: Vec<u32> = chosen.iter().map(|&z| self.ag(y, z)).collect();
                if covers(need, &at_x, t - 1) || covers(need, &at_y, t - 1) {
                    return false;
                }
                if t < 2 {
                    return true;
                }
                chosen.iter().enumerate().all(|(k, &a)| {
                    let need = !(self.ag(a, x) | self.ag(a, y)) & self.full;
                    let rest: Vec<u32> = chosen
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &z)| self.ag(a, z))
                        .collect();
                    !covers(need, &rest, t - 2)
                })
            }
        }
    }
}

fn check_params(n: usize, t: usize, q: usize, mode: Mode) -> Result<()> {
    if n == 0 || n > 16 || q < 2 {
        return input("code search needs 1 <= n <= 16 and q >= 2");
    }
    if mode == Mode::Wide && t < 2 || t < 1 {
        return input("code search needs t >= 1 (narrow) or t >= 2 (wide)");
    }
    if q.checked_pow(n as u32).is_none_or(|u| u > MAX_UNIVERSE) {
        return input(format!("universe q^n = {q}^{n} is too large for exhaustive search"));
    }
    Ok(())
}

fn to_code(set: &[u32], n: usize, q: usize) -> Code {
    Code::new(q, n, set.iter().map(|&i| index_word(i, n, q)).collect()).expect("distinct words")
}

fn verify(code: &Code, t: usize, mode: Mode) -> Result<()> {
    let ok = match mode {
        Mode::Wide => is_wide_sense_frameproof(code, t, Strategy::Crosscheck)?.holds,
        Mode::Narrow => is_frameproof_narrow(code, t)?.holds,
    };
    if !ok {
        return Err(Error::Consistency(format!(
            "search produced a code that fails verification: {:?}",
            code.codewords()
        )));
    }
    Ok(())
}

/// Symbol-level classes of a set found under `sym`: expands by position
/// permutations when those were factored out.
fn symbol_classes(set: &[u32], n: usize, q: usize, sym: CodeSymmetry, out: &mut BTreeSet<Vec<Vec<u32>>>) {
    let code = to_code(set, n, q);
    let perms = if sym.includes_positions() {
        permutations(n)
    } else {
        vec![(0..n).collect()]
    };
    for p in perms {
        let c = code.permute_rows(&p).canonical(CanonLevel::Symbol).code;
        out.insert(c.codewords().to_vec());
    }
}

fn search(
    n: usize,
    t: usize,
    q: usize,
    mode: Mode,
    goal: Goal,
    opts: &SearchOptions,
) -> Result<(Outcome, CodeSymmetry)> {
    check_params(n, t, q, mode)?;
    let space = CodeSpace::new(n, q, t, mode);
    let (group, sym) = code_group(n, q);
    let start = match goal {
        Goal::Exactly(_) => Vec::new(),
        _ => greedy(&space),
    };
    let ceiling = if opts.use_bounds && goal == Goal::Maximum {
        floor_u64(&best_bound(n as u64, t as u64, q as u64, mode)?.floor) as usize
    } else {
        usize::MAX
    };
    Ok((run(&space, &group, goal, start, opts.budget, ceiling), sym))
}

/// Asserts a certified maximum against every applicable exact bound.
fn check_bounds(n: usize, t: usize, q: usize, mode: Mode, max: usize) -> Result<()> {
    for b in code_bounds(n as u64, t as u64, q as u64, mode) {
        if b.exact && num_bigint::BigInt::from(max) > b.floor {
            return Err(Error::Consistency(format!(
                "certified maximum {max} exceeds {} = {} at {}",
                b.name,
                b.floor,
                b.params_string()
            )));
        }
    }
    Ok(())
}

fn finish(
    out: Outcome,
    sym: CodeSymmetry,
    n: usize,
    t: usize,
    q: usize,
    mode: Mode,
    with_optima: bool,
) -> Result<SearchResult<Code>> {
    let incumbent = (!out.example.is_empty()).then(|| to_code(&out.example, n, q));
    if let Some(c) = &incumbent {
        verify(c, t, mode)?;
    }
    let optima = if with_optima {
        let mut classes = BTreeSet::new();
        for set in &out.found {
            symbol_classes(set, n, q, sym, &mut classes);
        }
        let codes: Vec<Code> = classes
            .into_iter()
            .map(|w| Code::new(q, n, w).expect("canonical codes stay valid"))
            .collect();
        for c in &codes {
            verify(c, t, mode)?;
        }
        Some(codes)
    } else {
        None
    };
    Ok(SearchResult {
        max_size: out.best,
        optima,
        nodes: out.nodes,
        certified: out.complete,
        incumbent,
    })
}

/// Maximum size of a `t`-frameproof code in `[q]^n`.
pub fn max_code(n: usize, t: usize, q: usize, mode: Mode, opts: &SearchOptions) -> Result<SearchResult<Code>> {
    let (out, sym) = search(n, t, q, mode, Goal::Maximum, opts)?;
    let res = finish(out, sym, n, t, q, mode, false)?;
    if res.certified {
        check_bounds(n, t, q, mode, res.max_size)?;
    }
    Ok(res)
}

/// Maximum size together with every optimal code, one per symbol-level
/// equivalence class, in symbol canonical form.
pub fn enumerate_optimal(
    n: usize,
    t: usize,
    q: usize,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<SearchResult<Code>> {
    let (out, sym) = search(n, t, q, mode, Goal::AllMaxima, opts)?;
    let res = finish(out, sym, n, t, q, mode, true)?;
    if res.certified {
        check_bounds(n, t, q, mode, res.max_size)?;
    }
    Ok(res)
}

/// Every `t`-frameproof code of exactly `size` codewords, one per
/// symbol-level class. `max_size` is `size` when one exists and 0 otherwise.
pub fn codes_of_size(
    n: usize,
    t: usize,
    q: usize,
    mode: Mode,
    size: usize,
    opts: &SearchOptions,
) -> Result<SearchResult<Code>> {
    let (out, sym) = search(n, t, q, mode, Goal::Exactly(size), opts)?;
    let mut res = finish(out, sym, n, t, q, mode, true)?;
    let any = res.optima.as_ref().is_some_and(|v| !v.is_empty());
    res.max_size = if any { size } else { 0 };
    res.incumbent = res.optima.as_ref().and_then(|v| v.first().cloned());
    Ok(res)
}
