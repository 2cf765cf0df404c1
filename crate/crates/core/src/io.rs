//! Text and JSON formats for codes, families and matrices.
//!
//! Code text: a `q n m` header, then `m` lines of `n` symbols.
//! Family text: an `n` header, then one line per member listing its
//! elements 1-based; an empty line is the empty set.
//! Matrix text: an `n w` header, then `n` lines of `w` characters from `01`.

use crate::bitset::BitSet;
use crate::code::{Code, Symbol};
use crate::disjunct::BinaryMatrix;
use crate::error::{Error, Result};
use crate::family::SetFamily;

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Lines of `s` with their 1-based numbers. A single trailing newline does
/// not start a new line.
fn lines(s: &str) -> Vec<(usize, &str)> {
    let body = s.strip_suffix('\n').unwrap_or(s);
    body.split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .collect()
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str)) -> Result<T> {
    tok.parse()
        .or_else(|_| perr(line, col, format!("expected a nonnegative integer, found {tok:?}")))
}

fn header<const K: usize>(ls: &[(usize, &str)], what: &str) -> Result<[usize; K]> {
    let Some(&(ln, text)) = ls.first() else {
        return perr(1, 1, format!("missing {what} header"));
    };
    let toks = tokens(text);
    if toks.len() != K {
        return perr(ln, 1, format!("header must be {what}"));
    }
    let mut out = [0; K];
    for (k, t) in toks.into_iter().enumerate() {
        out[k] = number(ln, t)?;
    }
    Ok(out)
}

fn locate(e: Error, line: usize) -> Error {
    match e {
        Error::Input(m) | Error::Domain(m) => Error::Parse {
            line,
            column: 1,
            message: m,
        },
        other => other,
    }
}

/// Reads a code in either format; JSON is recognised by a leading `{`.
pub fn parse_code(s: &str) -> Result<Code> {
    if s.trim_start().starts_with('{') {
        parse_code_json(s)
    } else {
        parse_code_text(s)
    }
}

pub fn parse_code_json(s: &str) -> Result<Code> {
    serde_json::from_str(s).map_err(|e| {
        // validation failures carry no position; point at the codeword list
        let (line, column) = if e.line() == 0 {
            position_of(s, "\"codewords\"")
        } else {
            (e.line(), e.column())
        };
        Error::Parse {
            line,
            column,
            message: e.to_string(),
        }
    })
}

fn position_of(s: &str, needle: &str) -> (usize, usize) {
    let at = s.find(needle).unwrap_or(0);
    let before = &s[..at];
    let line = before.matches('\n').count() + 1;
    let column = at - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_code_text(s: &str) -> Result<Code> {
    let ls = lines(s);
    let [q, n, m] = header::<3>(&ls, "q n m")?;
    let rows: Vec<_> = ls[1..].iter().filter(|(_, l)| !l.trim().is_empty()).collect();
    if rows.len() != m {
        let at = ls.last().map_or(1, |l| l.0);
        return perr(at, 1, format!("expected {m} codewords, found {}", rows.len()));
    }
    let mut words = Vec::with_capacity(m);
    for &&(ln, text) in &rows {
        let toks = tokens(text);
        if toks.len() != n {
            return perr(ln, 1, format!("expected {n} symbols, found {}", toks.len()));
        }
        let mut w: Vec<Symbol> = Vec::with_capacity(n);
        for t in toks {
            let x: Symbol = number(ln, t)?;
            if x as usize >= q {
                return perr(ln, t.0, format!("symbol {x} outside 0..{q}"));
            }
            w.push(x);
        }
        words.push(w);
    }
    let last = rows.last().map_or(1, |r| r.0);
    Code::new(q, n, words).map_err(|e| locate(e, last))
}

pub fn code_to_json(code: &Code) -> String {
    serde_json::to_string(code).expect("codes serialize")
}

pub fn code_to_text(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.n(), code.m());
    for w in code.codewords() {
        let syms: Vec<String> = w.iter().map(Symbol::to_string).collect();
        out.push_str(&syms.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_family_text(s: &str) -> Result<SetFamily> {
    let ls = lines(s);
    let [n] = header::<1>(&ls, "n")?;
    let mut members = Vec::with_capacity(ls.len().saturating_sub(1));
    for &(ln, text) in &ls[1..] {
        let mut set = BitSet::new(n);
        for t in tokens(text) {
            let x: usize = number(ln, t)?;
            if x == 0 || x > n {
                return perr(ln, t.0, format!("element {x} outside 1..={n}"));
            }
            if set.contains(x - 1) {
                return perr(ln, t.0, format!("element {x} repeated"));
            }
            set.insert(x - 1);
        }
        members.push(set);
    }
    let last = ls.last().map_or(1, |l| l.0);
    SetFamily::new(n, members).map_err(|e| locate(e, last))
}

pub fn family_to_text(f: &SetFamily) -> String {
    let mut out = format!("{}\n", f.n());
    for m in f.members() {
        let el: Vec<String> = m.iter().map(|x| (x + 1).to_string()).collect();
        out.push_str(&el.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix_text(s: &str) -> Result<BinaryMatrix> {
    let ls = lines(s);
    let [n, w] = header::<2>(&ls, "n w")?;
    let rows: Vec<_> = ls[1..].iter().filter(|(_, l)| !l.trim().is_empty()).collect();
    if rows.len() != n {
        let at = ls.last().map_or(1, |l| l.0);
        return perr(at, 1, format!("expected {n} rows, found {}", rows.len()));
    }
    let mut out = Vec::with_capacity(n);
    for &&(ln, text) in &rows {
        let text = text.trim_end();
        let mut row = Vec::with_capacity(w);
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                _ => return perr(ln, i + 1, format!("unexpected character {ch:?}")),
            }
        }
        if row.len() != w {
            return perr(ln, 1, format!("expected {w} entries, found {}", row.len()));
        }
        out.push(row);
    }
    BinaryMatrix::from_rows(&out).map_err(|e| locate(e, 1))
}

pub fn matrix_to_text(m: &BinaryMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        out.extend(m.row(r).into_iter().map(|x| if x == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    out
}
