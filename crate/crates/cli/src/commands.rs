//! One function per subcommand. Indices in reports are 1-based.

use crate::report::{Report, Status};
use crate::{
    load, BoundsArgs, CliError, CliResult, Command, FamilyArgs, FamilyCheck, MatrixArgs, MatrixCheck, ReportArgs,
    RunConfig, SearchArgs, SearchObject, StrategyArg, ThresholdArgs, VerifyArgs,
};
use frameproof::bounds::catalogue::{applicable_bounds, best_bound, code_bounds, evaluate_bound, BoundName, BoundParams};
use frameproof::disjunct::{
    check_matching_bound, classify_square, classify_tall, disjunct_witness, isolated_columns, peel_column,
    private_pair_stats, MatchingStatus, SquareClass, TallClass,
};
use frameproof::family::SetFamily;
use frameproof::frameproof::{
    check_witness, is_frameproof_narrow, is_shf, is_wide_sense_frameproof, is_wide_sense_shf, wshf_coincidence_check,
    Strategy, Verdict, Witness,
};
use frameproof::io::{matrix_to_text, parse_code, parse_family_text, parse_matrix_text};
use frameproof::search::{
    codes_of_size, cover_free_families_of_size, enumerate_optimal, max_code, max_cover_free, n_threshold,
    SearchOptions, SearchResult, ThresholdKind, ThresholdOutcome,
};
use frameproof::{Code, Error, Mode, Symbol};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;
use std::path::Path;

pub(crate) fn run(cfg: &RunConfig) -> CliResult<Report> {
    match &cfg.command {
        Command::Verify(a) => verify(a, config(cfg, a)),
        Command::Family(a) => family(a, config(cfg, a)),
        Command::Matrix(a) => matrix(a, config(cfg, a)),
        Command::Bounds(a) => bounds(a, config(cfg, a)),
        Command::Search(a) => search(a, config(cfg, a)),
        Command::Threshold(a) => threshold(a, config(cfg, a)),
        Command::Report(a) => report(a, cfg.seed, config(cfg, a)),
    }
}

/// The subcommand's arguments followed by the global options.
fn config<A: Serialize>(cfg: &RunConfig, args: &A) -> Map<String, Value> {
    let mut m = match serde_json::to_value(args).expect("arguments serialize") {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    m.insert("format".into(), json!(cfg.format));
    m.insert("seed".into(), json!(cfg.seed));
    m
}

fn mode(wide: bool) -> Mode {
    if wide {
        Mode::Wide
    } else {
        Mode::Narrow
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Wide => "wide",
        Mode::Narrow => "narrow",
    }
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn zero_based(xs: &[usize]) -> CliResult<Vec<usize>> {
    xs.iter()
        .map(|&x| x.checked_sub(1))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Usage("witness indices are 1-based".into()))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Coalition { target, coalition } => json!({
            "kind": "coalition",
            "target": target + 1,
            "coalition": one_based(coalition),
        }),
        Witness::Separation { c1, c2 } => json!({
            "kind": "separation",
            "c1": one_based(c1),
            "c2": one_based(c2),
        }),
    }
}

fn code_summary(c: &Code) -> Value {
    json!({"q": c.q(), "n": c.n(), "m": c.m()})
}

fn code_json(c: &Code) -> Value {
    serde_json::to_value(c).expect("codes serialize")
}

fn set_verdict(r: &mut Report, v: &Verdict) {
    r.set("holds", json!(v.holds));
    r.set("vacuous_range", json!(v.vacuous_range));
    r.set("witness", v.witness.as_ref().map_or(Value::Null, witness_json));
    r.status = Status::from_holds(v.holds);
}

/// A witness file is either a whole verify report or a bare witness object.
fn read_witness(path: &Path) -> CliResult<Option<Witness>> {
    let value: Value = load(path, |s| {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })?;
    let w = match value.get("witness") {
        Some(inner) => inner.clone(),
        None => value,
    };
    if w.is_null() {
        return Ok(None);
    }
    let w: Witness = serde_json::from_value(w).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(Some(match w {
        Witness::Coalition { target, coalition } => Witness::Coalition {
            target: zero_based(&[target])?[0],
            coalition: zero_based(&coalition)?,
        },
        Witness::Separation { c1, c2 } => Witness::Separation {
            c1: zero_based(&c1)?,
            c2: zero_based(&c2)?,
        },
    }))
}

fn verify(a: &VerifyArgs, config: Map<String, Value>) -> CliResult<Report> {
    let code = load(&a.code, parse_code)?;
    let m = mode(a.wide);
    let shf = match a.shf.as_deref() {
        Some(&[w1, w2]) => Some((w1, w2)),
        Some(_) => return Err(CliError::Usage("--shf takes two values".into())),
        None => None,
    };
    let mut r = Report::new("verify", config);
    r.set("code", code_summary(&code));
    r.set("property", json!(if shf.is_some() { "shf" } else { "frameproof" }));
    r.set("mode", json!(mode_name(m)));

    if let Some(path) = &a.witness {
        if let Some(w) = read_witness(path)? {
            let fits = match (&w, shf) {
                (Witness::Coalition { coalition, .. }, None) => coalition.len() <= a.t,
                (Witness::Separation { c1, c2 }, Some((w1, w2))) => c1.len() <= w1 && c2.len() <= w2,
                _ => false,
            };
            if !fits || !check_witness(&code, &w, m)? {
                return Err(CliError::Usage(format!(
                    "{}: witness does not exhibit a violation of this property",
                    path.display()
                )));
            }
            r.set("holds", json!(false));
            r.set("witness", witness_json(&w));
            r.set("witness_confirmed", json!(true));
            r.status = Status::Fails;
            return Ok(r);
        }
    }

    let strategy = match a.strategy {
        StrategyArg::Definitional => Strategy::Definitional,
        StrategyArg::CoverFree => Strategy::CoverFree,
        StrategyArg::Crosscheck => Strategy::Crosscheck,
    };
    let v = match (shf, m) {
        (None, Mode::Narrow) => is_frameproof_narrow(&code, a.t)?,
        (None, Mode::Wide) => is_wide_sense_frameproof(&code, a.t, strategy)?,
        (Some((w1, w2)), Mode::Narrow) => is_shf(&code, w1, w2)?,
        (Some((w1, w2)), Mode::Wide) => match strategy {
            Strategy::Definitional => is_wide_sense_shf(&code, w1, w2)?,
            Strategy::CoverFree => wshf_coincidence_check(&code, w1, w2, false)?,
            Strategy::Crosscheck => wshf_coincidence_check(&code, w1, w2, true)?,
        },
    };
    set_verdict(&mut r, &v);
    Ok(r)
}

/// JSON family form: `{"n": 4, "members": [[1, 2], [3]]}` with 1-based
/// elements.
#[derive(Deserialize)]
struct FamilyFile {
    n: usize,
    members: Vec<Vec<usize>>,
}

fn parse_family(s: &str) -> frameproof::Result<SetFamily> {
    if !s.trim_start().starts_with('{') {
        return parse_family_text(s);
    }
    let f: FamilyFile = serde_json::from_str(s).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut lists = Vec::with_capacity(f.members.len());
    for (k, m) in f.members.iter().enumerate() {
        if m.iter().any(|&x| x == 0 || x > f.n) {
            return Err(Error::Input(format!("member {} has an element outside 1..={}", k + 1, f.n)));
        }
        lists.push(m.iter().map(|x| x - 1).collect::<Vec<_>>());
    }
    SetFamily::from_lists(f.n, lists)
}

fn family_json(f: &SetFamily) -> Value {
    let members: Vec<Vec<usize>> = f.members().iter().map(|m| m.iter().map(|x| x + 1).collect()).collect();
    json!({"n": f.n(), "members": members})
}

fn family(a: &FamilyArgs, config: Map<String, Value>) -> CliResult<Report> {
    let f = load(&a.family, parse_family)?;
    let mut r = Report::new("family", config);
    r.set("family", json!({"n": f.n(), "size": f.len()}));
    let ms = f.members();
    match a.check {
        FamilyCheck::Sperner => {
            let pair = (0..ms.len())
                .flat_map(|i| (0..ms.len()).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && ms[i].is_subset(&ms[j]));
            r.set("holds", json!(pair.is_none()));
            r.set("witness", pair.map_or(Value::Null, |(i, j)| json!({"contained": i + 1, "container": j + 1})));
            r.status = Status::from_holds(pair.is_none());
        }
        FamilyCheck::Lym => {
            let s = f.lym_sum();
            r.set("lym_sum", json!(format!("{}/{}", s.numer(), s.denom())));
            r.set("sperner", json!(f.is_sperner()));
        }
        FamilyCheck::CoverFree => {
            let (r1, r2) = match (a.r1, a.r2) {
                (Some(r1), Some(r2)) => (r1, r2),
                _ => (1, a.t),
            };
            let v = f.is_cover_free_general(r1, r2)?;
            r.set("holds", json!(v.holds));
            r.set("vacuous_range", json!(v.vacuous_range));
            r.set(
                "witness",
                v.witness.as_ref().map_or(Value::Null, |(x, y)| {
                    json!({"intersected": one_based(x), "covering": one_based(y)})
                }),
            );
            r.status = Status::from_holds(v.holds);
        }
        FamilyCheck::Intersecting => {
            let k = usize::try_from(a.r).map_err(|_| CliError::Usage("--r must be positive".into()))?;
            let holds = f.is_r_wise_intersecting(k);
            r.set("holds", json!(holds));
            r.status = Status::from_holds(holds);
        }
        FamilyCheck::NonCovering => {
            let holds = f.is_non_t_covering(a.t);
            r.set("holds", json!(holds));
            r.status = Status::from_holds(holds);
        }
        FamilyCheck::CloseSperner => {
            if a.close.is_empty() {
                return Err(CliError::Usage("--close needs at least one value".into()));
            }
            let l: BTreeSet<usize> = a.close.iter().copied().collect();
            let holds = f.is_l_close_sperner(&l);
            r.set("holds", json!(holds));
            r.status = Status::from_holds(holds);
        }
        FamilyCheck::Shadow => {
            r.set("shadow", family_json(&f.shadow(a.r)?));
        }
        FamilyCheck::Complement => {
            r.set("complement", family_json(&f.complement_family()));
        }
    }
    Ok(r)
}

fn matrix(a: &MatrixArgs, config: Map<String, Value>) -> CliResult<Report> {
    let m = load(&a.matrix, parse_matrix_text)?;
    let mut r = Report::new("matrix", config);
    r.set("matrix", json!({"rows": m.rows(), "cols": m.cols()}));
    match a.check {
        MatrixCheck::Disjunct => {
            let w = disjunct_witness(&m, a.t)?;
            r.set("holds", json!(w.is_none()));
            r.set(
                "witness",
                w.as_ref()
                    .map_or(Value::Null, |w| json!({"column": w.column + 1, "cover": one_based(&w.cover)})),
            );
            r.status = Status::from_holds(w.is_none());
        }
        MatrixCheck::Isolated => {
            let iso: Vec<Value> =
                isolated_columns(&m).iter().map(|&(c, row)| json!({"column": c + 1, "row": row + 1})).collect();
            r.set("isolated", Value::Array(iso));
        }
        MatrixCheck::Peel => {
            let u = a
                .column
                .checked_sub(1)
                .ok_or_else(|| CliError::Usage("--column is 1-based".into()))?;
            let p = peel_column(&m, u)?;
            r.set("degenerate", json!(p.degenerate));
            r.set("result", json!(matrix_to_text(&p.matrix)));
        }
        MatrixCheck::PrivatePairs => {
            let mut rows = Vec::with_capacity(m.cols());
            for c in 0..m.cols() {
                let s = private_pair_stats(&m, c)?;
                rows.push(json!({"column": c + 1, "private": s.p_count, "non_private": s.n_count}));
            }
            r.set("columns", Value::Array(rows));
        }
        MatrixCheck::Matching => {
            let rep = check_matching_bound(&m, a.t)?;
            let cols: Vec<Value> = rep
                .columns
                .iter()
                .map(|c| {
                    let status = match c.status {
                        MatchingStatus::Checked { n_count, bound, holds } => {
                            json!({"status": "checked", "non_private": n_count, "bound": bound, "holds": holds})
                        }
                        MatchingStatus::OutOfRange => json!({"status": "out_of_range"}),
                    };
                    json!({"column": c.column + 1, "weight": c.weight, "status": status})
                })
                .collect();
            r.set("applicable", json!(rep.applicable));
            r.set("columns", Value::Array(cols));
        }
        MatrixCheck::ClassifySquare => {
            let class = classify_square(&m, a.t)?;
            match class {
                SquareClass::Permutation { perm } => {
                    r.set("class", json!({"kind": "permutation", "perm": one_based(&perm)}));
                }
                SquareClass::Counterexample => {
                    r.set("class", json!({"kind": "counterexample"}));
                    r.status = Status::Fails;
                }
            }
        }
        MatrixCheck::ClassifyTall => {
            let class = classify_tall(&m, a.t)?;
            match class {
                TallClass::StackedPermutation { order } => {
                    r.set("class", json!({"kind": "stacked_permutation", "order": one_based(&order)}));
                }
                TallClass::Counterexample => {
                    r.set("class", json!({"kind": "counterexample"}));
                    r.status = Status::Fails;
                }
            }
        }
    }
    Ok(r)
}

fn bounds(a: &BoundsArgs, config: Map<String, Value>) -> CliResult<Report> {
    let eps = match &a.eps {
        Some(s) => Some(
            s.parse::<BigRational>()
                .map_err(|_| CliError::Usage(format!("--eps expects a rational such as 1/3, got {s:?}")))?,
        ),
        None => None,
    };
    let params = BoundParams {
        n: a.n,
        t: a.t,
        q: a.q,
        s: a.s,
        eps,
    };
    let mut r = Report::new("bounds", config);
    let rows = if a.best {
        let (n, t, q) = (a.n.unwrap_or(0), a.t.unwrap_or(0), a.q.unwrap_or(0));
        vec![best_bound(n, t, q, mode(a.wide))?]
    } else if let Some(name) = &a.name {
        let name: BoundName = name.parse()?;
        vec![evaluate_bound(name, &params, a.precision)?]
    } else {
        applicable_bounds(&params, a.precision)
    };
    r.set_bounds("bounds", rows);
    Ok(r)
}

fn manifest<T>(r: &mut Report, res: &SearchResult<T>, show: impl Fn(&T) -> Value) {
    r.set("certified", json!(res.certified));
    r.set("max", json!(res.max_size));
    r.set("nodes", json!(res.nodes));
    r.set("optima_count", res.optima.as_ref().map_or(Value::Null, |v| json!(v.len())));
    r.set("incumbent", res.incumbent.as_ref().map_or(Value::Null, &show));
    r.set(
        "optima",
        res.optima.as_ref().map_or(Value::Null, |v| Value::Array(v.iter().map(&show).collect())),
    );
    r.status = if res.certified {
        Status::Success
    } else {
        Status::Uncertified
    };
}

fn search(a: &SearchArgs, config: Map<String, Value>) -> CliResult<Report> {
    let opts = SearchOptions {
        budget: a.budget,
        use_bounds: a.use_bounds,
    };
    let mut r = Report::new("search", config);
    match a.object {
        SearchObject::Code => {
            let m = mode(a.wide);
            let res = match (a.size, a.optima) {
                (Some(k), _) => codes_of_size(a.n, a.t, a.q, m, k, &opts)?,
                (None, true) => enumerate_optimal(a.n, a.t, a.q, m, &opts)?,
                (None, false) => max_code(a.n, a.t, a.q, m, &opts)?,
            };
            manifest(&mut r, &res, code_json);
        }
        SearchObject::CoverFree => {
            let res = match a.size {
                Some(k) => cover_free_families_of_size(a.n, a.t, k, &opts)?,
                None => max_cover_free(a.n, a.t, a.optima, &opts)?,
            };
            manifest(&mut r, &res, family_json);
        }
    }
    Ok(r)
}

fn threshold(a: &ThresholdArgs, config: Map<String, Value>) -> CliResult<Report> {
    let kind: ThresholdKind = a.kind.parse()?;
    let opts = SearchOptions {
        budget: a.budget,
        use_bounds: false,
    };
    let out = n_threshold(kind, a.t, a.q, a.cap, &opts)?;
    let mut r = Report::new("threshold", config);
    match out {
        ThresholdOutcome::Found { n } => r.set("result", json!({"status": "found", "n": n})),
        ThresholdOutcome::NotFound { cap } => r.set("result", json!({"status": "not_found", "cap": cap})),
    };
    Ok(r)
}

/// A code of `2..=min(q^n, 8)` distinct random words.
fn random_code(rng: &mut ChaCha8Rng, n: usize, q: usize) -> Option<Code> {
    let space = (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if space < 2 {
        return None;
    }
    let m = rng.gen_range(2..=space.min(8) as usize);
    let mut words: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    while words.len() < m {
        words.insert((0..n).map(|_| rng.gen_range(0..q as Symbol)).collect());
    }
    Code::new(q, n, words.into_iter().collect()).ok()
}

fn report(a: &ReportArgs, seed: u64, config: Map<String, Value>) -> CliResult<Report> {
    let m = mode(a.wide);
    let opts = SearchOptions {
        budget: a.budget,
        use_bounds: false,
    };
    let mut r = Report::new("report", config);
    let table = code_bounds(a.n as u64, a.t as u64, a.q as u64, m);
    let best = best_bound(a.n as u64, a.t as u64, a.q as u64, m)?;
    r.set("best", json!({"name": best.name.as_str(), "floor": best.floor.to_string()}));
    let res = max_code(a.n, a.t, a.q, m, &opts)?;
    r.set("search", json!({"certified": res.certified, "max": res.max_size, "nodes": res.nodes}));
    let consistent = table
        .iter()
        .filter(|b| b.exact)
        .all(|b| num_bigint::BigInt::from(res.max_size) <= b.floor);
    r.set("consistent", json!(consistent));

    let mut disagreements = Vec::new();
    if a.self_check > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..a.self_check {
            let Some(code) = random_code(&mut rng, a.n, a.q) else {
                break;
            };
            let agree = match m {
                Mode::Wide if a.t >= 2 => {
                    let x = is_wide_sense_frameproof(&code, a.t, Strategy::Definitional)?;
                    let y = is_wide_sense_frameproof(&code, a.t, Strategy::CoverFree)?;
                    x.holds == y.holds && x.witness == y.witness
                }
                _ => is_frameproof_narrow(&code, a.t)?.holds == is_shf(&code, 1, a.t.max(1))?.holds,
            };
            if !agree {
                disagreements.push(code_json(&code));
            }
        }
        r.set(
            "self_check",
            json!({"seed": seed, "samples": a.self_check, "disagreements": disagreements}),
        );
    }
    r.set_bounds("bounds", table);

    r.status = if !consistent || !disagreements.is_empty() {
        Status::Fails
    } else if !res.certified {
        Status::Uncertified
    } else {
        Status::Success
    };
    Ok(r)
}
