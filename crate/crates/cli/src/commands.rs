use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use termlab_core::interp::{enumerate_segments, run, Choice, StateBox, Strategy, Trace};
use termlab_core::ramsey::{
    build_extremal, find_homogeneous, longest_mip, monotone_subsequence, trt_size,
};
use termlab_core::ranking::verify_ranking;
use termlab_core::sct::{audit_matrix, closure, decide, AuditOutcome, Criterion, Witness};
use termlab_core::transinv::{check_dwf, check_transition_invariant};
use termlab_core::tropical::{ClampBound, Entry, TropicalMatrix};
use termlab_core::{
    EdgeColoring, InvariantCandidate, MeasureBasis, Program, RankingSpec, StateVector, Verdict,
};

use crate::report::{CheckedDomain, Method, Report, ReportVerdict};
use crate::{
    AnalysisMethod, AnalyzeArgs, AuditArgs, BoxArgs, MatrixOp, OutputArgs, RamseyOp,
    SegmentsArgs, SimulateArgs,
};

#[derive(Debug)]
pub struct Fail(String);

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn fail(msg: impl Into<String>) -> Fail {
    Fail(msg.into())
}

type Result<T> = std::result::Result<T, Fail>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program> {
    Program::parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<TropicalMatrix> {
    TropicalMatrix::parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_coloring(path: &Path) -> Result<EdgeColoring> {
    EdgeColoring::parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn clamp_bound(k: i64) -> Result<ClampBound> {
    ClampBound::new(k).ok_or_else(|| fail(format!("clamp bound must be at least 1, got {k}")))
}

fn parse_box(args: &BoxArgs, dim: usize) -> Result<StateBox> {
    let text = args.bx.trim();
    let (lo, hi) = text
        .split_once("..")
        .or_else(|| text.split_once(','))
        .ok_or_else(|| fail(format!("box `{text}` is not of the form LO..HI")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| fail(format!("box bound `{s}` is not an integer")))
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo > hi {
        return Err(fail(format!("empty box {lo}..{hi}")));
    }
    if args.input_cap < 0 {
        return Err(fail("input cap must be nonnegative"));
    }
    Ok(StateBox::cube(dim, lo, hi))
}

fn matrix_json(m: &TropicalMatrix) -> Value {
    let rows: Vec<Vec<Value>> = m
        .rows()
        .map(|r| {
            r.iter()
                .map(|e| match e {
                    Entry::Finite(v) => json!(v),
                    Entry::Infinite => json!("inf"),
                })
                .collect()
        })
        .collect();
    json!(rows)
}

fn word(w: &[u32]) -> String {
    let parts: Vec<String> = w.iter().map(u32::to_string).collect();
    parts.join(".")
}

/// Text for stdout and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

/// Writes the JSON file if asked and picks the exit code.
fn finish(
    mut report: Report,
    text: String,
    out: &OutputArgs,
    started: Instant,
    negative: bool,
) -> Result<Outcome> {
    report.timing.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &out.json {
        report
            .write_json(path)
            .map_err(|e| fail(format!("{}: {e}", path.display())))?;
    }
    let unknown = report.verdict == ReportVerdict::Unknown;
    let code = if unknown || negative { 1 } else { 0 };
    Ok(Outcome { text, code })
}

pub fn analyze(a: AnalyzeArgs) -> Result<Outcome> {
    let started = Instant::now();
    let p = load_program(&a.program)?;
    let (report, text) = match a.method {
        AnalysisMethod::Sct => analyze_sct(&p, &a)?,
        AnalysisMethod::Ranking => analyze_ranking(&p, &a)?,
        AnalysisMethod::Transinv => analyze_transinv(&p, &a)?,
    };
    finish(report, text, &a.out, started, false)
}

fn analyze_sct(p: &Program, a: &AnalyzeArgs) -> Result<(Report, String)> {
    let basis = match &a.functions {
        Some(f) => MeasureBasis::parse(p, f)?,
        None => MeasureBasis::guarded_vars(p)?,
    };
    let k = clamp_bound(a.clamp)?;
    let criterion: Criterion = a.criterion.parse().map_err(fail)?;
    let outcome = decide(p, &basis, k, criterion)?;
    let cert = &outcome.certificate;

    let mut text = String::new();
    writeln!(
        text,
        "program {}: size-change analysis, basis [{basis}], K = {k}, criterion {criterion}",
        p.name
    )
    .unwrap();
    for (i, g) in cert.generators.iter().enumerate() {
        write!(text, "case {} matrix:\n{g}", i + 1).unwrap();
    }
    writeln!(text, "closure: {} elements", cert.closure.len()).unwrap();
    if a.dump_closure {
        for (i, (e, w)) in cert.closure.iter().zip(&cert.witnesses).enumerate() {
            let why = w.map_or("fails".to_string(), |w| w.to_string());
            write!(text, "element {} (case word {}): {why}\n{}", i + 1, word(&e.word), e.matrix)
                .unwrap();
        }
    }
    for d in &outcome.diagnostics {
        writeln!(text, "note: {d}").unwrap();
    }
    writeln!(text, "verdict: {}", outcome.verdict).unwrap();

    let closure_json: Vec<Value> = cert
        .closure
        .iter()
        .zip(&cert.witnesses)
        .map(|(e, w)| {
            json!({
                "word": e.word,
                "matrix": matrix_json(&e.matrix),
                "witness": w.map(|w| match w {
                    Witness::NegativeDiagonal(i) => json!({ "negative_diagonal": i }),
                    Witness::Power(p) => json!({ "power": p }),
                }),
            })
        })
        .collect();
    let mut report = Report::new(Method::Sct, Some(p.name.clone()));
    report.verdict = outcome.verdict.into();
    report.certificate = json!({
        "basis": basis.labels(),
        "clamp": k.get(),
        "criterion": criterion.to_string(),
        "generators": cert.generators.iter().map(matrix_json).collect::<Vec<_>>(),
        "closure_size": cert.closure.len(),
        "closure": closure_json,
        "failing_element": outcome.failing.map(|i| i + 1),
    });
    report.diagnostics = outcome.diagnostics.clone();
    Ok((report, text))
}

fn analyze_ranking(p: &Program, a: &AnalyzeArgs) -> Result<(Report, String)> {
    let spec = a
        .rank
        .as_deref()
        .ok_or_else(|| fail("--method ranking needs --rank"))?;
    let r = RankingSpec::parse(p, spec)?;
    let outcome = verify_ranking(p, &r)?;
    let mut text = String::new();
    writeln!(text, "program {}: ranking {r}", p.name).unwrap();
    for c in &outcome.cases {
        let changes: Vec<String> = c.changes.iter().map(|x| x.to_string()).collect();
        writeln!(text, "case {}: [{}]; {}", c.case_id, changes.join(", "), c.note).unwrap();
    }
    writeln!(text, "verdict: {}", outcome.verdict).unwrap();
    let mut report = Report::new(Method::Ranking, Some(p.name.clone()));
    report.verdict = outcome.verdict.into();
    report.diagnostics = outcome
        .cases
        .iter()
        .filter(|c| c.decreasing.is_none())
        .map(|c| format!("case {}: {}", c.case_id, c.note))
        .collect();
    report.certificate = json!({
        "components": r.labels(),
        "cases": outcome.cases,
        "lower_bounds": outcome.lower_bounds,
    });
    Ok((report, text))
}

fn analyze_transinv(p: &Program, a: &AnalyzeArgs) -> Result<(Report, String)> {
    let path = a
        .invariant
        .as_deref()
        .ok_or_else(|| fail("--method transinv needs --invariant"))?;
    let inv = InvariantCandidate::parse(&read(path)?, &p.vars)
        .map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let bx = parse_box(&a.bx, p.arity())?;
    let cap = a.bx.input_cap;
    let ti = check_transition_invariant(p, &inv, &bx, cap);
    let dwf = check_dwf(&inv, &bx);
    let verdict = if ti.passed() && dwf.passed() {
        Verdict::Terminates
    } else {
        Verdict::Unknown
    };

    let mut diagnostics = Vec::new();
    if let Some(cex) = &ti.counterexample {
        diagnostics.push(format!("not a transition invariant: {cex}"));
    }
    for d in dwf.disjuncts.iter().filter(|d| d.failure.is_some()) {
        diagnostics.push(format!(
            "disjunct {} not certified well-founded: {}",
            d.index,
            d.failure.as_ref().unwrap()
        ));
    }
    if let Some(g) = &ti.inductive_gap {
        diagnostics.push(format!(
            "one-step extension leaves the invariant on the box pair ({}, {}) via {} to {}; \
             that pair need not be reachable",
            g.first, g.last, g.choice, g.next
        ));
    }
    if ti.passed() && ti.case_split.is_none() {
        diagnostics.push("box too large for the case-split table; skipped".into());
    }

    let mut text = String::new();
    writeln!(text, "program {}: transition invariant on {bx}, input cap {cap}", p.name).unwrap();
    writeln!(
        text,
        "base: {} steps; segments: {} starts, {} states explored",
        ti.base_steps, ti.starts_checked, ti.states_explored
    )
    .unwrap();
    if let Some(rows) = &ti.case_split {
        for r in rows {
            let src = r.source.map_or("step".to_string(), |s| format!("T{s}"));
            let targets: Vec<String> = r.targets.iter().map(|t| format!("T{t}")).collect();
            writeln!(text, "{src} + case {} -> {{{}}}", r.case_id, targets.join(", ")).unwrap();
        }
    }
    for d in &dwf.disjuncts {
        let how = match d.symbolic {
            Some(true) => ", exact",
            _ => "",
        };
        let status = if d.failure.is_none() { "ok" } else { "FAILED" };
        writeln!(text, "T{} well-founded: {status} ({} pairs{how})", d.index, d.pairs_checked)
            .unwrap();
    }
    for d in &diagnostics {
        writeln!(text, "note: {d}").unwrap();
    }
    writeln!(text, "verdict: {verdict}").unwrap();

    let mut report = Report::new(Method::Transinv, Some(p.name.clone()));
    report.verdict = verdict.into();
    report.checked_domain = CheckedDomain::boxed(&bx, cap);
    report.diagnostics = diagnostics;
    report.certificate = json!({
        "invariant": inv.to_string(),
        "witnesses": inv.disjuncts.iter().map(|d| d.witness.display(&p.vars).to_string()).collect::<Vec<_>>(),
        "transition_invariant": ti,
        "well_founded": dwf,
    });
    Ok((report, text))
}

fn parse_state(text: &str, dim: usize) -> Result<StateVector> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| fail(format!("`{s}` is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != dim {
        return Err(fail(format!("start state needs {dim} values, got {}", values.len())));
    }
    Ok(StateVector(values))
}

fn parse_script(text: &str) -> Result<Vec<Choice>> {
    text.split(|c: char| c == ';' || c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|tok| {
            let mut parts = tok.split(':');
            let case = parts.next().unwrap_or("");
            let case_id = case
                .parse::<u32>()
                .map_err(|_| fail(format!("bad case id in choice `{tok}`")))?;
            let inputs = parts
                .map(|v| v.parse::<i64>().map_err(|_| fail(format!("bad input in choice `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Choice::new(case_id, inputs))
        })
        .collect()
}

fn trace_json(t: &Trace) -> Value {
    json!({
        "states": t.states,
        "choices": t.choices.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "terminated": t.terminated,
    })
}

pub fn simulate(a: SimulateArgs) -> Result<Outcome> {
    let started = Instant::now();
    let p = load_program(&a.program)?;
    let start = parse_state(&a.start, p.arity())?;
    let strategy = match &a.script {
        Some(s) => Strategy::Scripted(parse_script(s)?),
        None => Strategy::SeededRandom {
            seed: a.seed,
            input_cap: a.input_cap,
        },
    };
    let t = run(&p, &start, &strategy, a.max_steps)?;
    let mut text = t.to_string();
    if t.terminated {
        writeln!(text, "terminated after {} steps", t.choices.len()).unwrap();
    } else {
        writeln!(text, "stopped after {} steps; guard still holds", t.choices.len()).unwrap();
    }
    let mut report = Report::new(Method::Simulate, Some(p.name.clone()));
    report.certificate = trace_json(&t);
    finish(report, text, &a.out, started, false)
}

pub fn segments(a: SegmentsArgs) -> Result<Outcome> {
    let started = Instant::now();
    let p = load_program(&a.program)?;
    let bx = parse_box(&a.bx, p.arity())?;
    let mut shown = Vec::new();
    let mut text = String::new();
    let mut iter = enumerate_segments(&p, &bx, a.max_len, a.bx.input_cap);
    for seg in iter.by_ref().take(a.limit) {
        let states: Vec<String> = seg.states.iter().map(|s| s.to_string()).collect();
        writeln!(text, "{}  [cases {}]", states.join(" -> "), word(&seg.case_word())).unwrap();
        shown.push(trace_json(&seg));
    }
    let truncated = iter.next().is_some();
    if truncated {
        writeln!(text, "(stopped after {} segments)", a.limit).unwrap();
    }
    let mut report = Report::new(Method::Segments, Some(p.name.clone()));
    report.checked_domain = CheckedDomain::boxed(&bx, a.bx.input_cap);
    report.certificate = json!({
        "max_len": a.max_len,
        "segments": shown,
        "truncated": truncated,
    });
    finish(report, text, &a.out, started, false)
}

pub fn matrix(op: MatrixOp, out: OutputArgs) -> Result<Outcome> {
    let started = Instant::now();
    let mut report = Report::new(Method::Matrix, None);
    let text = match op {
        MatrixOp::Mul { a, b, clamp } => {
            let (a, b) = (load_matrix(&a)?, load_matrix(&b)?);
            let mut m = a.mul(&b)?;
            if let Some(k) = clamp {
                m = m.clamped(clamp_bound(k)?);
            }
            report.certificate = json!({ "result": matrix_json(&m) });
            m.to_string()
        }
        MatrixOp::Pow { a, p, clamp } => {
            if p == 0 {
                return Err(fail("exponent must be at least 1"));
            }
            let a = load_matrix(&a)?;
            let k = clamp.map(clamp_bound).transpose()?;
            let base = k.map_or(a.clone(), |k| a.clamped(k));
            let mut m = base.clone();
            for _ in 1..p {
                m = m.mul(&base)?;
                if let Some(k) = k {
                    m = m.clamped(k);
                }
            }
            report.certificate = json!({ "result": matrix_json(&m) });
            m.to_string()
        }
        MatrixOp::Closure { generators, clamp } => {
            let gens = generators
                .iter()
                .map(|g| load_matrix(g))
                .collect::<Result<Vec<_>>>()?;
            let k = clamp_bound(clamp)?;
            let elems = closure(&gens, k)?;
            let mut text = format!("closure: {} elements\n", elems.len());
            for (i, e) in elems.iter().enumerate() {
                write!(text, "element {} (word {}):\n{}", i + 1, word(&e.word), e.matrix).unwrap();
            }
            report.certificate = json!({
                "clamp": k.get(),
                "closure": elems.iter().map(|e| json!({
                    "word": e.word,
                    "matrix": matrix_json(&e.matrix),
                })).collect::<Vec<_>>(),
            });
            text
        }
    };
    finish(report, text, &out, started, false)
}

pub fn audit(a: AuditArgs) -> Result<Outcome> {
    let started = Instant::now();
    let p = load_program(&a.program)?;
    let basis = match &a.functions {
        Some(f) => MeasureBasis::parse(&p, f)?,
        None => MeasureBasis::guarded_vars(&p)?,
    };
    let m = load_matrix(&a.matrix)?;
    let bx = parse_box(&a.bx, p.arity())?;
    let cap = a.bx.input_cap;
    let outcome = audit_matrix(&p, a.case, &basis, &m, &bx, cap)?;
    let mut report = Report::new(Method::Sct, Some(p.name.clone()));
    report.checked_domain = CheckedDomain::boxed(&bx, cap);
    let (text, negative, result) = match &outcome {
        AuditOutcome::Pass {
            transitions_checked,
        } => (
            format!("pass: {transitions_checked} transitions of case {} checked\n", a.case),
            false,
            json!({ "pass": { "transitions_checked": transitions_checked } }),
        ),
        AuditOutcome::Violation(v) => {
            report.diagnostics.push(v.to_string());
            (format!("counterexample: {v}\n"), true, json!({ "counterexample": v }))
        }
    };
    report.certificate = json!({
        "case": a.case,
        "basis": basis.labels(),
        "matrix": matrix_json(&m),
        "result": result,
    });
    finish(report, text, &a.out, started, negative)
}

pub fn ramsey(op: RamseyOp, out: OutputArgs) -> Result<Outcome> {
    let started = Instant::now();
    let mut report = Report::new(Method::Ramsey, None);
    let mut negative = false;
    let text = match op {
        RamseyOp::TrtSize { k, c } => {
            let n = trt_size(k, c)?;
            report.certificate = json!({ "k": k, "c": c, "trt": n.to_string() });
            format!("{n}\n")
        }
        RamseyOp::TrtBuild { k, c } => {
            let col = build_extremal(k, c)?;
            let mip = longest_mip(&col);
            report.certificate = json!({
                "k": k,
                "c": c,
                "vertices": col.vertices(),
                "transitive": col.is_transitive(),
                "longest_mip": mip.len(),
                "coloring": col.to_string(),
            });
            col.to_string()
        }
        RamseyOp::Mip { coloring } => {
            let col = load_coloring(&coloring)?;
            let mip = longest_mip(&col);
            let path: Vec<String> = mip.path.iter().map(usize::to_string).collect();
            let text = format!(
                "longest MIP: length {}, color {}, path {}\n",
                mip.len(),
                mip.color,
                path.join(" ")
            );
            report.certificate = json!(mip);
            text
        }
        RamseyOp::CheckTransitive { coloring } => {
            let col = load_coloring(&coloring)?;
            let witness = col.transitivity_witness();
            report.certificate = json!({ "transitive": witness.is_none(), "witness": witness });
            match witness {
                None => "transitive\n".to_string(),
                Some((i, j, k)) => {
                    negative = true;
                    format!(
                        "not transitive: COL({i},{j}) = COL({j},{k}) = {} but COL({i},{k}) = {}\n",
                        col.get(i, j),
                        col.get(i, k)
                    )
                }
            }
        }
        RamseyOp::SearchHomog { coloring, k } => {
            let col = load_coloring(&coloring)?;
            let found = find_homogeneous(&col, k)?;
            report.certificate = json!({ "k": k, "set": found });
            match found {
                Some(set) => {
                    let shown: Vec<String> = set.iter().map(usize::to_string).collect();
                    let color = if set.len() > 1 { col.get(set[0], set[1]) } else { 1 };
                    format!("homogeneous set {{{}}} in color {color}\n", shown.join(", "))
                }
                None => {
                    negative = true;
                    format!("no homogeneous set of size {k}\n")
                }
            }
        }
        RamseyOp::Monotone { k, values } => {
            let m = monotone_subsequence(&values, k)?;
            let shown: Vec<String> = m.values.iter().map(i64::to_string).collect();
            let dir = if m.increasing { "increasing" } else { "decreasing" };
            negative = m.values.len() < k;
            report.certificate = json!(m);
            format!("{dir}: {} (length {})\n", shown.join(" "), m.values.len())
        }
    };
    finish(report, text, &out, started, negative)
}
