//! Command implementations. Each returns an [`Output`] holding the human
//! rendering and the JSON document built from the same values.

use std::fmt::Write as _;
use std::path::Path;

use nielsen_core::homotopy::{self, load_tables, SphereElement, TableSet, DEFAULT_TABLES};
use nielsen_core::invariants::{
    chain_check, equivalence_scan, kervaire_exception, projective_report, sphere_report, wecken_status,
    EquivalenceVerdict, InvariantValue, Kervaire, Report, WeckenStatus,
};
use nielsen_core::projective::{decompose_valid, reidemeister, space, Field, MapClass, ProjSpace};
use nielsen_core::selfcoincidence::{
    fiber_projection_self_loose, quaternion_counterexample, residual_not_parallel, sample_unit_vector, selfmap_s,
    self_loose, Looseness,
};
use nielsen_core::Error;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::expr::{self, EvalError};

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DATA: u8 = 3;

/// Environment variable naming a table file.
pub const TABLES_ENV: &str = "NIELSEN_TABLES";

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub human: String,
    pub machine: Value,
    /// Some value is unknown for lack of data.
    pub unknown: bool,
    /// A checked invariant failed.
    pub violation: bool,
}

impl Output {
    fn new(human: String, machine: Value) -> Self {
        Output { human, machine, unknown: false, violation: false }
    }

    /// Exit status: nonzero for unknowns or violations only under `strict`.
    pub fn exit_code(&self, strict: bool) -> u8 {
        if strict && (self.unknown || self.violation) {
            EXIT_VIOLATION
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        CliError { code: EXIT_DATA, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Table text from `--tables`, then the environment, then the embedded dataset.
pub fn table_source(flag: Option<&Path>) -> CliResult<(String, String)> {
    let path = flag.map(Path::to_path_buf).or_else(|| std::env::var_os(TABLES_ENV).map(Into::into));
    match path {
        Some(p) => std::fs::read_to_string(&p)
            .map(|text| (p.display().to_string(), text))
            .map_err(|e| CliError::data(format!("cannot read {}: {e}", p.display()))),
        None => Ok(("embedded".to_string(), DEFAULT_TABLES.to_string())),
    }
}

pub fn tables(flag: Option<&Path>) -> CliResult<TableSet> {
    let (origin, text) = table_source(flag)?;
    load_tables(text.as_bytes()).map_err(|e| CliError::data(format!("{origin}: {e}")))
}

pub fn pi(t: &TableSet, m: u32, q: u32) -> CliResult<Output> {
    let e = t.lookup(m, q)?;
    let mut human = format!("{}\n", e.group);
    for (name, a) in e.generator_names.iter().zip(&e.annotations) {
        let _ = write!(human, "  {name}");
        if let Some(s) = &a.stabilization {
            let _ = write!(human, "  E^∞ = {}", s.value());
        }
        human.push('\n');
    }
    if let Some(src) = &e.source {
        let _ = writeln!(human, "  source: {src}");
    }
    let machine = json!({
        "m": m, "q": q, "group": e.group.to_string(),
        "generators": e.generator_names, "source": e.source,
    });
    Ok(Output::new(human, machine))
}

pub fn stems(t: &TableSet, k: u32) -> CliResult<Output> {
    let s = t.stable().stem(k)?;
    let mut human = format!("{}\n", s.group);
    for g in &s.generator_names {
        let _ = writeln!(human, "  {g}");
    }
    let machine = json!({ "k": k, "group": s.group.to_string(), "generators": s.generator_names });
    Ok(Output::new(human, machine))
}

fn value_line(label: &str, v: &InvariantValue) -> String {
    format!("{label:<4}= {v}\n")
}

pub fn render_report(r: &Report) -> Output {
    let check = chain_check(r);
    let mut h = format!("target {}, m = {}\nf1: {}\nf2: {}\n", r.target, r.m, r.f1, r.f2);
    for (label, v) in [("R", &r.r)].into_iter().chain(r.chain()) {
        h.push_str(&value_line(label, v));
    }
    if !r.hypothesis_notes.is_empty() {
        h.push_str("hypotheses:\n");
        for n in &r.hypothesis_notes {
            let _ = writeln!(h, "  - {n}");
        }
    }
    if !r.derivation.is_empty() {
        h.push_str("derivation:\n");
        for n in &r.derivation {
            let _ = writeln!(h, "  - {n}");
        }
    }
    let _ = writeln!(h, "chain check: {}", if check.pass { "pass" } else { "FAIL" });
    for v in check.violations.iter().chain(&check.informational) {
        let _ = writeln!(h, "  - {v}");
    }
    let machine = json!({ "report": r, "chain_check": check });
    let unknown = [&r.r].into_iter().chain(r.chain().map(|(_, v)| v)).any(|v| !v.is_known());
    Output { human: h, machine, unknown, violation: !check.pass }
}

fn labelled(src: &str, x: &SphereElement) -> String {
    format!("{src} = {x}")
}

/// `f₁, f₂: S^m → KP(n')`, falling back to `S^d` when `KP(1)` classes do not decompose.
pub fn nielsen_report(
    t: &TableSet,
    field: Field,
    n_prime: u32,
    m: u32,
    f1: &str,
    f2: &str,
    assume: bool,
) -> CliResult<Report> {
    let s = space(field, n_prime)?;
    if m < 2 || !decompose_valid(t, &s, m)? {
        let n = s.as_sphere().ok_or_else(|| CliError::input("m must be at least 2"))?;
        let mut r = sphere_at(t, m, n, f1, f2)?;
        r.hypothesis_notes.push(format!("{s} = S^{n}: sphere criteria"));
        return Ok(r);
    }
    reidemeister(&s, m)?;
    let (a, b) = (expr::element(t, f1, m, s.q)?, expr::element(t, f2, m, s.q)?);
    let c1 = MapClass::new(t, s, m, a.clone())?;
    let c2 = MapClass::new(t, s, m, b.clone())?;
    let mut r = projective_report(t, &s, m, &c1, &c2, assume)?;
    r.f1 = labelled(f1, &a);
    r.f2 = labelled(f2, &b);
    Ok(r)
}

fn sphere_at(t: &TableSet, m: u32, n: u32, f1: &str, f2: &str) -> CliResult<Report> {
    let (a, b) = (expr::element(t, f1, m, n)?, expr::element(t, f2, m, n)?);
    let mut r = sphere_report(t, m, n, &a, &b)?;
    r.f1 = labelled(f1, &a);
    r.f2 = labelled(f2, &b);
    Ok(r)
}

pub fn nielsen(t: &TableSet, field: Field, n_prime: u32, m: u32, f1: &str, f2: &str, assume: bool) -> CliResult<Output> {
    Ok(render_report(&nielsen_report(t, field, n_prime, m, f1, f2, assume)?))
}

pub fn sphere(t: &TableSet, m: u32, n: u32, f1: &str, f2: &str) -> CliResult<Output> {
    Ok(render_report(&sphere_at(t, m, n, f1, f2)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Cp1,
    Rp2,
}

impl Surface {
    pub fn space(self) -> ProjSpace {
        match self {
            Surface::Cp1 => space(Field::C, 1),
            Surface::Rp2 => space(Field::R, 2),
        }
        .expect("n' = 1, 2")
    }
}

/// Parses `a..b` (inclusive); `a > b` is the empty range.
pub fn parse_range(s: &str) -> CliResult<(u32, u32)> {
    let (a, b) = s.split_once("..").ok_or_else(|| CliError::input(format!("range `{s}` is not of the form a..b")))?;
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| CliError::input(format!("invalid bound `{x}` in `{s}`")));
    Ok((num(a)?, num(b)?))
}

/// Consecutive `m` with the same pattern, e.g. `m=6,7,8: N^# ≡ Ñ ≢ N ≡ N^Z ≡ 0`.
pub fn compare_rows(verdicts: &[EquivalenceVerdict]) -> Vec<String> {
    let mut rows: Vec<(Vec<u32>, String)> = vec![];
    for v in verdicts {
        let p = v.pattern();
        match rows.last_mut() {
            Some((ms, last)) if *last == p => ms.push(v.m),
            _ => rows.push((vec![v.m], p)),
        }
    }
    rows.into_iter()
        .map(|(ms, p)| {
            let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
            format!("m={}: {p}", ms.join(","))
        })
        .collect()
}

pub fn compare(t: &TableSet, surface: Surface, range: (u32, u32)) -> CliResult<Output> {
    let s = surface.space();
    let verdicts = (range.0..=range.1).map(|m| equivalence_scan(t, &s, m)).collect::<Result<Vec<_>, _>>()?;
    let rows = compare_rows(&verdicts);
    let mut human = String::new();
    for r in &rows {
        let _ = writeln!(human, "{r}");
    }
    let unknown = rows.iter().any(|r| r.contains('?'));
    let machine = json!({ "space": s, "rows": rows, "verdicts": verdicts });
    Ok(Output { human, machine, unknown, violation: false })
}

struct Witness {
    title: &'static str,
    report: Report,
    holds: bool,
}

fn witnesses_for(t: &TableSet, claim: char) -> CliResult<Vec<Witness>> {
    let fin = InvariantValue::Finite;
    let mut out = vec![];
    match claim {
        'a' => {
            let r = sphere_at(t, 9, 5, "zero", "whitehead(5)")?;
            let holds = r.n_sharp == fin(1) && r.n_tilde == fin(0);
            out.push(Witness { title: "Whitehead square [ι_5, ι_5] on S^5", report: r, holds });
            let r = nielsen_report(t, Field::R, 5, 9, "zero", "whitehead(5)", false)?;
            let holds = r.n_sharp == fin(2) && r.n_tilde == fin(0);
            out.push(Witness { title: "its projection to RP(5)", report: r, holds });
        }
        'b' => {
            let r = nielsen_report(t, Field::R, 5, 6, "zero", "susp(hopfC, 3)", false)?;
            let holds = r.n_tilde == fin(2) && r.n_plain == fin(0);
            out.push(Witness { title: "suspended η on RP(5): 2η = 0", report: r, holds });
            let r = sphere_at(t, 7, 4, "zero", "24*hopfH")?;
            let holds = r.n_tilde == fin(1) && r.n_plain == fin(0);
            out.push(Witness { title: "24 times the quaternionic Hopf map on HP(1) = S^4", report: r, holds });
        }
        'c' => {
            let r = sphere_at(t, 7, 4, "zero", "susp(alpha1_3, 1)")?;
            let holds = r.n_plain == fin(1) && r.n_z == fin(0);
            out.push(Witness { title: "suspended α₁(3) on HP(1) = S^4", report: r, holds });
            let r = nielsen_report(t, Field::R, 3, 6, "zero", "alpha1_3", false)?;
            let holds = r.n_plain == fin(2) && r.n_z == fin(0);
            out.push(Witness { title: "α₁(3) lifted to RP(3)", report: r, holds });
            let r = nielsen_report(t, Field::C, 1, 3, "zero", "iota", false)?;
            let holds = r.n_plain == fin(1) && r.n_z == fin(0);
            out.push(Witness { title: "complex Hopf map into CP(1)", report: r, holds });
        }
        _ => return Err(CliError::input(format!("unknown claim `{claim}` (expected a, b or c)"))),
    }
    Ok(out)
}

pub fn witnesses(t: &TableSet, claim: char) -> CliResult<Output> {
    let ws = witnesses_for(t, claim)?;
    let statement = match claim {
        'a' => "N^# ≢ Ñ",
        'b' => "Ñ ≢ N",
        _ => "N ≢ N^Z",
    };
    let mut human = format!("claim {claim}: {statement}\n");
    let mut items = vec![];
    let mut out = Output::new(String::new(), Value::Null);
    for w in &ws {
        let rendered = render_report(&w.report);
        let _ = writeln!(human, "\n== {} ({})", w.title, if w.holds { "witnesses the claim" } else { "does NOT witness" });
        human.push_str(&rendered.human);
        items.push(json!({ "title": w.title, "witnesses": w.holds, "report": rendered.machine }));
        out.unknown |= rendered.unknown;
        out.violation |= rendered.violation || !w.holds;
    }
    out.human = human;
    out.machine = json!({ "claim": claim.to_string(), "statement": statement, "witnesses": items });
    Ok(out)
}

fn looseness_json(l: &Looseness) -> Value {
    json!({ "verdict": l.verdict, "reason": l.reason })
}

pub fn selfloose(field: Field, n_prime: u32, m: Option<u32>, fiber: bool) -> CliResult<Output> {
    if n_prime < 1 {
        return Err(CliError::input("n' must be at least 1"));
    }
    let s = space(field, n_prime)?;
    let (what, l) = if fiber {
        (format!("(p, p) for the projection p: S^{} → {s}", s.q), fiber_projection_self_loose(field, n_prime)?)
    } else {
        let m = m.ok_or_else(|| CliError::input("--m is required unless --fiber is given"))?;
        if m < 1 {
            return Err(CliError::input("m must be at least 1"));
        }
        (format!("(f, f) for all f: S^{m} → {s}"), self_loose(field, m, n_prime))
    };
    let human = format!("{what}: {:?}\n  {}\n", l.verdict, l.reason);
    let mut out = Output::new(human, json!({ "space": s, "m": m, "fiber": fiber, "looseness": looseness_json(&l) }));
    out.unknown = l.verdict == nielsen_core::selfcoincidence::Verdict::Unknown;
    Ok(out)
}

pub fn verify_s(field: Field, n_prime: u32, samples: usize, seed: u64) -> CliResult<Output> {
    if field == Field::H {
        let (x, lambda) = quaternion_counterexample();
        let s = selfmap_s(&x)?;
        let residual = residual_not_parallel(&x)?;
        let human = format!(
            "x = {x}\ns(x) = {s}\nλ = {lambda}\nλ·x = {}\ns(x) = λ·x exactly; residual = {residual}\n",
            x.left_mul(&lambda)
        );
        let machine = json!({
            "field": field, "x": x.to_string(), "s_x": s.to_string(), "lambda": lambda.to_string(),
            "residual": residual.to_string(), "parallel": true,
        });
        return Ok(Output::new(human, machine));
    }
    if n_prime.is_multiple_of(2) {
        return Err(CliError::input("s is defined for odd n' only"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min: Option<BigRational> = None;
    for _ in 0..samples {
        let x = sample_unit_vector(&mut rng, field, n_prime);
        let r = residual_not_parallel(&x)?;
        if min.as_ref().is_none_or(|m| r < *m) {
            min = Some(r);
        }
    }
    let min_s = min.as_ref().map(|m| m.to_string()).unwrap_or_else(|| "none".into());
    let positive = min.as_ref().is_some_and(|m| *m > BigRational::zero());
    let human = format!(
        "{field}P({n_prime}): {samples} rational unit samples (seed {seed}), minimal residual |s(x) - λx|² = {min_s}\ns(x) ∉ K·x on every sample: {}\n",
        if positive { "yes" } else { "no" }
    );
    let machine = json!({
        "field": field, "n_prime": n_prime, "samples": samples, "seed": seed,
        "min_residual": min_s, "all_positive": positive,
    });
    let mut out = Output::new(human, machine);
    out.violation = !positive && samples > 0;
    Ok(out)
}

/// Validates the table text. Violations make the data invalid.
pub fn validate_data(origin: &str, text: &str) -> CliResult<Output> {
    let file = homotopy::parse(text).map_err(|e| CliError::data(format!("{origin}: {e}")))?;
    let report = homotopy::validate(&file);
    let mut human = format!("{origin}: {} violation(s)\n", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(human, "  [{}] {}: {}", v.check, v.path, v.message);
    }
    let violations: Vec<Value> =
        report.violations.iter().map(|v| json!({ "check": v.check, "path": v.path, "message": v.message })).collect();
    let mut out = Output::new(human, json!({ "origin": origin, "violations": violations }));
    out.violation = !report.is_clean();
    Ok(out)
}

pub fn wecken(field: Field, n_prime: u32, m: u32) -> CliResult<Output> {
    let s = space(field, n_prime)?;
    let status = wecken_status(&s, m);
    let (word, detail) = match &status {
        WeckenStatus::Holds => ("Holds", "MCC = N^# for every pair".to_string()),
        WeckenStatus::FailsWithWitness(r) => ("FailsWithWitness", render_report(r).human),
        WeckenStatus::Unknown(why) => ("Unknown", why.clone()),
    };
    let human = format!("{s}, m = {m}: {word}\n{}\n", detail.trim_end());
    let mut out = Output::new(human, json!({ "space": s, "m": m, "status": status }));
    out.unknown = matches!(status, WeckenStatus::Unknown(_));
    Ok(out)
}

pub fn kervaire(field: Field, n: u32, m: u32) -> CliResult<Output> {
    let k = kervaire_exception(field, n, m);
    let human = match &k {
        Kervaire::Exception(r) => format!("exception (non-Wecken)\n{}", render_report(r).human),
        Kervaire::Unresolved(note) => format!("unresolved: {note}\n"),
        Kervaire::NotApplicable => format!("no exception for {field}, n = {n}, m = {m}\n"),
    };
    let mut out = Output::new(human, json!({ "field": field, "n": n, "m": m, "result": k }));
    out.unknown = matches!(k, Kervaire::Unresolved(_));
    Ok(out)
}
