//! Reidemeister, minimum and Nielsen numbers for maps from spheres into
//! spheres and into `KP(n')`.
//!
//! For projective targets every criterion is a vanishing test on the
//! difference `δ = lift(f₁) - lift(f₂)` in `π_m(S^q)`:
//!
//! | number | nonzero (and then equal to `R`) iff |
//! |--------|-------------------------------------|
//! | `MCC`, `N^#` | `δ ≠ 0` |
//! | `Ñ` | `Γ(δ) ≠ 0` |
//! | `N` | `h_K · E^∞(δ) ≠ 0` |
//! | `N^Z` | `m = n` and `δ ≠ 0` |
//!
//! `N` is reported in the `(∗, f)` orientation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{Subgroup, SubgroupOrdering};
use crate::homotopy::{KernelChain, Membership, SphereElement, TableSet};
use crate::projective::{decompose_valid, hopf_stable, space, Field, MapClass, ProjSpace};
use crate::selfcoincidence::self_loose;
use crate::stable::Product;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantValue {
    Finite(u64),
    Infinite,
    Unknown(String),
}

impl InvariantValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            InvariantValue::Finite(k) => Some(*k),
            _ => None,
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, InvariantValue::Unknown(_))
    }

    /// `self ≥ other`, or `None` if either side is unknown.
    pub fn ge(&self, other: &InvariantValue) -> Option<bool> {
        use InvariantValue::*;
        match (self, other) {
            (Unknown(_), _) | (_, Unknown(_)) => None,
            (Infinite, _) => Some(true),
            (Finite(_), Infinite) => Some(false),
            (Finite(a), Finite(b)) => Some(a >= b),
        }
    }

    fn indicator(r: u64, nonzero: bool) -> Self {
        InvariantValue::Finite(if nonzero { r } else { 0 })
    }

    fn unknown(reason: impl Into<String>) -> Self {
        InvariantValue::Unknown(reason.into())
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Finite(k) => write!(f, "{k}"),
            InvariantValue::Infinite => f.write_str("∞"),
            InvariantValue::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

/// Errors that mean "the data cannot decide" rather than "bad input".
fn undecided(e: &Error) -> bool {
    matches!(e, Error::MissingData(_) | Error::OutOfTabulatedRange(_))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Sphere { n: u32 },
    Projective { space: ProjSpace },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Sphere { n } => write!(f, "S^{n}"),
            Target::Projective { space } => write!(f, "{space}"),
        }
    }
}

/// How the numbers of a report were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Closed forms for sphere targets.
    Sphere,
    /// Vanishing criteria on the lift difference `δ`.
    Lift,
    /// A known exceptional pair outside the lift criteria.
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub target: Target,
    pub route: Route,
    pub m: u32,
    /// Dimension of the target manifold.
    pub n: u32,
    pub f1: String,
    pub f2: String,
    #[serde(rename = "R")]
    pub r: InvariantValue,
    #[serde(rename = "MCC")]
    pub mcc: InvariantValue,
    #[serde(rename = "MC")]
    pub mc: InvariantValue,
    #[serde(rename = "N_sharp")]
    pub n_sharp: InvariantValue,
    #[serde(rename = "N_tilde")]
    pub n_tilde: InvariantValue,
    #[serde(rename = "N_plain")]
    pub n_plain: InvariantValue,
    #[serde(rename = "N_z")]
    pub n_z: InvariantValue,
    pub hypothesis_notes: Vec<String>,
    pub derivation: Vec<String>,
}

impl Report {
    fn blank(target: Target, m: u32, n: u32, f1: String, f2: String, r: InvariantValue) -> Self {
        let u = InvariantValue::unknown("not computed");
        let route = match target {
            Target::Sphere { .. } => Route::Sphere,
            Target::Projective { .. } => Route::Lift,
        };
        Report {
            target,
            route,
            m,
            n,
            f1,
            f2,
            r,
            mcc: u.clone(),
            mc: u.clone(),
            n_sharp: u.clone(),
            n_tilde: u.clone(),
            n_plain: u.clone(),
            n_z: u,
            hypothesis_notes: vec![],
            derivation: vec![],
        }
    }

    fn set_all(&mut self, v: InvariantValue) {
        self.mcc = v.clone();
        self.mc = v.clone();
        self.n_sharp = v.clone();
        self.n_tilde = v.clone();
        self.n_plain = v.clone();
        self.n_z = v;
    }

    /// `(label, value)` in chain order `MC, MCC, N^#, Ñ, N, N^Z`.
    pub fn chain(&self) -> [(&'static str, &InvariantValue); 6] {
        [
            ("MC", &self.mc),
            ("MCC", &self.mcc),
            ("N^#", &self.n_sharp),
            ("Ñ", &self.n_tilde),
            ("N", &self.n_plain),
            ("N^Z", &self.n_z),
        ]
    }
}

/// Numbers for `f₁, f₂: S^m → S^n`.
pub fn sphere_report(tables: &TableSet, m: u32, n: u32, f1: &SphereElement, f2: &SphereElement) -> Result<Report> {
    if m == 0 || n == 0 {
        return Err(Error::domain("m and n must be at least 1"));
    }
    for f in [f1, f2] {
        if (f.m, f.q) != (m, n) {
            return Err(Error::domain(format!("{f} is not in π_{m}(S^{n})")));
        }
    }
    tables.lookup(m, n)?;
    let (d1, d2) = (f1.to_string(), f2.to_string());

    if n == 1 {
        if m == 1 {
            let diff = (f1.value.coeffs()[0] - f2.value.coeffs()[0]).unsigned_abs();
            let r = if diff == 0 { InvariantValue::Infinite } else { InvariantValue::Finite(diff) };
            let mut rep = Report::blank(Target::Sphere { n }, m, n, d1, d2, r);
            rep.set_all(InvariantValue::Finite(diff));
            rep.derivation.push(format!("m = n = 1: every number is |d(f₁) - d(f₂)| = {diff}"));
            return Ok(rep);
        }
        let mut rep = Report::blank(Target::Sphere { n }, m, n, d1, d2, InvariantValue::Infinite);
        rep.set_all(InvariantValue::Finite(0));
        rep.derivation.push("target S^1 with m ≥ 2: π_m(S^1) = 0, all numbers vanish".into());
        return Ok(rep);
    }

    let mut rep = Report::blank(Target::Sphere { n }, m, n, d1, d2, InvariantValue::Finite(1));
    if m < n {
        rep.set_all(InvariantValue::Finite(0));
        rep.derivation.push(format!("m < n: π_{m}(S^{n}) = 0"));
        return Ok(rep);
    }

    let af2 = match tables.antipodal_compose(f2) {
        Ok(x) => x,
        Err(e) if undecided(&e) => {
            rep.set_all(InvariantValue::unknown(format!("antipodal action unknown: {e}")));
            return Ok(rep);
        }
        Err(e) => return Err(e),
    };
    let delta = f1.sub(&af2)?;
    rep.derivation.push(format!("a∘f₂ = {}", af2.value));
    rep.derivation.push(format!("[f] = f₁ - a∘f₂ = {}", delta.value));
    let essential = !delta.is_zero();
    let sharp = InvariantValue::indicator(1, essential);
    rep.mcc = sharp.clone();
    rep.n_sharp = sharp.clone();

    if m == n {
        rep.set_all(sharp);
        rep.derivation.push("m = n: all six numbers agree".into());
        return Ok(rep);
    }

    rep.n_tilde = if !essential {
        InvariantValue::Finite(0)
    } else {
        let g = tables.gamma(&delta)?;
        for c in &g.components {
            match &c.value {
                Some(v) => rep.derivation.push(format!("Γ_{}([f]) = {} in π_{}^S", c.k, v.value(), c.degree)),
                None => rep.derivation.push(format!("Γ_{}([f]) unknown", c.k)),
            }
        }
        match g.is_zero() {
            Some(z) => InvariantValue::indicator(1, !z),
            None => InvariantValue::unknown(g.unknown_reason().unwrap_or("Γ undetermined").to_string()),
        }
    };

    let sign = if n % 2 == 1 { 1 } else { -1 };
    rep.n_plain = match (tables.stabilize(f1), tables.stabilize(f2)) {
        (Ok(s1), Ok(s2)) => {
            let s2 = s2.scale(sign)?;
            rep.derivation.push(format!(
                "E^∞f₁ = {}, (-1)^(n+1) E^∞f₂ = {}",
                s1.value(),
                s2.value()
            ));
            InvariantValue::indicator(1, s1 != s2)
        }
        (Err(e), _) | (_, Err(e)) if undecided(&e) => InvariantValue::unknown(e.to_string()),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    rep.n_z = InvariantValue::Finite(0);

    rep.mc = if !essential {
        InvariantValue::Finite(0)
    } else {
        match tables.suspension_image_contains(m, n, &delta) {
            Err(e) if undecided(&e) => InvariantValue::unknown(e.to_string()),
            Err(e) => return Err(e),
            Ok(Membership::Yes) => {
                rep.derivation.push(format!("[f] ∈ E(π_{}(S^{}))", m - 1, n - 1));
                InvariantValue::Finite(1)
            }
            Ok(Membership::No) => {
                rep.derivation.push(format!("[f] ∉ E(π_{}(S^{}))", m - 1, n - 1));
                InvariantValue::Infinite
            }
            Ok(Membership::Unknown(r)) => InvariantValue::unknown(r),
        }
    };
    Ok(rep)
}

/// Whether the self-looseness hypothesis holds for `(f₁, f₁)`.
fn hypothesis(space: &ProjSpace, m: u32, f1: &MapClass, assume: bool, notes: &mut Vec<String>) -> bool {
    let l = self_loose(space.field, m, space.n_prime);
    notes.push(format!("self-looseness of (f, f) on {space}, m = {m}: {:?} ({})", l.verdict, l.reason));
    if l.is_loose() {
        return true;
    }
    if f1.is_null() {
        notes.push("f₁ is constant, so (f₁, f₁) is loose".into());
        return true;
    }
    if assume {
        notes.push("(f₁, f₁) assumed loose by request".into());
        return true;
    }
    false
}

/// Numbers for `f₁, f₂: S^m → KP(n')` through their lifts to `S^q`.
pub fn projective_report(
    tables: &TableSet,
    space: &ProjSpace,
    m: u32,
    f1: &MapClass,
    f2: &MapClass,
    assume_self_loose: bool,
) -> Result<Report> {
    for f in [f1, f2] {
        if f.space != *space || f.m != m {
            return Err(Error::domain(format!("map class for {} with m = {} used for {space}, m = {m}", f.space, f.m)));
        }
    }
    let r = space.reidemeister();
    let target = Target::Projective { space: *space };
    let mut rep = Report::blank(target, m, space.n, f1.lift.to_string(), f2.lift.to_string(), r.clone());
    rep.hypothesis_notes.push(format!("lift/correction decomposition valid: {}", decompose_valid(tables, space, m)?));
    if let Kervaire::Exception(_) = kervaire_exception(space.field, space.n, m) {
        rep.hypothesis_notes.push("Kervaire invariant one dimension: MCC ≠ N^# can occur here".into());
    }
    if !hypothesis(space, m, f1, assume_self_loose, &mut rep.hypothesis_notes) {
        rep.set_all(InvariantValue::unknown("hypothesis not established: (f₁, f₁) loose"));
        return Ok(rep);
    }

    let delta = f1.lift.sub(&f2.lift)?;
    rep.derivation.push(format!("δ = lift(f₁) - lift(f₂) = {}", delta.value));
    let essential = !delta.is_zero();
    // Only RP(1) has infinite R, and there every lift vanishes.
    let rn = r.finite().unwrap_or(1);

    let sharp = InvariantValue::indicator(rn, essential);
    rep.mcc = sharp.clone();
    rep.n_sharp = sharp;
    rep.n_z = InvariantValue::indicator(rn, essential && m == space.n);
    rep.mc = if essential {
        InvariantValue::unknown("minimum number not determined for projective targets")
    } else {
        InvariantValue::Finite(0)
    };

    rep.n_tilde = if !essential {
        InvariantValue::Finite(0)
    } else {
        let g = tables.gamma(&delta)?;
        for c in &g.components {
            match &c.value {
                Some(v) => rep.derivation.push(format!("Γ_{}(δ) = {} in π_{}^S", c.k, v.value(), c.degree)),
                None => rep.derivation.push(format!("Γ_{}(δ) unknown", c.k)),
            }
        }
        match g.is_zero() {
            Some(z) => InvariantValue::indicator(rn, !z),
            None => InvariantValue::unknown(g.unknown_reason().unwrap_or("Γ undetermined").to_string()),
        }
    };

    rep.n_plain = if !essential {
        InvariantValue::Finite(0)
    } else {
        let h = hopf_stable(tables.stable(), space.field)?;
        match tables.stabilize(&delta) {
            Ok(s) => match tables.stable().multiply(&h, &s)? {
                Product::Known(p) => {
                    rep.derivation.push(format!("h_{} · E^∞(δ) = {} · {} = {}", space.field, h.value(), s.value(), p.value()));
                    InvariantValue::indicator(rn, !p.is_zero())
                }
                Product::Unknown { left, right } => {
                    InvariantValue::unknown(format!("stable product {left}·{right} not tabulated"))
                }
            },
            Err(e) if undecided(&e) => InvariantValue::unknown(e.to_string()),
            Err(e) => return Err(e),
        }
    };
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn symbol(self) -> &'static str {
        match self {
            Status::Holds => "≡",
            Status::Fails => "≢",
            Status::Unknown => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub status: Status,
    pub witness: String,
}

impl Relation {
    fn unknown(reason: &str) -> Self {
        Relation { status: Status::Unknown, witness: reason.to_string() }
    }

    fn from_bool(holds: bool, witness: String) -> Self {
        Relation { status: if holds { Status::Holds } else { Status::Fails }, witness }
    }
}

/// Which of the numbers agree identically over all pairs of maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub target: Target,
    pub m: u32,
    pub sharp_tilde: Relation,
    pub tilde_plain: Relation,
    pub plain_zero: Relation,
    pub plain_z: Relation,
    pub z_zero: Relation,
    pub notes: Vec<String>,
}

impl EquivalenceVerdict {
    /// `N^# ≡ Ñ ≢ N ≢ N^Z ≡ 0` style summary.
    pub fn pattern(&self) -> String {
        format!(
            "N^# {} Ñ {} N {} N^Z {} 0",
            self.sharp_tilde.status.symbol(),
            self.tilde_plain.status.symbol(),
            self.plain_z.status.symbol(),
            self.z_zero.status.symbol()
        )
    }

    fn all_unknown(target: Target, m: u32, reason: &str) -> Self {
        let u = Relation::unknown(reason);
        EquivalenceVerdict {
            target,
            m,
            sharp_tilde: u.clone(),
            tilde_plain: u.clone(),
            plain_zero: u.clone(),
            plain_z: u.clone(),
            z_zero: u,
            notes: vec![reason.to_string()],
        }
    }
}

fn describe(s: &Subgroup) -> String {
    if s.is_trivial() {
        return "0".into();
    }
    let g: Vec<String> = s.generators().iter().map(|g| g.to_string()).collect();
    format!("⟨{}⟩", g.join(", "))
}

fn compare(a: &Subgroup, b: &Subgroup, an: &str, bn: &str) -> Result<Relation> {
    let ord = a.compare(b)?;
    let sym = match ord {
        SubgroupOrdering::Equal => "=",
        SubgroupOrdering::ProperSub => "⊊",
        SubgroupOrdering::ProperSuper => "⊋",
        SubgroupOrdering::Incomparable => "incomparable with",
    };
    Ok(Relation::from_bool(
        ord == SubgroupOrdering::Equal,
        format!("{an} = {} {sym} {bn} = {}", describe(a), describe(b)),
    ))
}

fn verdict_from_chain(target: Target, m: u32, n: u32, chain: &KernelChain, notes: Vec<String>) -> Result<EquivalenceVerdict> {
    let zero = chain.whole.ambient().trivial_subgroup();
    let sharp_tilde = compare(&chain.ker_gamma, &zero, "Ker Γ", "0")?;
    let tilde_plain = compare(&chain.ker_gamma, &chain.ker_hopf_stab, "Ker Γ", "Ker(h·E^∞)")?;
    let plain_zero = compare(&chain.ker_hopf_stab, &chain.whole, "Ker(h·E^∞)", "whole group")?;
    let (plain_z, z_zero) = if m == n {
        (
            compare(&chain.ker_hopf_stab, &zero, "Ker(h·E^∞)", "0")?,
            Relation::from_bool(chain.whole.is_trivial(), format!("whole group = {}", describe(&chain.whole))),
        )
    } else {
        (plain_zero.clone(), Relation::from_bool(true, "m ≠ n: N^Z vanishes identically".into()))
    };
    Ok(EquivalenceVerdict { target, m, sharp_tilde, tilde_plain, plain_zero, plain_z, z_zero, notes })
}

/// Compares the numbers over all pairs through the kernel chain
/// `{0} ⊆ Ker Γ ⊆ Ker(h·E^∞) ⊆ π_m(S^q)`.
pub fn equivalence_scan(tables: &TableSet, space: &ProjSpace, m: u32) -> Result<EquivalenceVerdict> {
    let target = Target::Projective { space: *space };
    if decompose_valid(tables, space, m)? {
        let l = self_loose(space.field, m, space.n_prime);
        if !l.is_loose() {
            return Ok(EquivalenceVerdict::all_unknown(
                target,
                m,
                &format!("hypothesis not established: (f, f) loose for all f ({})", l.reason),
            ));
        }
        let chain = match tables.kernel_chain(m, space.q, space.field) {
            Ok(c) => c,
            Err(e @ Error::MissingData(_)) => return Ok(EquivalenceVerdict::all_unknown(target, m, &e.to_string())),
            Err(e) => return Err(e),
        };
        let notes = vec![format!("lifts in π_{m}(S^{}), h = h_{}", space.q, space.field)];
        return verdict_from_chain(target, m, space.n, &chain, notes);
    }
    // n' = 1 without a valid decomposition: KP(1) is the sphere S^n.
    let n = space.n;
    let iota = tables.stable().named("iota")?;
    let chain = match tables.kernel_chain_with(m, n, &iota) {
        Ok(c) => c,
        Err(e @ Error::MissingData(_)) => return Ok(EquivalenceVerdict::all_unknown(target, m, &e.to_string())),
        Err(e) => return Err(e),
    };
    let notes = vec![format!("{space} = S^{n}: sphere criteria on π_{m}(S^{n})")];
    verdict_from_chain(target, m, n, &chain, notes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Kervaire {
    Exception(Box<Report>),
    Unresolved(String),
    NotApplicable,
}

/// The non-Wecken pairs `(f, f)` on `RP(n)`, `n ∈ {16, 32, 64}`, `m = 2n - 2`.
pub fn kervaire_exception(field: Field, n: u32, m: u32) -> Kervaire {
    if field != Field::R || m != 2 * n.saturating_sub(1) || n < 2 {
        return Kervaire::NotApplicable;
    }
    if n == 128 {
        return Kervaire::Unresolved("n = 128, m = 254: existence of the exceptional map is open".into());
    }
    if ![16, 32, 64].contains(&n) {
        return Kervaire::NotApplicable;
    }
    let space = space(Field::R, n).expect("n ≥ 1");
    let f = format!("f with Kervaire invariant one lift in π_{m}(S^{n})");
    let mut rep = Report::blank(Target::Projective { space }, m, n, f.clone(), f, InvariantValue::Finite(2));
    rep.route = Route::Exceptional;
    rep.mcc = InvariantValue::Finite(1);
    rep.n_sharp = InvariantValue::Finite(0);
    rep.n_tilde = InvariantValue::Finite(0);
    rep.n_plain = InvariantValue::Finite(0);
    rep.n_z = InvariantValue::Finite(0);
    rep.mc = InvariantValue::unknown("at least MCC = 1");
    rep.hypothesis_notes.push("non-Wecken: MCC(f, f) = 1 ≠ 0 = N^#(f, f)".into());
    rep.hypothesis_notes.push("(f, f) is not loose, so the lift criteria do not apply".into());
    rep.derivation.push("N^#(f, f) = MCC(f̃, f̃) = 0 while MCC(f, f) = 1 < R = 2".into());
    Kervaire::Exception(Box::new(rep))
}

pub const WECKEN_QUESTION: &str = "Is MCC ≡ N^# whenever K = C or H?";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WeckenStatus {
    Holds,
    FailsWithWitness(Box<Report>),
    Unknown(String),
}

/// Whether `MCC = N^#` for all pairs `S^m → KP(n')`.
pub fn wecken_status(space: &ProjSpace, m: u32) -> WeckenStatus {
    if self_loose(space.field, m, space.n_prime).is_loose() {
        return WeckenStatus::Holds;
    }
    match kervaire_exception(space.field, space.n, m) {
        Kervaire::Exception(r) => WeckenStatus::FailsWithWitness(r),
        Kervaire::Unresolved(note) => WeckenStatus::Unknown(note),
        Kervaire::NotApplicable => WeckenStatus::Unknown(match space.field {
            Field::R => "n' even: (f, f) need not be loose".to_string(),
            _ => format!("open: {WECKEN_QUESTION}"),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub pass: bool,
    pub violations: Vec<String>,
    /// Failures of `MCC ≤ R` for surfaces, reported but not failing.
    pub informational: Vec<String>,
}

/// `MC ≥ MCC ≥ N^# ≥ Ñ ≥ N ≥ N^Z ≥ 0` and `MCC ≤ R` on the known entries.
pub fn chain_check(report: &Report) -> ChainCheck {
    let mut violations = Vec::new();
    let mut informational = Vec::new();
    let chain = report.chain();
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            if chain[i].1.ge(chain[j].1) == Some(false) {
                violations.push(format!("{} = {} < {} = {}", chain[i].0, chain[i].1, chain[j].0, chain[j].1));
            }
        }
    }
    if report.r.ge(&report.mcc) == Some(false) {
        let msg = format!("MCC = {} > R = {}", report.mcc, report.r);
        if report.n == 2 {
            informational.push(msg);
        } else {
            violations.push(msg);
        }
    }
    ChainCheck { pass: violations.is_empty(), violations, informational }
}

/// Every finite number of a lift-route report is `0` or `R`.
pub fn dichotomy_holds(report: &Report) -> bool {
    if report.route != Route::Lift {
        return true;
    }
    let Some(r) = report.r.finite() else { return true };
    report.chain().iter().filter_map(|(_, v)| v.finite()).all(|v| v == 0 || v == r)
}
