//! Structural checks (run on load) and consistency checks (run on demand).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::format::{EntryDecl, StemDecl, TableFile};
use super::{gamma_degree, is_closed_form, k_max, Annotation, SphereElement, SphereGroupEntry, TableSet};
use crate::error::Error;
use crate::fgab::{gcd, FgAbGroup, GroupElement};
use crate::projective::{hopf_stable, Field};
use crate::stable::{Product, StableRing, MAX_STEM};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.check, self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, check: &'static str, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation { check, path: path.into(), message: message.into() });
    }
}

fn entry_path(m: u32, q: u32) -> String {
    format!("π_{m}(S^{q})")
}

/// `t · v = 0` for a generator of order `t` (no condition for free generators).
fn respects_order(t: i64, v: &GroupElement) -> bool {
    t == 0 || v.scale(t).map(|x| x.is_zero()).unwrap_or(false)
}

fn check_stem(s: &StemDecl, seen: &mut BTreeSet<u32>, gens: &mut BTreeSet<String>, c: &mut Collector) -> bool {
    let path = format!("stem {}", s.degree);
    let before = c.0.len();
    if s.degree > MAX_STEM {
        c.push("range", &path, format!("stems are tabulated for 0..={MAX_STEM} only"));
    }
    if !seen.insert(s.degree) {
        c.push("duplicate", &path, "declared twice");
    }
    match FgAbGroup::new(s.free_rank, s.torsion.clone()) {
        Err(e) => c.push("divisibility", &path, e.to_string()),
        Ok(g) if g.ngens() != s.generators.len() => c.push(
            "generator-count",
            &path,
            format!("{} generator names for {} generators", s.generators.len(), g.ngens()),
        ),
        Ok(_) => {}
    }
    for g in &s.generators {
        if !gens.insert(g.clone()) {
            c.push("duplicate", &path, format!("stable generator `{g}` declared twice"));
        }
    }
    c.0.len() == before
}

fn check_entry_header(e: &EntryDecl, seen: &mut BTreeSet<(u32, u32)>, c: &mut Collector) -> Option<FgAbGroup> {
    let path = entry_path(e.m, e.q);
    let before = c.0.len();
    if e.m == 0 {
        c.push("range", &path, "m must be at least 1");
    } else if is_closed_form(e.m, e.q) {
        c.push("closed-form", &path, "groups with q ≤ 1 or m ≤ q are synthesized and must not be tabulated");
    }
    if !seen.insert((e.m, e.q)) {
        c.push("duplicate", &path, "declared twice");
    }
    let group = match FgAbGroup::new(e.free_rank, e.torsion.clone()) {
        Err(err) => {
            c.push("divisibility", &path, err.to_string());
            None
        }
        Ok(g) => Some(g),
    };
    if let Some(g) = &group {
        if g.ngens() != e.generators.len() {
            c.push(
                "generator-count",
                &path,
                format!("{} generators declared for {} coordinates", e.generators.len(), g.ngens()),
            );
        }
    }
    let mut names = BTreeSet::new();
    for g in &e.generators {
        if !names.insert(&g.name) {
            c.push("duplicate", &path, format!("generator `{}` declared twice", g.name));
        }
    }
    (c.0.len() == before).then(|| group.expect("no violation implies a group"))
}

/// Group of `π_m(S^q)` from the file or a closed form.
fn resolve(groups: &BTreeMap<(u32, u32), FgAbGroup>, m: u32, q: u32) -> Option<FgAbGroup> {
    if m == 0 {
        return None;
    }
    if is_closed_form(m, q) {
        return Some(if m == q { FgAbGroup::integers() } else { FgAbGroup::trivial() });
    }
    groups.get(&(m, q)).cloned()
}

/// Checks a coefficient vector against a target group and the generator order.
fn vector(
    c: &mut Collector,
    path: &str,
    what: &str,
    target: &FgAbGroup,
    coeffs: &[i64],
    order: i64,
) -> Option<GroupElement> {
    match target.element(coeffs.to_vec()) {
        Err(_) => {
            c.push(
                "vector-length",
                path,
                format!("{what}: {} coefficients for {} (expects {})", coeffs.len(), target, target.ngens()),
            );
            None
        }
        Ok(v) if !respects_order(order, &v) => {
            c.push("well-defined", path, format!("{what}: generator of order {order} sent to {v} in {target}"));
            None
        }
        Ok(v) => Some(v),
    }
}

fn stem_group(ring: &StableRing, c: &mut Collector, path: &str, what: &str, degree: u32) -> Option<FgAbGroup> {
    match ring.stem(degree) {
        Ok(s) => Some(s.group.clone()),
        Err(e) => {
            c.push("unknown-stem", path, format!("{what}: {e}"));
            None
        }
    }
}

fn build_entry(
    e: &EntryDecl,
    group: &FgAbGroup,
    groups: &BTreeMap<(u32, u32), FgAbGroup>,
    ring: &StableRing,
    c: &mut Collector,
) -> SphereGroupEntry {
    let (m, q) = (e.m, e.q);
    let moduli = group.moduli();
    let mut annotations = Vec::new();
    for (g, &order) in e.generators.iter().zip(&moduli) {
        let path = format!("{}/{}", entry_path(m, q), g.name);
        let mut a = Annotation::empty();
        a.source = g.source.clone();
        if let Some(v) = &g.susp {
            match resolve(groups, m + 1, q + 1) {
                None => c.push("untabulated-target", &path, format!("suspension target {} is not tabulated", entry_path(m + 1, q + 1))),
                Some(t) => a.suspension = vector(c, &path, "susp", &t, v, order),
            }
        }
        if let Some((d, v)) = &g.stab {
            if *d != m - q {
                c.push("degree", &path, format!("stab degree {d}, expected m - q = {}", m - q));
            } else if let Some(t) = stem_group(ring, c, &path, "stab", *d) {
                a.stabilization = vector(c, &path, "stab", &t, v, order)
                    .map(|x| ring.element(*d, x.coeffs().to_vec()).expect("validated"));
            }
        }
        for gd in &g.gamma {
            let kmax = k_max(m, q).unwrap_or(0);
            if gd.k < 2 || gd.k > kmax {
                c.push("degree", &path, format!("gamma index {} outside 2..={kmax}", gd.k));
                continue;
            }
            let expected = gamma_degree(m, q, gd.k).expect("k ≤ K_max");
            if gd.degree != expected {
                c.push(
                    "degree",
                    &path,
                    format!("gamma {} degree {}, expected m - 1 - k(q - 1) = {expected}", gd.k, gd.degree),
                );
            } else if let Some(t) = stem_group(ring, c, &path, "gamma", expected) {
                if let Some(x) = vector(c, &path, &format!("gamma {}", gd.k), &t, &gd.coeffs, order) {
                    a.gamma.insert(gd.k, ring.element(expected, x.coeffs().to_vec()).expect("validated"));
                }
            }
        }
        if let Some(v) = &g.antip {
            a.antipodal = vector(c, &path, "antip", group, v, order);
        }
        annotations.push(a);
    }
    SphereGroupEntry {
        m,
        q,
        group: group.clone(),
        generator_names: e.generators.iter().map(|g| g.name.clone()).collect(),
        annotations,
        source: e.source.clone(),
        closed_form: false,
    }
}

/// Builds the table set, collecting every structural violation.
pub(crate) fn build(file: &TableFile) -> (Option<TableSet>, Vec<Violation>) {
    let mut c = Collector(Vec::new());

    let mut seen = BTreeSet::new();
    let mut gen_names = BTreeSet::new();
    let good_stems: Vec<StemDecl> =
        file.stems.iter().filter(|s| check_stem(s, &mut seen, &mut gen_names, &mut c)).cloned().collect();
    let ring0 = StableRing::from_decls(&good_stems, &[]).expect("stems checked");

    let mut good_products = Vec::new();
    let mut pairs = BTreeSet::new();
    for p in &file.products {
        let path = format!("prod {} {}", p.left, p.right);
        let (Ok(a), Ok(b)) = (ring0.generator_element(&p.left), ring0.generator_element(&p.right)) else {
            c.push("unknown-generator", &path, "factor is not a stable generator");
            continue;
        };
        if !pairs.insert((p.left.clone(), p.right.clone())) {
            c.push("duplicate", &path, "declared twice");
            continue;
        }
        let expected = a.degree() + b.degree();
        if p.degree != expected {
            c.push("degree", &path, format!("degree {}, expected {expected}", p.degree));
            continue;
        }
        if let Some(t) = stem_group(&ring0, &mut c, &path, "prod", expected) {
            if vector(&mut c, &path, "prod", &t, &p.coeffs, 0).is_some() {
                good_products.push(p.clone());
            }
        }
    }
    let ring = StableRing::from_decls(&good_stems, &good_products).expect("products checked");

    let mut seen = BTreeSet::new();
    let headers: Vec<(usize, FgAbGroup)> = file
        .entries
        .iter()
        .enumerate()
        .filter_map(|(i, e)| check_entry_header(e, &mut seen, &mut c).map(|g| (i, g)))
        .collect();
    let groups: BTreeMap<(u32, u32), FgAbGroup> =
        headers.iter().map(|(i, g)| ((file.entries[*i].m, file.entries[*i].q), g.clone())).collect();
    let entries: BTreeMap<(u32, u32), SphereGroupEntry> = headers
        .iter()
        .map(|(i, g)| {
            let e = &file.entries[*i];
            ((e.m, e.q), build_entry(e, g, &groups, &ring, &mut c))
        })
        .collect();

    let mut names = BTreeMap::new();
    for n in &file.names {
        let path = format!("name {}", n.name);
        if names.contains_key(&n.name) {
            c.push("duplicate", &path, "declared twice");
            continue;
        }
        match resolve(&groups, n.m, n.q) {
            None => c.push("untabulated-target", &path, format!("{} is not tabulated", entry_path(n.m, n.q))),
            Some(g) => {
                if let Some(v) = vector(&mut c, &path, "name", &g, &n.coeffs, 0) {
                    names.insert(n.name.clone(), SphereElement { m: n.m, q: n.q, value: v });
                }
            }
        }
    }

    if !c.0.is_empty() {
        return (None, c.0);
    }
    (Some(TableSet { file: file.clone(), stable: ring, entries, names }), vec![])
}

/// Every violation in the file: structural ones, or, if there are none,
/// the mathematical consistency checks on the loaded tables.
pub fn validate(file: &TableFile) -> ValidationReport {
    let (tables, violations) = build(file);
    let mut c = Collector(violations);
    if let Some(t) = tables {
        consistency(&t, &mut c);
    }
    ValidationReport { violations: c.0 }
}

const WHITEHEAD_ZERO: [u32; 3] = [1, 3, 7];

const HOPF_CLASSES: [(&str, Field); 3] = [("hopfR", Field::R), ("hopfC", Field::C), ("hopfH", Field::H)];

fn consistency(t: &TableSet, c: &mut Collector) {
    let ring = t.stable();
    products(ring, c);

    for e in t.entries() {
        for (i, name) in e.generator_names.iter().enumerate() {
            let path = format!("{}/{}", entry_path(e.m, e.q), name);
            let x = SphereElement { m: e.m, q: e.q, value: e.group.generator(i).expect("index") };
            generator_checks(t, e, i, &x, &path, c);
        }
    }

    hopf_diagram(t, c);
    registry(t, c);
}

fn products(ring: &StableRing, c: &mut Collector) {
    for (a, b, _) in ring.stored_products() {
        let path = format!("prod {a} {b}");
        let (x, y) = (ring.generator_element(a).expect("checked"), ring.generator_element(b).expect("checked"));
        let Ok(Product::Known(p)) = ring.multiply(&x, &y) else { continue };
        let bound = gcd(modulus(&x), modulus(&y));
        if bound != 0 && !p.scale(bound).map(|z| z.is_zero()).unwrap_or(false) {
            c.push("order-coherence", &path, format!("order of {p} does not divide {bound}"));
        }
        if let Ok(Product::Known(q)) = ring.multiply(&y, &x) {
            let sign = if x.degree() * y.degree() % 2 == 1 { -1 } else { 1 };
            if q.scale(sign).ok().as_ref() != Some(&p) {
                c.push("graded-commutativity", &path, format!("{a}·{b} = {p} but {b}·{a} = {q}"));
            }
        }
    }
}

/// Order of a stable element as an integer, 0 when infinite.
fn modulus(x: &crate::stable::StableElement) -> i64 {
    match x.order() {
        crate::fgab::ElementOrder::Finite(n) => n as i64,
        crate::fgab::ElementOrder::Infinite => 0,
    }
}

fn generator_checks(t: &TableSet, e: &SphereGroupEntry, i: usize, x: &SphereElement, path: &str, c: &mut Collector) {
    let stab = t.stabilize(x).ok();
    if let (Ok(sx), Some(s)) = (t.suspend(x), &stab) {
        if let Ok(s2) = t.stabilize(&sx) {
            if &s2 != s {
                c.push("stab-susp", path, format!("E^∞ of the suspension is {s2}, E^∞ is {s}"));
            }
        }
    }
    if e.q % 2 == 1 {
        if let Some(a) = &e.annotations[i].antipodal {
            if *a != x.value {
                c.push("antipodal-parity", path, format!("q is odd but the antipodal action sends it to {a}"));
            }
        }
    } else if let Ok(ax) = t.antipodal_compose(x) {
        if let Ok(aax) = t.antipodal_compose(&ax) {
            if aax != *x {
                c.push("antipodal-involution", path, format!("a∘a∘f = {} ≠ f", aax.value));
            }
        }
        if let (Ok(sa), Some(s)) = (t.stabilize(&ax), &stab) {
            let sign = if e.q % 2 == 1 { 1 } else { -1 };
            if s.scale(sign).ok().as_ref() != Some(&sa) {
                c.push("antipodal-stabilization", path, format!("E^∞(a∘f) = {sa}, expected ±{s} with sign (-1)^(q+1)"));
            }
        }
    }
    if let Ok(g) = t.gamma(x) {
        if let (Some(first), Some(s)) = (g.component(1), &stab) {
            if first.value.as_ref() != Some(s) {
                c.push("hopf-diagram", path, "first Γ component differs from E^∞");
            }
        }
    }
    if let Some(s) = &stab {
        for (_, field) in HOPF_CLASSES {
            let Ok(h) = hopf_stable(t.stable(), field) else { continue };
            if let Ok(Product::Unknown { left, right }) = t.stable().multiply(&h, s) {
                c.push(
                    "hopf-diagram",
                    path,
                    format!("product {left}·{right} needed for h_{field}·E^∞ is not tabulated"),
                );
            }
        }
    }
}

/// `h_K · E^∞(x) = h_K · E^∞(h_{K'})` for each registered Hopf class `x` of `K'`.
fn hopf_diagram(t: &TableSet, c: &mut Collector) {
    let ring = t.stable();
    for (name, own) in HOPF_CLASSES {
        let Ok(x) = t.named(name) else { continue };
        let path = format!("name {name}");
        let (Ok(s), Ok(expected)) = (t.stabilize(&x), hopf_stable(ring, own)) else { continue };
        for (_, field) in HOPF_CLASSES {
            let Ok(h) = hopf_stable(ring, field) else { continue };
            let lhs = ring.multiply(&h, &s).ok().and_then(Product::known);
            let rhs = ring.multiply(&h, &expected).ok().and_then(Product::known);
            if let (Some(l), Some(r)) = (lhs, rhs) {
                if l != r {
                    c.push(
                        "hopf-diagram",
                        &path,
                        format!("K = {field}: h_K·E^∞({name}) = {l} but h_K·h_{own} = {r}"),
                    );
                }
            }
        }
        if s != expected {
            c.push("hopf-class", &path, format!("E^∞({name}) = {s}, expected {expected}"));
        }
    }
}

fn registry(t: &TableSet, c: &mut Collector) {
    let expected_place = [("hopfR", (1, 1)), ("hopfC", (3, 2)), ("hopfH", (7, 4)), ("alpha1_3", (6, 3))];
    for (name, x) in t.registry() {
        let path = format!("name {name}");
        if let Some(&(_, mq)) = expected_place.iter().find(|(n, _)| *n == name) {
            if (x.m, x.q) != mq {
                c.push("registry-location", &path, format!("expected in {}", entry_path(mq.0, mq.1)));
            }
        }
        if let Some(q) = name.strip_prefix("whitehead(").and_then(|r| r.strip_suffix(')')).and_then(|d| d.parse::<u32>().ok()) {
            whitehead(t, q, x, &path, c);
        }
    }
    if let Ok(a) = t.named("alpha1_3") {
        match t.stabilize(&a) {
            Ok(s) if s.order() == crate::fgab::ElementOrder::Finite(3) => {}
            Ok(s) => c.push("alpha1_3-order", "name alpha1_3", format!("E^∞ image {s} does not have order 3")),
            Err(e) => c.push("alpha1_3-order", "name alpha1_3", e.to_string()),
        }
    }
}

fn whitehead(t: &TableSet, q: u32, x: &SphereElement, path: &str, c: &mut Collector) {
    if (x.m, x.q) != (2 * q - 1, q) {
        c.push("registry-location", path, format!("expected in {}", entry_path(2 * q - 1, q)));
        return;
    }
    if q % 2 == 1 {
        let twice_zero = x.scale(2).map(|y| y.is_zero()).unwrap_or(false);
        if !twice_zero {
            c.push("whitehead-order", path, "2[ι_q, ι_q] must vanish for odd q");
        }
    }
    let should_vanish = WHITEHEAD_ZERO.contains(&q);
    if x.is_zero() != should_vanish {
        let msg = if should_vanish { "must vanish for q = 1, 3, 7" } else { "must be nonzero for q ∉ {1, 3, 7}" };
        c.push("whitehead-order", path, msg);
    }
    if q % 2 == 1 {
        match t.suspend(x) {
            Ok(s) if !s.is_zero() => c.push("whitehead-suspension", path, format!("suspends to {s}, expected 0")),
            Ok(_) | Err(Error::MissingData(_)) | Err(Error::OutOfTabulatedRange(_)) => {}
            Err(e) => c.push("whitehead-suspension", path, e.to_string()),
        }
    }
}
