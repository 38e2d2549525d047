//! Curated unstable homotopy groups `π_m(S^q)` with per-generator
//! annotations, the stable stems they map to, and named elements.

pub mod format;
mod ops;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupElement};
use crate::stable::{StableElement, StableRing};

pub use format::{parse, ParseError, TableFile};
pub use ops::{GammaComponent, GammaValue, KernelChain, Membership};
pub use validate::{validate, ValidationReport, Violation};

/// The shipped dataset.
pub const DEFAULT_TABLES: &str = include_str!("../../data/homotopy_tables.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("syntax error: {0}")]
    Syntax(#[from] ParseError),
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub suspension: Option<GroupElement>,
    /// `None` means unannotated; a trivial target stem makes it known zero anyway.
    pub stabilization: Option<StableElement>,
    pub gamma: BTreeMap<u32, StableElement>,
    pub antipodal: Option<GroupElement>,
    pub source: Option<String>,
}

impl Annotation {
    fn empty() -> Self {
        Annotation { suspension: None, stabilization: None, gamma: BTreeMap::new(), antipodal: None, source: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereGroupEntry {
    pub m: u32,
    pub q: u32,
    pub group: FgAbGroup,
    pub generator_names: Vec<String>,
    pub annotations: Vec<Annotation>,
    pub source: Option<String>,
    /// Synthesized rather than read from the data file.
    pub closed_form: bool,
}

/// An element of `π_m(S^q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SphereElement {
    pub m: u32,
    pub q: u32,
    pub value: GroupElement,
}

impl SphereElement {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &SphereElement) -> Result<()> {
        if (self.m, self.q) != (other.m, other.q) {
            return Err(Error::domain(format!(
                "elements of π_{}(S^{}) and π_{}(S^{}) cannot be combined",
                self.m, self.q, other.m, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SphereElement) -> Result<SphereElement> {
        self.check(other)?;
        Ok(SphereElement { m: self.m, q: self.q, value: self.value.add(&other.value)? })
    }

    pub fn sub(&self, other: &SphereElement) -> Result<SphereElement> {
        self.check(other)?;
        Ok(SphereElement { m: self.m, q: self.q, value: self.value.sub(&other.value)? })
    }

    pub fn neg(&self) -> Result<SphereElement> {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Result<SphereElement> {
        Ok(SphereElement { m: self.m, q: self.q, value: self.value.scale(k)? })
    }
}

impl fmt::Display for SphereElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in π_{}(S^{})", self.value, self.m, self.q)
    }
}

/// Largest James–Hopf index `floor((m-1)/(q-1))`; undefined for `q ≤ 1`.
pub fn k_max(m: u32, q: u32) -> Option<u32> {
    (q >= 2 && m >= 1).then(|| (m - 1) / (q - 1))
}

/// Stable degree of the `k`-th James–Hopf component, `m - 1 - k(q-1)`.
pub fn gamma_degree(m: u32, q: u32, k: u32) -> Option<u32> {
    let d = m as i64 - 1 - k as i64 * (q as i64 - 1);
    u32::try_from(d).ok()
}

/// `(m, q)` pairs answered by closed forms instead of the data file.
pub fn is_closed_form(m: u32, q: u32) -> bool {
    q <= 1 || m <= q
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSet {
    file: TableFile,
    stable: StableRing,
    entries: BTreeMap<(u32, u32), SphereGroupEntry>,
    names: BTreeMap<String, SphereElement>,
}

/// Closed-form names resolved in code rather than the registry.
const CLOSED_NAMES: &[&str] = &["whitehead(1)"];

impl TableSet {
    pub fn empty() -> Self {
        TableSet {
            file: TableFile::default(),
            stable: StableRing::empty(),
            entries: BTreeMap::new(),
            names: BTreeMap::new(),
        }
    }

    pub fn stable(&self) -> &StableRing {
        &self.stable
    }

    pub fn file(&self) -> &TableFile {
        &self.file
    }

    pub fn serialize(&self) -> String {
        self.file.serialize()
    }

    /// Tabulated entries read from the data file.
    pub fn entries(&self) -> impl Iterator<Item = &SphereGroupEntry> {
        self.entries.values()
    }

    pub fn lookup(&self, m: u32, q: u32) -> Result<SphereGroupEntry> {
        if m == 0 {
            return Err(Error::domain("π_0 is not a group; m must be at least 1"));
        }
        if let Some(e) = self.closed_form(m, q) {
            return Ok(e);
        }
        self.entries
            .get(&(m, q))
            .cloned()
            .ok_or_else(|| Error::OutOfTabulatedRange(format!("π_{m}(S^{q})")))
    }

    fn closed_form(&self, m: u32, q: u32) -> Option<SphereGroupEntry> {
        if !is_closed_form(m, q) {
            return None;
        }
        let trivial = |source: &str| SphereGroupEntry {
            m,
            q,
            group: FgAbGroup::trivial(),
            generator_names: vec![],
            annotations: vec![],
            source: Some(source.to_string()),
            closed_form: true,
        };
        if q == 0 {
            return Some(trivial("S^0 is discrete"));
        }
        if m < q {
            return Some(trivial("cellular approximation"));
        }
        if m > q {
            return Some(trivial("universal cover of S^1 is contractible"));
        }
        let z = FgAbGroup::integers();
        let sign = if q % 2 == 1 { 1 } else { -1 };
        let annotation = Annotation {
            suspension: Some(z.element(vec![1]).expect("length 1")),
            stabilization: self.stable.element(0, vec![1]).ok(),
            gamma: BTreeMap::new(),
            antipodal: Some(z.element(vec![sign]).expect("length 1")),
            source: None,
        };
        Some(SphereGroupEntry {
            m,
            q,
            group: z,
            generator_names: vec![format!("iota_{q}")],
            annotations: vec![annotation],
            source: Some("degree".to_string()),
            closed_form: true,
        })
    }

    pub fn element(&self, m: u32, q: u32, coeffs: Vec<i64>) -> Result<SphereElement> {
        let e = self.lookup(m, q)?;
        Ok(SphereElement { m, q, value: e.group.element(coeffs)? })
    }

    pub fn zero(&self, m: u32, q: u32) -> Result<SphereElement> {
        let e = self.lookup(m, q)?;
        Ok(SphereElement { m, q, value: e.group.zero() })
    }

    /// Generator `name` of `π_m(S^q)`.
    pub fn generator(&self, m: u32, q: u32, name: &str) -> Result<SphereElement> {
        let e = self.lookup(m, q)?;
        let i = e.generator_names.iter().position(|g| g == name).ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            available: e.generator_names.join(", "),
        })?;
        Ok(SphereElement { m, q, value: e.group.generator(i)? })
    }

    /// Registered names plus closed-form ones.
    pub fn names(&self) -> Vec<String> {
        self.names.keys().cloned().chain(CLOSED_NAMES.iter().map(|s| s.to_string())).collect()
    }

    pub fn named(&self, name: &str) -> Result<SphereElement> {
        if let Some(x) = self.names.get(name) {
            return Ok(x.clone());
        }
        if name == "whitehead(1)" {
            return self.zero(1, 1);
        }
        Err(Error::UnknownName { name: name.to_string(), available: self.names().join(", ") })
    }

    /// Registered elements in name order.
    pub fn registry(&self) -> impl Iterator<Item = (&str, &SphereElement)> {
        self.names.iter().map(|(n, x)| (n.as_str(), x))
    }
}

/// Parses and structurally checks a table file; all-or-nothing.
pub fn load_tables(source: &[u8]) -> std::result::Result<TableSet, LoadError> {
    let text = std::str::from_utf8(source).map_err(|e| {
        LoadError::Syntax(ParseError { line: 1, column: 1, message: format!("invalid UTF-8: {e}") })
    })?;
    from_file(parse(text)?)
}

pub fn from_file(file: TableFile) -> std::result::Result<TableSet, LoadError> {
    let (tables, violations) = validate::build(&file);
    match (tables, violations.into_iter().next()) {
        (Some(t), None) => Ok(t),
        (_, Some(v)) => Err(LoadError::Semantic { path: v.path, message: v.message }),
        (None, None) => unreachable!("a failed build always reports a violation"),
    }
}

/// The shipped dataset, loaded once per call.
pub fn default_tables() -> TableSet {
    load_tables(DEFAULT_TABLES.as_bytes()).expect("shipped dataset is valid")
}
