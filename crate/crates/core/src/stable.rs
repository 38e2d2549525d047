//! Stable stems `π_k^S` for `0 ≤ k ≤ 19` with a partial product table.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fgab::{cmul, gcd, ElementOrder, FgAbGroup, GroupElement};
use crate::homotopy::format::{ProductDecl, StemDecl};

pub const MAX_STEM: u32 = 19;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableStem {
    pub degree: u32,
    pub group: FgAbGroup,
    pub generator_names: Vec<String>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableElement {
    degree: u32,
    value: GroupElement,
}

impl StableElement {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn value(&self) -> &GroupElement {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn order(&self) -> ElementOrder {
        self.value.order()
    }

    fn check_degree(&self, other: &StableElement) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::domain(format!(
                "stable elements of degrees {} and {} cannot be added",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &StableElement) -> Result<StableElement> {
        self.check_degree(other)?;
        Ok(StableElement { degree: self.degree, value: self.value.add(&other.value)? })
    }

    pub fn sub(&self, other: &StableElement) -> Result<StableElement> {
        self.check_degree(other)?;
        Ok(StableElement { degree: self.degree, value: self.value.sub(&other.value)? })
    }

    pub fn scale(&self, k: i64) -> Result<StableElement> {
        Ok(StableElement { degree: self.degree, value: self.value.scale(k)? })
    }
}

impl fmt::Display for StableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in π_{}^S", self.value, self.degree)
    }
}

/// Outcome of a product: either determined by the table or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Known(StableElement),
    Unknown { left: String, right: String },
}

impl Product {
    pub fn known(self) -> Option<StableElement> {
        match self {
            Product::Known(x) => Some(x),
            Product::Unknown { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableRing {
    stems: BTreeMap<u32, StableStem>,
    /// Generator name to (degree, index).
    generators: BTreeMap<String, (u32, usize)>,
    products: BTreeMap<(String, String), Vec<i64>>,
}

/// Derived names that are not stem generators.
const ALIASES: &[&str] = &["two", "eta3", "einf_alpha1_3"];

impl StableRing {
    pub fn empty() -> Self {
        StableRing { stems: BTreeMap::new(), generators: BTreeMap::new(), products: BTreeMap::new() }
    }

    pub fn from_decls(stems: &[StemDecl], products: &[ProductDecl]) -> Result<Self> {
        let mut ring = StableRing::empty();
        for s in stems {
            if s.degree > MAX_STEM {
                return Err(Error::domain(format!("stem {} exceeds the supported range", s.degree)));
            }
            let group = FgAbGroup::new(s.free_rank, s.torsion.clone())?;
            if s.generators.len() != group.ngens() {
                return Err(Error::domain(format!(
                    "stem {}: {} generator names for {} generators",
                    s.degree,
                    s.generators.len(),
                    group.ngens()
                )));
            }
            for (i, g) in s.generators.iter().enumerate() {
                if ring.generators.insert(g.clone(), (s.degree, i)).is_some() {
                    return Err(Error::domain(format!("stable generator `{g}` declared twice")));
                }
            }
            let stem = StableStem {
                degree: s.degree,
                group,
                generator_names: s.generators.clone(),
                source: s.source.clone(),
            };
            if ring.stems.insert(s.degree, stem).is_some() {
                return Err(Error::domain(format!("stem {} declared twice", s.degree)));
            }
        }
        for p in products {
            let (da, _) = ring.generator_index(&p.left)?;
            let (db, _) = ring.generator_index(&p.right)?;
            if p.degree != da + db {
                return Err(Error::domain(format!(
                    "product {}·{}: degree {} should be {}",
                    p.left,
                    p.right,
                    p.degree,
                    da + db
                )));
            }
            ring.stem(p.degree)?.group.element(p.coeffs.clone())?;
            let key = (p.left.clone(), p.right.clone());
            if ring.products.insert(key, p.coeffs.clone()).is_some() {
                return Err(Error::domain(format!("product {}·{} declared twice", p.left, p.right)));
            }
        }
        Ok(ring)
    }

    pub fn stem(&self, k: u32) -> Result<&StableStem> {
        if k > MAX_STEM {
            return Err(Error::OutOfTabulatedRange(format!("stable stem π_{k}^S")));
        }
        self.stems
            .get(&k)
            .ok_or_else(|| Error::OutOfTabulatedRange(format!("stable stem π_{k}^S (not in data)")))
    }

    pub fn stems(&self) -> impl Iterator<Item = &StableStem> {
        self.stems.values()
    }

    pub fn zero(&self, k: u32) -> Result<StableElement> {
        Ok(StableElement { degree: k, value: self.stem(k)?.group.zero() })
    }

    pub fn element(&self, k: u32, coeffs: Vec<i64>) -> Result<StableElement> {
        Ok(StableElement { degree: k, value: self.stem(k)?.group.element(coeffs)? })
    }

    fn generator_index(&self, name: &str) -> Result<(u32, usize)> {
        self.generators.get(name).copied().ok_or_else(|| self.unknown_name(name))
    }

    fn generator(&self, k: u32, i: usize) -> Result<StableElement> {
        Ok(StableElement { degree: k, value: self.stem(k)?.group.generator(i)? })
    }

    fn unknown_name(&self, name: &str) -> Error {
        Error::UnknownName { name: name.to_string(), available: self.names().join(", ") }
    }

    /// Stem generator names followed by the derived aliases.
    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<(u32, usize, String)> =
            self.generators.iter().map(|(n, &(k, i))| (k, i, n.clone())).collect();
        v.sort();
        v.into_iter().map(|(_, _, n)| n).chain(ALIASES.iter().map(|s| s.to_string())).collect()
    }

    /// A stem generator or one of the aliases `two`, `eta3` (= η·η²) and
    /// `einf_alpha1_3` (= 8ν, the sign convention used throughout).
    pub fn named(&self, name: &str) -> Result<StableElement> {
        if let Some(&(k, i)) = self.generators.get(name) {
            return self.generator(k, i);
        }
        match name {
            "two" => self.named("iota")?.scale(2),
            "eta3" => {
                let (eta, eta2) = (self.named("eta")?, self.named("eta2")?);
                self.multiply(&eta, &eta2)?
                    .known()
                    .ok_or_else(|| Error::MissingData("product eta·eta2".into()))
            }
            "einf_alpha1_3" => self.named("nu")?.scale(8),
            _ => Err(self.unknown_name(name)),
        }
    }

    /// Product of two generators given by name and position.
    fn generator_product(&self, (da, ia): (u32, usize), (db, ib): (u32, usize)) -> Option<Result<StableElement>> {
        let ga = &self.stems[&da].generator_names[ia];
        let gb = &self.stems[&db].generator_names[ib];
        let k = da + db;
        if da == 0 && self.stems[&0].group.free_rank() == 1 {
            return Some(self.generator(db, ib));
        }
        if db == 0 && self.stems[&0].group.free_rank() == 1 {
            return Some(self.generator(da, ia));
        }
        if let Some(c) = self.products.get(&(ga.clone(), gb.clone())) {
            return Some(self.element(k, c.clone()));
        }
        if let Some(c) = self.products.get(&(gb.clone(), ga.clone())) {
            let sign = if (da * db) % 2 == 1 { -1 } else { 1 };
            return Some(self.element(k, c.clone()).and_then(|x| x.scale(sign)));
        }
        None
    }

    /// Bilinear extension of the stored generator products.
    ///
    /// The unit `iota`, trivial target stems and the order bound
    /// `ord(ab) | gcd(ord a, ord b)` resolve a term without a table entry;
    /// anything else missing makes the product unknown.
    pub fn multiply(&self, a: &StableElement, b: &StableElement) -> Result<Product> {
        let k = a.degree + b.degree;
        let target = self.stem(k)?;
        let mut acc = target.group.zero();
        if target.group.is_trivial() {
            return Ok(Product::Known(StableElement { degree: k, value: acc }));
        }
        let sa = self.stem(a.degree)?;
        let sb = self.stem(b.degree)?;
        let (ma, mb) = (sa.group.moduli(), sb.group.moduli());
        for (i, &ca) in a.value.coeffs().iter().enumerate() {
            for (j, &cb) in b.value.coeffs().iter().enumerate() {
                let c = cmul(ca, cb)?;
                if c == 0 {
                    continue;
                }
                match self.generator_product((a.degree, i), (b.degree, j)) {
                    Some(p) => acc = acc.add(&p?.value.scale(c)?)?,
                    None => {
                        let bound = gcd(ma[i], mb[j]);
                        if bound != 0 && c % bound == 0 {
                            continue;
                        }
                        return Ok(Product::Unknown {
                            left: sa.generator_names[i].clone(),
                            right: sb.generator_names[j].clone(),
                        });
                    }
                }
            }
        }
        Ok(Product::Known(StableElement { degree: k, value: acc }))
    }

    /// Stored generator products `(a, b, coefficients)`.
    pub(crate) fn stored_products(&self) -> impl Iterator<Item = (&str, &str, &[i64])> {
        self.products.iter().map(|((a, b), c)| (a.as_str(), b.as_str(), c.as_slice()))
    }

    pub(crate) fn generator_element(&self, name: &str) -> Result<StableElement> {
        let (k, i) = self.generator_index(name)?;
        self.generator(k, i)
    }
}
