//! Projective targets `KP(n')`, their Reidemeister numbers, the stable Hopf
//! classes and the lift/correction description of map classes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::GroupElement;
use crate::homotopy::{SphereElement, TableSet};
use crate::invariants::InvariantValue;
use crate::stable::{StableElement, StableRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// `dim_R K`.
    pub fn d(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            _ => Err(Error::domain(format!("unknown field `{s}` (expected R, C or H)"))),
        }
    }
}

/// `KP(n')` with `n = d·n'` and fiber-bundle sphere `S^q`, `q = n + d - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProjSpace {
    pub field: Field,
    pub n_prime: u32,
    pub n: u32,
    pub q: u32,
}

pub fn space(field: Field, n_prime: u32) -> Result<ProjSpace> {
    if n_prime < 1 {
        return Err(Error::domain("n' must be at least 1"));
    }
    let n = field.d() * n_prime;
    Ok(ProjSpace { field, n_prime, n, q: n + field.d() - 1 })
}

impl ProjSpace {
    /// `#π_1(KP(n'))`; infinite for `RP(1) = S^1`.
    pub fn reidemeister(&self) -> InvariantValue {
        match (self.field, self.n) {
            (Field::R, 1) => InvariantValue::Infinite,
            (Field::R, _) => InvariantValue::Finite(2),
            _ => InvariantValue::Finite(1),
        }
    }

    /// The sphere `KP(1) = S^d` when `n' = 1`.
    pub fn as_sphere(&self) -> Option<u32> {
        (self.n_prime == 1).then_some(self.n)
    }
}

impl fmt::Display for ProjSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}P({})", self.field, self.n_prime)
    }
}

/// Reidemeister number of maps `S^m → KP(n')`, `m ≥ 2`.
pub fn reidemeister(space: &ProjSpace, m: u32) -> Result<InvariantValue> {
    if m < 2 {
        return Err(Error::domain("the domain sphere must be simply connected (m ≥ 2)"));
    }
    Ok(space.reidemeister())
}

/// Stable class of the Hopf map: `2`, `η`, `ν`.
pub fn hopf_stable(stable: &StableRing, field: Field) -> Result<StableElement> {
    stable.named(match field {
        Field::R => "two",
        Field::C => "eta",
        Field::H => "nu",
    })
}

/// Whether every class of `π_m(KP(n'))` is a unique lift plus fiber correction:
/// `n' ≥ 2` or `π_{m-1}(S^{d-1}) = 0`.
pub fn decompose_valid(tables: &TableSet, space: &ProjSpace, m: u32) -> Result<bool> {
    if m < 2 {
        return Err(Error::domain("m must be at least 2"));
    }
    if space.n_prime >= 2 {
        return Ok(true);
    }
    Ok(tables.lookup(m - 1, space.field.d() - 1)?.group.is_trivial())
}

/// A class in `π_m(KP(n'))` given by its lift to `π_m(S^q)` and a fiber
/// correction in `π_{m-1}(S^{d-1})`. The correction is carried along for
/// display only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapClass {
    pub space: ProjSpace,
    pub m: u32,
    pub lift: SphereElement,
    pub correction: GroupElement,
}

impl MapClass {
    pub fn new(tables: &TableSet, space: ProjSpace, m: u32, lift: SphereElement) -> Result<Self> {
        let correction = tables.lookup(m - 1, space.field.d() - 1)?.group.zero();
        Self::with_correction(tables, space, m, lift, correction)
    }

    pub fn with_correction(
        tables: &TableSet,
        space: ProjSpace,
        m: u32,
        lift: SphereElement,
        correction: GroupElement,
    ) -> Result<Self> {
        if (lift.m, lift.q) != (m, space.q) {
            return Err(Error::domain(format!(
                "lift {lift} is not in π_{m}(S^{}) for {space}",
                space.q
            )));
        }
        if !decompose_valid(tables, &space, m)? {
            return Err(Error::domain(format!(
                "{space} with m = {m}: n' = 1 and π_{}(S^{}) ≠ 0, classes do not decompose",
                m - 1,
                space.field.d() - 1
            )));
        }
        let fiber = tables.lookup(m - 1, space.field.d() - 1)?.group;
        if *correction.group() != fiber {
            return Err(Error::domain(format!("correction {correction} is not in {fiber}")));
        }
        Ok(MapClass { space, m, lift, correction })
    }

    /// Constant map: zero lift and zero correction.
    pub fn constant(tables: &TableSet, space: ProjSpace, m: u32) -> Result<Self> {
        let lift = tables.zero(m, space.q)?;
        Self::new(tables, space, m, lift)
    }

    pub fn is_null(&self) -> bool {
        self.lift.is_zero() && self.correction.is_zero()
    }
}
