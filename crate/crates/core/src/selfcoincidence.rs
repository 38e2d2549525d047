//! Looseness of self-coincidence pairs `(f, f)` and an exact check of the
//! fixed-point-free self-map `s` of the Stiefel-type construction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projective::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Loose,
    NotLoose,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Looseness {
    pub verdict: Verdict,
    pub reason: String,
}

impl Looseness {
    fn new(verdict: Verdict, reason: impl Into<String>) -> Self {
        Looseness { verdict, reason: reason.into() }
    }

    pub fn is_loose(&self) -> bool {
        self.verdict == Verdict::Loose
    }
}

/// `n'` odd for `R`, `C`; `n' ≡ 23 (mod 24)` for `H`.
fn has_section(field: Field, n_prime: u32) -> bool {
    match field {
        Field::R | Field::C => n_prime % 2 == 1,
        Field::H => n_prime % 24 == 23,
    }
}

/// Whether every pair `(f, f)` with `f: S^m → KP(n')` is loose.
pub fn self_loose(field: Field, m: u32, n_prime: u32) -> Looseness {
    let n = field.d() * n_prime;
    if (m, n) == (2, 2) {
        return Looseness::new(
            Verdict::Unknown,
            "m = n = 2: a coincidence-free deformation of (f, f) would need a nowhere-zero \
             tangent field along f, which the degree of f obstructs in general",
        );
    }
    if has_section(field, n_prime) {
        let why = match field {
            Field::H => "n' ≡ 23 mod 24: the fiber bundle admits a nowhere-vanishing section",
            _ => "n' odd: s(x) ∉ K·x gives a fixed-point-free deformation",
        };
        return Looseness::new(Verdict::Loose, why);
    }
    if n <= 3 {
        return Looseness::new(Verdict::Loose, format!("n = {n} ≤ 3"));
    }
    Looseness::new(
        Verdict::Unknown,
        "outside the section congruences and n > 3; looseness of (f, f) is not decided here",
    )
}

/// Looseness of `(p, p)` for the fiber projection `p: S^q → KP(n')`.
pub fn fiber_projection_self_loose(field: Field, n_prime: u32) -> Result<Looseness> {
    if n_prime < 1 {
        return Err(Error::domain("n' must be at least 1"));
    }
    Ok(if has_section(field, n_prime) {
        Looseness::new(Verdict::Loose, "the associated bundle has a section")
    } else {
        Looseness::new(Verdict::NotLoose, "the associated bundle has no section")
    })
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a + b i + c j + d k` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl Quaternion {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quaternion::new(q(a), q(b), q(c), q(d))
    }

    pub fn real(a: BigRational) -> Self {
        Quaternion::new(a, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn zero() -> Self {
        Quaternion::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quaternion::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Quaternion::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quaternion::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quaternion::from_ints(0, 0, 0, 1)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    /// `|x|²`.
    pub fn norm2(&self) -> BigRational {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Quaternion::new(&self.a * r, &self.b * r, &self.c * r, &self.d * r)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Lies in the subfield `K` (spanned by `1`, by `1, i`, or everything).
    pub fn in_field(&self, field: Field) -> bool {
        match field {
            Field::R => self.b.is_zero() && self.c.is_zero() && self.d.is_zero(),
            Field::C => self.c.is_zero() && self.d.is_zero(),
            Field::H => true,
        }
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in [(&self.a, ""), (&self.b, "i"), (&self.c, "j"), (&self.d, "k")] {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (mag.is_one(), unit) {
                (true, "") => "1".to_string(),
                (true, u) => u.to_string(),
                (false, u) => format!("{mag}{u}"),
            };
            let sign = match (out.is_empty(), c.is_negative()) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        f.write_str(if out.is_empty() { "0" } else { &out })
    }
}

/// A point of `K^{n'+1}`, scalars stored as quaternions confined to `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KVector {
    pub field: Field,
    pub entries: Vec<Quaternion>,
}

impl KVector {
    pub fn new(field: Field, entries: Vec<Quaternion>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("a vector needs at least one coordinate"));
        }
        if let Some(x) = entries.iter().find(|x| !x.in_field(field)) {
            return Err(Error::domain(format!("{x} is not a scalar of {field}")));
        }
        Ok(KVector { field, entries })
    }

    pub fn norm2(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, x| acc + x.norm2())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Quaternion::is_zero)
    }

    /// `λ · x`, coordinatewise left multiplication.
    pub fn left_mul(&self, lambda: &Quaternion) -> KVector {
        KVector { field: self.field, entries: self.entries.iter().map(|x| lambda * x).collect() }
    }

    pub fn sub(&self, other: &KVector) -> KVector {
        KVector { field: self.field, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Display for KVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `(x_1, x_2; x_3, x_4; …) ↦ (-x̄_2, x̄_1; -x̄_4, x̄_3; …)`.
pub fn selfmap_s(x: &KVector) -> Result<KVector> {
    if x.entries.len() % 2 == 1 {
        return Err(Error::domain(format!(
            "n' = {} is even: the last coordinate has no partner",
            x.entries.len() - 1
        )));
    }
    let mut out = Vec::with_capacity(x.entries.len());
    for pair in x.entries.chunks(2) {
        out.push(-&pair[1].conj());
        out.push(pair[0].conj());
    }
    Ok(KVector { field: x.field, entries: out })
}

/// Squared distance from `s(x/|x|)` to the line `K · x/|x|`, with the
/// closest multiplier `λ`.
pub fn residual_with_witness(x: &KVector) -> Result<(BigRational, Quaternion)> {
    if x.is_zero() {
        return Err(Error::domain("the zero vector has no direction"));
    }
    let s = selfmap_s(x)?;
    let n2 = x.norm2();
    let inner = s.entries.iter().zip(&x.entries).fold(Quaternion::zero(), |acc, (si, xi)| &acc + &(si * &xi.conj()));
    let lambda = inner.scale(&(BigRational::one() / &n2));
    let r = s.sub(&x.left_mul(&lambda)).norm2() / &n2;
    Ok((r, lambda))
}

pub fn residual_not_parallel(x: &KVector) -> Result<BigRational> {
    residual_with_witness(x).map(|(r, _)| r)
}

/// `x = (j, k)` and `λ = i` with `s(x) = λ·x`, checked exactly.
pub fn quaternion_counterexample() -> (KVector, Quaternion) {
    let x = KVector::new(Field::H, vec![Quaternion::j(), Quaternion::k()]).expect("quaternionic entries");
    let lambda = Quaternion::i();
    let s = selfmap_s(&x).expect("two coordinates");
    assert_eq!(s, x.left_mul(&lambda), "s(j, k) = i·(j, k)");
    (x, lambda)
}

/// A rational point on the unit sphere of `K^{n'+1}` by inverse stereographic
/// projection of a random rational point.
pub fn sample_unit_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n_prime: u32) -> KVector {
    let d = field.d() as usize;
    let dim = d * (n_prime as usize + 1);
    let t: Vec<BigRational> = (0..dim - 1)
        .map(|_| BigRational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=9))))
        .collect();
    let s2 = t.iter().fold(BigRational::zero(), |acc, x| acc + x * x);
    let denom = &s2 + BigRational::one();
    let mut coords: Vec<BigRational> = t.iter().map(|x| q(2) * x / &denom).collect();
    coords.push((&s2 - BigRational::one()) / &denom);
    let zero = BigRational::zero();
    let entries = coords
        .chunks(d)
        .map(|c| {
            let get = |i: usize| c.get(i).cloned().unwrap_or_else(|| zero.clone());
            Quaternion::new(get(0), get(1), get(2), get(3))
        })
        .collect();
    KVector { field, entries }
}
