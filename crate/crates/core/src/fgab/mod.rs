//! Finitely generated abelian groups in invariant-factor form.
//!
//! A group is `Z^r ⊕ Z_{t_1} ⊕ ... ⊕ Z_{t_s}` with `t_i | t_{i+1}`. Element
//! coordinates list the free part first, then the torsion part, with torsion
//! coordinates kept in `[0, t_i)`.

mod matrix;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

pub use matrix::{integer_kernel, smith_normal_form, solve_integer, IntMatrix, Snf};
pub(crate) use matrix::{cadd, cmul, gcd, lcm};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<i64>,
}

impl FgAbGroup {
    /// Checks the invariant-factor normalization.
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(&t) = torsion.iter().find(|&&t| t < 2) {
            return Err(Error::domain(format!("torsion order {t} is below 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::domain(format!(
                "torsion orders not in invariant-factor form: {} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    /// Normalizes an arbitrary list of cyclic orders (1 is dropped, 0 means `Z`).
    pub fn from_cyclic_orders(orders: &[i64]) -> Result<Self> {
        let free = orders.iter().filter(|&&t| t == 0).count();
        let finite: Vec<i64> = orders.iter().copied().filter(|&t| t != 0).map(i64::abs).collect();
        Ok(FgAbGroup { free_rank: free, torsion: invariant_factors(&finite)? })
    }

    pub fn trivial() -> Self {
        FgAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn integers() -> Self {
        FgAbGroup { free_rank: 1, torsion: vec![] }
    }

    /// `Z_n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: i64) -> Result<Self> {
        Self::from_cyclic_orders(&[n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of each generator as a relation modulus (0 for free generators).
    pub fn moduli(&self) -> Vec<i64> {
        std::iter::repeat_n(0, self.free_rank).chain(self.torsion.iter().copied()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of elements, `None` for infinite groups or when it does not fit in `u64`.
    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.torsion.iter().try_fold(1u64, |acc, &t| acc.checked_mul(t as u64))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coeffs: vec![0; self.ngens()] }
    }

    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        if i >= self.ngens() {
            return Err(Error::domain(format!("generator index {i} out of range for {self}")));
        }
        let mut c = vec![0; self.ngens()];
        c[i] = 1;
        self.element(c)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.ngens()).map(|i| self.generator(i).expect("index in range")).collect()
    }

    /// Canonical element with the given coordinates.
    pub fn element(&self, coeffs: Vec<i64>) -> Result<GroupElement> {
        if coeffs.len() != self.ngens() {
            return Err(Error::domain(format!(
                "coefficient vector of length {} for {} (expects {})",
                coeffs.len(),
                self,
                self.ngens()
            )));
        }
        let mut coeffs = coeffs;
        for (c, t) in coeffs[self.free_rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(*t);
        }
        Ok(GroupElement { group: self.clone(), coeffs })
    }

    /// All elements of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::domain(format!("{self} is infinite")));
        }
        let mut out = vec![self.zero()];
        for (i, &t) in self.torsion.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * t as usize);
            for e in &out {
                for k in 0..t {
                    let mut c = e.coeffs.clone();
                    c[i] = k;
                    next.push(GroupElement { group: self.clone(), coeffs: c });
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new(self.clone(), self.generators()).expect("own generators")
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { ambient: self.clone(), generators: vec![] }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = std::iter::repeat_n("Z".to_string(), self.free_rank)
            .chain(self.torsion.iter().map(|t| format!("Z_{t}")))
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Invariant factors (each ≥ 2, dividing the next) of `⊕ Z_{orders[i]}`.
pub fn invariant_factors(orders: &[i64]) -> Result<Vec<i64>> {
    let n = orders.len();
    let mut diag = IntMatrix::zeros(n, n);
    for (i, &t) in orders.iter().enumerate() {
        diag.set(i, i, t);
    }
    let snf = smith_normal_form(&diag)?;
    Ok(snf.diagonal().into_iter().filter(|&d| d != 1).collect())
}

/// Direct sum renormalized to invariant-factor form.
pub fn direct_sum(groups: &[FgAbGroup]) -> Result<FgAbGroup> {
    let orders: Vec<i64> = groups.iter().flat_map(|g| g.moduli()).collect();
    FgAbGroup::from_cyclic_orders(&orders)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FgAbGroup,
    coeffs: Vec<i64>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_parent(&self, other: &GroupElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::domain(format!(
                "elements live in different groups ({} vs {})",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_parent(other)?;
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| cadd(a, b))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(c)
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg()?)
    }

    pub fn neg(&self) -> Result<GroupElement> {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Result<GroupElement> {
        let c = self.coeffs.iter().map(|&a| cmul(a, k)).collect::<Result<Vec<_>>>()?;
        self.group.element(c)
    }

    pub fn order(&self) -> ElementOrder {
        if self.coeffs[..self.group.free_rank].iter().any(|&c| c != 0) {
            return ElementOrder::Infinite;
        }
        let ord = self.coeffs[self.group.free_rank..]
            .iter()
            .zip(&self.group.torsion)
            .fold(1i64, |acc, (&c, &t)| {
                let o = t / gcd(c, t);
                lcm(acc, o).expect("orders divide the largest invariant factor")
            });
        ElementOrder::Finite(ord as u64)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", c.join(","))
    }
}

/// A homomorphism given on generators: column `j` holds the image of domain generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::domain(format!(
                "matrix shape {}x{} does not fit {} -> {}",
                matrix.rows(),
                matrix.cols(),
                domain,
                codomain
            )));
        }
        let mut m = matrix;
        let cod_mod = codomain.moduli();
        for (i, &c) in cod_mod.iter().enumerate() {
            if c != 0 {
                for j in 0..m.cols() {
                    m.set(i, j, m.get(i, j).rem_euclid(c));
                }
            }
        }
        let h = Homomorphism { domain, codomain, matrix: m };
        for (j, &t) in h.domain.moduli().iter().enumerate() {
            if t == 0 {
                continue;
            }
            let img = h.codomain.element(h.matrix.column(j))?;
            if !img.scale(t)?.is_zero() {
                return Err(Error::domain(format!(
                    "not well defined: generator {j} has order {t} but {t}·{img} ≠ 0 in {}",
                    h.codomain
                )));
            }
        }
        Ok(h)
    }

    /// Builds the homomorphism from generator images.
    pub fn from_images(
        domain: FgAbGroup,
        codomain: FgAbGroup,
        images: &[GroupElement],
    ) -> Result<Self> {
        if images.iter().any(|x| x.group != codomain) {
            return Err(Error::domain("image outside the codomain"));
        }
        let cols: Vec<Vec<i64>> = images.iter().map(|x| x.coeffs.clone()).collect();
        let m = IntMatrix::from_columns(&cols, codomain.ngens())?;
        Homomorphism::new(domain, codomain, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homomorphism { domain: g.clone(), codomain: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(domain: &FgAbGroup, codomain: &FgAbGroup) -> Self {
        Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.ngens(), domain.ngens()),
        }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group != self.domain {
            return Err(Error::domain(format!("{} is not an element of {}", x, self.domain)));
        }
        self.codomain.element(self.matrix.mul_vec(&x.coeffs)?)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.codomain != self.domain {
            return Err(Error::domain(format!(
                "cannot compose: {} is not {}",
                inner.codomain, self.domain
            )));
        }
        Homomorphism::new(inner.domain.clone(), self.codomain.clone(), self.matrix.mul(&inner.matrix)?)
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        joint_kernel(&self.domain, &[self])
    }

    pub fn image(&self) -> Result<Subgroup> {
        let gens = self
            .domain
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::new(self.codomain.clone(), gens)
    }
}

/// Kernel of `x ↦ (h_1(x), ..., h_k(x))` without forming the product group.
pub fn joint_kernel(domain: &FgAbGroup, homs: &[&Homomorphism]) -> Result<Subgroup> {
    let n = domain.ngens();
    let mut stacked = IntMatrix::zeros(0, n);
    let mut moduli = Vec::new();
    for h in homs {
        if h.domain != *domain {
            return Err(Error::domain("joint kernel: homomorphisms have different domains"));
        }
        stacked = stacked.vstack(&h.matrix)?;
        moduli.extend(h.codomain.moduli());
    }
    // x is in the kernel iff M x lies in the relation lattice of the codomain.
    let rel_cols: Vec<Vec<i64>> = moduli
        .iter()
        .enumerate()
        .filter(|(_, &t)| t != 0)
        .map(|(i, &t)| {
            let mut c = vec![0; moduli.len()];
            c[i] = t;
            c
        })
        .collect();
    let rel = IntMatrix::from_columns(&rel_cols, moduli.len())?;
    let system = stacked.hstack(&rel)?;
    let gens = integer_kernel(&system)?
        .into_iter()
        .map(|z| domain.element(z[..n].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Subgroup::new(domain.clone(), gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubgroupOrdering {
    Equal,
    ProperSub,
    ProperSuper,
    Incomparable,
}

/// Subgroup given by a generating list; zero generators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, generators: Vec<GroupElement>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.group != ambient) {
            return Err(Error::domain(format!("generator {g} is not in {ambient}")));
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Subgroup { ambient, generators })
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        if x.group != self.ambient {
            return Err(Error::domain(format!("{x} is not in {}", self.ambient)));
        }
        if x.is_zero() {
            return Ok(true);
        }
        let rows = self.ambient.ngens();
        let mut cols: Vec<Vec<i64>> = self.generators.iter().map(|g| g.coeffs.clone()).collect();
        for (i, t) in self.ambient.moduli().into_iter().enumerate() {
            if t != 0 {
                let mut c = vec![0; rows];
                c[i] = t;
                cols.push(c);
            }
        }
        let m = IntMatrix::from_columns(&cols, rows)?;
        Ok(solve_integer(&m, &x.coeffs)?.is_some())
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::domain("subgroups of different ambient groups"));
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compare(&self, other: &Subgroup) -> Result<SubgroupOrdering> {
        Ok(match (self.is_subset_of(other)?, other.is_subset_of(self)?) {
            (true, true) => SubgroupOrdering::Equal,
            (true, false) => SubgroupOrdering::ProperSub,
            (false, true) => SubgroupOrdering::ProperSuper,
            (false, false) => SubgroupOrdering::Incomparable,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_whole(&self) -> Result<bool> {
        self.ambient.whole().is_subset_of(self)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.compare(other).ok()? {
            SubgroupOrdering::Equal => Some(Ordering::Equal),
            SubgroupOrdering::ProperSub => Some(Ordering::Less),
            SubgroupOrdering::ProperSuper => Some(Ordering::Greater),
            SubgroupOrdering::Incomparable => None,
        }
    }
}
