use serde::Serialize;

use super::{gamma_degree, k_max, SphereElement, SphereGroupEntry, TableSet};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupElement, Homomorphism, Subgroup};
use crate::projective::{hopf_stable, Field};
use crate::stable::{Product, StableElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaComponent {
    pub k: u32,
    pub degree: u32,
    /// `None` when the data does not determine the component.
    pub value: Option<StableElement>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaValue {
    pub components: Vec<GammaComponent>,
}

impl GammaValue {
    /// `Some(false)` as soon as one known component is nonzero, `Some(true)`
    /// when every component is known and zero, `None` otherwise.
    pub fn is_zero(&self) -> Option<bool> {
        if self.components.iter().any(|c| c.value.as_ref().is_some_and(|v| !v.is_zero())) {
            return Some(false);
        }
        self.components.iter().all(|c| c.value.is_some()).then_some(true)
    }

    pub fn component(&self, k: u32) -> Option<&GammaComponent> {
        self.components.iter().find(|c| c.k == k)
    }

    /// First reason a component is undetermined.
    pub fn unknown_reason(&self) -> Option<&str> {
        self.components.iter().find_map(|c| c.reason.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Membership {
    Yes,
    No,
    Unknown(String),
}

/// `{0} ⊆ Ker Γ ⊆ Ker(h·E^∞) ⊆ π_m(S^q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelChain {
    pub ker_gamma: Subgroup,
    pub ker_hopf_stab: Subgroup,
    pub whole: Subgroup,
}

fn missing(what: &str, m: u32, q: u32, gen: &str) -> Error {
    Error::MissingData(format!("{what} of generator {gen} of π_{m}(S^{q})"))
}

/// `Σ c_i · image_i` over the generators with `c_i ≠ 0`.
fn combine<F>(e: &SphereGroupEntry, x: &GroupElement, zero: GroupElement, mut image: F) -> Result<GroupElement>
where
    F: FnMut(usize) -> Result<GroupElement>,
{
    if *x.group() != e.group {
        return Err(Error::domain(format!("{x} is not an element of π_{}(S^{})", e.m, e.q)));
    }
    let mut acc = zero;
    for (i, &c) in x.coeffs().iter().enumerate() {
        if c != 0 {
            acc = acc.add(&image(i)?.scale(c)?)?;
        }
    }
    Ok(acc)
}

/// Homomorphism from generator images, failing on the first missing one.
fn hom_from<F>(e: &SphereGroupEntry, codomain: FgAbGroup, mut image: F) -> Result<Homomorphism>
where
    F: FnMut(usize) -> Result<GroupElement>,
{
    let images = (0..e.group.ngens()).map(&mut image).collect::<Result<Vec<_>>>()?;
    Homomorphism::from_images(e.group.clone(), codomain, &images)
}

impl TableSet {
    fn entry_of(&self, x: &SphereElement) -> Result<SphereGroupEntry> {
        let e = self.lookup(x.m, x.q)?;
        if *x.value.group() != e.group {
            return Err(Error::domain(format!("{x} does not match the tabulated group {}", e.group)));
        }
        Ok(e)
    }

    fn suspension_image(&self, e: &SphereGroupEntry, target: &FgAbGroup, i: usize) -> Result<GroupElement> {
        if target.is_trivial() {
            return Ok(target.zero());
        }
        let v = e.annotations[i]
            .suspension
            .as_ref()
            .ok_or_else(|| missing("suspension", e.m, e.q, &e.generator_names[i]))?;
        target.element(v.coeffs().to_vec())
    }

    fn stabilization_image(&self, e: &SphereGroupEntry, i: usize) -> Result<StableElement> {
        let k = e.m - e.q;
        let stem = self.stable.stem(k)?;
        if stem.group.is_trivial() {
            return self.stable.zero(k);
        }
        e.annotations[i]
            .stabilization
            .clone()
            .ok_or_else(|| missing("stabilization", e.m, e.q, &e.generator_names[i]))
    }

    fn gamma_image(&self, e: &SphereGroupEntry, k: u32, i: usize) -> Result<StableElement> {
        if k == 1 {
            return self.stabilization_image(e, i);
        }
        let d = gamma_degree(e.m, e.q, k).ok_or_else(|| Error::domain(format!("Γ component {k} has negative degree")))?;
        if self.stable.stem(d)?.group.is_trivial() {
            return self.stable.zero(d);
        }
        e.annotations[i]
            .gamma
            .get(&k)
            .cloned()
            .ok_or_else(|| missing(&format!("Γ component {k}"), e.m, e.q, &e.generator_names[i]))
    }

    fn antipodal_image(&self, e: &SphereGroupEntry, i: usize) -> Result<GroupElement> {
        if e.q % 2 == 1 {
            return e.group.generator(i);
        }
        e.annotations[i]
            .antipodal
            .clone()
            .ok_or_else(|| missing("antipodal action", e.m, e.q, &e.generator_names[i]))
    }

    /// `E: π_m(S^q) → π_{m+1}(S^{q+1})`.
    pub fn suspend(&self, x: &SphereElement) -> Result<SphereElement> {
        let e = self.entry_of(x)?;
        let target = self.lookup(x.m + 1, x.q + 1)?.group;
        let v = combine(&e, &x.value, target.zero(), |i| self.suspension_image(&e, &target, i))?;
        Ok(SphereElement { m: x.m + 1, q: x.q + 1, value: v })
    }

    pub fn suspend_n(&self, x: &SphereElement, k: u32) -> Result<SphereElement> {
        (0..k).try_fold(x.clone(), |y, _| self.suspend(&y))
    }

    /// `E^∞: π_m(S^q) → π_{m-q}^S`.
    pub fn stabilize(&self, x: &SphereElement) -> Result<StableElement> {
        if x.m < x.q {
            return Err(Error::domain("stabilization needs m ≥ q"));
        }
        let e = self.entry_of(x)?;
        let k = x.m - x.q;
        let zero = self.stable.zero(k)?;
        let v = combine(&e, &x.value, zero.value().clone(), |i| {
            self.stabilization_image(&e, i).map(|s| s.value().clone())
        })?;
        self.stable.element(k, v.coeffs().to_vec())
    }

    /// `Γ(x)` with one entry per `k = 1..=K_max`; component 1 is `E^∞`.
    pub fn gamma(&self, x: &SphereElement) -> Result<GammaValue> {
        let e = self.entry_of(x)?;
        let Some(kmax) = k_max(x.m, x.q) else {
            if e.group.is_trivial() {
                return Ok(GammaValue { components: vec![] });
            }
            return Err(Error::domain(format!("Γ is not defined on π_{}(S^{})", x.m, x.q)));
        };
        let mut components = Vec::new();
        for k in 1..=kmax {
            let degree = gamma_degree(x.m, x.q, k).expect("k ≤ K_max");
            let value = self.stable.zero(degree).and_then(|zero| {
                let v = combine(&e, &x.value, zero.value().clone(), |i| {
                    self.gamma_image(&e, k, i).map(|s| s.value().clone())
                })?;
                self.stable.element(degree, v.coeffs().to_vec())
            });
            components.push(match value {
                Ok(v) => GammaComponent { k, degree, value: Some(v), reason: None },
                Err(err) => GammaComponent { k, degree, value: None, reason: Some(err.to_string()) },
            });
        }
        Ok(GammaValue { components })
    }

    /// `[a ∘ f]` for the antipodal map `a` of `S^q`.
    pub fn antipodal_compose(&self, x: &SphereElement) -> Result<SphereElement> {
        let e = self.entry_of(x)?;
        let v = combine(&e, &x.value, e.group.zero(), |i| self.antipodal_image(&e, i))?;
        Ok(SphereElement { m: x.m, q: x.q, value: v })
    }

    pub fn suspension_hom(&self, m: u32, q: u32) -> Result<Homomorphism> {
        let e = self.lookup(m, q)?;
        let target = self.lookup(m + 1, q + 1)?.group;
        hom_from(&e, target.clone(), |i| self.suspension_image(&e, &target, i))
    }

    pub fn stabilization_hom(&self, m: u32, q: u32) -> Result<Homomorphism> {
        self.gamma_hom(m, q, 1)
    }

    /// `E^∞ ∘ γ_k` as a homomorphism into `π^S_{m-1-k(q-1)}`.
    pub fn gamma_hom(&self, m: u32, q: u32, k: u32) -> Result<Homomorphism> {
        let e = self.lookup(m, q)?;
        let d = if k == 1 { m.checked_sub(q) } else { gamma_degree(m, q, k) }
            .ok_or_else(|| Error::domain(format!("Γ component {k} undefined on π_{m}(S^{q})")))?;
        let codomain = self.stable.stem(d)?.group.clone();
        hom_from(&e, codomain, |i| self.gamma_image(&e, k, i).map(|s| s.value().clone()))
    }

    /// `x ↦ h · E^∞(x)`.
    pub fn multiplied_stab_hom(&self, m: u32, q: u32, h: &StableElement) -> Result<Homomorphism> {
        let e = self.lookup(m, q)?;
        let d = h.degree() + (m - q);
        let codomain = self.stable.stem(d)?.group.clone();
        hom_from(&e, codomain, |i| {
            let s = self.stabilization_image(&e, i)?;
            match self.stable.multiply(h, &s)? {
                Product::Known(p) => Ok(p.value().clone()),
                Product::Unknown { left, right } => {
                    Err(Error::MissingData(format!("stable product {left}·{right}")))
                }
            }
        })
    }

    pub fn suspension_image_contains(&self, m: u32, q: u32, x: &SphereElement) -> Result<Membership> {
        if (x.m, x.q) != (m, q) {
            return Err(Error::domain(format!("{x} is not in π_{m}(S^{q})")));
        }
        self.entry_of(x)?;
        if x.is_zero() {
            return Ok(Membership::Yes);
        }
        if m < 2 || q < 1 {
            return Ok(Membership::Unknown(format!("π_{m}(S^{q}) has no suspension source")));
        }
        match self.suspension_hom(m - 1, q - 1) {
            Ok(h) => Ok(if h.image()?.contains(&x.value)? { Membership::Yes } else { Membership::No }),
            Err(Error::MissingData(r)) => Ok(Membership::Unknown(r)),
            Err(e) => Err(e),
        }
    }

    /// Kernel chain for `h = hopf_stable(K)`.
    pub fn kernel_chain(&self, m: u32, q: u32, field: Field) -> Result<KernelChain> {
        let h = hopf_stable(&self.stable, field)?;
        self.kernel_chain_with(m, q, &h)
    }

    /// Kernel chain with an arbitrary stable multiplier in place of `h_K`.
    pub fn kernel_chain_with(&self, m: u32, q: u32, h: &StableElement) -> Result<KernelChain> {
        let e = self.lookup(m, q)?;
        let whole = e.group.whole();
        if e.group.is_trivial() {
            return Ok(KernelChain { ker_gamma: whole.clone(), ker_hopf_stab: whole.clone(), whole });
        }
        let kmax = k_max(m, q).ok_or_else(|| Error::domain(format!("Γ is not defined on π_{m}(S^{q})")))?;
        let homs = (1..=kmax).map(|k| self.gamma_hom(m, q, k)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Homomorphism> = homs.iter().collect();
        let ker_gamma = crate::fgab::joint_kernel(&e.group, &refs)?;
        let ker_hopf_stab = self.multiplied_stab_hom(m, q, h)?.kernel()?;
        if !ker_gamma.is_subset_of(&ker_hopf_stab)? {
            return Err(Error::domain(format!(
                "Ker Γ is not contained in Ker(h·E^∞) on π_{m}(S^{q}); table data inconsistent"
            )));
        }
        Ok(KernelChain { ker_gamma, ker_hopf_stab, whole })
    }
}
