use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec};
use crate::C64;

/// A finitely supported complex function on a group, i.e. an element of the
/// group algebra. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    group: GroupSpec,
    terms: BTreeMap<Element, C64>,
}

impl AlgebraElement {
    pub fn zero(group: &GroupSpec) -> Self {
        AlgebraElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(group: &GroupSpec, g: Element) -> Result<Self> {
        Self::from_terms(group, [(g, C64::new(1.0, 0.0))])
    }

    /// Sums repeated elements and drops zeros.
    pub fn from_terms<I>(group: &GroupSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, C64)>,
    {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            group.validate(&g)?;
            *out.terms.entry(g).or_insert(C64::new(0.0, 0.0)) += c;
        }
        out.terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        Ok(out)
    }

    /// Indicator function of `set`.
    pub fn indicator(group: &GroupSpec, set: &[Element]) -> Result<Self> {
        Self::from_terms(group, set.iter().map(|g| (g.clone(), C64::new(1.0, 0.0))))
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &C64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.terms.keys()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Element) -> C64 {
        self.terms.get(g).copied().unwrap_or_default()
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        out
    }

    /// `f / ‖f‖₂`; the zero function is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.l2_norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(C64::new(1.0 / n, 0.0))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            *out.terms.entry(g.clone()).or_default() += c;
        }
        out.terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        Ok(out)
    }

    /// Restriction `f · 1_A` to the elements satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Element) -> bool) -> Self {
        AlgebraElement {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), *c))
                .collect(),
        }
    }

    /// `f̃(g) = conj(f(g⁻¹))`, so that `λ(f)* = λ(f̃)`.
    pub fn adjoint(&self) -> Result<Self> {
        Self::from_terms(
            &self.group,
            self.terms
                .iter()
                .map(|(g, c)| Ok((self.group.inverse(g)?, c.conj())))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Convolution `(f * ψ)(g) = Σ_h f(h) ψ(h⁻¹g)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut terms: BTreeMap<Element, C64> = BTreeMap::new();
        for (h, a) in &self.terms {
            for (k, b) in &other.terms {
                *terms.entry(self.group.multiply(h, k)?).or_default() += a * b;
            }
        }
        terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(self.group.to_string(), other.group.to_string()));
        }
        Ok(())
    }
}

/// Convolution `f * ψ`.
pub fn convolve(f: &AlgebraElement, psi: &AlgebraElement) -> Result<AlgebraElement> {
    f.convolve(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Letter;

    fn r(x: u64) -> Element {
        Element::Residue(x)
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn deltas_multiply() {
        let g = GroupSpec::free(2);
        let a = Element::Word(vec![Letter::new(0)]);
        let b = Element::Word(vec![Letter::new(1)]);
        let ab = g.multiply(&a, &b).unwrap();
        let da = AlgebraElement::delta(&g, a).unwrap();
        let db = AlgebraElement::delta(&g, b).unwrap();
        assert_eq!(da.convolve(&db).unwrap(), AlgebraElement::delta(&g, ab).unwrap());
    }

    #[test]
    fn identity_delta_is_unit() {
        let g = GroupSpec::cyclic(7);
        let psi = AlgebraElement::from_terms(&g, [(r(1), C64::new(0.5, -1.0)), (r(4), c(2.0))]).unwrap();
        let e = AlgebraElement::delta(&g, g.identity()).unwrap();
        assert_eq!(e.convolve(&psi).unwrap(), psi);
        assert_eq!(psi.convolve(&e).unwrap(), psi);
    }

    #[test]
    fn cyclic_expansion() {
        let g = GroupSpec::cyclic(5);
        let f = AlgebraElement::from_terms(&g, [(r(1), c(1.0)), (r(2), c(1.0))]).unwrap();
        let psi = AlgebraElement::delta(&g, r(4)).unwrap();
        let want = AlgebraElement::from_terms(&g, [(r(0), c(1.0)), (r(1), c(1.0))]).unwrap();
        assert_eq!(convolve(&f, &psi).unwrap(), want);
    }

    #[test]
    fn group_mismatch() {
        let f = AlgebraElement::delta(&GroupSpec::cyclic(5), r(1)).unwrap();
        let h = AlgebraElement::delta(&GroupSpec::cyclic(7), r(1)).unwrap();
        assert!(matches!(f.convolve(&h), Err(Error::GroupMismatch(..))));
    }

    #[test]
    fn zeros_are_dropped() {
        let g = GroupSpec::cyclic(5);
        let f = AlgebraElement::from_terms(&g, [(r(1), c(1.0)), (r(1), c(-1.0))]).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.l2_norm(), 0.0);
    }
}
