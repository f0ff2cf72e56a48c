//! Groups given by symbolic specs, with unique normal forms.
//!
//! Every element is stored in a canonical normal form, so equality of group
//! elements is structural equality of [`Element`] values. The derived `Ord`
//! on normal forms is the tie-breaker for the canonical basis ordering used by
//! every matrix built downstream (breadth-first layer first, then `Ord`).

mod parse;
mod table;

pub use parse::{format_bigint, parse_bigint};
pub use table::FiniteTable;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on explicit enumerations (basis sizes, balls, generator lists).
pub const DEFAULT_BUDGET: usize = 4096;

/// One generator letter of a free group, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u64,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: u64) -> Self {
        Letter { index, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

/// A non-neutral factor element tagged by the (global) copy index of the
/// free-product factor it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub element: Element,
}

/// Normal form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Cyclic group residue in `[0, n)`.
    Residue(u64),
    /// Row index into a finite multiplication table.
    Label(usize),
    /// Freely reduced word.
    Word(Vec<Letter>),
    /// Reduced free-product decomposition; consecutive factors differ.
    Alternating(Vec<Syllable>),
    /// Coordinates of a direct power or direct product.
    Tuple(Vec<Element>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residue(r) => write!(f, "{r}"),
            Element::Label(i) => write!(f, "#{i}"),
            Element::Word(w) if w.is_empty() => write!(f, "e"),
            Element::Word(w) => {
                for l in w {
                    write!(f, "{}", letter_name(*l))?;
                }
                Ok(())
            }
            Element::Alternating(s) if s.is_empty() => write!(f, "e"),
            Element::Alternating(s) => {
                for syl in s {
                    write!(f, "[{}:{}]", syl.factor, syl.element)?;
                }
                Ok(())
            }
            Element::Tuple(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `a`..`z` for the first 26 free generators, `x26`, `x27`, ... afterwards.
/// Inverses are upper case.
fn letter_name(l: Letter) -> String {
    let base = if l.index < 26 {
        ((b'a' + l.index as u8) as char).to_string()
    } else {
        format!("x{}", l.index)
    };
    if l.inverse {
        base.to_uppercase()
    } else {
        base
    }
}

/// A natural number or a "> cutoff" marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capped {
    Value(u64),
    Exceeds(u64),
}

impl Capped {
    pub fn value(self) -> Option<u64> {
        match self {
            Capped::Value(v) => Some(v),
            Capped::Exceeds(_) => None,
        }
    }

    fn cap(v: Option<u64>, cutoff: u64) -> Capped {
        match v {
            Some(v) if v <= cutoff => Capped::Value(v),
            _ => Capped::Exceeds(cutoff),
        }
    }
}

impl fmt::Display for Capped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capped::Value(v) => write!(f, "{v}"),
            Capped::Exceeds(c) => write!(f, "> {c}"),
        }
    }
}

impl Serialize for Capped {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capped::Value(v) => s.serialize_u64(*v),
            Capped::Exceeds(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// One factor of a free product, repeated `copies` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeFactor {
    pub group: GroupSpec,
    pub copies: BigUint,
}

/// Symbolic description of a group together with its implied generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic { order: u64, generators: Vec<u64> },
    Table(Arc<FiniteTable>),
    Free { rank: u64 },
    FreeProduct(Vec<FreeFactor>),
    DirectPower { base: Box<GroupSpec>, exponent: usize },
    DirectProduct(Vec<GroupSpec>),
}

impl GroupSpec {
    /// `Z_n` generated by `1`.
    pub fn cyclic(order: u64) -> Self {
        assert!(order >= 1, "cyclic group order must be positive");
        let generators = if order > 1 { vec![1] } else { vec![] };
        GroupSpec::Cyclic { order, generators }
    }

    /// `Z_n` with an explicit generating set of nonzero residues.
    pub fn cyclic_with(order: u64, generators: Vec<u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Validation("cyclic order must be positive".into()));
        }
        let mut seen = HashSet::new();
        let mut g = order;
        for &s in &generators {
            if s == 0 || s >= order {
                return Err(Error::Validation(format!(
                    "generator {s} is not a non-neutral residue mod {order}"
                )));
            }
            if !seen.insert(s) {
                return Err(Error::Validation(format!("duplicate generator {s}")));
            }
            g = g.gcd(&s);
        }
        if g != 1 && order > 1 {
            return Err(Error::Validation(format!("{generators:?} does not generate Z{order}")));
        }
        Ok(GroupSpec::Cyclic { order, generators })
    }

    pub fn free(rank: u64) -> Self {
        assert!(rank >= 1, "free group rank must be positive");
        GroupSpec::Free { rank }
    }

    pub fn table(table: FiniteTable) -> Self {
        GroupSpec::Table(Arc::new(table))
    }

    /// Free product of the given factors; equal neighbours are merged into one
    /// factor with summed multiplicity.
    pub fn free_product<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupSpec, BigUint)>,
    {
        let mut out: Vec<FreeFactor> = Vec::new();
        for (group, copies) in factors {
            if copies.is_zero() {
                return Err(Error::Validation("free product multiplicity must be positive".into()));
            }
            match out.last_mut() {
                Some(last) if last.group == group => last.copies += copies,
                _ => out.push(FreeFactor { group, copies }),
            }
        }
        if out.is_empty() {
            return Err(Error::Validation("free product needs at least one factor".into()));
        }
        Ok(GroupSpec::FreeProduct(out))
    }

    /// `copies`-fold free power of `group`.
    pub fn free_power(group: GroupSpec, copies: impl Into<BigUint>) -> Result<Self> {
        Self::free_product([(group, copies.into())])
    }

    pub fn direct_power(base: GroupSpec, exponent: usize) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::Validation("direct power exponent must be positive".into()));
        }
        Ok(GroupSpec::DirectPower {
            base: Box::new(base),
            exponent,
        })
    }

    pub fn direct_product(factors: Vec<GroupSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("direct product needs at least one factor".into()));
        }
        Ok(GroupSpec::DirectProduct(factors))
    }

    /// Parses the group-spec grammar, e.g. `freepow(Z5, 10^84)` or `Z3^3`.
    pub fn parse(input: &str) -> Result<Self> {
        parse::parse_spec(input)
    }

    /// Canonical string; `GroupSpec::parse` inverts it for parsed specs.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpec::Cyclic { .. } => Element::Residue(0),
            GroupSpec::Table(t) => Element::Label(t.identity()),
            GroupSpec::Free { .. } => Element::Word(Vec::new()),
            GroupSpec::FreeProduct(_) => Element::Alternating(Vec::new()),
            GroupSpec::DirectPower { base, exponent } => Element::Tuple(vec![base.identity(); *exponent]),
            GroupSpec::DirectProduct(fs) => Element::Tuple(fs.iter().map(|f| f.identity()).collect()),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// Total number of free-product factor copies (1 for other kinds).
    pub fn factor_copies(&self) -> BigUint {
        match self {
            GroupSpec::FreeProduct(fs) => fs.iter().map(|f| &f.copies).sum(),
            _ => BigUint::one(),
        }
    }

    /// The factor spec owning global copy index `idx` of a free product.
    pub fn factor_at(&self, idx: usize) -> Option<&GroupSpec> {
        let GroupSpec::FreeProduct(fs) = self else {
            return None;
        };
        let mut rest = BigUint::from(idx);
        for f in fs {
            if rest < f.copies {
                return Some(&f.group);
            }
            rest -= &f.copies;
        }
        None
    }

    /// Cardinality of the implied generating set.
    pub fn generator_count(&self) -> BigUint {
        match self {
            GroupSpec::Cyclic { generators, .. } => BigUint::from(generators.len()),
            GroupSpec::Table(t) => BigUint::from(t.generators().len()),
            GroupSpec::Free { rank } => BigUint::from(*rank),
            GroupSpec::FreeProduct(fs) => fs.iter().map(|f| &f.copies * f.group.generator_count()).sum(),
            GroupSpec::DirectPower { base, exponent } => base.generator_count() * *exponent,
            GroupSpec::DirectProduct(fs) => fs.iter().map(|f| f.generator_count()).sum(),
        }
    }

    /// Explicit generator list `S = {g_1, ..., g_N}` in canonical order.
    pub fn generators(&self, budget: usize) -> Result<Vec<Element>> {
        let count = self.generator_count();
        if count > BigUint::from(budget) {
            return Err(Error::budget(format!("generators of {self}"), count, budget));
        }
        Ok(match self {
            GroupSpec::Cyclic { generators, .. } => generators.iter().map(|&s| Element::Residue(s)).collect(),
            GroupSpec::Table(t) => t.generators().iter().map(|&i| Element::Label(i)).collect(),
            GroupSpec::Free { rank } => (0..*rank).map(|i| Element::Word(vec![Letter::new(i)])).collect(),
            GroupSpec::FreeProduct(_) => {
                let copies = self.factor_copies().to_usize().unwrap_or(usize::MAX);
                let mut out = Vec::new();
                for c in 0..copies {
                    let factor = self.factor_at(c).expect("index below total copies");
                    for s in factor.generators(budget)? {
                        out.push(Element::Alternating(vec![Syllable { factor: c, element: s }]));
                    }
                }
                out
            }
            GroupSpec::DirectPower { base, exponent } => {
                let e = base.identity();
                let gens = base.generators(budget)?;
                let mut out = Vec::new();
                for i in 0..*exponent {
                    for s in &gens {
                        let mut t = vec![e.clone(); *exponent];
                        t[i] = s.clone();
                        out.push(Element::Tuple(t));
                    }
                }
                out
            }
            GroupSpec::DirectProduct(fs) => {
                let ids: Vec<Element> = fs.iter().map(|f| f.identity()).collect();
                let mut out = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    for s in f.generators(budget)? {
                        let mut t = ids.clone();
                        t[i] = s;
                        out.push(Element::Tuple(t));
                    }
                }
                out
            }
        })
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigUint> {
        match self {
            GroupSpec::Cyclic { order, .. } => Some(BigUint::from(*order)),
            GroupSpec::Table(t) => Some(BigUint::from(t.len())),
            GroupSpec::Free { .. } => None,
            GroupSpec::FreeProduct(fs) => {
                let mut nontrivial: Option<BigUint> = None;
                let mut copies = BigUint::zero();
                for f in fs {
                    let o = f.group.order();
                    if o.as_ref().is_some_and(|o| o.is_one()) {
                        continue;
                    }
                    copies += &f.copies;
                    nontrivial = o;
                    if copies > BigUint::one() || nontrivial.is_none() {
                        return None;
                    }
                }
                Some(nontrivial.unwrap_or_else(BigUint::one))
            }
            GroupSpec::DirectPower { base, exponent } => base.order().map(|o| num_traits::pow(o, *exponent)),
            GroupSpec::DirectProduct(fs) => {
                let mut acc = BigUint::one();
                for f in fs {
                    acc *= f.order()?;
                }
                Some(acc)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Checks that `a` is a valid normal form for this group.
    pub fn validate(&self, a: &Element) -> Result<()> {
        let bad = || Error::Validation(format!("{a} is not a normal form of {self}"));
        match (self, a) {
            (GroupSpec::Cyclic { order, .. }, Element::Residue(r)) if r < order => Ok(()),
            (GroupSpec::Table(t), Element::Label(i)) if *i < t.len() => Ok(()),
            (GroupSpec::Free { rank }, Element::Word(w)) => {
                for (i, l) in w.iter().enumerate() {
                    if l.index >= *rank || (i > 0 && w[i - 1] == l.inv()) {
                        return Err(bad());
                    }
                }
                Ok(())
            }
            (GroupSpec::FreeProduct(_), Element::Alternating(s)) => {
                for (i, syl) in s.iter().enumerate() {
                    let factor = self.factor_at(syl.factor).ok_or_else(bad)?;
                    factor.validate(&syl.element)?;
                    if factor.is_identity(&syl.element) || (i > 0 && s[i - 1].factor == syl.factor) {
                        return Err(bad());
                    }
                }
                Ok(())
            }
            (GroupSpec::DirectPower { base, exponent }, Element::Tuple(c)) if c.len() == *exponent => {
                c.iter().try_for_each(|x| base.validate(x))
            }
            (GroupSpec::DirectProduct(fs), Element::Tuple(c)) if c.len() == fs.len() => {
                fs.iter().zip(c).try_for_each(|(f, x)| f.validate(x))
            }
            _ => Err(bad()),
        }
    }

    /// Normal form of `a · b`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self, a, b) {
            (GroupSpec::Cyclic { order, .. }, Element::Residue(x), Element::Residue(y)) if x < order && y < order => {
                Ok(Element::Residue(((*x as u128 + *y as u128) % *order as u128) as u64))
            }
            (GroupSpec::Table(t), Element::Label(x), Element::Label(y)) if *x < t.len() && *y < t.len() => {
                Ok(Element::Label(t.product(*x, *y)))
            }
            (GroupSpec::Free { .. }, Element::Word(x), Element::Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&l.inv()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Ok(Element::Word(out))
            }
            (GroupSpec::FreeProduct(_), Element::Alternating(x), Element::Alternating(y)) => {
                let mut out = x.clone();
                for syl in y {
                    match out.last_mut() {
                        Some(last) if last.factor == syl.factor => {
                            let factor = self
                                .factor_at(syl.factor)
                                .ok_or_else(|| Error::Validation(format!("no factor {}", syl.factor)))?;
                            let p = factor.multiply(&last.element, &syl.element)?;
                            if factor.is_identity(&p) {
                                out.pop();
                            } else {
                                last.element = p;
                            }
                        }
                        _ => out.push(syl.clone()),
                    }
                }
                Ok(Element::Alternating(out))
            }
            (GroupSpec::DirectPower { base, exponent }, Element::Tuple(x), Element::Tuple(y))
                if x.len() == *exponent && y.len() == *exponent =>
            {
                let c = x
                    .iter()
                    .zip(y)
                    .map(|(p, q)| base.multiply(p, q))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::Tuple(c))
            }
            (GroupSpec::DirectProduct(fs), Element::Tuple(x), Element::Tuple(y))
                if x.len() == fs.len() && y.len() == fs.len() =>
            {
                let c = fs
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(f, (p, q))| f.multiply(p, q))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::Tuple(c))
            }
            _ => Err(Error::Validation(format!("cannot multiply {a} and {b} in {self}"))),
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        match (self, a) {
            (GroupSpec::Cyclic { order, .. }, Element::Residue(x)) if x < order => {
                Ok(Element::Residue((order - x) % order))
            }
            (GroupSpec::Table(t), Element::Label(x)) if *x < t.len() => Ok(Element::Label(t.inverse(*x))),
            (GroupSpec::Free { .. }, Element::Word(w)) => Ok(Element::Word(w.iter().rev().map(|l| l.inv()).collect())),
            (GroupSpec::FreeProduct(_), Element::Alternating(s)) => {
                let mut out = Vec::with_capacity(s.len());
                for syl in s.iter().rev() {
                    let factor = self
                        .factor_at(syl.factor)
                        .ok_or_else(|| Error::Validation(format!("no factor {}", syl.factor)))?;
                    out.push(Syllable {
                        factor: syl.factor,
                        element: factor.inverse(&syl.element)?,
                    });
                }
                Ok(Element::Alternating(out))
            }
            (GroupSpec::DirectPower { base, exponent }, Element::Tuple(c)) if c.len() == *exponent => Ok(
                Element::Tuple(c.iter().map(|x| base.inverse(x)).collect::<Result<_>>()?),
            ),
            (GroupSpec::DirectProduct(fs), Element::Tuple(c)) if c.len() == fs.len() => Ok(Element::Tuple(
                fs.iter().zip(c).map(|(f, x)| f.inverse(x)).collect::<Result<_>>()?,
            )),
            _ => Err(Error::Validation(format!("{a} is not an element of {self}"))),
        }
    }

    /// `a · b⁻¹`.
    pub fn quotient(&self, a: &Element, b: &Element) -> Result<Element> {
        self.multiply(a, &self.inverse(b)?)
    }

    /// Ball `B_m = { g : |g| ≤ m }` for the positive word length, in
    /// canonical order.
    pub fn ball(&self, m: usize, budget: usize) -> Result<Vec<Element>> {
        let gens = self.generators(budget)?;
        bfs_ball(self, &gens, Some(m), budget, || format!("ball of radius {m} in {self}"))
    }

    /// Ball of radius `m` for the word metric over `S ∪ S⁻¹`.
    pub fn symmetric_ball(&self, m: usize, budget: usize) -> Result<Vec<Element>> {
        let gens = self.symmetric_generators(budget)?;
        bfs_ball(self, &gens, Some(m), budget, || {
            format!("symmetric ball of radius {m} in {self}")
        })
    }

    /// `S ∪ S⁻¹` without repetitions, generators first.
    pub fn symmetric_generators(&self, budget: usize) -> Result<Vec<Element>> {
        let gens = self.generators(budget)?;
        let mut seen: HashSet<Element> = gens.iter().cloned().collect();
        let mut out = gens.clone();
        for s in &gens {
            let inv = self.inverse(s)?;
            if seen.insert(inv.clone()) {
                out.push(inv);
            }
        }
        Ok(out)
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self, budget: usize) -> Result<Vec<Element>> {
        let order = self.order().ok_or(Error::Unsupported {
            op: "elements",
            spec: self.to_string(),
        })?;
        if order > BigUint::from(budget) {
            return Err(Error::budget(format!("elements of {self}"), order, budget));
        }
        let gens = self.generators(budget)?;
        bfs_ball(self, &gens, None, budget, || format!("elements of {self}"))
    }

    /// Positive word length `|g|` (products of generators only, no inverses).
    /// Elements without a positive expression, or longer than `cutoff`, give
    /// `Capped::Exceeds(cutoff)`.
    pub fn word_length(&self, g: &Element, cutoff: u64, budget: usize) -> Result<Capped> {
        self.validate(g)?;
        Ok(Capped::cap(self.positive_length(g, cutoff, budget)?, cutoff))
    }

    /// `Some(|g|)` if `|g| ≤ cutoff`, otherwise `None`.
    fn positive_length(&self, g: &Element, cutoff: u64, budget: usize) -> Result<Option<u64>> {
        match (self, g) {
            (GroupSpec::Cyclic { generators, .. }, Element::Residue(r)) if generators == &[1] => {
                Ok(Some(*r).filter(|&r| r <= cutoff))
            }
            (GroupSpec::Free { .. }, Element::Word(w)) => Ok(if w.iter().all(|l| !l.inverse) {
                Some(w.len() as u64).filter(|&n| n <= cutoff)
            } else {
                None
            }),
            (GroupSpec::FreeProduct(_), Element::Alternating(s)) => {
                // Minimal positive words split into maximal single-factor runs.
                let mut total = 0u64;
                for syl in s {
                    let factor = self.factor_at(syl.factor).expect("validated");
                    match factor.positive_length(&syl.element, cutoff - total.min(cutoff), budget)? {
                        Some(l) => total += l,
                        None => return Ok(None),
                    }
                    if total > cutoff {
                        return Ok(None);
                    }
                }
                Ok(Some(total))
            }
            (GroupSpec::DirectPower { base, .. }, Element::Tuple(c)) => {
                sum_lengths(c.iter().map(|x| (base.as_ref(), x)), cutoff, budget)
            }
            (GroupSpec::DirectProduct(fs), Element::Tuple(c)) => sum_lengths(fs.iter().zip(c), cutoff, budget),
            _ => {
                let gens = self.generators(budget)?;
                bfs_distance(self, &gens, g, cutoff, budget)
            }
        }
    }

    /// Smallest `k ≥ 1` with `g^k = e`.
    pub fn element_order(&self, g: &Element, cutoff: u64) -> Result<Capped> {
        self.validate(g)?;
        if let (GroupSpec::Cyclic { order, .. }, Element::Residue(r)) = (self, g) {
            return Ok(Capped::cap(Some(order / order.gcd(r)), cutoff));
        }
        if let GroupSpec::Free { .. } = self {
            let trivial = self.is_identity(g);
            return Ok(Capped::cap(trivial.then_some(1), cutoff));
        }
        let e = self.identity();
        let mut x = g.clone();
        let mut k = 1u64;
        while x != e {
            if k >= cutoff {
                return Ok(Capped::Exceeds(cutoff));
            }
            x = self.multiply(&x, g)?;
            k += 1;
        }
        Ok(Capped::Value(k))
    }

    /// Reduced decomposition `γ_1 ⋯ γ_n` of a free-product element as
    /// `(factor copy index, factor element)` pairs; its length is `ℓ(g)`.
    pub fn reduced_decomposition(&self, g: &Element) -> Result<Vec<(usize, Element)>> {
        if !matches!(self, GroupSpec::FreeProduct(_)) {
            return Err(Error::Unsupported {
                op: "reduced_decomposition",
                spec: self.to_string(),
            });
        }
        self.validate(g)?;
        let Element::Alternating(s) = g else {
            unreachable!("validated")
        };
        Ok(s.iter().map(|syl| (syl.factor, syl.element.clone())).collect())
    }

    /// `|{ i : g_i ≠ e }|` for tuples in a direct power or product.
    pub fn nonidentity_coordinate_count(&self, g: &Element) -> Result<usize> {
        self.validate(g)?;
        match (self, g) {
            (GroupSpec::DirectPower { base, .. }, Element::Tuple(c)) => {
                Ok(c.iter().filter(|x| !base.is_identity(x)).count())
            }
            (GroupSpec::DirectProduct(fs), Element::Tuple(c)) => {
                Ok(fs.iter().zip(c).filter(|(f, x)| !f.is_identity(x)).count())
            }
            _ => Err(Error::Unsupported {
                op: "nonidentity_coordinate_count",
                spec: self.to_string(),
            }),
        }
    }

    /// Human-readable element, using table labels where available.
    pub fn format_element(&self, g: &Element) -> String {
        match (self, g) {
            (GroupSpec::Table(t), Element::Label(i)) if *i < t.len() => t.label(*i).to_string(),
            (GroupSpec::FreeProduct(_), Element::Alternating(s)) if !s.is_empty() => s
                .iter()
                .map(|syl| match self.factor_at(syl.factor) {
                    Some(f) => format!("[{}:{}]", syl.factor, f.format_element(&syl.element)),
                    None => format!("[{}:{}]", syl.factor, syl.element),
                })
                .collect(),
            (GroupSpec::DirectPower { base, .. }, Element::Tuple(c)) => format!(
                "({})",
                c.iter().map(|x| base.format_element(x)).collect::<Vec<_>>().join(",")
            ),
            (GroupSpec::DirectProduct(fs), Element::Tuple(c)) => format!(
                "({})",
                fs.iter()
                    .zip(c)
                    .map(|(f, x)| f.format_element(x))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            _ => g.to_string(),
        }
    }
}

fn sum_lengths<'a>(
    coords: impl Iterator<Item = (&'a GroupSpec, &'a Element)>,
    cutoff: u64,
    budget: usize,
) -> Result<Option<u64>> {
    let mut total = 0u64;
    for (f, x) in coords {
        match f.positive_length(x, cutoff - total, budget)? {
            Some(l) => total += l,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// Breadth-first layers from the identity under right multiplication by
/// `gens`, each layer sorted by normal form. `radius = None` runs to closure.
pub(crate) fn bfs_ball(
    group: &GroupSpec,
    gens: &[Element],
    radius: Option<usize>,
    budget: usize,
    what: impl Fn() -> String,
) -> Result<Vec<Element>> {
    let e = group.identity();
    let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
    let mut out = vec![e];
    let mut frontier_start = 0;
    let mut depth = 0;
    while radius.is_none_or(|r| depth < r) {
        let frontier_end = out.len();
        let mut layer = Vec::new();
        for x in &out[frontier_start..frontier_end] {
            for s in gens {
                let next = group.multiply(x, s)?;
                if seen.insert(next.clone()) {
                    layer.push(next);
                    if seen.len() > budget {
                        return Err(Error::budget(what(), format!("> {budget}"), budget));
                    }
                }
            }
        }
        if layer.is_empty() {
            break;
        }
        layer.sort();
        out.extend(layer);
        frontier_start = frontier_end;
        depth += 1;
    }
    Ok(out)
}

fn bfs_distance(
    group: &GroupSpec,
    gens: &[Element],
    target: &Element,
    cutoff: u64,
    budget: usize,
) -> Result<Option<u64>> {
    let e = group.identity();
    if *target == e {
        return Ok(Some(0));
    }
    let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
    let mut frontier = vec![e];
    let mut depth = 0u64;
    while depth < cutoff && !frontier.is_empty() {
        depth += 1;
        let mut next_frontier = Vec::new();
        for x in &frontier {
            for s in gens {
                let y = group.multiply(x, s)?;
                if y == *target {
                    return Ok(Some(depth));
                }
                if seen.insert(y.clone()) {
                    if seen.len() > budget {
                        return Err(Error::budget(
                            format!("word-length search in {group}"),
                            format!("> {budget}"),
                            budget,
                        ));
                    }
                    next_frontier.push(y);
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(u64, bool)]) -> Element {
        Element::Word(
            letters
                .iter()
                .map(|&(index, inverse)| Letter { index, inverse })
                .collect(),
        )
    }

    fn syl(factor: usize, r: u64) -> Syllable {
        Syllable {
            factor,
            element: Element::Residue(r),
        }
    }

    #[test]
    fn cyclic_product() {
        let g = GroupSpec::cyclic(5);
        let p = g.multiply(&Element::Residue(3), &Element::Residue(4)).unwrap();
        assert_eq!(p, Element::Residue(2));
    }

    #[test]
    fn free_reduction() {
        let g = GroupSpec::free(2);
        let x = w(&[(0, false), (1, true)]);
        let y = w(&[(1, false), (0, false)]);
        assert_eq!(g.multiply(&x, &y).unwrap(), w(&[(0, false), (0, false)]));
    }

    #[test]
    fn free_product_collapse() {
        let g = GroupSpec::parse("Z3*Z3").unwrap();
        let x = Element::Alternating(vec![syl(0, 1)]);
        let x2 = Element::Alternating(vec![syl(0, 2)]);
        assert_eq!(g.multiply(&x, &x2).unwrap(), g.identity());
    }

    #[test]
    fn free_product_collapse_merges_neighbours() {
        let g = GroupSpec::parse("Z5*Z5").unwrap();
        // x0 y1 · y1^4 x0 = x0^2
        let a = Element::Alternating(vec![syl(0, 1), syl(1, 1)]);
        let b = Element::Alternating(vec![syl(1, 4), syl(0, 1)]);
        assert_eq!(g.multiply(&a, &b).unwrap(), Element::Alternating(vec![syl(0, 2)]));
    }

    #[test]
    fn inverse_law_everywhere() {
        for spec in ["Z7", "F3", "Z3*Z4", "Z3^2", "dprod(Z2,Z3)"] {
            let g = GroupSpec::parse(spec).unwrap();
            for x in g.symmetric_ball(3, 4096).unwrap() {
                let inv = g.inverse(&x).unwrap();
                assert_eq!(g.multiply(&inv, &x).unwrap(), g.identity(), "{spec} {x}");
            }
        }
    }

    #[test]
    fn malformed_normal_forms_rejected() {
        let f2 = GroupSpec::free(2);
        assert!(f2.validate(&w(&[(0, false), (0, true)])).is_err());
        assert!(f2.validate(&w(&[(2, false)])).is_err());
        assert!(f2.multiply(&Element::Residue(1), &f2.identity()).is_err());
        let z5 = GroupSpec::cyclic(5);
        assert!(z5.validate(&Element::Residue(5)).is_err());
        let fp = GroupSpec::parse("Z3*Z3").unwrap();
        let bad = Element::Alternating(vec![syl(0, 1), syl(0, 1)]);
        assert!(fp.validate(&bad).is_err());
        let bad = Element::Alternating(vec![syl(2, 1)]);
        assert!(fp.validate(&bad).is_err());
    }

    #[test]
    fn word_lengths() {
        let z5 = GroupSpec::cyclic(5);
        assert_eq!(z5.word_length(&Element::Residue(3), 10, 64).unwrap(), Capped::Value(3));
        let f2 = GroupSpec::free(2);
        let a_inv = w(&[(0, true)]);
        for cutoff in [1, 10, 1000] {
            assert_eq!(f2.word_length(&a_inv, cutoff, 64).unwrap(), Capped::Exceeds(cutoff));
        }
        let ab = w(&[(0, false), (1, false)]);
        assert_eq!(f2.word_length(&ab, 10, 64).unwrap(), Capped::Value(2));
        assert_eq!(f2.word_length(&ab, 1, 64).unwrap(), Capped::Exceeds(1));
        // custom generators go through breadth-first search
        let z7 = GroupSpec::cyclic_with(7, vec![3]).unwrap();
        assert_eq!(z7.word_length(&Element::Residue(6), 10, 64).unwrap(), Capped::Value(2));
    }

    #[test]
    fn balls() {
        let f2 = GroupSpec::free(2);
        let b2 = f2.ball(2, 64).unwrap();
        let names: Vec<String> = b2.iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["e", "a", "b", "aa", "ab", "ba", "bb"]);
        let z5 = GroupSpec::cyclic(5);
        assert_eq!(
            z5.ball(2, 64).unwrap(),
            vec![Element::Residue(0), Element::Residue(1), Element::Residue(2)]
        );
        for spec in ["Z5", "F3", "Z3*Z3", "Z2^3"] {
            let g = GroupSpec::parse(spec).unwrap();
            assert_eq!(g.ball(0, 64).unwrap(), vec![g.identity()]);
        }
    }

    #[test]
    fn ball_budget_is_enforced() {
        let f3 = GroupSpec::free(3);
        let err = f3.ball(8, 100).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }), "{err}");
        let huge = GroupSpec::free(10_000_000_000);
        assert!(matches!(huge.ball(1, 4096), Err(Error::Budget { .. })));
    }

    #[test]
    fn decomposition() {
        let g = GroupSpec::parse("Z3*Z3").unwrap();
        let x = Element::Alternating(vec![syl(0, 1)]);
        let y = Element::Alternating(vec![syl(1, 2)]);
        let xyx = g.multiply(&g.multiply(&x, &y).unwrap(), &x).unwrap();
        let d = g.reduced_decomposition(&xyx).unwrap();
        assert_eq!(
            d,
            vec![
                (0, Element::Residue(1)),
                (1, Element::Residue(2)),
                (0, Element::Residue(1))
            ]
        );
        assert!(g.reduced_decomposition(&g.identity()).unwrap().is_empty());

        let g5 = GroupSpec::parse("Z5*Z5").unwrap();
        let a = Element::Alternating(vec![syl(0, 2)]);
        let b = Element::Alternating(vec![syl(0, 3)]);
        let p = g5.multiply(&a, &b).unwrap();
        assert!(g5.reduced_decomposition(&p).unwrap().is_empty());
        assert!(GroupSpec::free(2).reduced_decomposition(&w(&[])).is_err());
    }

    #[test]
    fn orders() {
        let z5 = GroupSpec::cyclic(5);
        assert_eq!(z5.element_order(&Element::Residue(2), 100).unwrap(), Capped::Value(5));
        let z4 = GroupSpec::cyclic(4);
        assert_eq!(z4.element_order(&Element::Residue(2), 100).unwrap(), Capped::Value(2));
        let f2 = GroupSpec::free(2);
        assert_eq!(f2.element_order(&w(&[(0, false)]), 100).unwrap(), Capped::Exceeds(100));
        assert_eq!(f2.element_order(&f2.identity(), 100).unwrap(), Capped::Value(1));
        let fp = GroupSpec::parse("Z3*Z4").unwrap();
        let x = Element::Alternating(vec![syl(1, 2)]);
        assert_eq!(fp.element_order(&x, 100).unwrap(), Capped::Value(2));
        let xy = Element::Alternating(vec![syl(0, 1), syl(1, 1)]);
        assert_eq!(fp.element_order(&xy, 50).unwrap(), Capped::Exceeds(50));
    }

    #[test]
    fn coordinate_counts() {
        let g = GroupSpec::parse("Z3^3").unwrap();
        let x = Element::Tuple(vec![Element::Residue(1), Element::Residue(0), Element::Residue(2)]);
        assert_eq!(g.nonidentity_coordinate_count(&x).unwrap(), 2);
        assert_eq!(g.nonidentity_coordinate_count(&g.identity()).unwrap(), 0);
        let f = GroupSpec::parse("F2^2").unwrap();
        let x = Element::Tuple(vec![w(&[(0, false), (1, false)]), w(&[])]);
        assert_eq!(f.nonidentity_coordinate_count(&x).unwrap(), 1);
    }

    #[test]
    fn orders_of_specs() {
        assert_eq!(GroupSpec::parse("Z5").unwrap().order(), Some(5u32.into()));
        assert_eq!(GroupSpec::parse("Z3^3").unwrap().order(), Some(27u32.into()));
        assert_eq!(GroupSpec::parse("Z5*Z5").unwrap().order(), None);
        assert_eq!(GroupSpec::parse("freepow(Z5,1)").unwrap().order(), Some(5u32.into()));
        assert_eq!(GroupSpec::parse("Z1*Z7").unwrap().order(), Some(7u32.into()));
        assert_eq!(GroupSpec::parse("F2").unwrap().order(), None);
    }

    #[test]
    fn cyclic_generators_must_generate() {
        assert!(GroupSpec::cyclic_with(6, vec![2, 4]).is_err());
        assert!(GroupSpec::cyclic_with(6, vec![2, 3]).is_ok());
        assert!(GroupSpec::cyclic_with(6, vec![0]).is_err());
    }
}
