//! The channels `Φ_l(ρ) = (1/N) Σ λ(g_i) ρ λ(g_i)*` and
//! `Φ_r(ρ) = (1/N) Σ ρ(g_i) ρ ρ(g_i)*` on finitely supported states, their
//! tensor powers and complementary channels, and von Neumann entropy.

mod moe;

pub use moe::{minimize_output_entropy, moe_sweep, MoeOptions, MoeResult};

use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec};
use crate::{sampling, C64};

/// Eigenvalues in `[-NEG_TOL, 0)` are treated as zero.
pub const NEG_TOL: f64 = 1e-10;
/// Tolerance on Hermiticity and unit trace of a state.
pub const STATE_TOL: f64 = 1e-12;

/// A density matrix on a finite set of basis vectors `δ_x` of `ℓ²(G^k)`.
/// For `k > 1` basis elements are `k`-tuples.
#[derive(Clone, Debug)]
pub struct DensityState {
    base: GroupSpec,
    power: usize,
    basis: Vec<Element>,
    matrix: DMatrix<C64>,
}

impl DensityState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(base: &GroupSpec, power: usize, basis: Vec<Element>, matrix: DMatrix<C64>) -> Result<Self> {
        let s = Self::unchecked(base, power, basis, matrix)?;
        let n = s.dim();
        for i in 0..n {
            for j in 0..=i {
                if (s.matrix[(i, j)] - s.matrix[(j, i)].conj()).norm() > STATE_TOL {
                    return Err(Error::InvalidState("matrix is not Hermitian".into()));
                }
            }
        }
        if (s.trace() - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {} ≠ 1", s.trace())));
        }
        eigenvalues(&s.matrix)?;
        Ok(s)
    }

    fn unchecked(base: &GroupSpec, power: usize, basis: Vec<Element>, matrix: DMatrix<C64>) -> Result<Self> {
        if power == 0 {
            return Err(Error::Validation("tensor power must be positive".into()));
        }
        if matrix.shape() != (basis.len(), basis.len()) {
            return Err(Error::Validation(format!(
                "{}×{} matrix on a basis of size {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.len()
            )));
        }
        let ambient = ambient(base, power)?;
        let mut seen = BTreeSet::new();
        for x in &basis {
            ambient.validate(x)?;
            if !seen.insert(x) {
                return Err(Error::Validation(format!("repeated basis element {x}")));
            }
        }
        Ok(DensityState {
            base: base.clone(),
            power,
            basis,
            matrix,
        })
    }

    /// `ξ_v = v v* / ‖v‖²`.
    pub fn pure(base: &GroupSpec, power: usize, basis: Vec<Element>, v: &[C64]) -> Result<Self> {
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || v.len() != basis.len() {
            return Err(Error::Validation(
                "pure state needs a nonzero vector on the basis".into(),
            ));
        }
        let u = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|z| z / n));
        Self::unchecked(base, power, basis, &u * u.adjoint())
    }

    /// `ξ_g`, the projection onto `δ_g`.
    pub fn delta(base: &GroupSpec, power: usize, g: Element) -> Result<Self> {
        Self::unchecked(base, power, vec![g], DMatrix::from_element(1, 1, C64::new(1.0, 0.0)))
    }

    /// `ξ_e` on `ℓ²(G^k)`.
    pub fn identity_delta(base: &GroupSpec, power: usize) -> Result<Self> {
        Self::delta(base, power, ambient(base, power)?.identity())
    }

    /// Random state of the given rank on `basis`: `A A* / tr(A A*)` with
    /// Gaussian `A`.
    pub fn random<R: rand::Rng + ?Sized>(
        base: &GroupSpec,
        power: usize,
        basis: Vec<Element>,
        rank: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let n = basis.len();
        let a = DMatrix::from_iterator(n, rank.max(1), sampling::gaussian_vector(rng, n * rank.max(1)));
        let mut m = &a * a.adjoint();
        let t: f64 = m.diagonal().iter().map(|z| z.re).sum();
        m /= C64::new(t, 0.0);
        hermitize(&mut m);
        Self::unchecked(base, power, basis, m)
    }

    pub fn base(&self) -> &GroupSpec {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Matrix entry `⟨δ_x, ρ δ_y⟩`, zero off the basis.
    pub fn entry(&self, x: &Element, y: &Element) -> C64 {
        let i = self.basis.iter().position(|b| b == x);
        let j = self.basis.iter().position(|b| b == y);
        match (i, j) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => C64::default(),
        }
    }

    /// `ρ ⊗ σ` on concatenated tuples.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::GroupMismatch(self.base.to_string(), other.base.to_string()));
        }
        let power = self.power + other.power;
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for x in &self.basis {
            for y in &other.basis {
                let mut t = coordinates(x, self.power);
                t.extend(coordinates(y, other.power));
                basis.push(Element::Tuple(t));
            }
        }
        Self::unchecked(&self.base, power, basis, self.matrix.kronecker(&other.matrix))
    }

    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(&self.matrix)
    }

    /// `Σ_x translate(x) ⊗ translate(x)` applied entrywise, averaged over the
    /// Kraus elements. The output basis is sorted by normal form.
    fn conjugate_by(&self, images: impl Fn(&Element) -> Result<Vec<Element>>) -> Result<Self> {
        let mapped: Vec<Vec<Element>> = self.basis.iter().map(&images).collect::<Result<_>>()?;
        let terms = mapped.first().map_or(0, |m| m.len());
        let out: BTreeSet<&Element> = mapped.iter().flatten().collect();
        let out_basis: Vec<Element> = out.into_iter().cloned().collect();
        let index: HashMap<&Element, usize> = out_basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let n = out_basis.len();
        let mut m = DMatrix::zeros(n, n);
        let w = 1.0 / terms as f64;
        for k in 0..terms {
            for (a, ma) in mapped.iter().enumerate() {
                let ia = index[&ma[k]];
                for (b, mb) in mapped.iter().enumerate() {
                    m[(ia, index[&mb[k]])] += self.matrix[(a, b)] * w;
                }
            }
        }
        Ok(DensityState {
            base: self.base.clone(),
            power: self.power,
            basis: out_basis,
            matrix: m,
        })
    }
}

/// `G` for `k = 1`, else `G^k`.
pub fn ambient(base: &GroupSpec, power: usize) -> Result<GroupSpec> {
    if power == 1 {
        Ok(base.clone())
    } else {
        GroupSpec::direct_power(base.clone(), power)
    }
}

fn coordinates(x: &Element, power: usize) -> Vec<Element> {
    match (power, x) {
        (1, _) => vec![x.clone()],
        (_, Element::Tuple(c)) => c.clone(),
        _ => vec![x.clone()],
    }
}

/// Kraus translations of `Φ^{⊗k}`: `S` for `k = 1`, all tuples in `S^k` otherwise.
pub fn kraus_elements(base: &GroupSpec, power: usize, budget: usize) -> Result<Vec<Element>> {
    let s = base.generators(budget)?;
    if power == 1 {
        return Ok(s);
    }
    let total = s.len().checked_pow(power as u32).unwrap_or(usize::MAX);
    if total > budget {
        return Err(Error::budget(
            format!("Kraus tuples S^{power} of {base}"),
            total,
            budget,
        ));
    }
    let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
    for _ in 0..power {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                s.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(Element::Tuple).collect())
}

/// `Φ_l^{⊗k}(ρ)` with `λ(g) δ_x = δ_{gx}`.
pub fn apply_left(rho: &DensityState, budget: usize) -> Result<DensityState> {
    let g = ambient(&rho.base, rho.power)?;
    let kraus = kraus_elements(&rho.base, rho.power, budget)?;
    rho.conjugate_by(|x| kraus.iter().map(|u| g.multiply(u, x)).collect())
}

/// `Φ_r^{⊗k}(ρ)` with `ρ(g) δ_x = δ_{x g⁻¹}`.
pub fn apply_right(rho: &DensityState, budget: usize) -> Result<DensityState> {
    let g = ambient(&rho.base, rho.power)?;
    let kraus = kraus_elements(&rho.base, rho.power, budget)?;
    rho.conjugate_by(|x| kraus.iter().map(|u| g.quotient(x, u)).collect())
}

/// `(Φ_l ∘ Φ_r)(ρ)`.
pub fn compose_left_right(rho: &DensityState, budget: usize) -> Result<DensityState> {
    apply_left(&apply_right(rho, budget)?, budget)
}

/// Precomputed pairs for the complementary channel of `Φ_l^{⊗k}` on a fixed
/// basis: entry `(i, j)` is `N^{-k} Σ_y ρ(y, t y)` with `t = u_j⁻¹ u_i`.
#[derive(Clone, Debug)]
pub struct ComplementaryMap {
    size: usize,
    scale: f64,
    /// For each output entry `(i, j)`, the basis index pairs `(a, b)` with
    /// `basis[b] = u_j⁻¹ u_i basis[a]`.
    pairs: Vec<Vec<(usize, usize)>>,
}

impl ComplementaryMap {
    pub fn new(base: &GroupSpec, power: usize, basis: &[Element], budget: usize) -> Result<Self> {
        let g = ambient(base, power)?;
        let kraus = kraus_elements(base, power, budget)?;
        let index: HashMap<&Element, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let size = kraus.len();
        let mut by_t: HashMap<Element, Vec<(usize, usize)>> = HashMap::new();
        let mut pairs = Vec::with_capacity(size * size);
        for ui in &kraus {
            for uj in &kraus {
                let t = g.multiply(&g.inverse(uj)?, ui)?;
                if !by_t.contains_key(&t) {
                    let mut list = Vec::new();
                    for (a, y) in basis.iter().enumerate() {
                        if let Some(&b) = index.get(&g.multiply(&t, y)?) {
                            list.push((a, b));
                        }
                    }
                    by_t.insert(t.clone(), list);
                }
                pairs.push(by_t[&t].clone());
            }
        }
        Ok(ComplementaryMap {
            size,
            scale: 1.0 / size as f64,
            pairs,
        })
    }

    pub fn output_dim(&self) -> usize {
        self.size
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.size;
        DMatrix::from_fn(n, n, |i, j| {
            self.pairs[i * n + j].iter().map(|&(a, b)| rho[(a, b)]).sum::<C64>() * self.scale
        })
    }

    /// Output on the pure state `v v*`: entries `N^{-k} Σ v_a conj(v_b)`.
    pub fn apply_pure(&self, v: &[C64]) -> DMatrix<C64> {
        let n = self.size;
        DMatrix::from_fn(n, n, |i, j| {
            self.pairs[i * n + j]
                .iter()
                .map(|&(a, b)| v[a] * v[b].conj())
                .sum::<C64>()
                * self.scale
        })
    }

    /// `g_a = N^{-k} Σ_{ij} L_ij Σ_{(a,b)} v_b`: with this `g`, the first-order change of
    /// `tr(L σ(v))` is `2 Re Σ conj(g_a) dv_a` for Hermitian `L`.
    pub fn pullback(&self, l: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
        let n = self.size;
        let mut g = vec![C64::default(); v.len()];
        for i in 0..n {
            for j in 0..n {
                let lij = l[(i, j)] * self.scale;
                for &(a, b) in &self.pairs[i * n + j] {
                    g[a] += lij * v[b];
                }
            }
        }
        g
    }
}

/// `Φ^c(ρ)` for `Φ = Φ_l^{⊗k}`, indexed by Kraus tuples.
pub fn complementary_output(rho: &DensityState, budget: usize) -> Result<DMatrix<C64>> {
    let map = ComplementaryMap::new(&rho.base, rho.power, &rho.basis, budget)?;
    let mut out = map.apply(&rho.matrix);
    hermitize(&mut out);
    Ok(out)
}

fn hermitize(m: &mut DMatrix<C64>) {
    let h = (m.clone() + m.adjoint()) * C64::new(0.5, 0.0);
    *m = h;
}

/// Eigenvalues of a Hermitian matrix, ascending, with dust in `[-1e-10, 0)` set to zero.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    if let Some(&min) = ev.first() {
        if min < -NEG_TOL {
            return Err(Error::InvalidState(format!("eigenvalue {min:e} below -{NEG_TOL:e}")));
        }
    }
    ev.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(ev)
}

/// `−Σ α ln α` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(m: &DMatrix<C64>) -> Result<f64> {
    Ok(eigenvalues(m)?
        .into_iter()
        .filter(|&a| a > 0.0)
        .map(|a| -a * a.ln())
        .sum())
}

/// `tr(ρ²)`.
pub fn purity(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `H((Φ_l ∘ Φ_r)(ξ_e))`.
pub fn composed_entropy_on_delta(base: &GroupSpec, budget: usize) -> Result<f64> {
    compose_left_right(&DensityState::identity_delta(base, 1)?, budget)?.entropy()
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub power: usize,
    pub kraus: usize,
    pub q: f64,
    pub pair_multiplicity: u64,
    /// `‖Φ^c(ρ) − I/N^k‖₂` (Frobenius).
    pub deviation: f64,
    /// `N^{-k} ((q²𝔑 + N)^k − N^k)^{1/2}`.
    pub bound: f64,
    pub entropy: f64,
    /// `−ln tr(σ²)`.
    pub renyi2: f64,
    /// `−2 ln ‖σ‖₂`, equal to `renyi2`.
    pub chain_lhs: f64,
    /// `k ln N − 2 ln(1 + [(1 + q²𝔑/N)^k − 1]^{1/2})`.
    pub chain_rhs: f64,
    pub passed: bool,
}

/// The ℓ₂ deviation step of the proof of Theorem main with a given constant `q`
/// for `B₂^G`, together with the Rényi-2 and entropy-chain consequences.
pub fn l2_deviation_check(
    rho: &DensityState,
    q: f64,
    pair_multiplicity: u64,
    tol: f64,
    budget: usize,
) -> Result<DeviationReport> {
    let sigma = complementary_output(rho, budget)?;
    let n = rho.base.generators(budget)?.len() as f64;
    let k = rho.power as i32;
    let nk = n.powi(k);
    let dim = sigma.nrows();
    let x = &sigma - DMatrix::<C64>::identity(dim, dim) / C64::new(nk, 0.0);
    let deviation = purity(&x).sqrt();
    let a = q * q * pair_multiplicity as f64;
    let bound = ((a + n).powi(k) - nk).max(0.0).sqrt() / nk;
    let entropy = von_neumann_entropy(&sigma)?;
    let p = purity(&sigma);
    let renyi2 = -p.ln();
    let chain_lhs = -2.0 * p.sqrt().ln();
    let chain_rhs = k as f64 * n.ln() - 2.0 * (1.0 + ((1.0 + a / n).powi(k) - 1.0).sqrt()).ln();
    let passed = deviation <= bound + tol && entropy >= renyi2 - tol && chain_lhs >= chain_rhs - tol;
    Ok(DeviationReport {
        power: rho.power,
        kraus: dim,
        q,
        pair_multiplicity,
        deviation,
        bound,
        entropy,
        renyi2,
        chain_lhs,
        chain_rhs,
        passed,
    })
}

/// Window of `ℓ²(G^k)`: tuples over the symmetric ball of radius `r`.
pub fn tuple_window(base: &GroupSpec, power: usize, radius: usize, budget: usize) -> Result<Vec<Element>> {
    let ball = base.symmetric_ball(radius, budget)?;
    if power == 1 {
        return Ok(ball);
    }
    let total = ball.len().checked_pow(power as u32).unwrap_or(usize::MAX);
    if total > budget {
        return Err(Error::budget(
            format!("window of ({base})^{power} at radius {radius}"),
            total,
            budget,
        ));
    }
    let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
    for _ in 0..power {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                ball.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(Element::Tuple).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Letter, DEFAULT_BUDGET};

    const B: usize = DEFAULT_BUDGET;

    fn w(s: &[(u64, bool)]) -> Element {
        Element::Word(
            s.iter()
                .map(|&(i, inv)| if inv { Letter::new(i).inv() } else { Letter::new(i) })
                .collect(),
        )
    }

    #[test]
    fn left_channel_on_identity() {
        let f2 = GroupSpec::free(2);
        let out = apply_left(&DensityState::identity_delta(&f2, 1).unwrap(), B).unwrap();
        assert_eq!(out.basis(), &[w(&[(0, false)]), w(&[(1, false)])]);
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(out.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn composed_channel_on_identity() {
        let f2 = GroupSpec::free(2);
        let out = compose_left_right(&DensityState::identity_delta(&f2, 1).unwrap(), B).unwrap();
        let e = f2.identity();
        let ab = w(&[(0, false), (1, true)]);
        let ba = w(&[(1, false), (0, true)]);
        assert!((out.entry(&e, &e).re - 0.5).abs() < 1e-15);
        assert!((out.entry(&ab, &ab).re - 0.25).abs() < 1e-15);
        assert!((out.entry(&ba, &ba).re - 0.25).abs() < 1e-15);
        assert!((out.trace() - 1.0).abs() < 1e-15);
        assert!((out.entropy().unwrap() - 1.5 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn composed_entropy_formula() {
        for n in [2u64, 3, 4] {
            let nf = n as f64;
            let want = 2.0 * nf.ln() - nf.ln() / nf;
            let got = composed_entropy_on_delta(&GroupSpec::free(n), B).unwrap();
            assert!((got - want).abs() < 1e-12, "F{n}: {got} vs {want}");
        }
        let z4 = GroupSpec::cyclic_with(4, vec![1, 2, 3]).unwrap();
        let got = composed_entropy_on_delta(&z4, B).unwrap();
        assert!(got <= 2.0 * 3f64.ln() - 3f64.ln() / 3.0 + 1e-12);
    }

    #[test]
    fn complementary_of_deltas_is_maximally_mixed() {
        let f3 = GroupSpec::free(3);
        for g in f3.symmetric_ball(2, B).unwrap() {
            let s = complementary_output(&DensityState::delta(&f3, 1, g).unwrap(), B).unwrap();
            let want = DMatrix::<C64>::identity(3, 3) / C64::new(3.0, 0.0);
            assert!((s - want).norm() < 1e-15);
        }
        let e = DensityState::identity_delta(&f3, 1).unwrap();
        let ee = e.tensor(&e).unwrap();
        let s = complementary_output(&ee, B).unwrap();
        assert!((s - DMatrix::<C64>::identity(9, 9) / C64::new(9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.25, 0.0),
            C64::new(0.25, 0.0),
        ]));
        assert!((von_neumann_entropy(&d).unwrap() - 1.0397207708399179).abs() < 1e-14);
        let pure = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.1, 0.0),
            C64::new(-0.1, 0.0),
        ]));
        assert!(matches!(von_neumann_entropy(&bad), Err(Error::InvalidState(_))));
    }

    #[test]
    fn channels_preserve_trace() {
        let f2 = GroupSpec::free(2);
        let basis = f2.symmetric_ball(2, B).unwrap();
        let mut rng = sampling::stream(4, 0);
        let rho = DensityState::random(&f2, 1, basis, 3, &mut rng).unwrap();
        for out in [apply_left(&rho, B), apply_right(&rho, B), compose_left_right(&rho, B)] {
            let out = out.unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-12);
            assert!(eigenvalues(out.matrix()).unwrap()[0] >= 0.0);
        }
    }

    #[test]
    fn kraus_operators_are_isometric() {
        // Σ T_i* T_i = I: each λ(g_i) maps the window injectively.
        let g = GroupSpec::free(2);
        let basis = g.symmetric_ball(1, B).unwrap();
        let s = g.generators(B).unwrap();
        let out: Vec<Element> = {
            let mut v: Vec<Element> = s
                .iter()
                .flat_map(|u| basis.iter().map(|x| g.multiply(u, x).unwrap()))
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let n = basis.len();
        let mut sum = DMatrix::<C64>::zeros(n, n);
        for u in &s {
            let t = DMatrix::from_fn(out.len(), n, |r, c| {
                if out[r] == g.multiply(u, &basis[c]).unwrap() {
                    C64::new(1.0 / (s.len() as f64).sqrt(), 0.0)
                } else {
                    C64::default()
                }
            });
            sum += t.adjoint() * t;
        }
        assert!((sum - DMatrix::identity(n, n)).norm() < 1e-15);
    }

    #[test]
    fn deviation_bound_examples() {
        let f2 = GroupSpec::free(2);
        let e = DensityState::identity_delta(&f2, 1).unwrap();
        let r = l2_deviation_check(&e, 6f64.sqrt(), 1, 1e-9, B).unwrap();
        assert!(r.deviation < 1e-15 && r.passed);
        assert!((r.bound - 6f64.sqrt() / 2.0).abs() < 1e-15);
        let ee = e.tensor(&e).unwrap();
        let r = l2_deviation_check(&ee, 6f64.sqrt(), 1, 1e-9, B).unwrap();
        assert!((r.bound - 60f64.sqrt() / 4.0).abs() < 1e-14);
    }
}
