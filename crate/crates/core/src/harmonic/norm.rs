use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec, DEFAULT_BUDGET};
use crate::{sampling, C64};

/// Seed of the start vector used by power iteration.
const POWER_SEED: u64 = 0x005e_ed0f_c0de;

/// Options shared by the norm estimators and verifiers.
#[derive(Clone, Debug)]
pub struct NormOptions {
    /// Radius of the symmetric window used for compressions of infinite groups.
    pub radius: usize,
    /// Largest `n` in the moment bound `((f̃*f)^{*n}(e))^{1/2n}`.
    pub moment_depth: usize,
    pub tol: f64,
    pub max_iterations: usize,
    pub budget: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            radius: 3,
            moment_depth: 6,
            tol: 1e-10,
            max_iterations: 10_000,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Finite window `P λ(f) P` with `P` the projection onto `basis`.
#[derive(Clone, Debug)]
pub struct Compression {
    pub basis: Vec<Element>,
    pub matrix: DMatrix<C64>,
}

impl Compression {
    pub fn spectral_norm(&self) -> f64 {
        dense_spectral_norm(&self.matrix)
    }
}

/// Sparsity pattern of `P λ(f) P` for every `f` supported on a fixed set:
/// entry `(x, y)` of the operator is `f(x y⁻¹)`, so it is nonzero only when
/// `x = s y` for some `s` in the support.
#[derive(Clone, Debug)]
pub struct Frame {
    basis: Vec<Element>,
    support: Vec<Element>,
    entries: Vec<(u32, u32, u32)>,
}

impl Frame {
    pub fn new(group: &GroupSpec, basis: Vec<Element>, support: Vec<Element>) -> Result<Self> {
        let index: HashMap<&Element, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut entries = Vec::new();
        for (col, y) in basis.iter().enumerate() {
            for (k, s) in support.iter().enumerate() {
                let x = group.multiply(s, y)?;
                if let Some(&row) = index.get(&x) {
                    entries.push((row as u32, col as u32, k as u32));
                }
            }
        }
        Ok(Frame {
            basis,
            support,
            entries,
        })
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn support(&self) -> &[Element] {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients of `f` in support order.
    pub fn coefficients(&self, f: &AlgebraElement) -> Result<Vec<C64>> {
        let known: std::collections::HashSet<&Element> = self.support.iter().collect();
        if let Some(g) = f.support().find(|g| !known.contains(g)) {
            return Err(Error::Validation(format!("{g} lies outside the frame support")));
        }
        Ok(self.support.iter().map(|g| f.coefficient(g)).collect())
    }

    pub fn dense(&self, coeffs: &[C64]) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for &(r, c, k) in &self.entries {
            m[(r as usize, c as usize)] += coeffs[k as usize];
        }
        m
    }

    pub fn sparse(&self, coeffs: &[C64]) -> SparseOperator {
        SparseOperator {
            dim: self.dim(),
            entries: self
                .entries
                .iter()
                .map(|&(r, c, k)| (r as usize, c as usize, coeffs[k as usize]))
                .filter(|e| e.2 != C64::new(0.0, 0.0))
                .collect(),
        }
    }
}

/// Square sparse matrix in coordinate form.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim];
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim];
        for &(r, c, a) in &self.entries {
            out[c] += a.conj() * v[r];
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PowerResult {
    /// `‖A v‖` for the final unit vector `v`; always a lower bound on `‖A‖`.
    pub sigma: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration on `A*A`. The Rayleigh quotient of a unit vector never
/// exceeds `‖A‖²`, so the result is a lower bound even when unconverged.
pub fn power_iteration(op: &SparseOperator, tol: f64, max_iterations: usize) -> PowerResult {
    let mut rng = sampling::stream(POWER_SEED, op.dim as u64);
    let mut v = sampling::gaussian_vector(&mut rng, op.dim);
    let n = norm2(&v);
    if op.dim == 0 || n == 0.0 {
        return PowerResult {
            sigma: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    v.iter_mut().for_each(|z| *z /= n);
    let mut best = 0.0f64;
    let mut prev = f64::NAN;
    for it in 1..=max_iterations {
        let w = op.apply(&v);
        let r = norm2(&w);
        best = best.max(r);
        if r == 0.0 || (r - prev).abs() <= tol * r {
            return PowerResult {
                sigma: best,
                iterations: it,
                converged: true,
            };
        }
        prev = r;
        let mut u = op.apply_adjoint(&w);
        let un = norm2(&u);
        u.iter_mut().for_each(|z| *z /= un);
        v = u;
    }
    PowerResult {
        sigma: best,
        iterations: max_iterations,
        converged: false,
    }
}

/// Largest singular value of a dense matrix.
pub fn dense_spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// `P λ(f) P` on the positive ball `B_R` (the whole group if `G` is finite).
pub fn compression(f: &AlgebraElement, radius: usize, budget: usize) -> Result<Compression> {
    let group = f.group();
    let basis = if group.is_finite() {
        group.elements(budget)?
    } else {
        group.ball(radius, budget)?
    };
    compression_on(f, basis)
}

/// `P λ(f) P` on an explicit basis.
pub fn compression_on(f: &AlgebraElement, basis: Vec<Element>) -> Result<Compression> {
    let support: Vec<Element> = f.support().cloned().collect();
    let frame = Frame::new(f.group(), basis, support)?;
    let coeffs = frame.coefficients(f)?;
    Ok(Compression {
        matrix: frame.dense(&coeffs),
        basis: frame.basis,
    })
}

/// Basis on which `λ(f)` is evaluated: the whole group when finite, the
/// symmetric ball of the configured radius otherwise.
pub fn window(group: &GroupSpec, opts: &NormOptions) -> Result<(Vec<Element>, bool)> {
    if group.is_finite() {
        Ok((group.elements(opts.budget)?, true))
    } else {
        Ok((group.symmetric_ball(opts.radius, opts.budget)?, false))
    }
}

/// `max_n ((f̃*f)^{*n}(e))^{1/2n}` for `n ≤ depth`, stopping early when a
/// convolution power outgrows the budget.
pub fn moment_lower_bound(f: &AlgebraElement, depth: usize, budget: usize) -> Result<f64> {
    let h = f.adjoint()?.convolve(f)?;
    let e = f.group().identity();
    let mut best = 0.0f64;
    let mut p = h.clone();
    for n in 1..=depth {
        let m = p.coefficient(&e).re.max(0.0);
        best = best.max(m.powf(1.0 / (2 * n) as f64));
        if n == depth || p.support_size().saturating_mul(h.support_size()) > budget * 64 {
            break;
        }
        p = p.convolve(&h)?;
        if p.support_size() > budget {
            break;
        }
    }
    Ok(best)
}

/// Certified bounds on an operator norm, with the method used for each side.
#[derive(Clone, Debug, Serialize)]
pub struct NormBound {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: String,
    pub upper_method: String,
    /// `upper² ∈ ℕ` when the upper bound is the square root of an integer;
    /// certificates then use the exact value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_upper_squared: Option<u64>,
}

impl NormBound {
    fn exact(value: f64, method: &str, squared: Option<u64>) -> Self {
        NormBound {
            lower: value,
            upper: value,
            lower_method: method.into(),
            upper_method: method.into(),
            exact_upper_squared: squared,
        }
    }

    fn sqrt_int(lower: f64, lower_method: String, squared: u64, upper_method: String) -> Self {
        NormBound {
            lower,
            upper: (squared as f64).sqrt(),
            lower_method,
            upper_method,
            exact_upper_squared: Some(squared),
        }
    }
}

/// Reduced (symmetric) word length in a free group.
fn free_length(g: &Element) -> usize {
    match g {
        Element::Word(w) => w.len(),
        _ => 0,
    }
}

/// Upper bounds from the registry that apply to `f`, smallest first.
fn registered_upper(f: &AlgebraElement, opts: &NormOptions) -> Result<(f64, String)> {
    let l2 = f.l2_norm();
    let mut best = ((f.support_size() as f64).sqrt() * l2, "cauchy-schwarz".to_string());
    match f.group() {
        GroupSpec::Free { .. } => {
            let mut by_len: HashMap<usize, f64> = HashMap::new();
            for (g, c) in f.terms() {
                *by_len.entry(free_length(g)).or_default() += c.norm_sqr();
            }
            let v: f64 = by_len.iter().map(|(m, s)| (*m as f64 + 1.0) * s.sqrt()).sum();
            if v < best.0 {
                best = (v, "haagerup-length".into());
            }
        }
        g @ GroupSpec::FreeProduct(_) => {
            let in_ball = f
                .support()
                .map(|x| g.word_length(x, 2, opts.budget).map(|l| l.value().is_some()))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            if in_ball {
                if let Ok(p) = max_factor_constant(g, opts) {
                    let v = 5.0 * std::f64::consts::SQRT_2 * p * l2;
                    if v < best.0 {
                        best = (v, "free-product-5sqrt2".into());
                    }
                }
            }
        }
        _ => {}
    }
    Ok(best)
}

/// `max_i p_i` over the distinct factors of a free product.
fn max_factor_constant(g: &GroupSpec, opts: &NormOptions) -> Result<f64> {
    let GroupSpec::FreeProduct(fs) = g else {
        return Err(Error::Unsupported {
            op: "max_factor_constant",
            spec: g.to_string(),
        });
    };
    let mut p = 0.0f64;
    for f in fs {
        p = p.max(ball2_constant(&f.group, opts)?.upper);
    }
    Ok(p)
}

/// Bounds on `‖λ_G(f)‖`: exact for finite groups, otherwise the best of the
/// compression and moment lower bounds against the registered upper bounds.
pub fn operator_norm(f: &AlgebraElement, opts: &NormOptions) -> Result<NormBound> {
    let group = f.group();
    if f.is_zero() {
        return Ok(NormBound::exact(0.0, "zero", Some(0)));
    }
    let support: Vec<Element> = f.support().cloned().collect();
    let (basis, exact) = window(group, opts)?;
    let frame = Frame::new(group, basis, support)?;
    let coeffs = frame.coefficients(f)?;
    if exact {
        let v = dense_spectral_norm(&frame.dense(&coeffs));
        return Ok(NormBound::exact(v, "dense-svd", None));
    }
    let power = power_iteration(&frame.sparse(&coeffs), opts.tol, opts.max_iterations);
    let moment = moment_lower_bound(f, opts.moment_depth, opts.budget)?;
    let (mut lower, mut lower_method) = (power.sigma, "compression-power-iteration".to_string());
    if !power.converged {
        lower_method.push_str(" (unconverged)");
    }
    if moment > lower {
        lower = moment;
        lower_method = "moment".into();
    }
    let (upper, upper_method) = registered_upper(f, opts)?;
    Ok(NormBound {
        lower: lower.min(upper),
        upper,
        lower_method,
        upper_method,
        exact_upper_squared: None,
    })
}

/// Bounds on `sup { ‖λ(f)‖ : supp f ⊆ E, ‖f‖₂ = 1 }`.
///
/// The upper bound is `√|E|`. On a finite group the uniform function on `E`
/// attains it. On an infinite group the lower bound comes from compressions of
/// the uniform function and `samples` random functions on `E`.
pub fn haagerup_constant(
    group: &GroupSpec,
    set: &[Element],
    samples: usize,
    seed: u64,
    opts: &NormOptions,
) -> Result<NormBound> {
    let mut set = set.to_vec();
    set.sort();
    set.dedup();
    if set.is_empty() {
        return Err(Error::Validation("empty support set".into()));
    }
    let size = set.len() as u64;
    let uniform = AlgebraElement::indicator(group, &set)?.normalized();
    let (basis, exact) = window(group, opts)?;
    let frame = Frame::new(group, basis, set.clone())?;
    if exact {
        let v = dense_spectral_norm(&frame.dense(&frame.coefficients(&uniform)?));
        return Ok(NormBound::sqrt_int(
            v,
            "uniform-dense-svd".into(),
            size,
            "cauchy-schwarz".into(),
        ));
    }
    let mut lower = moment_lower_bound(&uniform, opts.moment_depth, opts.budget)?;
    let mut lower_method = "moment".to_string();
    let candidates = std::iter::once(frame.coefficients(&uniform)?).chain((0..samples).map(|t| {
        let mut rng = sampling::stream(seed, t as u64);
        let v = sampling::gaussian_vector(&mut rng, set.len());
        let n = norm2(&v);
        v.into_iter().map(|z| z / n).collect()
    }));
    for c in candidates {
        let r = power_iteration(&frame.sparse(&c), opts.tol, opts.max_iterations);
        if r.sigma > lower {
            lower = r.sigma;
            lower_method = "compression-power-iteration".into();
        }
    }
    let mut squared = size;
    let mut upper_method = "cauchy-schwarz".to_string();
    if matches!(group, GroupSpec::Free { .. }) {
        let mut by_len: HashMap<usize, u64> = HashMap::new();
        for g in &set {
            *by_len.entry(free_length(g)).or_default() += 1;
        }
        // Σ (m+1) ‖f_m‖₂ ≤ (Σ_m (m+1)²)^{1/2} ‖f‖₂ over the lengths present.
        let h: u64 = by_len.keys().map(|&m| ((m + 1) * (m + 1)) as u64).sum();
        if h < squared {
            squared = h;
            upper_method = "haagerup-length".into();
        }
    }
    let upper = (squared as f64).sqrt();
    Ok(NormBound::sqrt_int(
        lower.min(upper),
        lower_method,
        squared,
        upper_method,
    ))
}

/// Registered Haagerup constant for the positive ball `B₂^G`.
///
/// * finite groups: `√|B₂|`, attained;
/// * `F_r`: `min(√|B₂|, √14)`, the latter from the length bound `√(1²+2²+3²)`;
/// * free products: `min(√|B₂|, 5√2 · max_i p_i)` over the distinct factors;
/// * other infinite groups: `√|B₂|` when the ball can be enumerated.
pub fn ball2_constant(group: &GroupSpec, opts: &NormOptions) -> Result<NormBound> {
    if group.is_finite() {
        let ball = group.ball(2, opts.budget)?;
        return haagerup_constant(group, &ball, 0, 0, opts);
    }
    let ball_size = ball2_size(group);
    let cs = ball_size.as_ref().and_then(|n| n.to_u64());
    match group {
        GroupSpec::Free { .. } => {
            let (squared, method) = match cs {
                Some(n) if n < 14 => (n, "cauchy-schwarz"),
                _ => (14, "haagerup-length"),
            };
            Ok(NormBound::sqrt_int(1.0, "delta-e".into(), squared, method.into()))
        }
        GroupSpec::FreeProduct(fs) => {
            let mut p_sq: Option<u64> = Some(0);
            let mut p = 0.0f64;
            for f in fs {
                let b = ball2_constant(&f.group, opts)?;
                p = p.max(b.upper);
                p_sq = match (p_sq, b.exact_upper_squared) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
            let composed = 5.0 * std::f64::consts::SQRT_2 * p;
            match cs {
                Some(n) if (n as f64).sqrt() < composed => {
                    Ok(NormBound::sqrt_int(1.0, "delta-e".into(), n, "cauchy-schwarz".into()))
                }
                _ => Ok(NormBound {
                    lower: 1.0,
                    upper: composed,
                    lower_method: "delta-e".into(),
                    upper_method: "free-product-5sqrt2".into(),
                    exact_upper_squared: p_sq.map(|s| 50 * s),
                }),
            }
        }
        _ => match cs {
            Some(n) if n as usize <= opts.budget => {
                let ball = group.ball(2, opts.budget)?;
                haagerup_constant(group, &ball, 0, 0, opts)
            }
            _ => Err(Error::Unsupported {
                op: "ball2_constant",
                spec: group.to_string(),
            }),
        },
    }
}

/// `|B₂^G|` when it can be computed without enumerating a huge set.
fn ball2_size(group: &GroupSpec) -> Option<BigUint> {
    match group {
        GroupSpec::Free { rank } => {
            let r = BigUint::from(*rank);
            Some(BigUint::from(1u32) + &r + &r * &r)
        }
        _ => {
            let n = group.generator_count();
            if n > BigUint::from(DEFAULT_BUDGET) {
                return None;
            }
            group.ball(2, DEFAULT_BUDGET * 4).ok().map(|b| BigUint::from(b.len()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Letter;

    fn r(x: u64) -> Element {
        Element::Residue(x)
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn cyclic_shift_is_a_permutation() {
        let g = GroupSpec::cyclic(5);
        let f = AlgebraElement::delta(&g, r(1)).unwrap();
        let c = compression(&f, 0, 64).unwrap();
        assert_eq!(c.matrix.shape(), (5, 5));
        for col in 0..5 {
            let ones: Vec<usize> = (0..5).filter(|&row| c.matrix[(row, col)] == one()).collect();
            assert_eq!(ones.len(), 1);
        }
        assert!((c.spectral_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_partial_shift() {
        let g = GroupSpec::free(2);
        let a = Element::Word(vec![Letter::new(0)]);
        let f = AlgebraElement::delta(&g, a.clone()).unwrap();
        let c = compression(&f, 1, 64).unwrap();
        assert_eq!(c.basis.len(), 3);
        let nnz: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| c.matrix[(i, j)] != C64::default())
            .collect();
        let e_idx = c.basis.iter().position(|x| g.is_identity(x)).unwrap();
        let a_idx = c.basis.iter().position(|x| *x == a).unwrap();
        assert_eq!(nnz, vec![(a_idx, e_idx)]);
    }

    #[test]
    fn zero_function() {
        let g = GroupSpec::cyclic(5);
        let f = AlgebraElement::zero(&g);
        let c = compression(&f, 2, 64).unwrap();
        assert!(c.matrix.iter().all(|z| *z == C64::default()));
        let b = operator_norm(&f, &NormOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn uniform_on_ball_is_sqrt3() {
        let g = GroupSpec::cyclic(5);
        let f = AlgebraElement::indicator(&g, &[r(0), r(1), r(2)]).unwrap().normalized();
        let b = operator_norm(&f, &NormOptions::default()).unwrap();
        assert!((b.lower - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn free_length_bound() {
        let g = GroupSpec::free(2);
        let f = AlgebraElement::indicator(
            &g,
            &[Element::Word(vec![Letter::new(0)]), Element::Word(vec![Letter::new(1)])],
        )
        .unwrap();
        let b = operator_norm(&f, &NormOptions::default()).unwrap();
        assert!(b.upper <= 2.0 * 2f64.sqrt() + 1e-12);
        assert!(b.lower <= b.upper);
        assert!(b.lower >= 2f64.sqrt() - 1e-9);
    }

    #[test]
    fn scaled_identity() {
        for g in [GroupSpec::cyclic(5), GroupSpec::free(2)] {
            let c = C64::new(0.6, -0.8) * 2.5;
            let f = AlgebraElement::delta(&g, g.identity()).unwrap().scale(c);
            let b = operator_norm(&f, &NormOptions::default()).unwrap();
            assert!((b.lower - 2.5).abs() < 1e-9, "{b:?}");
            assert!((b.upper - 2.5).abs() < 1e-9, "{b:?}");
        }
    }

    #[test]
    fn power_iteration_matches_dense() {
        let g = GroupSpec::cyclic(11);
        let set: Vec<Element> = (0..4).map(r).collect();
        let mut rng = sampling::stream(3, 0);
        let coeffs = sampling::gaussian_vector(&mut rng, set.len());
        let frame = Frame::new(&g, g.elements(64).unwrap(), set).unwrap();
        let p = power_iteration(&frame.sparse(&coeffs), 1e-14, 100_000);
        let d = dense_spectral_norm(&frame.dense(&coeffs));
        assert!(p.sigma <= d + 1e-12);
        assert!((p.sigma - d).abs() < 1e-9, "{} vs {d}", p.sigma);
    }

    #[test]
    fn haagerup_examples() {
        let opts = NormOptions::default();
        for n in [5, 7] {
            let g = GroupSpec::cyclic(n);
            let b = haagerup_constant(&g, &g.ball(2, 64).unwrap(), 0, 0, &opts).unwrap();
            assert!((b.lower - 3f64.sqrt()).abs() < 1e-12);
            assert_eq!(b.exact_upper_squared, Some(3));
        }
        let g = GroupSpec::free(2);
        let b = haagerup_constant(&g, &[g.identity()], 4, 1, &opts).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn registered_ball2_constants() {
        let opts = NormOptions::default();
        let b = ball2_constant(&GroupSpec::free(10_000_000_000), &opts).unwrap();
        assert_eq!(b.exact_upper_squared, Some(14));
        let b = ball2_constant(&GroupSpec::free(2), &opts).unwrap();
        assert_eq!(b.exact_upper_squared, Some(7));
        let fp = GroupSpec::free_power(GroupSpec::cyclic(5), BigUint::from(10u32).pow(84)).unwrap();
        let b = ball2_constant(&fp, &opts).unwrap();
        assert_eq!(b.exact_upper_squared, Some(150));
        assert!((b.upper - 12.247_448_713_915_89).abs() < 1e-12);
    }

    #[test]
    fn moments_bound_below() {
        let g = GroupSpec::free(2);
        let f = AlgebraElement::indicator(
            &g,
            &[Element::Word(vec![Letter::new(0)]), Element::Word(vec![Letter::new(1)])],
        )
        .unwrap();
        let m = moment_lower_bound(&f, 6, 4096).unwrap();
        // ‖λ(a) + λ(b)‖ = 2 and the moments approach it from below.
        assert!(m > 1.5 && m <= 2.0 + 1e-12, "{m}");
    }
}
