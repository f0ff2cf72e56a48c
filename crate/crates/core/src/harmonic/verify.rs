use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::algebra::AlgebraElement;
use super::norm::{ball2_constant, dense_spectral_norm, power_iteration, window, Frame, NormOptions};
use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec, Syllable};
use crate::{sampling, C64};

/// Absolute slack allowed on top of an inequality's constant.
pub const VERIFY_TOL: f64 = 1e-9;

const SIGN_PATTERNS: usize = 4;
const WITNESSES: usize = 5;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub norm: NormOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 200,
            seed: 0,
            norm: NormOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub sample: String,
    pub ratio: f64,
}

/// Outcome of a seeded run checking `‖λ(φ)‖ ≤ bound · ‖φ‖₂` on samples.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub lemma: &'static str,
    pub group_spec: String,
    pub params: serde_json::Value,
    pub trials: usize,
    pub seed: u64,
    pub samples: usize,
    /// Whether ratios use exact norms (finite groups) or compression lower bounds.
    pub exact: bool,
    pub max_ratio: f64,
    pub uniform_ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub counterexamples: usize,
    pub unconverged: usize,
    pub witnesses: Vec<Witness>,
    pub passed: bool,
}

struct Sample {
    label: String,
    coeffs: Vec<C64>,
}

/// Uniform function, every basis vector, a few random sign patterns, then
/// `trials` complex Gaussian vectors. Sample `t` only depends on `(seed, t)`.
fn standard_samples(dim: usize, trials: usize, seed: u64) -> Vec<Sample> {
    let one = C64::new(1.0, 0.0);
    let mut out = vec![Sample {
        label: "uniform".into(),
        coeffs: vec![one; dim],
    }];
    for i in 0..dim {
        let mut c = vec![C64::default(); dim];
        c[i] = one;
        out.push(Sample {
            label: format!("basis[{i}]"),
            coeffs: c,
        });
    }
    if dim > 1 {
        for j in 0..SIGN_PATTERNS {
            let mut rng = sampling::stream(seed, (1u64 << 40) + j as u64);
            let c = (0..dim)
                .map(|_| if rng.random::<bool>() { one } else { -one })
                .collect();
            out.push(Sample {
                label: format!("signs[{j}]"),
                coeffs: c,
            });
        }
    }
    out.par_extend((0..trials).into_par_iter().map(|t| {
        let mut rng = sampling::stream(seed, t as u64);
        Sample {
            label: format!("gaussian[{t}]"),
            coeffs: sampling::gaussian_vector(&mut rng, dim),
        }
    }));
    out
}

struct Evaluated {
    ratios: Vec<(String, f64)>,
    unconverged: usize,
}

fn evaluate(frame: &Frame, exact: bool, samples: &[Sample], opts: &NormOptions) -> Evaluated {
    let results: Vec<(String, f64, bool)> = samples
        .par_iter()
        .map(|s| {
            let l2 = s.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let (norm, converged) = if exact {
                (dense_spectral_norm(&frame.dense(&s.coeffs)), true)
            } else {
                let p = power_iteration(&frame.sparse(&s.coeffs), opts.tol, opts.max_iterations);
                (p.sigma, p.converged)
            };
            (s.label.clone(), norm / l2, converged)
        })
        .collect();
    Evaluated {
        unconverged: results.iter().filter(|r| !r.2).count(),
        ratios: results.into_iter().map(|(l, r, _)| (l, r)).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn report(
    lemma: &'static str,
    group: &GroupSpec,
    params: serde_json::Value,
    opts: &VerifyOptions,
    exact: bool,
    bound: f64,
    eval: Evaluated,
) -> VerificationReport {
    let max_ratio = eval.ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let uniform_ratio = eval.ratios.first().map_or(0.0, |r| r.1);
    let counterexamples = eval.ratios.iter().filter(|r| r.1 > bound + VERIFY_TOL).count();
    let mut ranked: Vec<&(String, f64)> = eval.ratios.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    VerificationReport {
        lemma,
        group_spec: group.canonical(),
        params,
        trials: opts.trials,
        seed: opts.seed,
        samples: eval.ratios.len(),
        exact,
        max_ratio,
        uniform_ratio,
        bound,
        margin: bound - max_ratio,
        counterexamples,
        unconverged: eval.unconverged,
        witnesses: ranked
            .into_iter()
            .take(WITNESSES)
            .map(|(s, r)| Witness {
                sample: s.clone(),
                ratio: *r,
            })
            .collect(),
        passed: counterexamples == 0,
    }
}

fn names(group: &GroupSpec, set: &[Element]) -> Vec<String> {
    set.iter().map(|g| group.format_element(g)).collect()
}

/// Lemma SRD: `‖λ_{G×H}(φ)‖ ≤ p q ‖φ‖₂` for `supp φ ⊆ E × F`, given the
/// hypotheses with constants `p` on `E ⊆ G` and `q` on `F ⊆ H`.
#[allow(clippy::too_many_arguments)]
pub fn verify_product_inequality(
    g: &GroupSpec,
    h: &GroupSpec,
    e: &[Element],
    f: &[Element],
    p: f64,
    q: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let product = GroupSpec::direct_product(vec![g.clone(), h.clone()])?;
    let support: Vec<Element> = e
        .iter()
        .flat_map(|a| f.iter().map(move |b| Element::Tuple(vec![a.clone(), b.clone()])))
        .collect();
    let (basis, exact) = window(&product, &opts.norm)?;
    let frame = Frame::new(&product, basis, support)?;
    let samples = standard_samples(frame.support().len(), opts.trials, opts.seed);
    let eval = evaluate(&frame, exact, &samples, &opts.norm);
    let params = json!({ "H": h.canonical(), "E": names(g, e), "F": names(h, f), "p": p, "q": q });
    Ok(report("lem:SRD", g, params, opts, exact, p * q, eval))
}

/// Binomial coefficient as a float.
fn binomial(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Tuples of `E^n` with exactly `m` non-identity coordinates (the set `𝒫_m^n ∩ E^n`).
pub fn power_support(g: &GroupSpec, e: &[Element], n: usize, m: usize) -> Vec<Element> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Element>| {
                e.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|t| t.iter().filter(|x| !g.is_identity(x)).count() == m)
        .map(Element::Tuple)
        .collect()
}

/// Corollary SRD: `‖λ_{Gⁿ}(φ)‖ ≤ C(n,m)^{1/2} p^m ‖φ‖₂` for `φ` supported on
/// `(B₂^G)ⁿ ∩ 𝒫_m^n`, given the hypothesis with constant `p` on `B₂^G`.
pub fn verify_power_inequality(
    g: &GroupSpec,
    n: usize,
    m: usize,
    p: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if m > n {
        return Err(Error::Validation(format!("m = {m} exceeds n = {n}")));
    }
    let power = GroupSpec::direct_power(g.clone(), n)?;
    let e = g.ball(2, opts.norm.budget)?;
    let support = power_support(g, &e, n, m);
    let (basis, exact) = window(&power, &opts.norm)?;
    let frame = Frame::new(&power, basis, support)?;
    let samples = standard_samples(frame.support().len(), opts.trials, opts.seed);
    let eval = evaluate(&frame, exact, &samples, &opts.norm);
    let bound = binomial(n, m).sqrt() * p.powi(m as i32);
    let params = json!({ "n": n, "m": m, "p": p, "support_size": frame.support().len() });
    Ok(report("cor:SRD", &power, params, opts, exact, bound, eval))
}

/// Theorem SRD-free: `‖λ(φ)‖ ≤ 5√2 max_i p_i ‖φ‖₂` for `supp φ ⊆ B₂` of the
/// free product, with `p_i` the registered constants of the factors. The free
/// product is infinite, so only compression lower bounds are compared.
pub fn verify_freeprod_inequality(factors: &[GroupSpec], opts: &VerifyOptions) -> Result<VerificationReport> {
    let group = GroupSpec::free_product(factors.iter().map(|f| (f.clone(), BigUint::from(1u32))))?;
    let mut p = 0.0f64;
    let mut constants = Vec::new();
    for f in factors {
        let b = ball2_constant(f, &opts.norm)?;
        p = p.max(b.upper);
        constants.push(b.upper);
    }
    let bound = 5.0 * std::f64::consts::SQRT_2 * p;
    let support = group.ball(2, opts.norm.budget)?;
    let (basis, exact) = window(&group, &opts.norm)?;
    let frame = Frame::new(&group, basis, support.clone())?;
    let mut samples = standard_samples(support.len(), opts.trials, opts.seed);
    let e = group.identity();
    for c in 0..factors.len() {
        let in_factor = |x: &Element| match x {
            Element::Alternating(s) => s.iter().all(|Syllable { factor, .. }| *factor == c),
            _ => false,
        };
        samples.push(Sample {
            label: format!("factor[{c}]"),
            coeffs: support
                .iter()
                .map(|x| {
                    if *x == e || in_factor(x) {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::default()
                    }
                })
                .collect(),
        });
    }
    let eval = evaluate(&frame, exact, &samples, &opts.norm);
    let params = json!({
        "radius": opts.norm.radius,
        "window_size": frame.dim(),
        "support_size": support.len(),
        "factor_constants": constants,
    });
    Ok(report("thm:SRD-free", &group, params, opts, exact, bound, eval))
}

/// Row-norm function `θ(s) = ‖φ_s‖₂` with `φ_s(a) = φ(a, s)`, for `φ` on `G × H`.
pub fn row_norm_function(phi: &AlgebraElement, h: &GroupSpec) -> Result<AlgebraElement> {
    let mut rows: BTreeMap<Element, f64> = BTreeMap::new();
    for (x, c) in phi.terms() {
        let Element::Tuple(pair) = x else {
            return Err(Error::Validation(format!("{x} is not a pair")));
        };
        if pair.len() != 2 {
            return Err(Error::Validation(format!("{x} is not a pair")));
        }
        *rows.entry(pair[1].clone()).or_default() += c.norm_sqr();
    }
    AlgebraElement::from_terms(h, rows.into_iter().map(|(s, v)| (s, C64::new(v.sqrt(), 0.0))))
}
