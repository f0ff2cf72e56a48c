//! Interval certificates for the additivity-violation theorems.
//!
//! All hypothesis comparisons are decided on interval endpoints. When the
//! intervals overlap, the comparison is recomputed at doubled precision up to
//! [`PRECISION_CAP`] bits and reported as `DEGENERATE` if still undecided.

pub mod interval;

pub use interval::{Dyadic, IntervalReal, DEFAULT_PRECISION};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::combinatorics::{
    ball2_has_involution, girth, is_minimal_generating_set, pair_multiplicity, pair_multiplicity_free_product,
};
use crate::error::{Error, Result};
use crate::groups::{format_bigint, FreeFactor, GroupSpec, DEFAULT_BUDGET};
use crate::harmonic::{ball2_constant, NormBound, NormOptions};

/// Largest precision tried when separating two intervals.
pub const PRECISION_CAP: u32 = 4096;

/// Girth search radius used by the free-product pipeline.
const GIRTH_CUTOFF: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub evidence: String,
}

impl Check {
    fn new(name: impl Into<String>, status: Status, evidence: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            evidence: evidence.into(),
        }
    }

    fn from_bool(name: impl Into<String>, ok: bool, evidence: impl Into<String>) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, evidence)
    }
}

/// Machine-checkable record of hypothesis checks and the certified gap (nats).
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub instance: serde_json::Value,
    pub checks: Vec<Check>,
    pub kappa: Option<IntervalReal>,
    pub q: Option<IntervalReal>,
    pub pair_multiplicity: Option<u64>,
    pub gap: Option<IntervalReal>,
    pub gap_units: &'static str,
    pub verdict: Verdict,
    /// First check that did not pass.
    pub failed_check: Option<String>,
    pub precision_bits: u32,
}

impl Certificate {
    fn finish(
        instance: serde_json::Value,
        checks: Vec<Check>,
        kappa: Option<IntervalReal>,
        q: Option<IntervalReal>,
        pair_multiplicity: Option<u64>,
        gap: Option<IntervalReal>,
        precision_bits: u32,
    ) -> Self {
        let failed_check = checks.iter().find(|c| c.status != Status::Pass).map(|c| c.name.clone());
        let positive = gap.as_ref().is_some_and(|g| g.is_positive());
        let verdict = if failed_check.is_none() && positive {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        Certificate {
            instance,
            checks,
            kappa,
            q,
            pair_multiplicity,
            gap,
            gap_units: "nats",
            verdict,
            failed_check,
            precision_bits,
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn check(&self, name_prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name.starts_with(name_prefix))
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub precision: u32,
    pub budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            precision: DEFAULT_PRECISION,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `κ_N = N^{1/2} (N^{1/N} − 1)^{1/2} − 1`, with `N^{1/N} − 1 = expm1(ln N / N)`.
pub fn kappa(n: &BigUint, prec: u32) -> Result<IntervalReal> {
    if n.is_zero() {
        return Err(Error::Validation("κ_N needs N ≥ 1".into()));
    }
    let ni = IntervalReal::from_biguint(n, prec);
    let t = ni.ln()?.div(&ni)?.expm1()?;
    Ok(ni.mul(&t).sqrt()?.sub(&IntervalReal::from_int(1, prec)))
}

/// `ln N / N − ln(1 + q² 𝔑 / N)`: a lower bound on the violation gap.
pub fn gap_lower_bound(n: &BigUint, q: &IntervalReal, multiplicity: u64, prec: u32) -> Result<IntervalReal> {
    if n.is_zero() {
        return Err(Error::Validation("gap needs N ≥ 1".into()));
    }
    let ni = IntervalReal::from_biguint(n, prec);
    let q = q.with_precision(prec);
    let lead = ni.ln()?.div(&ni)?;
    let x = q
        .mul(&q)
        .mul(&IntervalReal::from_int(multiplicity as i64, prec))
        .div(&ni)?;
    Ok(lead.sub(&x.log1p()?))
}

/// Enclosure of a norm bound's upper end: exact `√K` when registered as such,
/// otherwise the float widened upward by a relative `1e-12`.
pub fn q_interval(q: &NormBound, prec: u32) -> Result<IntervalReal> {
    match q.exact_upper_squared {
        Some(k) => IntervalReal::from_int(k as i64, prec).sqrt(),
        None => {
            let u = IntervalReal::from_f64(q.upper, prec);
            let padded = u.mul(&IntervalReal::from_f64(1.0 + 1e-12, prec));
            IntervalReal::from_endpoints(u.lo().clone(), padded.hi().clone(), prec)
        }
    }
}

/// Both sides of a comparison at a given precision.
type Comparison<'a> = Box<dyn Fn(u32) -> Result<(IntervalReal, IntervalReal)> + 'a>;

/// Outcome of a comparison decided by precision doubling.
struct Decision {
    status: Status,
    bits: u32,
    evidence: String,
}

/// Decides `a < b` (strict) or `a ≤ b` by evaluating `f(prec)` at doubling
/// precisions.
fn decide<F>(start: u32, strict: bool, f: F) -> Result<Decision>
where
    F: Fn(u32) -> Result<(IntervalReal, IntervalReal)>,
{
    let mut p = start;
    loop {
        let (a, b) = f(p)?;
        let holds = if strict { a.certainly_lt(&b) } else { a.certainly_le(&b) };
        let fails = if strict { b.certainly_le(&a) } else { b.certainly_lt(&a) };
        let evidence = format!("{a} vs {b} at {p} bits");
        if holds || fails {
            return Ok(Decision {
                status: if holds { Status::Pass } else { Status::Fail },
                bits: p,
                evidence,
            });
        }
        if p >= PRECISION_CAP {
            return Ok(Decision {
                status: Status::Degenerate,
                bits: p,
                evidence,
            });
        }
        p = (p * 2).min(PRECISION_CAP);
    }
}

fn sqrt_int(k: u64, prec: u32) -> Result<IntervalReal> {
    IntervalReal::from_int(k as i64, prec).sqrt()
}

/// Theorem main: accept when `q √𝔑 < κ_{|S|}` on interval endpoints, with the
/// gap `ln|S|/|S| − ln(1 + q²𝔑/|S|)`.
pub fn certify_main_theorem(group: &GroupSpec, q: &NormBound, opts: &CertifyOptions) -> Result<Certificate> {
    let prec = opts.precision;
    let n = group.generator_count();
    let instance = json!({
        "theorem": "thm:main",
        "group_spec": group.canonical(),
        "generators": format_bigint(&n),
        "q_method": q.upper_method,
    });
    let mut checks = Vec::new();
    checks.push(Check::from_bool(
        "generating set is nonempty",
        !n.is_zero(),
        format!("|S| = {}", format_bigint(&n)),
    ));
    if n.is_zero() {
        return Ok(Certificate::finish(instance, checks, None, None, None, None, prec));
    }
    let multiplicity = match pair_multiplicity(group, opts.budget) {
        Ok(r) => {
            checks.push(Check::new(
                "pair multiplicity",
                Status::Pass,
                format!(
                    "𝔑 = {} ({}{})",
                    r.value,
                    r.method,
                    if r.degenerate { ", degenerate" } else { "" }
                ),
            ));
            Some(r.value)
        }
        Err(e) => {
            checks.push(Check::new("pair multiplicity", Status::Degenerate, e.to_string()));
            None
        }
    };
    let kappa_n = kappa(&n, prec)?;
    let q_int = q_interval(q, prec)?;
    let Some(mult) = multiplicity else {
        return Ok(Certificate::finish(
            instance,
            checks,
            Some(kappa_n),
            Some(q_int),
            None,
            None,
            prec,
        ));
    };
    let d = decide(prec, true, |p| {
        let qi = q_interval(q, p)?;
        Ok((qi.mul(&sqrt_int(mult, p)?), kappa(&n, p)?))
    })?;
    checks.push(Check::new("q·√𝔑 < κ_|S|", d.status, d.evidence));
    let gap = if d.status == Status::Pass {
        let g = gap_lower_bound(&n, &q_int, mult, prec.max(d.bits))?.with_precision(prec);
        checks.push(Check::from_bool(
            "gap is positive",
            g.is_positive(),
            format!("gap ∈ {g} nats"),
        ));
        Some(g)
    } else {
        None
    };
    Ok(Certificate::finish(
        instance,
        checks,
        Some(kappa_n),
        Some(q_int),
        Some(mult),
        gap,
        prec,
    ))
}

/// Theorem cor:free for `G = *_i G_i` with the listed multiplicities.
///
/// Checks, in order:
/// 1. every distinct factor has a minimal generating set of size at most `M`;
/// 2. every factor has no involution in `B₂` or has girth at least 5;
/// 3. `64(M²+M+1) ≤ ln N` for the number of factors `N`;
/// 4. `𝔑 = 1` by the free-product lemma;
/// 5. `q = 5√2 max_i p_i` with `p_i = √|B₂^{G_i}| ≤ √(M²+M+1)`;
/// 6. `5√2 (M²+M+1)^{1/2} + 1 ≤ 8 (M²+M+1)^{1/2} ≤ √(ln N) ≤ N^{1/2}(N^{1/N}−1)^{1/2}`,
///    followed by the direct hypothesis `q √𝔑 < κ_{|S|}`.
pub fn certify_free_product(m: u64, factors: &[(GroupSpec, BigUint)], opts: &CertifyOptions) -> Result<Certificate> {
    let prec = opts.precision;
    let group = GroupSpec::free_product(factors.iter().cloned())?;
    let GroupSpec::FreeProduct(fs) = &group else {
        unreachable!("free_product builds a free product")
    };
    let copies: BigUint = fs.iter().map(|f| &f.copies).sum();
    let n_gens = group.generator_count();
    let instance = json!({
        "theorem": "cor:free",
        "group_spec": group.canonical(),
        "M": m,
        "factors": format_bigint(&copies),
        "generators": format_bigint(&n_gens),
    });
    let mut distinct: Vec<&GroupSpec> = Vec::new();
    for f in fs {
        if !distinct.contains(&&f.group) {
            distinct.push(&f.group);
        }
    }
    let mut checks = Vec::new();

    // (1) rank
    let mut rank_status = Status::Pass;
    let mut rank_ev = Vec::new();
    for g in &distinct {
        let count = g.generator_count();
        match is_minimal_generating_set(g, opts.budget) {
            Ok(minimal) => {
                let ok = minimal && count <= BigUint::from(m);
                if !ok {
                    rank_status = Status::Fail;
                }
                rank_ev.push(format!("{g}: |S_i| = {count}, minimal = {minimal}"));
            }
            Err(e) => {
                if rank_status == Status::Pass {
                    rank_status = Status::Degenerate;
                }
                rank_ev.push(format!("{g}: {e}"));
            }
        }
    }
    checks.push(Check::new("(1) rank(G_i) ≤ M", rank_status, rank_ev.join("; ")));

    // (2) involutions or girth, per factor
    let mut inv_status = Status::Pass;
    let mut inv_ev = Vec::new();
    for g in &distinct {
        let res = ball2_has_involution(g, opts.budget).and_then(|inv| Ok((inv, girth(g, GIRTH_CUTOFF, opts.budget)?)));
        match res {
            Ok((inv, gr)) => {
                let girth_ok = match gr.value.value() {
                    Some(v) => v >= 5,
                    None => true,
                };
                if inv && !girth_ok {
                    inv_status = Status::Fail;
                }
                inv_ev.push(format!("{g}: involution in B₂ = {inv}, girth = {}", gr.value));
            }
            Err(e) => {
                if inv_status == Status::Pass {
                    inv_status = Status::Degenerate;
                }
                inv_ev.push(format!("{g}: {e}"));
            }
        }
    }
    checks.push(Check::new(
        "(2) no involution in B₂ or girth ≥ 5",
        inv_status,
        format!("{} (girth taken per factor)", inv_ev.join("; ")),
    ));

    // (3) e^{64(M²+M+1)} ≤ N, compared as logarithms
    let c = m * m + m + 1;
    let d3 = decide(prec, false, |p| {
        Ok((
            IntervalReal::from_int(64 * c as i64, p),
            IntervalReal::from_biguint(&copies, p).ln()?,
        ))
    })?;
    checks.push(Check::new("(3) 64(M²+M+1) ≤ ln N", d3.status, d3.evidence));

    // (4) pair multiplicity
    let factor_list: Vec<FreeFactor> = fs.clone();
    let multiplicity = match pair_multiplicity_free_product(&factor_list, opts.budget) {
        Ok(r) => {
            checks.push(Check::from_bool(
                "(4) 𝔑 = 1",
                r.value == 1,
                format!("𝔑 = max_i 𝔑_i = {} ({})", r.value, r.method),
            ));
            Some(r.value)
        }
        Err(e) => {
            checks.push(Check::new("(4) 𝔑 = 1", Status::Degenerate, e.to_string()));
            None
        }
    };

    // (5) q = 5√2 max p_i, p_i² = |B₂^{G_i}| ≤ M²+M+1
    let norm_opts = NormOptions {
        budget: opts.budget,
        ..NormOptions::default()
    };
    let mut p_sq: Option<u64> = Some(0);
    let mut p_ev = Vec::new();
    for g in &distinct {
        let size = g.ball(2, opts.budget).map(|b| b.len() as u64);
        match size {
            Ok(s) => {
                p_ev.push(format!("{g}: |B₂| = {s}"));
                p_sq = p_sq.map(|p| p.max(s));
            }
            Err(e) => {
                // Fall back to the registered constant when the ball is too large.
                match ball2_constant(g, &norm_opts) {
                    Ok(b) if b.exact_upper_squared.is_some() => {
                        let s = b.exact_upper_squared.expect("checked");
                        p_ev.push(format!("{g}: p_i² = {s} ({})", b.upper_method));
                        p_sq = p_sq.map(|p| p.max(s));
                    }
                    _ => {
                        p_ev.push(format!("{g}: {e}"));
                        p_sq = None;
                    }
                }
            }
        }
    }
    let q_int = match p_sq {
        Some(s) => {
            checks.push(Check::from_bool(
                "(5) q = 5√2·max p_i with p_i ≤ √(M²+M+1)",
                s <= c,
                format!("max p_i² = {s}, M²+M+1 = {c}, q² = {}; {}", 50 * s, p_ev.join("; ")),
            ));
            Some((50 * s, sqrt_int(50 * s, prec)?))
        }
        None => {
            checks.push(Check::new(
                "(5) q = 5√2·max p_i with p_i ≤ √(M²+M+1)",
                Status::Degenerate,
                p_ev.join("; "),
            ));
            None
        }
    };

    // (6) the chain of the proof, then the direct hypothesis of Theorem main
    let chain: [(&str, Comparison); 3] = [
        (
            "(6a) 5√2(M²+M+1)^½ + 1 ≤ 8(M²+M+1)^½",
            Box::new(move |p| {
                let r = sqrt_int(c, p)?;
                let lhs = sqrt_int(50, p)?.mul(&r).add(&IntervalReal::from_int(1, p));
                Ok((lhs, IntervalReal::from_int(8, p).mul(&r)))
            }),
        ),
        (
            "(6b) 8(M²+M+1)^½ ≤ √(ln N)",
            Box::new(|p| {
                let r = sqrt_int(64 * c, p)?;
                Ok((r, IntervalReal::from_biguint(&copies, p).ln()?.sqrt()?))
            }),
        ),
        (
            "(6c) √(ln N) ≤ N^½(N^{1/N} − 1)^½",
            Box::new(|p| {
                let lhs = IntervalReal::from_biguint(&copies, p).ln()?.sqrt()?;
                Ok((lhs, kappa(&copies, p)?.add(&IntervalReal::from_int(1, p))))
            }),
        ),
    ];
    for (name, f) in chain.iter() {
        let d = decide(prec, false, f)?;
        checks.push(Check::new(*name, d.status, d.evidence));
    }

    let kappa_s = kappa(&n_gens, prec)?;
    let mut gap = None;
    if let (Some(mult), Some((q_sq, q))) = (multiplicity, q_int.as_ref()) {
        let q_sq = *q_sq;
        let d = decide(prec, true, |p| Ok((sqrt_int(q_sq * mult, p)?, kappa(&n_gens, p)?)))?;
        checks.push(Check::new("(6d) q·√𝔑 < κ_|S|", d.status, d.evidence));
        if d.status == Status::Pass {
            let g = gap_lower_bound(&n_gens, q, mult, prec.max(d.bits))?.with_precision(prec);
            checks.push(Check::from_bool(
                "gap is positive",
                g.is_positive(),
                format!("gap ∈ {g} nats"),
            ));
            gap = Some(g);
        }
    }
    Ok(Certificate::finish(
        instance,
        checks,
        Some(kappa_s),
        q_int.map(|(_, q)| q),
        multiplicity,
        gap,
        prec,
    ))
}

/// `κ_{N+1} > κ_N` decided on interval endpoints for every `N` in the range.
/// Returns the first `N` where separation fails.
pub fn kappa_monotone_on(range: std::ops::RangeInclusive<u64>, prec: u32) -> Result<Option<u64>> {
    use rayon::prelude::*;
    let values: Vec<IntervalReal> = range
        .clone()
        .into_par_iter()
        .map(|n| kappa(&BigUint::from(n), prec))
        .collect::<Result<_>>()?;
    Ok(values
        .windows(2)
        .position(|w| !w[0].certainly_lt(&w[1]))
        .map(|i| range.start() + i as u64))
}
