//! Combinatorial constants of a group with its generating set: the pair
//! multiplicity, Cayley-graph girth, minimality of the generating set and
//! involutions in the radius-2 ball.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Capped, Element, FreeFactor, GroupSpec};

/// Largest finite group handled by the exhaustive rank search.
pub const MINIMALITY_LIMIT: usize = 512;

/// Maximal number of generator subsets tried by the rank search.
const SUBSET_WORK_LIMIT: u128 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    /// The quotient `s⁻¹t` attaining the maximum.
    pub element: String,
    /// Generator index pairs `(s, t)` with `s⁻¹t` equal to `element`.
    pub pairs: Vec<(usize, usize)>,
}

/// Max over `g ≠ e` of `|{(s, t) ∈ S × S : s⁻¹t = g}|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairMultiplicityReport {
    pub value: u64,
    pub witness: Option<PairWitness>,
    /// No pair gives a non-neutral quotient; `value` is 1 by convention.
    pub degenerate: bool,
    pub method: &'static str,
}

impl PairMultiplicityReport {
    fn degenerate(method: &'static str) -> Self {
        PairMultiplicityReport {
            value: 1,
            witness: None,
            degenerate: true,
            method,
        }
    }
}

/// Pair multiplicity by exhaustive enumeration of `S × S`, falling back to
/// structural answers for free groups and free products whose generator lists
/// are too large to enumerate.
pub fn pair_multiplicity(group: &GroupSpec, budget: usize) -> Result<PairMultiplicityReport> {
    if group.generator_count() <= BigUint::from(budget) {
        return exhaustive_pairs(group, budget);
    }
    match group {
        GroupSpec::Free { .. } => Ok(PairMultiplicityReport {
            value: 1,
            witness: Some(PairWitness {
                element: "Ab".into(),
                pairs: vec![(0, 1)],
            }),
            degenerate: false,
            method: "free-group",
        }),
        GroupSpec::FreeProduct(fs) => pair_multiplicity_free_product(fs, budget),
        _ => Err(Error::budget(
            format!("generators of {group}"),
            group.generator_count(),
            budget,
        )),
    }
}

fn exhaustive_pairs(group: &GroupSpec, budget: usize) -> Result<PairMultiplicityReport> {
    let gens = group.generators(budget)?;
    let inverses = gens.iter().map(|s| group.inverse(s)).collect::<Result<Vec<_>>>()?;
    let mut classes: HashMap<Element, Vec<(usize, usize)>> = HashMap::new();
    for (i, s_inv) in inverses.iter().enumerate() {
        for (j, t) in gens.iter().enumerate() {
            let g = group.multiply(s_inv, t)?;
            if !group.is_identity(&g) {
                classes.entry(g).or_default().push((i, j));
            }
        }
    }
    let best = classes
        .into_iter()
        .max_by(|(ga, pa), (gb, pb)| pa.len().cmp(&pb.len()).then_with(|| gb.cmp(ga)));
    Ok(match best {
        None => PairMultiplicityReport::degenerate("exhaustive"),
        Some((g, pairs)) => PairMultiplicityReport {
            value: pairs.len() as u64,
            witness: Some(PairWitness {
                element: group.format_element(&g),
                pairs,
            }),
            degenerate: false,
            method: "exhaustive",
        },
    })
}

/// Pair multiplicity of a free product from its factors: the maximum of the
/// factor values. Multiplicities (which may be symbolic) do not enter, only
/// whether the product has at least two generators.
pub fn pair_multiplicity_free_product(factors: &[FreeFactor], budget: usize) -> Result<PairMultiplicityReport> {
    let mut distinct: Vec<&GroupSpec> = Vec::new();
    for f in factors {
        if !distinct.contains(&&f.group) {
            distinct.push(&f.group);
        }
    }
    let mut best: Option<PairMultiplicityReport> = None;
    for g in distinct {
        let r = pair_multiplicity(g, budget)?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let total_generators: BigUint = factors.iter().map(|f| &f.copies * f.group.generator_count()).sum();
    let mut report = best.ok_or_else(|| Error::Validation("free product without factors".into()))?;
    report.method = "free-product-lemma";
    if report.degenerate && total_generators > BigUint::one() {
        // Generators from different factors always give distinct quotients.
        report.degenerate = false;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GirthReport {
    pub value: Capped,
    /// An order-two generator or a generator whose inverse is also listed
    /// produces a doubled edge, reported as girth 2.
    pub degenerate: bool,
}

/// Girth of the undirected Cayley graph with edges `{g, gs}`, `s ∈ S ∪ S⁻¹`.
pub fn girth(group: &GroupSpec, cutoff: u64, budget: usize) -> Result<GirthReport> {
    let tree = GirthReport {
        value: Capped::Exceeds(cutoff),
        degenerate: false,
    };
    match group {
        GroupSpec::Free { .. } => return Ok(tree),
        GroupSpec::FreeProduct(fs) => {
            // Cycles of a free product's Cayley graph live inside factor cosets.
            let mut best = tree;
            let mut seen: Vec<&GroupSpec> = Vec::new();
            for f in fs {
                if seen.contains(&&f.group) {
                    continue;
                }
                seen.push(&f.group);
                let r = girth(&f.group, cutoff, budget)?;
                let shorter = match (r.value, best.value) {
                    (Capped::Value(a), Capped::Value(b)) => a < b,
                    (Capped::Value(_), Capped::Exceeds(_)) => true,
                    _ => false,
                };
                if shorter {
                    best = r;
                }
            }
            return Ok(best);
        }
        _ => {}
    }

    let gens = group.generators(budget)?;
    let gen_set: HashSet<&Element> = gens.iter().collect();
    let mut neighbours = Vec::new();
    for s in &gens {
        let inv = group.inverse(s)?;
        if inv == *s || gen_set.contains(&inv) {
            return Ok(GirthReport {
                value: Capped::cap_value(2, cutoff),
                degenerate: true,
            });
        }
        neighbours.push(s.clone());
        neighbours.push(inv);
    }

    let e = group.identity();
    let mut depth: HashMap<Element, (u64, Option<Element>)> = HashMap::from([(e.clone(), (0, None))]);
    let mut queue = VecDeque::from([e]);
    let mut best = u64::MAX;
    while let Some(u) = queue.pop_front() {
        let (du, parent) = depth[&u].clone();
        if 2 * du + 1 >= best || 2 * du + 1 > cutoff {
            break;
        }
        for s in &neighbours {
            let v = group.multiply(&u, s)?;
            match depth.get(&v) {
                None => {
                    depth.insert(v.clone(), (du + 1, Some(u.clone())));
                    if depth.len() > budget {
                        return Err(Error::budget(
                            format!("girth search in {group}"),
                            format!("> {budget}"),
                            budget,
                        ));
                    }
                    queue.push_back(v);
                }
                Some((dv, _)) if parent.as_ref() != Some(&v) => {
                    best = best.min(du + dv + 1);
                }
                Some(_) => {}
            }
        }
    }
    Ok(GirthReport {
        value: if best == u64::MAX {
            Capped::Exceeds(cutoff)
        } else {
            Capped::cap_value(best, cutoff)
        },
        degenerate: false,
    })
}

impl Capped {
    fn cap_value(v: u64, cutoff: u64) -> Capped {
        if v <= cutoff {
            Capped::Value(v)
        } else {
            Capped::Exceeds(cutoff)
        }
    }
}

/// Whether no generating set of `G` is smaller than `S`.
///
/// Free groups and free products of minimally generated factors are answered
/// structurally; finite groups up to [`MINIMALITY_LIMIT`] elements by
/// exhaustive search over subsets of size `|S| - 1`.
pub fn is_minimal_generating_set(group: &GroupSpec, budget: usize) -> Result<bool> {
    match group {
        GroupSpec::Free { .. } => return Ok(true),
        GroupSpec::FreeProduct(fs) => {
            // Rank is additive over free factors.
            for f in fs {
                if !is_minimal_generating_set(&f.group, budget)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        _ => {}
    }
    let unsupported = || Error::Unsupported {
        op: "is_minimal_generating_set",
        spec: group.to_string(),
    };
    let order = group.order().ok_or_else(unsupported)?;
    if order > BigUint::from(MINIMALITY_LIMIT) {
        return Err(unsupported());
    }
    let elements = group.elements(MINIMALITY_LIMIT.min(budget))?;
    let n = elements.len();
    let k = usize::try_from(group.generator_count()).map_err(|_| unsupported())?;
    if k <= 1 {
        return Ok(true);
    }
    // A greedy chain of subgroups at least doubles each step, so
    // rank ≤ floor(log2 |G|).
    let log2 = usize::BITS as usize - 1 - n.leading_zeros() as usize;
    if k > log2 {
        return Ok(false);
    }

    let index: HashMap<&Element, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut table = vec![0usize; n * n];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            table[i * n + j] = index[&group.multiply(x, y)?];
        }
    }
    let candidates: Vec<usize> = (1..n).collect();
    let size = k - 1;
    if binomial(candidates.len() as u128, size as u128) > SUBSET_WORK_LIMIT {
        return Err(unsupported());
    }
    let generates = |subset: &[usize]| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in subset {
                let y = table[x * n + g];
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    };
    let mut subset: Vec<usize> = (0..size).collect();
    loop {
        let chosen: Vec<usize> = subset.iter().map(|&i| candidates[i]).collect();
        if generates(&chosen) {
            return Ok(false);
        }
        // next combination in lexicographic order
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if subset[i] < candidates.len() - size + i {
                subset[i] += 1;
                for j in i + 1..size {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Whether the positive ball `B_2` contains an element of order two.
pub fn ball2_has_involution(group: &GroupSpec, budget: usize) -> Result<bool> {
    match group {
        GroupSpec::Free { .. } => Ok(false),
        GroupSpec::FreeProduct(fs) if group.generator_count() > BigUint::from(budget) => {
            // Cross-factor words of length two have infinite order.
            for f in fs {
                if ball2_has_involution(&f.group, budget)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => {
            for g in group.ball(2, budget)? {
                if group.element_order(&g, 2)? == Capped::Value(2) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
