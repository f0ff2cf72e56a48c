//! Convolution algebra, compressions and the product inequality on random inputs.

use moelab::groups::DEFAULT_BUDGET;
use moelab::harmonic::{
    compression, convolve, dense_spectral_norm, operator_norm, power_iteration, row_norm_function,
    verify_product_inequality, AlgebraElement, Frame, NormOptions, VerifyOptions,
};
use moelab::{Element, GroupSpec, C64};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = C64> {
    (-3i32..=3, -3i32..=3).prop_map(|(a, b)| C64::new(a as f64 / 2.0, b as f64 / 2.0))
}

/// Random function supported in the symmetric ball of radius 2.
fn function(spec: &'static str, max_terms: usize) -> impl Strategy<Value = AlgebraElement> {
    let g = GroupSpec::parse(spec).unwrap();
    let pool = g.symmetric_ball(2, DEFAULT_BUDGET).unwrap();
    prop::collection::vec((0..pool.len(), coeff()), 1..=max_terms).prop_map(move |terms| {
        AlgebraElement::from_terms(&g, terms.into_iter().map(|(i, c)| (pool[i].clone(), c))).unwrap()
    })
}

fn close(a: &AlgebraElement, b: &AlgebraElement) -> bool {
    let d = a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap();
    d.l2_norm() <= 1e-9 * (1.0 + a.l2_norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn convolution_is_associative_in_f2(f in function("F2", 5), g in function("F2", 5), h in function("F2", 5)) {
        let lhs = convolve(&convolve(&f, &g).unwrap(), &h).unwrap();
        let rhs = convolve(&f, &convolve(&g, &h).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn convolution_is_associative_in_a_free_product(f in function("Z3*Z4", 4), g in function("Z3*Z4", 4), h in function("Z3*Z4", 4)) {
        let lhs = convolve(&convolve(&f, &g).unwrap(), &h).unwrap();
        let rhs = convolve(&f, &convolve(&g, &h).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn delta_e_is_the_unit(f in function("Z3*Z4", 6)) {
        let e = AlgebraElement::delta(f.group(), f.group().identity()).unwrap();
        prop_assert!(close(&convolve(&e, &f).unwrap(), &f));
        prop_assert!(close(&convolve(&f, &e).unwrap(), &f));
    }

    #[test]
    fn compression_norms_grow_with_the_window_and_stay_below_the_upper_bound(
        f in function("F2", 6).prop_filter("nonzero", |f| !f.is_zero()),
    ) {
        let bound = operator_norm(&f, &NormOptions { radius: 3, ..NormOptions::default() }).unwrap();
        let mut prev = 0.0;
        for r in 1..=5 {
            let n = compression(&f, r, DEFAULT_BUDGET).unwrap().spectral_norm();
            prop_assert!(n >= prev - 1e-12, "R = {}: {} < {}", r, n, prev);
            prop_assert!(n <= bound.upper + 1e-9, "R = {}: {} > {}", r, n, bound.upper);
            prev = n;
        }
        prop_assert!(bound.lower <= bound.upper + 1e-9);
    }

    #[test]
    fn power_iteration_matches_dense_on_finite_groups(
        f in function("dprod(Z3,Z4)", 8).prop_filter("nonzero", |f| !f.is_zero()),
    ) {
        let g = f.group().clone();
        let basis = g.elements(DEFAULT_BUDGET).unwrap();
        let support: Vec<Element> = f.support().cloned().collect();
        let frame = Frame::new(&g, basis, support).unwrap();
        let c = frame.coefficients(&f).unwrap();
        let dense = dense_spectral_norm(&frame.dense(&c));
        let it = power_iteration(&frame.sparse(&c), 1e-14, 100_000);
        prop_assert!((it.sigma - dense).abs() <= 1e-9 * dense.max(1.0), "{} vs {}", it.sigma, dense);
    }

    #[test]
    fn convolution_norm_is_bounded_by_the_operator_norm(
        f in function("F2", 6).prop_filter("nonzero", |f| !f.is_zero()),
        psi in function("F2", 6),
    ) {
        let bound = operator_norm(&f, &NormOptions::default()).unwrap();
        let lhs = convolve(&f, &psi).unwrap().l2_norm();
        prop_assert!(lhs <= bound.upper * psi.l2_norm() + 1e-9);
    }

    #[test]
    fn row_norms_preserve_the_l2_norm(terms in prop::collection::vec((0u64..5, 0u64..7, coeff()), 1..12)) {
        let h = GroupSpec::cyclic(7);
        let gh = GroupSpec::direct_product(vec![GroupSpec::cyclic(5), h.clone()]).unwrap();
        let phi = AlgebraElement::from_terms(
            &gh,
            terms.into_iter().map(|(a, b, c)| (Element::Tuple(vec![Element::Residue(a), Element::Residue(b)]), c)),
        ).unwrap();
        let theta = row_norm_function(&phi, &h).unwrap();
        prop_assert!((theta.l2_norm() - phi.l2_norm()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Exact norms on finite abelian `G × H` never exceed `p q ‖φ‖₂`.
    #[test]
    fn product_inequality_holds_on_small_abelian_pairs(n in 3u64..9, m in 3u64..9, seed in 0u64..1000) {
        let (g, h) = (GroupSpec::cyclic(n), GroupSpec::cyclic(m));
        let e = g.ball(2, DEFAULT_BUDGET).unwrap();
        let f = h.ball(2, DEFAULT_BUDGET).unwrap();
        let p = (e.len() as f64).sqrt();
        let q = (f.len() as f64).sqrt();
        let opts = VerifyOptions { trials: 50, seed, ..VerifyOptions::default() };
        let r = verify_product_inequality(&g, &h, &e, &f, p, q, &opts).unwrap();
        prop_assert!(r.exact);
        prop_assert!(r.margin >= -1e-9, "margin {}", r.margin);
        prop_assert!(r.passed);
    }
}
