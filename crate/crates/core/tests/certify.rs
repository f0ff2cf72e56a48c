//! Interval enclosures, gap positivity and certificate consistency.

use moelab::certify::{certify_main_theorem, gap_lower_bound, kappa, q_interval, CertifyOptions, IntervalReal};
use moelab::channels::{l2_deviation_check, tuple_window, DensityState};
use moelab::combinatorics::pair_multiplicity;
use moelab::groups::DEFAULT_BUDGET;
use moelab::harmonic::{ball2_constant, NormBound, NormOptions};
use moelab::GroupSpec;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Op = fn(&IntervalReal) -> moelab::Result<IntervalReal>;
type Case = (&'static str, Op, fn(f64) -> f64);

fn ops() -> [Case; 5] {
    [
        ("ln", IntervalReal::ln, f64::ln),
        ("exp", IntervalReal::exp, f64::exp),
        ("sqrt", IntervalReal::sqrt, f64::sqrt),
        ("expm1", IntervalReal::expm1, f64::exp_m1),
        ("log1p", IntervalReal::log1p, f64::ln_1p),
    ]
}

fn user_q(value: f64) -> NormBound {
    NormBound {
        lower: 0.0,
        upper: value,
        lower_method: "none".into(),
        upper_method: "user".into(),
        exact_upper_squared: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The 64-bit enclosure meets the 320-bit one, which is much narrower,
    /// and both agree with the float evaluation.
    #[test]
    fn enclosures_agree_across_precisions(a in 1i64..100_000, b in 1i64..10_000, op in 0usize..5) {
        let (name, f, reference) = ops()[op];
        let lo = f(&IntervalReal::from_ratio(a, b, 64).unwrap()).unwrap();
        let hi = f(&IntervalReal::from_ratio(a, b, 320).unwrap()).unwrap();
        prop_assert!(!lo.certainly_lt(&hi) && !hi.certainly_lt(&lo), "{}({}/{}): {} vs {}", name, a, b, lo, hi);
        prop_assert!(hi.width_f64() <= lo.width_f64());
        let x = a as f64 / b as f64;
        let want = reference(x);
        if want.is_finite() {
            prop_assert!((hi.mid_f64() - want).abs() <= 1e-13 * want.abs().max(1.0), "{}({}): {} vs {}", name, x, hi.mid_f64(), want);
        }
    }

    #[test]
    fn gap_is_positive_below_the_threshold(n in 3u64..10_000_000, mult in 1u64..4, frac in 0.01f64..0.99) {
        let nn = BigUint::from(n);
        let k = kappa(&nn, 256).unwrap();
        let q = frac * k.lo_f64() / (mult as f64).sqrt();
        let qi = q_interval(&user_q(q), 256).unwrap();
        let lhs = qi.mul(&IntervalReal::from_int(mult as i64, 256).sqrt().unwrap());
        if lhs.certainly_lt(&k) {
            prop_assert!(gap_lower_bound(&nn, &qi, mult, 256).unwrap().is_positive());
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    let opts = CertifyOptions::default();
    for spec in ["F10000000000", "F2", "Z5", "freepow(Z5,10^84)"] {
        let g = GroupSpec::parse(spec).unwrap();
        let q = ball2_constant(&g, &NormOptions::default()).unwrap();
        let a = serde_json::to_string(&certify_main_theorem(&g, &q, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&certify_main_theorem(&g, &q, &opts).unwrap()).unwrap();
        assert_eq!(a, b, "{spec}");
    }
}

/// Desk-scale groups are rejected with their registered constants; the
/// deviation bound with those constants still holds, so an acceptance could
/// never contradict the channel side.
#[test]
fn desk_scale_certificates_agree_with_the_channel_side() {
    let opts = CertifyOptions::default();
    for spec in ["F2", "F3", "F5", "Z5*Z5", "Z7[1,2]", "dprod(Z3,Z5)"] {
        let g = GroupSpec::parse(spec).unwrap();
        let q = ball2_constant(&g, &NormOptions::default()).unwrap();
        let cert = certify_main_theorem(&g, &q, &opts).unwrap();
        let mult = pair_multiplicity(&g, DEFAULT_BUDGET).unwrap().value;
        let basis = tuple_window(&g, 1, 2, DEFAULT_BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for rank in 1..=3 {
            let rho = DensityState::random(&g, 1, basis.clone(), rank, &mut rng).unwrap();
            let r = l2_deviation_check(&rho, q.upper, mult, 1e-9, DEFAULT_BUDGET).unwrap();
            assert!(r.passed, "{spec}: {r:?}");
        }
        assert!(!cert.accepted(), "{spec} accepted at desk scale");
    }
}
