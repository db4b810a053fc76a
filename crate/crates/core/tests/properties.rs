//! Property tests for the invariants of each module.

use fpalg::circle::{default_samples, max_modulus, max_modulus_detailed, mean_modulus_p};
use fpalg::corpus::{Corpus, GeneratorSpec};
use fpalg::ideals::{coset_of, ideal_contains, quotient_seminorm_bounds, IdealHandle, DEFAULT_K_BUDGET};
use fpalg::membership::{classify, privalov_mean, CoefficientRule, DEFAULT_THRESHOLD};
use fpalg::seminorms::{coeff_seminorm, envelope_metric, integral_seminorm, privalov_metric, ENVELOPE_TOL};
use fpalg::{Complex64, DiskPoint, QuadConfig, SpaceParams, TruncatedSeries};
use proptest::prelude::*;

fn series(max_degree: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1)
        .prop_map(|v| TruncatedSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn disk_point(max_modulus: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..max_modulus, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| DiskPoint::new(Complex64::from_polar(r, t)).unwrap())
}

fn p_value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.5), Just(2.0), Just(3.0), 1.01f64..6.0]
}

fn sp(p: f64) -> SpaceParams {
    SpaceParams::new(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Evaluation errors are measured against the majorant sum |a_n| |z|^n,
    // the scale of rounding error in a polynomial evaluation.
    #[test]
    fn evaluation_is_a_ring_morphism(f in series(256), g in series(256), z in disk_point(0.95)) {
        let z = z.value();
        let (mf, mg) = (f.majorant(z.norm()), g.majorant(z.norm()));
        let sum = (&f + &g).eval(z) - f.eval(z) - g.eval(z);
        prop_assert!(sum.norm() <= 1e-12 * (mf + mg));
        let prod = (&f * &g).eval(z) - f.eval(z) * g.eval(z);
        prop_assert!(prod.norm() <= 1e-12 * mf * mg);
    }

    #[test]
    fn synthetic_division_reconstructs(f in series(300), lambda in disk_point(0.9)) {
        let back = coset_of(&f, IdealHandle::new(lambda)).reconstruct();
        // a constant f comes back with an extra zero coefficient
        prop_assert_eq!(back.coeffs().len(), f.coeffs().len().max(2));
        let zero = Complex64::new(0.0, 0.0);
        for (n, y) in back.coeffs().iter().enumerate() {
            let x = f.coeffs().get(n).unwrap_or(&zero);
            prop_assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn max_modulus_is_nondecreasing_in_r(f in series(64)) {
        let mut prev = 0.0;
        for i in 0..20 {
            let r = 0.05 * i as f64;
            let m = max_modulus(&f, r);
            prop_assert!(m >= prev * (1.0 - 1e-14), "r = {}", r);
            prev = m;
        }
    }

    #[test]
    fn mean_modulus_is_below_max_modulus(f in series(128), r in 0.0f64..0.99, p in 1.0f64..8.0) {
        let mm = max_modulus_detailed(&f, r, default_samples(f.degree()));
        let mean = mean_modulus_p(&f, r, p).unwrap();
        prop_assert!(mean <= mm.value + mm.sampling_bound + 1e-9);
    }

    #[test]
    fn parseval_for_p_two(f in series(256), r in 0.0f64..0.999) {
        let oracle = f.coeffs().iter().enumerate()
            .map(|(n, a)| a.norm_sqr() * r.powi(2 * n as i32)).sum::<f64>().sqrt();
        prop_assert!((mean_modulus_p(&f, r, 2.0).unwrap() - oracle).abs() <= 1e-10);
    }

    #[test]
    fn coefficient_seminorm_is_a_seminorm(
        f in series(100), g in series(100), p in p_value(), c in 0.01f64..5.0, s in -3.0f64..3.0,
    ) {
        let n = |h: &TruncatedSeries| coeff_seminorm(h, sp(p), c);
        let sum = n(&(&f + &g));
        prop_assert!(sum <= (n(&f) + n(&g)) * (1.0 + 1e-15));
        let scaled = n(&f.scale(Complex64::new(s, 0.0)));
        prop_assert!((scaled - s.abs() * n(&f)).abs() <= 1e-14 * scaled.max(1e-300));
        prop_assert_eq!(n(&TruncatedSeries::one()), 1.0);
    }

    #[test]
    fn coefficient_seminorm_decreases_in_c(f in series(100), p in p_value(), c in 0.01f64..5.0, dc in 0.0f64..5.0) {
        prop_assert!(coeff_seminorm(&f, sp(p), c) >= coeff_seminorm(&f, sp(p), c + dc));
    }

    #[test]
    fn metric_axioms(f in series(40), g in series(40), h in series(40), p in p_value()) {
        let cfg = QuadConfig::default();
        let d = |a: &TruncatedSeries, b: &TruncatedSeries| privalov_metric(a, b, sp(p), &cfg).unwrap().value;
        let l = |a: &TruncatedSeries, b: &TruncatedSeries| envelope_metric(a, b, sp(p), ENVELOPE_TOL).unwrap().value;
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert_eq!(l(&f, &g), l(&g, &f));
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h) + 1e-12);
        prop_assert!(l(&f, &h) <= l(&f, &g) + l(&g, &h) + 1e-12);
        prop_assert!(l(&f, &g) < 1.0);
        if f != g {
            prop_assert!(d(&f, &g) > 0.0 && l(&f, &g) > 0.0);
        }
    }

    #[test]
    fn envelope_tail_bound_is_honest(f in series(60), g in series(60), p in p_value()) {
        let coarse = envelope_metric(&f, &g, sp(p), ENVELOPE_TOL).unwrap();
        let fine = envelope_metric(&f, &g, sp(p), ENVELOPE_TOL / 16.0).unwrap();
        prop_assert!((fine.value - coarse.value).abs() <= coarse.tail_bound);
    }

    #[test]
    fn ideal_is_closed_under_ring_operations(
        f in series(30), g in series(30), h in series(30), lambda in disk_point(0.9),
    ) {
        let ideal = IdealHandle::new(lambda);
        let project = |s: &TruncatedSeries| &TruncatedSeries::constant(s.eval(lambda.value())) - s;
        let (fm, gm) = (project(&f), project(&g));
        prop_assert!(ideal_contains(ideal, &fm, 1e-12).unwrap().0);
        prop_assert!(ideal_contains(ideal, &(&fm + &gm), 1e-12).unwrap().0);
        prop_assert!(ideal_contains(ideal, &(&h * &fm), 1e-12).unwrap().0);
    }

    #[test]
    fn coset_map_is_a_ring_morphism(f in series(50), g in series(50), lambda in disk_point(0.9)) {
        let ideal = IdealHandle::new(lambda);
        let rep = |s: &TruncatedSeries| coset_of(s, ideal).coset.representative;
        let scale = f.majorant(lambda.modulus()) * g.majorant(lambda.modulus());
        prop_assert!((rep(&(&f + &g)) - rep(&f) - rep(&g)).norm() <= 1e-12 * scale.max(1.0));
        prop_assert!((rep(&(&f * &g)) - rep(&f) * rep(&g)).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn quotient_bounds_are_ordered(f in series(50), lambda in disk_point(0.95), r in 0.0f64..0.999) {
        let b = quotient_seminorm_bounds(&f, IdealHandle::new(lambda), r, DEFAULT_K_BUDGET).unwrap();
        prop_assert!(b.lower <= b.upper);
        if r >= lambda.modulus() {
            prop_assert!(b.upper - b.lower <= 1e-10);
        }
    }

    #[test]
    fn corpus_entries_are_reproducible(seed in any::<u64>(), index in 0usize..1000) {
        let spec = GeneratorSpec::with_max_degree(64);
        prop_assert_eq!(spec.entry(seed, index), spec.entry(seed, index));
        let corpus = Corpus::generate(seed, 3, spec.clone()).unwrap();
        prop_assert_eq!(&corpus.entries[2], &spec.entry(seed, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integral_seminorm_is_homogeneous(f in series(40), p in p_value(), c in 0.2f64..3.0, s in 0.1f64..10.0) {
        let cfg = QuadConfig::default();
        let one = integral_seminorm(&f, sp(p), c, &cfg).unwrap().value;
        let scaled = integral_seminorm(&f.scale(Complex64::from_polar(s, 1.0)), sp(p), c, &cfg).unwrap().value;
        prop_assert!((scaled - s * one).abs() <= 1e-12 * s * one);
    }

    #[test]
    fn privalov_mean_grows_with_radius(f in series(20), p in p_value()) {
        let f = f.scale(Complex64::new(4.0, 0.0));
        let cfg = QuadConfig::default();
        let mut prev = 0.0;
        for i in 0..10 {
            let v = privalov_mean(&f, sp(p), 0.1 * i as f64, &cfg).unwrap().value;
            prop_assert!(v >= prev - 2e-9);
            prev = v;
        }
    }

    #[test]
    fn classification_is_scale_robust(log_m in 0.5f64..7.0, p in prop_oneof![Just(1.5), Just(2.0), Just(3.0)]) {
        let beta = 1.0 / (p + 1.0);
        for rule in [
            CoefficientRule::Geometric { rho: 1.0 },
            CoefficientRule::StretchedExp { eps: 0.1, beta },
            CoefficientRule::StretchedExpDamped { beta },
        ] {
            let plain = classify(&rule, sp(p), 1 << 12, DEFAULT_THRESHOLD).unwrap().verdict;
            let scaled = classify(&rule.scaled(log_m.exp()), sp(p), 1 << 12, DEFAULT_THRESHOLD).unwrap().verdict;
            prop_assert_eq!(plain, scaled);
        }
    }
}
