//! Property tests for the structural invariants: conjugation laws, norm
//! axioms, entropy positivity, and transport duality on arbitrary inputs.

use norment::convex::{generalized_inverse, ConvexGauge, InverseSide};
use norment::grid::GridSpec;
use norment::measure::{
    dual_norm, relative_entropy, DiscreteMeasure, FunctionClass, MetricSpace, SpaceFunction,
};
use norment::orlicz::luxemburg_norm;
use norment::transport::{cost_matrix, kr_dual, metric_transport, validate_plan, CostSpec};
use proptest::prelude::*;

fn resolution() -> GridSpec {
    GridSpec::geometric(1e-3, 1e3, 200)
}

prop_compose! {
    fn power_gauge()(p in 1.0f64..4.0, c in 0.05f64..4.0) -> ConvexGauge {
        ConvexGauge::power(p, c).unwrap()
    }
}

prop_compose! {
    fn pwl_gauge()(slopes in prop::collection::vec(0.0f64..3.0, 1..5),
                   gaps in prop::collection::vec(0.1f64..2.0, 1..5)) -> ConvexGauge {
        let mut sorted = slopes.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut knots = vec![(0.0, 0.0)];
        let (mut t, mut v) = (0.0, 0.0);
        for (m, g) in sorted.iter().zip(gaps.iter().cycle()) {
            t += g;
            v += m * g;
            knots.push((t, v));
        }
        ConvexGauge::piecewise_linear(knots).unwrap()
    }
}

prop_compose! {
    fn measure_and_function(max_n: usize)
        (n in 2..=max_n)
        (raw in prop::collection::vec(0.05f64..1.0, n),
         vals in prop::collection::vec(-3.0f64..3.0, n)) -> (DiscreteMeasure, SpaceFunction) {
        (
            DiscreteMeasure::from_unnormalized(raw).unwrap(),
            SpaceFunction::new(vals).unwrap(),
        )
    }
}

prop_compose! {
    fn planar_instance(max_n: usize)
        (n in 2..=max_n)
        (pts in prop::collection::vec((0.0f64..4.0, 0.0f64..4.0), n),
         nu_raw in prop::collection::vec(0.01f64..1.0, n),
         mu_raw in prop::collection::vec(0.01f64..1.0, n))
        -> Option<(MetricSpace, DiscreteMeasure, DiscreteMeasure)> {
        MetricSpace::from_points(&pts).ok().map(|space| (
            space,
            DiscreteMeasure::from_unnormalized(nu_raw).unwrap(),
            DiscreteMeasure::from_unnormalized(mu_raw).unwrap(),
        ))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn young_inequality_for_power_gauges(alpha in power_gauge(), t in 0.0f64..6.0, s in 0.0f64..6.0) {
        let beta = alpha.conjugate(&resolution());
        let bound = alpha.eval(t) + beta.eval(s);
        if bound.is_finite() {
            prop_assert!(s * t <= bound + 1e-9 * (1.0 + bound));
        }
    }

    #[test]
    fn biconjugation_for_pwl_gauges(alpha in pwl_gauge(), t in 0.0f64..8.0) {
        let back = alpha.conjugate(&resolution()).conjugate(&resolution());
        let (a, b) = (alpha.eval(t), back.eval(t));
        prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn generalized_inverses_are_ordered(alpha in power_gauge(), y in 0.0f64..10.0) {
        let lo = generalized_inverse(&alpha, y, InverseSide::Lower, 1e-12);
        let hi = generalized_inverse(&alpha, y, InverseSide::Upper, 1e-12);
        prop_assert!(lo <= hi + 1e-10);
    }

    #[test]
    fn luxemburg_norm_is_homogeneous((mu, f) in measure_and_function(6), c in 0.1f64..8.0) {
        let alpha = ConvexGauge::x2();
        let scaled = SpaceFunction::new(f.values().iter().map(|v| c * v).collect()).unwrap();
        let nf = luxemburg_norm(&f, &mu, &alpha, 1e-12).unwrap();
        let nsc = luxemburg_norm(&scaled, &mu, &alpha, 1e-12).unwrap();
        prop_assert!((nsc - c * nf).abs() <= 1e-8 * (1.0 + c * nf));
    }

    #[test]
    fn entropy_is_nonnegative((mu, _) in measure_and_function(6), (nu, _) in measure_and_function(6)) {
        if mu.len() == nu.len() {
            let h = relative_entropy(&nu, &mu).unwrap();
            prop_assert!(h >= 0.0);
        }
    }

    #[test]
    fn dual_norm_symmetry_chi((mu, chi_raw) in measure_and_function(6), (nu, _) in measure_and_function(6)) {
        if mu.len() == nu.len() {
            let chi = SpaceFunction::new(chi_raw.values().iter().map(|v| v.abs()).collect()).unwrap();
            let class = FunctionClass::chi_bounded(chi).unwrap();
            let ab = dual_norm(&nu, &mu, &class).unwrap();
            let ba = dual_norm(&mu, &nu, &class).unwrap();
            prop_assert!((ab - ba).abs() < 1e-10);
        }
    }

    #[test]
    fn transport_duality_gap_is_tiny(inst in planar_instance(7)) {
        if let Some((space, nu, mu)) = inst {
            let plan = metric_transport(&nu, &mu, &space).unwrap();
            let cost = cost_matrix(&space, &CostSpec::Metric).unwrap();
            validate_plan(&plan, &nu, &mu, &cost).unwrap();
            let (dual_value, phi) = kr_dual(&nu, &mu, &space).unwrap();
            prop_assert!((dual_value - plan.cost).abs() <= 1e-8);
            for i in 0..space.len() {
                for j in 0..space.len() {
                    prop_assert!(phi.value(i) - phi.value(j) <= space.dist(i, j) + 1e-10);
                }
            }
        }
    }
}
