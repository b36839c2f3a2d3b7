//! Randomized invariants: algebraic identities of the eigensolver, structural
//! guarantees of the envelopes, format round-trips, and geometry that must
//! survive arbitrary inputs, not just the frozen fixtures.

use proptest::prelude::*;
use steerbound::bounds::{deterministic_table, envelope, Criterion, LossRegime, ResponsePlan};
use steerbound::io::{self, GridSpec};
use steerbound::simulator::Scenario;
use steerbound::sym3::{self, SymMatrix3};
use steerbound::{build_measurement_set, BlochVector, Rotation, WernerParams};

const SIZES: [usize; 5] = [2, 3, 4, 6, 10];

fn any_size() -> impl Strategy<Value = usize> {
    prop::sample::select(SIZES.to_vec())
}

fn any_criterion() -> impl Strategy<Value = Criterion> {
    prop::sample::select(Criterion::ALL.to_vec())
}

fn any_unit() -> impl Strategy<Value = BlochVector> {
    ((-1.0f64..=1.0), (0.0f64..std::f64::consts::TAU)).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        BlochVector::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn any_symmetric() -> impl Strategy<Value = SymMatrix3> {
    prop::array::uniform(-5.0f64..5.0)
        .prop_map(|[a, b, c, d, e, f]: [f64; 6]| [[a, d, e], [d, b, f], [e, f, c]])
}

proptest! {
    #[test]
    fn plan_bitmasks_round_trip(values in prop::collection::vec(-1i8..=1, 1..=16)) {
        prop_assume!(values.iter().any(|&v| v != 0));
        let plan = ResponsePlan::new(values).unwrap();
        let decoded = ResponsePlan::from_bitmask(plan.n(), plan.bitmask()).unwrap();
        prop_assert_eq!(decoded, plan);
    }

    #[test]
    fn eigenvalues_satisfy_matrix_invariants(a in any_symmetric()) {
        let [l0, l1, l2] = sym3::eigenvalues(&a);
        prop_assert!(l0 >= l1 && l1 >= l2);

        let trace = a[0][0] + a[1][1] + a[2][2];
        let minors = a[0][0] * a[1][1] - a[0][1] * a[0][1]
            + a[0][0] * a[2][2] - a[0][2] * a[0][2]
            + a[1][1] * a[2][2] - a[1][2] * a[1][2];
        let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[1][2])
            - a[0][1] * (a[0][1] * a[2][2] - a[1][2] * a[0][2])
            + a[0][2] * (a[0][1] * a[1][2] - a[1][1] * a[0][2]);
        prop_assert!((l0 + l1 + l2 - trace).abs() < 1e-9);
        prop_assert!((l0 * l1 + l0 * l2 + l1 * l2 - minors).abs() < 1e-8);
        prop_assert!((l0 * l1 * l2 - det).abs() < 1e-7);
    }

    #[test]
    fn eigenvalues_shift_with_the_diagonal(a in any_symmetric(), c in -3.0f64..3.0) {
        let mut shifted = a;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += c;
        }
        let base = sym3::eigenvalues(&a);
        let moved = sym3::eigenvalues(&shifted);
        for i in 0..3 {
            prop_assert!((moved[i] - base[i] - c).abs() < 1e-9);
        }
    }

    #[test]
    fn rotations_preserve_the_metric(
        axis in any_unit(),
        angle in 0.0f64..std::f64::consts::TAU,
        u in any_unit(),
        v in any_unit(),
    ) {
        let rotation = Rotation::about_axis(axis, angle);
        let (ru, rv) = (rotation.apply(u), rotation.apply(v));
        prop_assert!((ru.norm() - 1.0).abs() < 1e-12);
        prop_assert!((ru.dot(rv) - u.dot(v)).abs() < 1e-12);
        prop_assert!((ru.cross(rv).norm() - u.cross(v).norm()).abs() < 1e-12);
    }

    #[test]
    fn formatted_floats_are_idempotent_and_faithful(x in prop::num::f64::NORMAL) {
        let text = io::fmt_sig(x, 12);
        let parsed: f64 = text.parse().unwrap();
        prop_assert!((parsed - x).abs() <= x.abs() * 1e-11, "{x} -> {text}");
        prop_assert_eq!(io::fmt_sig(parsed, 12), text);
    }

    #[test]
    fn grid_specs_expand_within_their_bounds(
        start in 0.001f64..0.9,
        span in 0.0f64..0.1,
        step in 1e-4f64..0.05,
    ) {
        let stop = (start + span).min(1.0);
        let spec = GridSpec::parse(&format!("{start}:{stop}:{step}")).unwrap();
        let points = spec.points();
        prop_assert!(!points.is_empty());
        prop_assert_eq!(points[0], start);
        for pair in points.windows(2) {
            prop_assert!((pair[1] - pair[0] - step).abs() < 1e-9);
        }
        let last = *points.last().unwrap();
        prop_assert!(last <= stop + 1e-12);
        prop_assert!(stop - last < step + 1e-12);
    }

    #[test]
    fn scenario_json_round_trips(
        n in any_size(),
        regime in prop::sample::select(LossRegime::ALL.to_vec()),
        mu in 0.0f64..=1.0,
        eps in 0.01f64..=1.0,
        trials in 1u64..1_000_000,
        seed in any::<u64>(),
    ) {
        let params = WernerParams::new(mu, eps).unwrap();
        let scenario = Scenario::honest(n, regime, params, trials, seed).unwrap();
        let text = io::scenario_to_json(&scenario).unwrap();
        prop_assert_eq!(io::scenario_from_json(&text).unwrap(), scenario);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelopes_dominate_their_tables_and_stay_concave(
        n in any_size(),
        criterion in any_criterion(),
        eps_a in 0.01f64..=1.0,
        eps_b in 0.01f64..=1.0,
    ) {
        let set = build_measurement_set(n).unwrap();
        let points = deterministic_table(&set, criterion);

        for point in &points {
            let env = envelope(&points, point.epsilon_m).unwrap();
            prop_assert!(env.value >= point.value - 1e-12);
        }

        let (lo, hi) = if eps_a <= eps_b { (eps_a, eps_b) } else { (eps_b, eps_a) };
        let (env_lo, env_hi) = (envelope(&points, lo).unwrap(), envelope(&points, hi).unwrap());
        // The envelope grows with the efficiency budget, its post-selected
        // ratio shrinks, and the curve is midpoint-concave.
        prop_assert!(env_lo.value <= env_hi.value + 1e-12);
        prop_assert!(env_lo.value / lo >= env_hi.value / hi - 1e-12);
        let mid = envelope(&points, 0.5 * (lo + hi)).unwrap();
        prop_assert!(mid.value >= 0.5 * (env_lo.value + env_hi.value) - 1e-12);

        for env in [&env_lo, &env_hi, &mid] {
            let total: f64 = env.support.iter().map(|&(_, w)| w).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(env.support.len() <= 2);
            prop_assert!(env.support.iter().all(|&(_, w)| (-1e-12..=1.0 + 1e-12).contains(&w)));
        }
    }
}

/// At every deterministic point the linear bound is dominated by the
/// variance bound on the comparable scale: D(m)^2 <= F(m) * (m/n).
#[test]
fn deterministic_bounds_respect_the_comparison_scale() {
    for n in SIZES {
        let set = build_measurement_set(n).unwrap();
        let linear = deterministic_table(&set, Criterion::Linear);
        let variance = deterministic_table(&set, Criterion::Variance);
        for (d, f) in linear.iter().zip(&variance) {
            assert!(
                d.value * d.value <= f.value * d.epsilon_m + 1e-12,
                "n={n} m={}: D^2 = {} exceeds F * eps_m = {}",
                d.reported,
                d.value * d.value,
                f.value * d.epsilon_m
            );
        }
    }
}
