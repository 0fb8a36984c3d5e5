use proptest::prelude::*;
use saccadic_core::{AcuityCurve, Reach, SchedulerParams};

/// Bisection on the monotone curve, independent of the closed-form inverse.
fn bisect(curve: &AcuityCurve, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1e7_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if curve.acuity_cpd(mid).unwrap() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn closed_form_inverse_matches_bisection() {
    let c = AcuityCurve::default();
    for target in [10.0, 15.0, 21.1, 27.1, 30.0, 45.0] {
        let exact = c.time_to_reach(target).ms();
        let numeric = bisect(&c, target);
        assert!(
            (exact - numeric).abs() <= 1e-6 * exact.max(1.0),
            "{target}: {exact} vs {numeric}"
        );
    }
}

#[test]
fn scheduler_family_is_monotone_in_time() {
    let c = AcuityCurve::default();
    for s in [-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0] {
        let p = SchedulerParams::default().with_offset(s);
        let mut prev = p.scheduled_cpd(0.0, &c).unwrap();
        for t in 1..=2000 {
            let v = p.scheduled_cpd(t as f64, &c).unwrap();
            assert!(v >= prev, "s={s} t={t}");
            prev = v;
        }
    }
}

proptest! {
    #[test]
    fn curve_strictly_increasing(t1 in 0.0f64..20_000.0, dt in 1e-3f64..5_000.0) {
        let c = AcuityCurve::default();
        prop_assert!(c.acuity_cpd(t1).unwrap() < c.acuity_cpd(t1 + dt).unwrap());
    }

    #[test]
    fn inverse_round_trip(t in 1.0f64..10_000.0) {
        let c = AcuityCurve::default();
        let back = c.time_to_reach(c.acuity_cpd(t).unwrap());
        match back {
            Reach::After(r) => prop_assert!((r - t).abs() <= 1e-6 * t),
            Reach::AtLanding => prop_assert!(false, "unexpected sentinel"),
        }
    }

    #[test]
    fn scheduler_within_floor_and_native(t in 0.0f64..5_000.0, s in -20.0f64..20.0) {
        let c = AcuityCurve::default();
        let p = SchedulerParams::default().with_offset(s);
        let v = p.scheduled_cpd(t, &c).unwrap();
        prop_assert!(v >= p.floor_cpd() && v <= p.native_acuity);
    }

    #[test]
    fn scheduler_follows_curve_when_it_dominates(t in 0.0f64..400.0) {
        let c = AcuityCurve::default();
        let p = SchedulerParams::default();
        let curve = c.acuity_cpd(t).unwrap();
        let ramp = t * p.native_acuity / p.ramp_end_ms;
        if curve > ramp && curve > p.floor_cpd() && curve < p.native_acuity {
            prop_assert_eq!(p.scheduled_cpd(t, &c).unwrap(), curve);
        }
    }

    #[test]
    fn scheduler_monotone_in_offset(t in 0.0f64..2_000.0, s in -20.0f64..20.0, ds in 0.0f64..10.0) {
        let c = AcuityCurve::default();
        let lo = SchedulerParams::default().with_offset(s).scheduled_cpd(t, &c).unwrap();
        let hi = SchedulerParams::default().with_offset(s + ds).scheduled_cpd(t, &c).unwrap();
        prop_assert!(hi >= lo);
    }
}
