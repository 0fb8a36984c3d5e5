use proptest::prelude::*;
use saccadic_core::bitrate::{inclusive_steps, savings_for_rate, sweep};
use saccadic_core::{DisplaySpec, Distribution, SimConfig};

fn savings(ppd: f64, freq: f64) -> f64 {
    savings_for_rate(
        &DisplaySpec::default().with_ppd(ppd),
        &SimConfig::default().with_freq(freq),
    )
    .unwrap()
}

#[test]
fn published_ranges() {
    for f in [3.0, 4.0, 5.0] {
        let s60 = savings(60.0, f);
        assert!((0.50..=0.64).contains(&s60), "60 ppd {f} Hz: {s60}");
        let s80 = savings(80.0, f);
        assert!((0.70..=0.81).contains(&s80), "80 ppd {f} Hz: {s80}");
        assert!(savings(45.0, f) > 0.18);
    }
    for f in 1..=8 {
        assert!(savings(30.0, f as f64) < 0.03);
    }
}

#[test]
fn grid_monotone_in_both_axes() {
    let ppds = inclusive_steps(30.0, 100.0, 1.0);
    let freqs = inclusive_steps(1.0, 8.0, 1.0);
    let g = sweep(&ppds, &freqs, &DisplaySpec::default(), &SimConfig::default()).unwrap();
    for r in 0..ppds.len() {
        for c in 0..freqs.len() {
            let v = g.savings[r][c];
            assert!((0.0..1.0).contains(&v));
            if r > 0 {
                assert!(v >= g.savings[r - 1][c]);
            }
            if c > 0 {
                assert!(v >= g.savings[r][c - 1]);
            }
        }
    }
    assert_eq!(g.get(60.0, 4.0), Some(savings(60.0, 4.0)));
}

#[test]
fn revert_cutoff_sensitivity() {
    let base = savings(60.0, 4.0);
    let d = DisplaySpec::default().with_ppd(60.0);
    let late = savings_for_rate(
        &d,
        &SimConfig {
            revert_after_ms: 500.0,
            ..SimConfig::default()
        },
    )
    .unwrap();
    assert!((late - base).abs() <= 0.2 * base);
}

#[test]
fn random_uniform_agrees_with_periodic() {
    let mut worst: f64 = 0.0;
    for ppd in [40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0] {
        for f in 3..=8 {
            let d = DisplaySpec::default().with_ppd(ppd);
            let periodic = savings_for_rate(&d, &SimConfig::default().with_freq(f as f64)).unwrap();
            let mean = (0..100)
                .map(|seed| {
                    let sim = SimConfig {
                        distribution: Distribution::RandomUniform { seed, jitter: 0.1 },
                        span_ms: 10_000.0,
                        ..SimConfig::default().with_freq(f as f64)
                    };
                    savings_for_rate(&d, &sim).unwrap()
                })
                .sum::<f64>()
                / 100.0;
            worst = worst.max((mean - periodic).abs());
        }
    }
    assert!(worst <= 0.02, "worst gap {worst}");
}

#[test]
fn quantized_variant_close() {
    let d = DisplaySpec::default().with_ppd(60.0);
    let q = savings_for_rate(
        &d,
        &SimConfig {
            quantize: true,
            ..SimConfig::default()
        },
    )
    .unwrap();
    assert!((q - savings(60.0, 4.0)).abs() < 1e-3);
}

proptest! {
    #[test]
    fn savings_bounded(ppd in 10.0f64..150.0, f in 0.5f64..10.0) {
        let s = savings(ppd, f);
        prop_assert!((0.0..1.0).contains(&s));
        if ppd <= 19.0 {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn monotone_in_frequency(ppd in 20.0f64..120.0, f in 0.5f64..9.0, df in 0.0f64..3.0) {
        prop_assert!(savings(ppd, f + df) >= savings(ppd, f));
    }

    #[test]
    fn absolute_resolution_cancels(ppd in 20.0f64..120.0, f in 1.0f64..8.0, k in 1u32..4) {
        let sim = SimConfig::default().with_freq(f);
        let base = DisplaySpec::default().with_ppd(ppd);
        let scaled = DisplaySpec { bits_per_pixel: base.bits_per_pixel * 2, width: base.width * k, height: base.height * k, ..base };
        let a = savings_for_rate(&base, &sim).unwrap();
        let b = savings_for_rate(&scaled, &sim).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
