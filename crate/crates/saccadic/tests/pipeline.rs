use saccadic::core::synth::generate_trace;
use saccadic::core::{DisplaySpec, GazeSample, GazeTrace, ImageBuffer, SchedulerParams, SynthConfig};
use saccadic::pipeline::{plan_pipeline, render_frame, PipelineSettings};

fn settings(ppd: f64, latency_ms: f64) -> PipelineSettings {
    PipelineSettings {
        display: DisplaySpec::default().with_ppd(ppd),
        scheduler: SchedulerParams::for_display(ppd),
        latency_ms,
        ..PipelineSettings::default()
    }
}

fn synth(seed: u64) -> GazeTrace {
    let cfg = SynthConfig {
        duration_ms: 10_000.0,
        seed,
        ..SynthConfig::default()
    };
    generate_trace(&cfg).unwrap().trace
}

#[test]
fn four_hz_savings_in_sixty_ppd_band() {
    for seed in 0..5 {
        let plan = plan_pipeline(&synth(seed), &settings(60.0, 0.0)).unwrap();
        let s = plan.report.savings;
        assert!((0.50..=0.64).contains(&s), "seed {seed}: {s}");
        assert!(plan.report.saccades >= 36, "{}", plan.report.saccades);
    }
}

#[test]
fn latency_shifts_every_start() {
    let trace = synth(3);
    let a = plan_pipeline(&trace, &settings(60.0, 0.0)).unwrap();
    let b = plan_pipeline(&trace, &settings(60.0, 30.0)).unwrap();
    assert_eq!(a.manifest.schedule_starts.len(), b.manifest.schedule_starts.len());
    for (x, y) in a.manifest.schedule_starts.iter().zip(&b.manifest.schedule_starts) {
        assert_eq!(x.landing_ms, y.landing_ms);
        assert_eq!(y.start_ms - x.start_ms, 30.0);
    }
}

#[test]
fn jitter_is_bounded_and_seeded() {
    let trace = synth(4);
    let mut s = settings(60.0, 10.0);
    s.latency_jitter_ms = 40.0;
    s.seed = 9;
    let a = plan_pipeline(&trace, &s).unwrap();
    let b = plan_pipeline(&trace, &s).unwrap();
    assert_eq!(a, b);
    for st in &a.manifest.schedule_starts {
        let delay = st.start_ms - st.landing_ms;
        assert!((10.0..=50.0).contains(&delay), "{delay}");
    }
}

#[test]
fn no_saccades_means_native() {
    let samples = (0..2000).map(|i| GazeSample::new(i as f64, 0.0, 0.0)).collect();
    let trace = GazeTrace::new(samples, 1000.0).unwrap();
    let plan = plan_pipeline(&trace, &settings(60.0, 0.0)).unwrap();
    assert_eq!(plan.report.saccades, 0);
    assert_eq!(plan.report.savings, 0.0);
    assert!(plan.manifest.frames.iter().all(|f| !f.filtered && f.cpd == 30.0));
    assert_eq!(plan.manifest.frames.len(), 180);
}

#[test]
fn frames_use_latest_started_schedule() {
    let trace = synth(6);
    let plan = plan_pipeline(&trace, &settings(60.0, 30.0)).unwrap();
    let starts: Vec<f64> = plan.manifest.schedule_starts.iter().map(|s| s.start_ms).collect();
    for f in &plan.manifest.frames {
        let expect = starts.iter().rev().find(|&&s| s <= f.t_ms).copied();
        assert_eq!(f.schedule_start_ms, expect);
    }
}

#[test]
fn low_resolution_display_saves_little() {
    let plan = plan_pipeline(&synth(1), &settings(30.0, 0.0)).unwrap();
    assert!(plan.report.savings < 0.03, "{}", plan.report.savings);
}

#[test]
fn rendered_frames_match_schedule() {
    let trace = synth(2);
    let s = settings(60.0, 0.0);
    let plan = plan_pipeline(&trace, &s).unwrap();
    let img = ImageBuffer::from_fn(36, 36, 1, 90.0, |x, y, _| ((x + y) % 2) as f64).unwrap();
    let first = plan.manifest.frames.iter().find(|f| f.filtered).unwrap();
    let out = render_frame(&img, first, &s).unwrap();
    assert!(out.max_abs_diff(&img) > 0.3);
    let native = plan.manifest.frames.iter().find(|f| !f.filtered).unwrap();
    assert_eq!(render_frame(&img, native, &s).unwrap(), img);
}
