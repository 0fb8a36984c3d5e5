mod common;

use common::*;
use saccadic::core::{AcuityCurve, ImageBuffer, RenderSchedule, SchedulerParams, StepSchedule};
use saccadic::sequence::{frame_times, plan_trial_sequence, render_trial_sequence};

fn step(cutoff: f64, hold: f64, native: f64) -> RenderSchedule {
    RenderSchedule::Step(StepSchedule::new(cutoff, hold, native).unwrap())
}

#[test]
fn native_cutoff_is_noop() {
    let img = white_noise(32, 3, 60.0, 1);
    let times = frame_times(0.0, 90.0, 30);
    let frames = render_trial_sequence(&img, &step(30.0, 200.0, 30.0), 0.0, &times).unwrap();
    assert_eq!(frames.len(), 30);
    assert!(frames.iter().all(|f| f == &img));
}

#[test]
fn hundred_ms_step_filters_nine_frames() {
    let img = white_noise(32, 1, 65.3, 2);
    let times = frame_times(0.0, 90.0, 20);
    let frames = render_trial_sequence(&img, &step(21.1, 100.0, img.nyquist_cpd()), 0.0, &times).unwrap();
    let filtered: Vec<bool> = frames.iter().map(|f| f != &img).collect();
    assert_eq!(filtered.iter().filter(|&&b| b).count(), 9);
    assert!(filtered[..9].iter().all(|&b| b));
    assert!(frames[..9].windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn hold_counts_for_all_holds() {
    for (hold, want) in [(100.0, 9), (200.0, 18), (500.0, 45)] {
        let plan = plan_trial_sequence(&step(7.8, hold, 32.65), 0.0, &frame_times(0.0, 90.0, 60)).unwrap();
        assert_eq!(plan.iter().filter(|p| p.filtered).count(), want, "hold {hold}");
    }
}

#[test]
fn frames_before_landing_untouched() {
    let img = white_noise(32, 1, 60.0, 3);
    let times = frame_times(-50.0, 90.0, 12);
    let frames = render_trial_sequence(&img, &step(12.8, 100.0, 30.0), 0.0, &times).unwrap();
    // -50, -38.9, -27.8, -16.7, -5.6 are before landing.
    assert!(frames[..5].iter().all(|f| f == &img));
    assert!(frames[5..].iter().all(|f| f != &img));
}

#[test]
fn ramp_resolution_non_decreasing() {
    let params = SchedulerParams::for_display(60.0);
    let schedule = RenderSchedule::Ramp {
        params,
        curve: AcuityCurve::default(),
    };
    let times = frame_times(0.0, 90.0, 60);
    let plan = plan_trial_sequence(&schedule, 0.0, &times).unwrap();
    assert!(plan.windows(2).all(|w| w[1].cpd >= w[0].cpd));
    assert!(plan.last().unwrap().cpd == 30.0 && !plan.last().unwrap().filtered);

    // Detail, measured as energy above 10 cpd, comes back frame by frame.
    let img = white_noise(48, 1, 60.0, 9);
    let frames = render_trial_sequence(&img, &schedule, 0.0, &times[..40]).unwrap();
    let detail: Vec<f64> = frames.iter().step_by(8).map(|f| energy_above(f, 0, 10.0)).collect();
    assert!(detail.windows(2).all(|w| w[1] >= w[0] * 0.98), "{detail:?}");
}

#[test]
fn ramp_with_negative_offset_uses_floor() {
    let params = SchedulerParams::for_display(60.0).with_offset(-12.0);
    let schedule = RenderSchedule::Ramp {
        params,
        curve: AcuityCurve::default(),
    };
    let img = ImageBuffer::filled(32, 32, 1, 0.5, 90.0).unwrap();
    let frames = render_trial_sequence(&img, &schedule, 0.0, &[0.0, 5.0]).unwrap();
    assert_eq!(frames.len(), 2);
    assert!(frames[0].max_abs_diff(&img) < 1e-12);
}
