//! Post-saccadic frame sequences.
//!
//! Step schedules are rendered with the Butterworth lowpass; ramped
//! schedules by downsampling to `2 × cpd` pixels per degree and back.

use std::collections::HashMap;

use saccadic_core::resample::{gaussian_downsample_upsample_limited, MAX_DOWNSAMPLE_FACTOR};
use saccadic_core::{ImageBuffer, RenderSchedule};

use crate::spectral::{butterworth_lowpass, DEFAULT_ORDER};
use crate::{Error, Result};

/// What happens to one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePlan {
    pub t_ms: f64,
    /// Time since landing, `None` for pre-saccadic frames.
    pub since_landing_ms: Option<f64>,
    /// Scheduled resolution (native for pass-through frames).
    pub cpd: f64,
    pub filtered: bool,
}

/// Evenly spaced frame times starting at `start_ms`.
pub fn frame_times(start_ms: f64, refresh_hz: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start_ms + k as f64 * 1000.0 / refresh_hz).collect()
}

/// Per-frame schedule evaluation without touching pixels.
pub fn plan_trial_sequence(schedule: &RenderSchedule, landing_ms: f64, frame_times: &[f64]) -> Result<Vec<FramePlan>> {
    if frame_times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::UnsortedFrames);
    }
    let native = schedule.native_cpd();
    frame_times
        .iter()
        .map(|&t| {
            if t < landing_ms {
                return Ok(FramePlan {
                    t_ms: t,
                    since_landing_ms: None,
                    cpd: native,
                    filtered: false,
                });
            }
            let since = t - landing_ms;
            let cpd = schedule.cpd_at(since)?;
            Ok(FramePlan {
                t_ms: t,
                since_landing_ms: Some(since),
                cpd,
                filtered: cpd < native,
            })
        })
        .collect()
}

/// Renders one frame per entry of `frame_times`.
///
/// Frames before landing, or scheduled at or above native acuity, are the
/// input unchanged. Step schedules use a Butterworth filter of
/// [`DEFAULT_ORDER`].
pub fn render_trial_sequence(
    img: &ImageBuffer,
    schedule: &RenderSchedule,
    landing_ms: f64,
    frame_times: &[f64],
) -> Result<Vec<ImageBuffer>> {
    render_trial_sequence_with(img, schedule, landing_ms, frame_times, DEFAULT_ORDER)
}

/// As [`render_trial_sequence`] with an explicit Butterworth order.
pub fn render_trial_sequence_with(
    img: &ImageBuffer,
    schedule: &RenderSchedule,
    landing_ms: f64,
    frame_times: &[f64],
    order: u32,
) -> Result<Vec<ImageBuffer>> {
    let plan = plan_trial_sequence(schedule, landing_ms, frame_times)?;
    let mut cache: HashMap<u64, ImageBuffer> = HashMap::new();
    plan.iter()
        .map(|p| {
            if !p.filtered {
                return Ok(img.clone());
            }
            if let Some(done) = cache.get(&p.cpd.to_bits()) {
                return Ok(done.clone());
            }
            let out = filter_at(img, schedule, p.cpd, order)?;
            cache.insert(p.cpd.to_bits(), out.clone());
            Ok(out)
        })
        .collect()
}

/// Reduces `img` to `cpd` with the filter that matches `schedule`.
pub fn filter_at(img: &ImageBuffer, schedule: &RenderSchedule, cpd: f64, order: u32) -> Result<ImageBuffer> {
    match schedule {
        RenderSchedule::Step(_) => {
            if cpd >= img.nyquist_cpd() {
                return Ok(img.clone());
            }
            butterworth_lowpass(img, cpd, order)
        }
        RenderSchedule::Ramp { params, .. } => {
            let target_ppd = 2.0 * cpd;
            if target_ppd >= img.ppd() {
                return Ok(img.clone());
            }
            let max_factor = (img.ppd() / (2.0 * params.floor_cpd())).max(MAX_DOWNSAMPLE_FACTOR);
            Ok(gaussian_downsample_upsample_limited(img, target_ppd, max_factor)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use saccadic_core::StepSchedule;

    #[test]
    fn unsorted_rejected() {
        let s = RenderSchedule::Step(StepSchedule::new(21.1, 100.0, 30.0).unwrap());
        assert!(matches!(
            plan_trial_sequence(&s, 0.0, &[0.0, 20.0, 10.0]),
            Err(Error::UnsortedFrames)
        ));
    }

    #[test]
    fn pre_landing_frames_native() {
        let s = RenderSchedule::Step(StepSchedule::new(21.1, 100.0, 30.0).unwrap());
        let plan = plan_trial_sequence(&s, 50.0, &[0.0, 49.9, 50.0]).unwrap();
        assert_eq!(plan[0].since_landing_ms, None);
        assert!(!plan[1].filtered);
        assert!(plan[2].filtered);
        assert_eq!(plan[2].cpd, 21.1);
    }
}
