//! Gaze samples, traces and detected saccades.

use alloc::vec::Vec;

use crate::math::median;
use crate::{Error, Result};

/// One eye-tracker sample. Positions are in degrees of visual angle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GazeSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub valid: bool,
}

impl GazeSample {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y, valid: true }
    }

    pub fn invalid(t: f64) -> Self {
        Self {
            t,
            x: f64::NAN,
            y: f64::NAN,
            valid: false,
        }
    }
}

/// A time-ordered gaze recording.
#[derive(Debug, Clone, PartialEq)]
pub struct GazeTrace {
    samples: Vec<GazeSample>,
    sample_rate: f64,
}

impl GazeTrace {
    /// Builds a trace, checking that timestamps strictly increase and that the
    /// median interval is within 10% of `1000 / sample_rate` ms.
    pub fn new(samples: Vec<GazeSample>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sample_rate",
                reason: "must be positive",
            });
        }
        check_monotonic(&samples)?;
        if let Some(median_ms) = median_interval(&samples) {
            let nominal = 1000.0 / sample_rate;
            if (median_ms - nominal).abs() > 0.1 * nominal {
                return Err(Error::InconsistentSampleRate {
                    median_ms,
                    rate_hz: sample_rate,
                });
            }
        }
        Ok(Self { samples, sample_rate })
    }

    /// Builds a trace whose nominal rate is taken from the median interval.
    pub fn from_samples(samples: Vec<GazeSample>) -> Result<Self> {
        check_monotonic(&samples)?;
        let sample_rate = median_interval(&samples).map_or(1000.0, |ms| 1000.0 / ms);
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[GazeSample] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<GazeSample> {
        self.samples
    }

    /// Same trace with every timestamp shifted by `dt_ms`.
    pub fn shifted_in_time(&self, dt_ms: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|s| GazeSample { t: s.t + dt_ms, ..*s })
            .collect();
        Self {
            samples,
            sample_rate: self.sample_rate,
        }
    }

    /// Same trace with every position translated by `(dx, dy)` degrees.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|s| GazeSample {
                x: s.x + dx,
                y: s.y + dy,
                ..*s
            })
            .collect();
        Self {
            samples,
            sample_rate: self.sample_rate,
        }
    }
}

fn check_monotonic(samples: &[GazeSample]) -> Result<()> {
    for (i, pair) in samples.windows(2).enumerate() {
        if !(pair[1].t > pair[0].t) {
            return Err(Error::NonMonotonicTime { index: i + 1 });
        }
    }
    Ok(())
}

fn median_interval(samples: &[GazeSample]) -> Option<f64> {
    if samples.len() < 2 {
        return None;
    }
    let mut dts: Vec<f64> = samples.windows(2).map(|p| p[1].t - p[0].t).collect();
    Some(median(&mut dts))
}

/// A detected (or injected) saccade.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SaccadeEvent {
    /// Onset time (ms).
    pub onset: f64,
    /// Offset (landing) time (ms).
    pub offset: f64,
    /// Straight-line distance between onset and offset positions (deg).
    pub amplitude: f64,
    /// deg/s
    pub peak_velocity: f64,
    /// Degrees counter-clockwise from +x.
    pub direction: f64,
}

impl SaccadeEvent {
    pub fn duration(&self) -> f64 {
        self.offset - self.onset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, dt: f64) -> Vec<GazeSample> {
        (0..n).map(|i| GazeSample::new(i as f64 * dt, 0.0, 0.0)).collect()
    }

    #[test]
    fn rejects_non_increasing_time() {
        let mut s = uniform(5, 1.0);
        s[3].t = s[2].t;
        assert_eq!(
            GazeTrace::new(s, 1000.0).unwrap_err(),
            Error::NonMonotonicTime { index: 3 }
        );
    }

    #[test]
    fn rate_must_match_intervals() {
        assert!(GazeTrace::new(uniform(10, 1.0), 1000.0).is_ok());
        assert!(GazeTrace::new(uniform(10, 1.05), 1000.0).is_ok());
        assert!(matches!(
            GazeTrace::new(uniform(10, 2.0), 1000.0),
            Err(Error::InconsistentSampleRate { .. })
        ));
        let t = GazeTrace::from_samples(uniform(10, 4.0)).unwrap();
        assert_eq!(t.sample_rate(), 250.0);
    }
}
