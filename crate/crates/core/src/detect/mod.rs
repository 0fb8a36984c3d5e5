//! Saccade detection.
//!
//! [`offline`] finds saccades in a complete recording from the distribution
//! of smoothed eye velocity. [`online`] is the sample-by-sample radius
//! criterion used to gate trials while they run.

pub mod offline;
pub mod online;

pub use offline::{detect_saccades_offline, smoothed_velocity, OfflineConfig, SpreadEstimator};
pub use online::{run_trial, OnlineConfig, OnlineDetector, OnlineEvent, OnlineState};

use crate::{Error, Result, SaccadeEvent};

/// Least-squares line through (amplitude, peak velocity).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MainSequenceFit {
    /// (deg/s) per degree of amplitude.
    pub slope: f64,
    /// deg/s
    pub intercept: f64,
    pub count: usize,
}

/// Fits peak velocity against amplitude. Diagnostic only.
pub fn main_sequence_stats(events: &[SaccadeEvent]) -> Result<MainSequenceFit> {
    let n = events.len();
    if n < 2 {
        return Err(Error::InsufficientEvents(n));
    }
    let nf = n as f64;
    let mean_a = events.iter().map(|e| e.amplitude).sum::<f64>() / nf;
    let mean_v = events.iter().map(|e| e.peak_velocity).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for e in events {
        let da = e.amplitude - mean_a;
        sxx += da * da;
        sxy += da * (e.peak_velocity - mean_v);
    }
    if !(sxx > 0.0) {
        return Err(Error::InsufficientEvents(n));
    }
    let slope = sxy / sxx;
    Ok(MainSequenceFit {
        slope,
        intercept: mean_v - slope * mean_a,
        count: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(amplitude: f64, peak_velocity: f64) -> SaccadeEvent {
        SaccadeEvent {
            onset: 0.0,
            offset: 30.0,
            amplitude,
            peak_velocity,
            direction: 0.0,
        }
    }

    #[test]
    fn exact_line() {
        let fit = main_sequence_stats(&[ev(2.0, 120.0), ev(4.0, 160.0), ev(10.0, 280.0)]).unwrap();
        assert!((fit.slope - 20.0).abs() < 1e-12);
        assert!((fit.intercept - 80.0).abs() < 1e-12);
        assert_eq!(fit.count, 3);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            main_sequence_stats(&[ev(2.0, 100.0)]),
            Err(Error::InsufficientEvents(1))
        );
        assert!(main_sequence_stats(&[ev(2.0, 100.0), ev(2.0, 140.0)]).is_err());
    }
}
