//! Streaming radius-criterion detector.
//!
//! A saccade starts at the first sample farther than `departure_radius` from
//! the fixation point and ends at the first later sample within
//! `landing_radius` of the target. Leaving fixation before the detector is
//! armed (stimulus onset) aborts the trial.

use alloc::vec::Vec;

use crate::math::hypot;
use crate::{Error, GazeSample, GazeTrace, Result, SaccadeEvent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineConfig {
    pub fixation_center: (f64, f64),
    pub departure_radius: f64,
    pub target_center: (f64, f64),
    pub landing_radius: f64,
}

impl OnlineConfig {
    /// Default 1.9 deg departure and 2.9 deg landing radii.
    pub fn new(fixation_center: (f64, f64), target_center: (f64, f64)) -> Self {
        Self {
            fixation_center,
            departure_radius: 1.9,
            target_center,
            landing_radius: 2.9,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.departure_radius > 0.0 && self.landing_radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: "departure and landing radii must be positive",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnlineState {
    Fixating,
    Departed,
    Landed,
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "snake_case")
)]
pub enum OnlineEvent {
    Departed { t: f64 },
    Landed { t: f64 },
    Aborted { t: f64 },
}

impl OnlineEvent {
    pub fn t(&self) -> f64 {
        match *self {
            OnlineEvent::Departed { t } | OnlineEvent::Landed { t } | OnlineEvent::Aborted { t } => t,
        }
    }
}

/// Owned, single-threaded detector state.
#[derive(Debug, Clone)]
pub struct OnlineDetector {
    config: OnlineConfig,
    state: OnlineState,
    armed: bool,
    last_t: Option<f64>,
}

impl OnlineDetector {
    pub fn new(config: OnlineConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: OnlineState::Fixating,
            armed: false,
            last_t: None,
        })
    }

    pub fn config(&self) -> &OnlineConfig {
        &self.config
    }

    pub fn state(&self) -> OnlineState {
        self.state
    }

    pub fn is_armed(&self) -> bool {
        self.armed
    }

    /// Marks stimulus onset; departures from now on are saccades.
    pub fn arm(&mut self) {
        self.armed = true;
    }

    pub fn reset(&mut self) {
        self.state = OnlineState::Fixating;
        self.armed = false;
        self.last_t = None;
    }

    /// Feeds one sample. Invalid samples advance the clock only.
    pub fn step(&mut self, sample: &GazeSample) -> Result<Option<OnlineEvent>> {
        if let Some(last) = self.last_t {
            if !(sample.t > last) {
                return Err(Error::OutOfOrder { t: sample.t, last });
            }
        }
        self.last_t = Some(sample.t);
        if !sample.valid {
            return Ok(None);
        }
        let c = &self.config;
        let event = match self.state {
            OnlineState::Fixating => {
                let d = hypot(sample.x - c.fixation_center.0, sample.y - c.fixation_center.1);
                if d > c.departure_radius {
                    if self.armed {
                        self.state = OnlineState::Departed;
                        Some(OnlineEvent::Departed { t: sample.t })
                    } else {
                        self.state = OnlineState::Aborted;
                        Some(OnlineEvent::Aborted { t: sample.t })
                    }
                } else {
                    None
                }
            }
            OnlineState::Departed => {
                let d = hypot(sample.x - c.target_center.0, sample.y - c.target_center.1);
                if d <= c.landing_radius {
                    self.state = OnlineState::Landed;
                    Some(OnlineEvent::Landed { t: sample.t })
                } else {
                    None
                }
            }
            OnlineState::Landed | OnlineState::Aborted => None,
        };
        Ok(event)
    }
}

/// Runs a single trial over a recorded trace, arming at `arm_at_ms`.
///
/// Returns every emitted transition and, when the trial completed, the
/// saccade spanning departure to landing. Its peak velocity is the largest
/// sample-to-sample speed inside that span.
pub fn run_trial(
    trace: &GazeTrace,
    config: OnlineConfig,
    arm_at_ms: f64,
) -> Result<(Vec<OnlineEvent>, Option<SaccadeEvent>)> {
    let mut det = OnlineDetector::new(config)?;
    let samples = trace.samples();
    let mut transitions = Vec::new();
    let mut departed_idx = None;
    let mut saccade = None;
    for (i, s) in samples.iter().enumerate() {
        if !det.is_armed() && s.t >= arm_at_ms {
            det.arm();
        }
        match det.step(s)? {
            Some(ev @ OnlineEvent::Departed { .. }) => {
                departed_idx = Some(i);
                transitions.push(ev);
            }
            Some(ev @ OnlineEvent::Landed { .. }) => {
                transitions.push(ev);
                if let Some(a) = departed_idx {
                    saccade = Some(span_event(samples, a, i));
                }
            }
            Some(ev) => transitions.push(ev),
            None => {}
        }
        if matches!(det.state(), OnlineState::Landed | OnlineState::Aborted) {
            break;
        }
    }
    Ok((transitions, saccade))
}

fn span_event(samples: &[GazeSample], a: usize, b: usize) -> SaccadeEvent {
    let (sa, sb) = (&samples[a], &samples[b]);
    let mut peak: f64 = 0.0;
    let mut prev: Option<&GazeSample> = None;
    for s in samples[a..=b].iter().filter(|s| s.valid) {
        if let Some(p) = prev {
            let v = hypot(s.x - p.x, s.y - p.y) / ((s.t - p.t) / 1000.0);
            peak = peak.max(v);
        }
        prev = Some(s);
    }
    let (dx, dy) = (sb.x - sa.x, sb.y - sa.y);
    let mut direction = libm::atan2(dy, dx).to_degrees();
    if direction < 0.0 {
        direction += 360.0;
    }
    SaccadeEvent {
        onset: sa.t,
        offset: sb.t,
        amplitude: hypot(dx, dy),
        peak_velocity: peak,
        direction,
    }
}
