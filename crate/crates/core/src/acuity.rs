//! Post-saccadic acuity and the render-resolution schedules derived from it.
//!
//! All times are milliseconds measured from saccade landing (offset), all
//! acuities are cycles per degree.

use crate::{Error, Result};

/// Lowpass cutoffs (cpd) used by the step-function protocol. The last value
/// only appears in the stimulus-processing description, not the main grid.
pub const STEP_CUTOFFS_CPD: [f64; 5] = [7.8, 12.8, 16.4, 21.1, 27.1];

/// Hold durations (ms) used by the step-function protocol.
pub const STEP_HOLDS_MS: [f64; 3] = [100.0, 200.0, 500.0];

/// Power-law fit of the highest resolvable spatial frequency after landing:
/// `coefficient * t^exponent + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AcuityCurve {
    pub coefficient: f64,
    pub exponent: f64,
    pub offset: f64,
}

impl Default for AcuityCurve {
    fn default() -> Self {
        Self {
            coefficient: 1.9469,
            exponent: 0.3475,
            offset: 9.5062,
        }
    }
}

/// Result of inverting the acuity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reach {
    /// The target is already resolvable at landing.
    AtLanding,
    /// The target is first resolvable this many milliseconds after landing.
    After(f64),
}

impl Reach {
    pub fn ms(self) -> f64 {
        match self {
            Reach::AtLanding => 0.0,
            Reach::After(t) => t,
        }
    }
}

impl AcuityCurve {
    pub fn new(coefficient: f64, exponent: f64, offset: f64) -> Result<Self> {
        let curve = Self {
            coefficient,
            exponent,
            offset,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coefficient > 0.0) {
            return Err(Error::InvalidParameter {
                name: "coefficient",
                reason: "must be positive",
            });
        }
        if !(self.exponent > 0.0 && self.exponent < 1.0) {
            return Err(Error::InvalidParameter {
                name: "exponent",
                reason: "must lie in (0, 1)",
            });
        }
        if !(self.offset > 0.0) {
            return Err(Error::InvalidParameter {
                name: "offset",
                reason: "must be positive",
            });
        }
        Ok(())
    }

    /// Acuity (cpd) `t_ms` milliseconds after landing.
    pub fn acuity_cpd(&self, t_ms: f64) -> Result<f64> {
        if !(t_ms >= 0.0) {
            return Err(Error::NegativeTime(t_ms));
        }
        Ok(self.eval(t_ms))
    }

    #[inline]
    pub(crate) fn eval(&self, t_ms: f64) -> f64 {
        self.coefficient * libm::pow(t_ms, self.exponent) + self.offset
    }

    /// Time after landing at which the curve first reaches `target_cpd`.
    pub fn time_to_reach(&self, target_cpd: f64) -> Reach {
        if target_cpd <= self.offset {
            return Reach::AtLanding;
        }
        let base = (target_cpd - self.offset) / self.coefficient;
        Reach::After(libm::pow(base, 1.0 / self.exponent))
    }
}

/// Parameters of the ramped, floored render-resolution scheduler.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchedulerParams {
    /// Signed acuity offset `s` added to the curve (cpd).
    pub acuity_offset: f64,
    /// Native acuity (cpd); always `native_ppd / 2`.
    pub native_acuity: f64,
    /// Time at which the linear ramp reaches native acuity (ms).
    pub ramp_end_ms: f64,
    pub max_downsample_factor: f64,
    pub native_ppd: f64,
}

impl Default for SchedulerParams {
    fn default() -> Self {
        Self::for_display(90.0)
    }
}

impl SchedulerParams {
    /// Default ramp (500 ms) and 8x downsample limit for a display of
    /// `native_ppd` pixels per degree.
    pub fn for_display(native_ppd: f64) -> Self {
        Self {
            acuity_offset: 0.0,
            native_acuity: native_ppd / 2.0,
            ramp_end_ms: 500.0,
            max_downsample_factor: 8.0,
            native_ppd,
        }
    }

    pub fn with_offset(mut self, acuity_offset: f64) -> Self {
        self.acuity_offset = acuity_offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.native_ppd > 0.0) {
            return Err(Error::InvalidParameter {
                name: "native_ppd",
                reason: "must be positive",
            });
        }
        if (self.native_acuity - self.native_ppd / 2.0).abs() > 1e-9 * self.native_ppd {
            return Err(Error::InvalidParameter {
                name: "native_acuity",
                reason: "must equal native_ppd / 2",
            });
        }
        if !(self.ramp_end_ms > 0.0) {
            return Err(Error::InvalidParameter {
                name: "ramp_end_ms",
                reason: "must be positive",
            });
        }
        if !(self.max_downsample_factor > 1.0) {
            return Err(Error::InvalidParameter {
                name: "max_downsample_factor",
                reason: "must exceed 1 so the floor stays below native acuity",
            });
        }
        if !self.acuity_offset.is_finite() {
            return Err(Error::InvalidParameter {
                name: "acuity_offset",
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Lowest acuity the scheduler will ever request (cpd).
    pub fn floor_cpd(&self) -> f64 {
        self.native_ppd / (self.max_downsample_factor * 2.0)
    }

    /// Scheduled render acuity (cpd) `t_ms` after landing.
    ///
    /// The larger of the offset curve, the linear ramp and the floor, capped
    /// at native acuity.
    pub fn scheduled_cpd(&self, t_ms: f64, curve: &AcuityCurve) -> Result<f64> {
        if !(t_ms >= 0.0) {
            return Err(Error::NegativeTime(t_ms));
        }
        Ok(self.eval(t_ms, curve))
    }

    pub(crate) fn eval(&self, t_ms: f64, curve: &AcuityCurve) -> f64 {
        let shifted = curve.eval(t_ms) + self.acuity_offset;
        let ramp = t_ms * self.native_acuity / self.ramp_end_ms;
        shifted.max(ramp).max(self.floor_cpd()).min(self.native_acuity)
    }
}

/// Hold a reduced cutoff for `[0, hold_ms)` after landing, then jump back.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepSchedule {
    pub cutoff_cpd: f64,
    pub hold_ms: f64,
    pub post_hold_cpd: f64,
}

impl StepSchedule {
    pub fn new(cutoff_cpd: f64, hold_ms: f64, post_hold_cpd: f64) -> Result<Self> {
        if !(hold_ms > 0.0) {
            return Err(Error::InvalidParameter {
                name: "hold_ms",
                reason: "must be positive",
            });
        }
        if !(cutoff_cpd > 0.0 && cutoff_cpd <= post_hold_cpd) {
            return Err(Error::InvalidParameter {
                name: "cutoff_cpd",
                reason: "must be positive and no larger than the post-hold acuity",
            });
        }
        Ok(Self {
            cutoff_cpd,
            hold_ms,
            post_hold_cpd,
        })
    }

    pub fn cpd_at(&self, t_ms: f64) -> Result<f64> {
        if !(t_ms >= 0.0) {
            return Err(Error::NegativeTime(t_ms));
        }
        Ok(if t_ms < self.hold_ms {
            self.cutoff_cpd
        } else {
            self.post_hold_cpd
        })
    }
}

/// Either schedule, as consumed by the frame renderer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenderSchedule {
    Step(StepSchedule),
    Ramp {
        params: SchedulerParams,
        curve: AcuityCurve,
    },
}

impl RenderSchedule {
    pub fn cpd_at(&self, t_ms: f64) -> Result<f64> {
        match self {
            RenderSchedule::Step(step) => step.cpd_at(t_ms),
            RenderSchedule::Ramp { params, curve } => params.scheduled_cpd(t_ms, curve),
        }
    }

    /// Acuity at which frames are no longer filtered.
    pub fn native_cpd(&self) -> f64 {
        match self {
            RenderSchedule::Step(step) => step.post_hold_cpd,
            RenderSchedule::Ramp { params, .. } => params.native_acuity,
        }
    }
}
