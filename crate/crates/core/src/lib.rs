//! Saccade-contingent rendering primitives.
//!
//! Everything in this crate is a pure function of plain values: the
//! post-saccadic acuity curve and the render-resolution schedulers built on
//! it, offline and streaming saccade detection, synthetic gaze traces with
//! known ground truth, the display bitrate model, and the spatial
//! (downsample/upsample) image filter. Fourier-domain filtering, file
//! formats and the command line live in the `saccadic` crate.
//!
//! The crate is `no_std` and only needs `alloc`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod acuity;
pub mod bitrate;
pub mod detect;
mod error;
pub mod gaze;
pub mod image;
mod math;
pub mod resample;
pub mod synth;

pub use acuity::{AcuityCurve, Reach, RenderSchedule, SchedulerParams, StepSchedule, STEP_CUTOFFS_CPD, STEP_HOLDS_MS};
pub use bitrate::{DisplaySpec, Distribution, SavingsGrid, SimConfig};
pub use detect::{
    MainSequenceFit, OfflineConfig, OnlineConfig, OnlineDetector, OnlineEvent, OnlineState, SpreadEstimator,
};
pub use error::Error;
pub use gaze::{GazeSample, GazeTrace, SaccadeEvent};
pub use image::ImageBuffer;
pub use synth::{SaccadeProfile, SynthConfig, SynthOutput, Waveform};

pub type Result<T, E = Error> = core::result::Result<T, E>;
