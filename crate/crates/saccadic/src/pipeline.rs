//! End-to-end emulation: detect saccades in a recording, schedule render
//! resolution per display frame, render the frames, account for the bits.
//!
//! Each detected landing starts a fresh schedule `latency` ms later (plus
//! optional uniform jitter). A frame uses the most recent schedule that has
//! started; frames before the first one are native.

use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use saccadic_core::bitrate::frame_bit_fraction;
use saccadic_core::detect::detect_saccades_offline;
use saccadic_core::resample::gaussian_downsample_upsample_limited;
use saccadic_core::{AcuityCurve, DisplaySpec, GazeTrace, ImageBuffer, OfflineConfig, SaccadeEvent, SchedulerParams};
use serde::Serialize;

use crate::config::RunConfig;
use crate::fmt::to_json;
use crate::io::{encode_image, image_format_for};
use crate::output::Outputs;
use crate::Result;

/// Resolution of pipeline input images relative to the display.
pub const RENDER_SCALE: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSettings {
    pub display: DisplaySpec,
    pub scheduler: SchedulerParams,
    pub curve: AcuityCurve,
    pub latency_ms: f64,
    /// Extra delay drawn uniformly from `[0, latency_jitter_ms]` per landing.
    pub latency_jitter_ms: f64,
    pub seed: u64,
    pub detector: OfflineConfig,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        Self::from_config(&RunConfig::default())
    }
}

impl PipelineSettings {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            display: cfg.display,
            scheduler: cfg.scheduler(),
            curve: cfg.curve,
            latency_ms: cfg.latency_ms,
            latency_jitter_ms: cfg.latency_jitter_ms,
            seed: cfg.seed,
            detector: cfg.detector,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.display.validate()?;
        self.scheduler.validate()?;
        self.curve.validate()?;
        if (self.scheduler.native_ppd - self.display.ppd).abs() > 1e-9 {
            return Err(saccadic_core::Error::InvalidParameter {
                name: "scheduler.native_ppd",
                reason: "must match the display",
            }
            .into());
        }
        if !(self.latency_ms >= 0.0 && self.latency_jitter_ms >= 0.0) {
            return Err(saccadic_core::Error::InvalidParameter {
                name: "latency",
                reason: "latency and jitter must be non-negative",
            }
            .into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleStart {
    pub landing_ms: f64,
    pub start_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRecord {
    pub index: usize,
    pub t_ms: f64,
    /// Start of the schedule in effect, if any.
    pub schedule_start_ms: Option<f64>,
    pub since_start_ms: Option<f64>,
    pub cpd: f64,
    pub bit_fraction: f64,
    pub filtered: bool,
    pub file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub display: DisplaySpec,
    pub native_cpd: f64,
    pub latency_ms: f64,
    pub latency_jitter_ms: f64,
    pub seed: u64,
    pub schedule_starts: Vec<ScheduleStart>,
    pub frames: Vec<FrameRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavingsReport {
    pub saccades: usize,
    pub frames: usize,
    pub filtered_frames: usize,
    pub mean_bit_fraction: f64,
    pub savings: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelinePlan {
    pub events: Vec<SaccadeEvent>,
    pub manifest: Manifest,
    pub report: SavingsReport,
}

/// Schedules every frame of `trace` without rendering.
pub fn plan_pipeline(trace: &GazeTrace, settings: &PipelineSettings) -> Result<PipelinePlan> {
    settings.validate()?;
    let events = detect_saccades_offline(trace, &settings.detector);
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut starts: Vec<ScheduleStart> = events
        .iter()
        .map(|e| {
            let jitter = if settings.latency_jitter_ms > 0.0 {
                settings.latency_jitter_ms * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
            } else {
                0.0
            };
            ScheduleStart {
                landing_ms: e.offset,
                start_ms: e.offset + settings.latency_ms + jitter,
            }
        })
        .collect();
    starts.sort_by(|a, b| a.start_ms.total_cmp(&b.start_ms));

    let native = settings.scheduler.native_acuity;
    let samples = trace.samples();
    let (t0, t1) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => (0.0, 0.0),
    };
    let period = 1000.0 / settings.display.refresh_hz;
    let mut frames = Vec::new();
    let mut next: usize = 0;
    loop {
        let index = frames.len();
        let t = t0 + (index as f64 + 0.5) * period;
        if t >= t1 {
            break;
        }
        while next < starts.len() && starts[next].start_ms <= t {
            next += 1;
        }
        let (start, since, cpd) = match next.checked_sub(1) {
            Some(a) => {
                let since = t - starts[a].start_ms;
                let cpd = settings.scheduler.scheduled_cpd(since, &settings.curve)?;
                (Some(starts[a].start_ms), Some(since), cpd)
            }
            None => (None, None, native),
        };
        frames.push(FrameRecord {
            index,
            t_ms: t,
            schedule_start_ms: start,
            since_start_ms: since,
            cpd,
            bit_fraction: frame_bit_fraction(cpd, &settings.display)?,
            filtered: cpd < native,
            file: None,
        });
    }

    let mean = if frames.is_empty() {
        1.0
    } else {
        frames.iter().map(|f| f.bit_fraction).sum::<f64>() / frames.len() as f64
    };
    let report = SavingsReport {
        saccades: events.len(),
        frames: frames.len(),
        filtered_frames: frames.iter().filter(|f| f.filtered).count(),
        mean_bit_fraction: mean,
        savings: 1.0 - mean,
    };
    let manifest = Manifest {
        display: settings.display,
        native_cpd: native,
        latency_ms: settings.latency_ms,
        latency_jitter_ms: settings.latency_jitter_ms,
        seed: settings.seed,
        schedule_starts: starts,
        frames,
    };
    Ok(PipelinePlan {
        events,
        manifest,
        report,
    })
}

/// Renders one frame at the scheduled resolution. `img` is expected at
/// [`RENDER_SCALE`] times the display resolution; reduced frames are
/// emulated by rendering at `2 × cpd` pixels per degree.
pub fn render_frame(img: &ImageBuffer, frame: &FrameRecord, settings: &PipelineSettings) -> Result<ImageBuffer> {
    let target_ppd = 2.0 * frame.cpd;
    if !frame.filtered || target_ppd >= img.ppd() {
        return Ok(img.clone());
    }
    let max_factor = img.ppd() / (2.0 * settings.scheduler.floor_cpd());
    Ok(gaussian_downsample_upsample_limited(
        img,
        target_ppd,
        max_factor.max(1.0),
    )?)
}

/// Renders every frame into `dir` as `frame_NNNNN.png` and records the file
/// names in the manifest.
pub fn render_frames(
    img: &ImageBuffer,
    plan: &mut PipelinePlan,
    settings: &PipelineSettings,
    dir: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    let mut native_png: Option<Vec<u8>> = None;
    for frame in &mut plan.manifest.frames {
        let name = format!("frame_{:05}.png", frame.index);
        let path = dir.join(&name);
        let (format, rgb) = image_format_for(&path)?;
        let bytes = if frame.filtered {
            encode_image(&render_frame(img, frame, settings)?, format, rgb)?
        } else {
            if native_png.is_none() {
                native_png = Some(encode_image(img, format, rgb)?);
            }
            native_png.clone().expect("encoded above")
        };
        outputs.write(&path, bytes)?;
        frame.file = Some(name);
    }
    Ok(())
}

pub fn format_manifest(manifest: &Manifest) -> Result<String> {
    to_json(manifest)
}

pub fn format_report(report: &SavingsReport) -> Result<String> {
    to_json(report)
}
