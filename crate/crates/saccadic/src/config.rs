//! Plain-text `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are errors. Command-line flags override values read here.

use std::path::{Path, PathBuf};

use saccadic_core::{AcuityCurve, DisplaySpec, OfflineConfig, SchedulerParams, SpreadEstimator};

use crate::spectral::DEFAULT_ORDER;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub curve: AcuityCurve,
    pub acuity_offset: f64,
    pub ramp_end_ms: f64,
    pub max_downsample_factor: f64,
    pub display: DisplaySpec,
    pub revert_after_ms: f64,
    pub latency_ms: f64,
    pub latency_jitter_ms: f64,
    /// Pixels per degree of pipeline input images; 1.5 × display when unset.
    pub image_ppd: Option<f64>,
    pub detector: OfflineConfig,
    pub butterworth_order: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out_dir: None,
            curve: AcuityCurve::default(),
            acuity_offset: 0.0,
            ramp_end_ms: 500.0,
            max_downsample_factor: 8.0,
            display: DisplaySpec::default(),
            revert_after_ms: 333.0,
            latency_ms: 0.0,
            latency_jitter_ms: 0.0,
            image_ppd: None,
            detector: OfflineConfig::default(),
            butterworth_order: DEFAULT_ORDER,
        }
    }
}

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "seed",
    "out_dir",
    "curve.coefficient",
    "curve.exponent",
    "curve.offset",
    "scheduler.acuity_offset",
    "scheduler.ramp_end_ms",
    "scheduler.max_downsample_factor",
    "display.ppd",
    "display.refresh_hz",
    "display.bits_per_pixel",
    "display.width",
    "display.height",
    "bitrate.revert_after_ms",
    "pipeline.latency_ms",
    "pipeline.latency_jitter_ms",
    "pipeline.image_ppd",
    "detector.window",
    "detector.sd_multiplier",
    "detector.min_duration_ms",
    "detector.merge_gap_ms",
    "detector.max_gap_ms",
    "detector.min_threshold_dps",
    "detector.spread",
    "filter.order",
];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text; `origin` labels error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Config {
                path: origin.to_string(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err("expected key = value".into()))?;
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(format!("unknown key '{key}'")));
            };
            if seen.contains(&known) {
                return Err(err(format!("key '{key}' given twice")));
            }
            seen.push(known);
            cfg.set(known, value).map_err(err)?;
        }
        cfg.validate().map_err(|e| Error::Config {
            path: origin.to_string(),
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("cannot parse '{v}' as a number"))
        }
        match key {
            "seed" => self.seed = num(value)?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "curve.coefficient" => self.curve.coefficient = num(value)?,
            "curve.exponent" => self.curve.exponent = num(value)?,
            "curve.offset" => self.curve.offset = num(value)?,
            "scheduler.acuity_offset" => self.acuity_offset = num(value)?,
            "scheduler.ramp_end_ms" => self.ramp_end_ms = num(value)?,
            "scheduler.max_downsample_factor" => self.max_downsample_factor = num(value)?,
            "display.ppd" => self.display.ppd = num(value)?,
            "display.refresh_hz" => self.display.refresh_hz = num(value)?,
            "display.bits_per_pixel" => self.display.bits_per_pixel = num(value)?,
            "display.width" => self.display.width = num(value)?,
            "display.height" => self.display.height = num(value)?,
            "bitrate.revert_after_ms" => self.revert_after_ms = num(value)?,
            "pipeline.latency_ms" => self.latency_ms = num(value)?,
            "pipeline.latency_jitter_ms" => self.latency_jitter_ms = num(value)?,
            "pipeline.image_ppd" => self.image_ppd = Some(num(value)?),
            "detector.window" => self.detector.window = num(value)?,
            "detector.sd_multiplier" => self.detector.sd_multiplier = num(value)?,
            "detector.min_duration_ms" => self.detector.min_duration_ms = num(value)?,
            "detector.merge_gap_ms" => self.detector.merge_gap_ms = num(value)?,
            "detector.max_gap_ms" => self.detector.max_gap_ms = num(value)?,
            "detector.min_threshold_dps" => self.detector.min_threshold_dps = num(value)?,
            "detector.spread" => {
                self.detector.spread = match value {
                    "mad" => SpreadEstimator::Mad,
                    "sd" => SpreadEstimator::StdDev,
                    _ => return Err(format!("spread must be 'mad' or 'sd', not '{value}'")),
                }
            }
            "filter.order" => self.butterworth_order = num(value)?,
            _ => unreachable!("key list and match arms out of sync: {key}"),
        }
        Ok(())
    }

    /// Scheduler parameters for the configured display.
    pub fn scheduler(&self) -> SchedulerParams {
        SchedulerParams {
            acuity_offset: self.acuity_offset,
            ramp_end_ms: self.ramp_end_ms,
            max_downsample_factor: self.max_downsample_factor,
            ..SchedulerParams::for_display(self.display.ppd)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.curve.validate()?;
        self.display.validate()?;
        self.scheduler().validate()?;
        let bad = |name, reason| -> Result<()> { Err(saccadic_core::Error::InvalidParameter { name, reason }.into()) };
        if !(self.revert_after_ms >= 0.0) {
            return bad("revert_after_ms", "must be non-negative");
        }
        if !(self.latency_ms >= 0.0 && self.latency_jitter_ms >= 0.0) {
            return bad("latency", "latency and jitter must be non-negative");
        }
        if matches!(self.image_ppd, Some(p) if !(p > 0.0)) {
            return bad("image_ppd", "must be positive");
        }
        if self.detector.window == 0 {
            return bad("detector.window", "must be at least one sample");
        }
        if self.butterworth_order == 0 {
            return bad("filter.order", "must be at least 1");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_when_empty() {
        assert_eq!(RunConfig::parse("# nothing\n\n", "t").unwrap(), RunConfig::default());
    }

    #[test]
    fn every_key_parses() {
        let text = "seed = 7\nout_dir = /tmp/x\ncurve.coefficient = 2\ncurve.exponent = 0.3\ncurve.offset = 9\n\
            scheduler.acuity_offset = -3\nscheduler.ramp_end_ms = 400\nscheduler.max_downsample_factor = 6\n\
            display.ppd = 70\ndisplay.refresh_hz = 120\ndisplay.bits_per_pixel = 24\ndisplay.width = 1920\n\
            display.height = 1080\nbitrate.revert_after_ms = 250\npipeline.latency_ms = 30\n\
            pipeline.latency_jitter_ms = 10\npipeline.image_ppd = 105\ndetector.window = 10\n\
            detector.sd_multiplier = 4\ndetector.min_duration_ms = 15\ndetector.merge_gap_ms = 10\n\
            detector.max_gap_ms = 30\ndetector.min_threshold_dps = 50\ndetector.spread = sd\nfilter.order = 3\n";
        let c = RunConfig::parse(text, "t").unwrap();
        assert_eq!(text.lines().count(), KEYS.len());
        assert_eq!(c.seed, 7);
        assert_eq!(c.display.ppd, 70.0);
        assert_eq!(c.scheduler().native_acuity, 35.0);
        assert_eq!(c.detector.spread, SpreadEstimator::StdDev);
        assert_eq!(c.butterworth_order, 3);
        assert_eq!(c.image_ppd, Some(105.0));
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let e = RunConfig::parse("seed = 1\ncolour = red\n", "f.cfg").unwrap_err();
        assert_eq!(e.to_string(), "f.cfg:2: unknown key 'colour'");
        assert!(RunConfig::parse("seed = 1\nseed = 2\n", "f").is_err());
        assert!(RunConfig::parse("seed 1\n", "f").is_err());
        assert!(RunConfig::parse("display.ppd = -4\n", "f").is_err());
        assert!(RunConfig::parse("seed = x\n", "f").is_err());
    }
}
