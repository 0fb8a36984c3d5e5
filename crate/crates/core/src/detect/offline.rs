//! Velocity-threshold saccade detection over a whole recording.
//!
//! Eye velocity is taken by central differences, averaged over a boxcar of
//! `window` samples, and reduced to a speed. A sample is saccadic when its
//! speed exceeds `median + sd_multiplier * spread`, both statistics computed
//! per continuous segment of the trace. Runs shorter than `min_duration_ms`
//! are dropped after runs closer than `merge_gap_ms` have been merged. The
//! threshold never drops below `min_threshold_dps`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::math::{hypot, median};
use crate::{Error, GazeTrace, Result, SaccadeEvent};

/// How the velocity spread is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpreadEstimator {
    /// Median absolute deviation scaled by 1.4826 (SD under normality).
    #[default]
    Mad,
    /// Plain sample standard deviation.
    StdDev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfflineConfig {
    /// Boxcar length in samples.
    pub window: usize,
    pub sd_multiplier: f64,
    pub min_duration_ms: f64,
    /// Runs whose gap is shorter than this are merged.
    pub merge_gap_ms: f64,
    /// Invalid stretches up to this long are interpolated; longer ones split
    /// the trace into independent segments.
    pub max_gap_ms: f64,
    pub spread: SpreadEstimator,
    /// Lower bound on the speed threshold (deg/s). Keeps slow drift from
    /// registering in recordings with no saccades at all.
    pub min_threshold_dps: f64,
}

impl Default for OfflineConfig {
    fn default() -> Self {
        Self {
            window: 20,
            sd_multiplier: 3.0,
            min_duration_ms: 20.0,
            merge_gap_ms: 20.0,
            max_gap_ms: 40.0,
            spread: SpreadEstimator::Mad,
            min_threshold_dps: 60.0,
        }
    }
}

/// Gap-filled positions plus the index ranges of continuous segments.
struct Prepared {
    t: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    segments: Vec<Range<usize>>,
}

fn prepare(trace: &GazeTrace, max_gap_ms: f64) -> Prepared {
    let s = trace.samples();
    let n = s.len();
    let t: Vec<f64> = s.iter().map(|g| g.t).collect();
    let mut x: Vec<f64> = s.iter().map(|g| g.x).collect();
    let mut y: Vec<f64> = s.iter().map(|g| g.y).collect();
    let mut segments = Vec::new();
    let mut seg_start: Option<usize> = None;
    let mut last_valid: Option<usize> = None;

    let mut i = 0;
    while i < n {
        if s[i].valid {
            if seg_start.is_none() {
                seg_start = Some(i);
            }
            last_valid = Some(i);
            i += 1;
            continue;
        }
        let gap_start = i;
        while i < n && !s[i].valid {
            i += 1;
        }
        match (last_valid, i < n) {
            (Some(before), true) if t[i] - t[before] <= max_gap_ms => {
                let span = t[i] - t[before];
                for k in gap_start..i {
                    let w = (t[k] - t[before]) / span;
                    x[k] = x[before] + w * (x[i] - x[before]);
                    y[k] = y[before] + w * (y[i] - y[before]);
                }
            }
            _ => {
                if let (Some(start), Some(end)) = (seg_start.take(), last_valid) {
                    segments.push(start..end + 1);
                }
                last_valid = None;
            }
        }
    }
    if let (Some(start), Some(end)) = (seg_start, last_valid) {
        segments.push(start..end + 1);
    }
    Prepared { t, x, y, segments }
}

/// Boxcar-smoothed central-difference speed (deg/s) over one segment.
/// Entries whose window reaches past the segment are `None`.
fn segment_velocity(p: &Prepared, seg: Range<usize>, window: usize, out: &mut [Option<f64>]) {
    let len = seg.len();
    if len < window + 2 || window == 0 {
        return;
    }
    let base = seg.start;
    // Central differences at segment-local 1..len-1; index 0 and len-1 unused.
    let mut vx = vec![0.0; len];
    let mut vy = vec![0.0; len];
    for k in 1..len - 1 {
        let (a, b) = (base + k - 1, base + k + 1);
        let dt = (p.t[b] - p.t[a]) / 1000.0;
        vx[k] = (p.x[b] - p.x[a]) / dt;
        vy[k] = (p.y[b] - p.y[a]) / dt;
    }
    let mut cx = vec![0.0; len + 1];
    let mut cy = vec![0.0; len + 1];
    for k in 0..len {
        cx[k + 1] = cx[k] + vx[k];
        cy[k + 1] = cy[k] + vy[k];
    }
    let half = window / 2;
    let w = window as f64;
    for k in half + 1..len {
        let lo = k - half;
        let hi = lo + window;
        if hi > len - 1 {
            break;
        }
        let mx = (cx[hi] - cx[lo]) / w;
        let my = (cy[hi] - cy[lo]) / w;
        out[base + k] = Some(hypot(mx, my));
    }
}

fn velocity_with(trace: &GazeTrace, cfg: &OfflineConfig) -> Result<(Prepared, Vec<Option<f64>>)> {
    if cfg.window == 0 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "must be at least one sample",
        });
    }
    if trace.len() <= cfg.window {
        return Err(Error::TraceTooShort {
            len: trace.len(),
            window: cfg.window,
        });
    }
    let p = prepare(trace, cfg.max_gap_ms);
    let mut out = vec![None; trace.len()];
    for seg in p.segments.clone() {
        segment_velocity(&p, seg, cfg.window, &mut out);
    }
    Ok((p, out))
}

/// Per-sample smoothed eye speed in deg/s. Samples whose smoothing window
/// does not fit inside a continuous segment are `None`.
pub fn smoothed_velocity(trace: &GazeTrace, window: usize) -> Result<Vec<Option<f64>>> {
    let cfg = OfflineConfig {
        window,
        ..OfflineConfig::default()
    };
    velocity_with(trace, &cfg).map(|(_, v)| v)
}

fn spread(values: &mut [f64], center: f64, estimator: SpreadEstimator) -> f64 {
    match estimator {
        SpreadEstimator::Mad => {
            let mut dev: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
            1.4826 * median(&mut dev)
        }
        SpreadEstimator::StdDev => {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            libm::sqrt(var)
        }
    }
}

/// Detects saccades in a complete trace. Degenerate traces yield no events.
pub fn detect_saccades_offline(trace: &GazeTrace, cfg: &OfflineConfig) -> Vec<SaccadeEvent> {
    let Ok((p, vel)) = velocity_with(trace, cfg) else {
        return Vec::new();
    };
    let mut events = Vec::new();
    for seg in &p.segments {
        let mut defined: Vec<f64> = vel[seg.clone()].iter().flatten().copied().collect();
        if defined.is_empty() {
            continue;
        }
        let center = median(&mut defined);
        let threshold =
            (center + cfg.sd_multiplier * spread(&mut defined, center, cfg.spread)).max(cfg.min_threshold_dps);

        // Above-threshold runs as inclusive index pairs.
        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut open: Option<usize> = None;
        for i in seg.clone() {
            let above = matches!(vel[i], Some(v) if v > threshold);
            match (above, open) {
                (true, None) => open = Some(i),
                (false, Some(start)) => {
                    runs.push((start, i - 1));
                    open = None;
                }
                _ => {}
            }
        }
        if let Some(start) = open {
            runs.push((start, seg.end - 1));
        }

        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
        for run in runs {
            match merged.last_mut() {
                Some(prev) if p.t[run.0] - p.t[prev.1] < cfg.merge_gap_ms => prev.1 = run.1,
                _ => merged.push(run),
            }
        }

        for (a, b) in merged {
            if p.t[b] - p.t[a] < cfg.min_duration_ms {
                continue;
            }
            let dx = p.x[b] - p.x[a];
            let dy = p.y[b] - p.y[a];
            let peak = vel[a..=b].iter().flatten().copied().fold(0.0, f64::max);
            let mut direction = libm::atan2(dy, dx).to_degrees();
            if direction < 0.0 {
                direction += 360.0;
            }
            events.push(SaccadeEvent {
                onset: p.t[a],
                offset: p.t[b],
                amplitude: hypot(dx, dy),
                peak_velocity: peak,
                direction,
            });
        }
    }
    events
}
