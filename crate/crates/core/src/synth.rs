//! Synthetic gaze traces with known saccades.
//!
//! Fixational drift is a Gaussian random walk. Saccades follow a position
//! waveform whose duration grows linearly with amplitude, and are spaced
//! `1 / saccade_rate` apart with uniform jitter.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Normal, StandardUniform};

use crate::{Error, GazeSample, GazeTrace, Result, SaccadeEvent};

/// Normalised saccade position profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Waveform {
    /// `10u^3 - 15u^4 + 6u^5`
    #[default]
    MinimumJerk,
    /// `(1 - cos(pi u)) / 2`
    RaisedCosine,
}

impl Waveform {
    /// Displacement fraction at normalised time `u`, clamped to `[0, 1]`.
    pub fn displacement(self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            Waveform::MinimumJerk => u * u * u * (10.0 + u * (-15.0 + 6.0 * u)),
            Waveform::RaisedCosine => 0.5 * (1.0 - libm::cos(core::f64::consts::PI * u)),
        }
    }

    /// Peak velocity divided by mean velocity (amplitude / duration).
    pub fn peak_velocity_factor(self) -> f64 {
        match self {
            Waveform::MinimumJerk => 1.875,
            Waveform::RaisedCosine => core::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaccadeProfile {
    /// deg
    pub amplitude: f64,
    pub duration_ms: f64,
    /// Degrees counter-clockwise from +x.
    pub direction: f64,
    pub waveform: Waveform,
}

impl SaccadeProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                reason: "must be non-negative",
            });
        }
        if !(self.duration_ms > 0.0 && self.duration_ms < 100.0) {
            return Err(Error::InvalidParameter {
                name: "duration_ms",
                reason: "must lie in (0, 100) ms",
            });
        }
        Ok(())
    }

    /// Analytic peak velocity in deg/s.
    pub fn peak_velocity(&self) -> f64 {
        self.waveform.peak_velocity_factor() * self.amplitude / (self.duration_ms / 1000.0)
    }
}

/// Displacement fraction of `profile` at normalised time `t_frac`.
pub fn saccade_waveform(profile: &SaccadeProfile, t_frac: f64) -> f64 {
    profile.waveform.displacement(t_frac)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub duration_ms: f64,
    pub sample_rate: f64,
    /// Saccades per second; zero gives a pure drift trace.
    pub saccade_rate: f64,
    /// Amplitudes are drawn uniformly from this closed range (deg).
    pub amplitude_range: (f64, f64),
    /// Per-axis random-walk step (deg per sample).
    pub drift_sigma: f64,
    pub seed: u64,
    /// Duration at zero amplitude (ms).
    pub duration_base_ms: f64,
    /// Added duration per degree of amplitude (ms/deg).
    pub duration_slope_ms: f64,
    /// Inter-saccade intervals are `(1 ± jitter) / saccade_rate`.
    pub jitter: f64,
    pub waveform: Waveform,
    /// No saccade starts before this many ms, or ends within it of the end.
    pub edge_margin_ms: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            duration_ms: 10_000.0,
            sample_rate: 1000.0,
            saccade_rate: 4.0,
            amplitude_range: (4.0, 15.0),
            drift_sigma: 0.05,
            seed: 0,
            duration_base_ms: 16.0,
            duration_slope_ms: 2.0,
            jitter: 0.2,
            waveform: Waveform::MinimumJerk,
            edge_margin_ms: 50.0,
        }
    }
}

impl SynthConfig {
    pub fn saccade_duration_ms(&self, amplitude: f64) -> f64 {
        self.duration_base_ms + self.duration_slope_ms * amplitude
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0) {
            return Err(Error::InfeasibleConfig("sample_rate must be positive"));
        }
        if !(self.duration_ms > 0.0) {
            return Err(Error::InfeasibleConfig("duration must be positive"));
        }
        if !(self.saccade_rate >= 0.0) {
            return Err(Error::InfeasibleConfig("saccade_rate must be non-negative"));
        }
        let (lo, hi) = self.amplitude_range;
        if !(lo >= 0.0 && hi >= lo) {
            return Err(Error::InfeasibleConfig("amplitude range must satisfy 0 <= min <= max"));
        }
        if !(self.drift_sigma >= 0.0) {
            return Err(Error::InfeasibleConfig("drift_sigma must be non-negative"));
        }
        if !(0.0..1.0).contains(&self.jitter) {
            return Err(Error::InfeasibleConfig("jitter must lie in [0, 1)"));
        }
        let max_dur = self.saccade_duration_ms(hi);
        if !(max_dur > 0.0 && max_dur < 100.0) {
            return Err(Error::InfeasibleConfig("saccade durations must lie in (0, 100) ms"));
        }
        if self.saccade_rate * max_dur / 1000.0 >= 1.0 {
            return Err(Error::InfeasibleConfig(
                "saccades at this rate and amplitude cannot fit between landings",
            ));
        }
        Ok(())
    }
}

pub struct SynthOutput {
    pub trace: GazeTrace,
    /// Injected saccades in time order.
    pub truth: Vec<SaccadeEvent>,
}

struct Planned {
    onset: f64,
    profile: SaccadeProfile,
}

/// Generates a trace and the exact saccades injected into it.
/// Identical configs give bit-identical output.
pub fn generate_trace(config: &SynthConfig) -> Result<SynthOutput> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let unit = |rng: &mut ChaCha8Rng| -> f64 { StandardUniform.sample(rng) };

    let mut plan: Vec<Planned> = Vec::new();
    if config.saccade_rate > 0.0 {
        let gap = 1000.0 / config.saccade_rate;
        let j = config.jitter;
        let (amin, amax) = config.amplitude_range;
        let mut onset = config
            .edge_margin_ms
            .max(0.5 * gap * (1.0 - j + 2.0 * j * unit(&mut rng)));
        loop {
            let amplitude = amin + (amax - amin) * unit(&mut rng);
            let direction = 360.0 * unit(&mut rng);
            let duration_ms = config.saccade_duration_ms(amplitude);
            if onset + duration_ms > config.duration_ms - config.edge_margin_ms {
                break;
            }
            plan.push(Planned {
                onset,
                profile: SaccadeProfile {
                    amplitude,
                    duration_ms,
                    direction,
                    waveform: config.waveform,
                },
            });
            let next = onset + gap * (1.0 - j + 2.0 * j * unit(&mut rng));
            onset = next.max(onset + duration_ms + config.edge_margin_ms.min(0.5 * gap));
        }
    }

    let drift =
        Normal::new(0.0, config.drift_sigma).map_err(|_| Error::InfeasibleConfig("drift_sigma must be finite"))?;
    let n = libm::floor(config.duration_ms * config.sample_rate / 1000.0) as usize;
    let mut samples = Vec::with_capacity(n);
    let (mut dx, mut dy) = (0.0, 0.0);
    let (mut base_x, mut base_y) = (0.0, 0.0);
    let mut next = 0;
    for i in 0..n {
        let t = i as f64 * 1000.0 / config.sample_rate;
        if i > 0 {
            dx += drift.sample(&mut rng);
            dy += drift.sample(&mut rng);
        }
        // Fold in saccades that have completed.
        while next < plan.len() && t >= plan[next].onset + plan[next].profile.duration_ms {
            let p = &plan[next].profile;
            let (s, c) = libm::sincos(p.direction.to_radians());
            base_x += p.amplitude * c;
            base_y += p.amplitude * s;
            next += 1;
        }
        let (mut sx, mut sy) = (base_x, base_y);
        if let Some(active) = plan.get(next) {
            if t > active.onset {
                let p = &active.profile;
                let frac = p.waveform.displacement((t - active.onset) / p.duration_ms);
                let (s, c) = libm::sincos(p.direction.to_radians());
                sx += frac * p.amplitude * c;
                sy += frac * p.amplitude * s;
            }
        }
        samples.push(GazeSample::new(t, sx + dx, sy + dy));
    }

    let truth = plan
        .iter()
        .map(|p| SaccadeEvent {
            onset: p.onset,
            offset: p.onset + p.profile.duration_ms,
            amplitude: p.profile.amplitude,
            peak_velocity: p.profile.peak_velocity(),
            direction: p.profile.direction,
        })
        .collect();
    Ok(SynthOutput {
        trace: GazeTrace::new(samples, config.sample_rate)?,
        truth,
    })
}
