//! Display bitrate model for saccade-contingent rendering.
//!
//! After every landing, frames are rendered at the resolution the acuity
//! curve allows (never above native) until `revert_after_ms`, then at native
//! resolution until the next landing. Savings are the fraction of native
//! bits that are not sent. Frames inside the saccade itself are not modelled.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution as _, StandardUniform};

use crate::{AcuityCurve, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DisplaySpec {
    pub ppd: f64,
    pub refresh_hz: f64,
    pub bits_per_pixel: u32,
    pub width: u32,
    pub height: u32,
}

impl Default for DisplaySpec {
    fn default() -> Self {
        Self {
            ppd: 60.0,
            refresh_hz: 90.0,
            bits_per_pixel: 32,
            width: 3840,
            height: 2160,
        }
    }
}

impl DisplaySpec {
    pub fn with_ppd(mut self, ppd: f64) -> Self {
        self.ppd = ppd;
        self
    }

    pub fn nyquist_cpd(&self) -> f64 {
        self.ppd / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ppd > 0.0 && self.refresh_hz > 0.0) {
            return Err(Error::InvalidParameter {
                name: "display",
                reason: "ppd and refresh rate must be positive",
            });
        }
        if self.bits_per_pixel == 0 || self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter {
                name: "display",
                reason: "bit depth and pixel dimensions must be positive",
            });
        }
        Ok(())
    }

    fn frame_period_ms(&self) -> f64 {
        1000.0 / self.refresh_hz
    }
}

/// Fraction of native bits needed to render at `render_cpd`.
pub fn frame_bit_fraction(render_cpd: f64, display: &DisplaySpec) -> Result<f64> {
    if !(render_cpd > 0.0) {
        return Err(Error::InvalidParameter {
            name: "render_cpd",
            reason: "must be positive",
        });
    }
    Ok(fraction(render_cpd, display))
}

fn fraction(render_cpd: f64, display: &DisplaySpec) -> f64 {
    let scale = 2.0 * render_cpd / display.ppd;
    (scale * scale).min(1.0)
}

/// Same as [`frame_bit_fraction`] but with the reduced frame rounded to whole
/// pixels in each dimension.
pub fn quantized_bit_fraction(render_cpd: f64, display: &DisplaySpec) -> f64 {
    let scale = (2.0 * render_cpd / display.ppd).min(1.0);
    let w = libm::round(display.width as f64 * scale).max(1.0);
    let h = libm::round(display.height as f64 * scale).max(1.0);
    (w * h) / (display.width as f64 * display.height as f64)
}

/// How landings are placed in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Exactly `1 / saccade_freq` apart.
    Periodic,
    /// Intervals drawn uniformly from `(1 ± jitter) / saccade_freq`.
    RandomUniform { seed: u64, jitter: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub saccade_freq: f64,
    pub revert_after_ms: f64,
    pub curve: AcuityCurve,
    pub distribution: Distribution,
    /// Round reduced frames to integer pixel dimensions.
    pub quantize: bool,
    /// Simulated time for the random distribution (ms).
    pub span_ms: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            saccade_freq: 4.0,
            revert_after_ms: 333.0,
            curve: AcuityCurve::default(),
            distribution: Distribution::Periodic,
            quantize: false,
            span_ms: 60_000.0,
        }
    }
}

impl SimConfig {
    pub fn with_freq(mut self, saccade_freq: f64) -> Self {
        self.saccade_freq = saccade_freq;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.saccade_freq > 0.0) {
            return Err(Error::InvalidParameter {
                name: "saccade_freq",
                reason: "must be positive",
            });
        }
        if !(self.revert_after_ms >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "revert_after_ms",
                reason: "must be non-negative",
            });
        }
        if let Distribution::RandomUniform { jitter, .. } = self.distribution {
            if !(0.0..1.0).contains(&jitter) {
                return Err(Error::InvalidParameter {
                    name: "jitter",
                    reason: "must lie in [0, 1)",
                });
            }
        }
        self.curve.validate()
    }
}

/// Summed bit fraction and frame count over one inter-saccade interval.
fn interval_bits(interval_ms: f64, display: &DisplaySpec, sim: &SimConfig) -> (f64, usize) {
    let period = display.frame_period_ms();
    let native = display.nyquist_cpd();
    let mut total = 0.0;
    let mut frames = 0;
    loop {
        // Frame midpoints avoid sampling exactly at landing.
        let t = (frames as f64 + 0.5) * period;
        if t >= interval_ms {
            break;
        }
        let cpd = if t < sim.revert_after_ms {
            sim.curve.eval(t).min(native)
        } else {
            native
        };
        total += if sim.quantize {
            quantized_bit_fraction(cpd, display)
        } else {
            fraction(cpd, display)
        };
        frames += 1;
    }
    (total, frames)
}

/// Relative bitrate savings for one saccade frequency.
pub fn savings_for_rate(display: &DisplaySpec, sim: &SimConfig) -> Result<f64> {
    display.validate()?;
    sim.validate()?;
    let gap = 1000.0 / sim.saccade_freq;
    let (bits, frames) = match sim.distribution {
        Distribution::Periodic => interval_bits(gap, display, sim),
        Distribution::RandomUniform { seed, jitter } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut bits, mut frames) = (0.0, 0);
            let mut elapsed = 0.0;
            while elapsed < sim.span_ms {
                let u: f64 = StandardUniform.sample(&mut rng);
                let interval = gap * (1.0 - jitter + 2.0 * jitter * u);
                let (b, f) = interval_bits(interval, display, sim);
                bits += b;
                frames += f;
                elapsed += interval;
            }
            (bits, frames)
        }
    };
    if frames == 0 {
        return Ok(0.0);
    }
    Ok(1.0 - bits / frames as f64)
}

/// Savings over a ppd × frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SavingsGrid {
    pub ppds: Vec<f64>,
    pub freqs: Vec<f64>,
    /// `savings[row][col]` for `ppds[row]`, `freqs[col]`.
    pub savings: Vec<Vec<f64>>,
}

impl SavingsGrid {
    pub fn get(&self, ppd: f64, freq: f64) -> Option<f64> {
        let r = self.ppds.iter().position(|&p| p == ppd)?;
        let c = self.freqs.iter().position(|&f| f == freq)?;
        Some(self.savings[r][c])
    }
}

/// Integer steps from `lo` to `hi` inclusive.
pub fn inclusive_steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = libm::floor((hi - lo) / step + 1e-9) as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Evaluates [`savings_for_rate`] for every (ppd, frequency) pair, reusing
/// the rest of `display` and `sim`.
pub fn sweep(ppds: &[f64], freqs: &[f64], display: &DisplaySpec, sim: &SimConfig) -> Result<SavingsGrid> {
    if ppds.is_empty() || freqs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sweep range",
            reason: "must be non-empty",
        });
    }
    let mut savings = Vec::with_capacity(ppds.len());
    for &ppd in ppds {
        let d = display.with_ppd(ppd);
        let row = freqs
            .iter()
            .map(|&f| savings_for_rate(&d, &sim.with_freq(f)))
            .collect::<Result<Vec<_>>>()?;
        savings.push(row);
    }
    Ok(SavingsGrid {
        ppds: ppds.to_vec(),
        freqs: freqs.to_vec(),
        savings,
    })
}
