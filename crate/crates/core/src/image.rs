//! Floating-point raster with angular resolution.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Interleaved (`y`, `x`, channel) intensities, nominally in `[0, 1]` and in
/// linear light. `ppd` converts cycles per degree to cycles per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
    ppd: f64,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>, ppd: f64) -> Result<Self> {
        if width == 0 || height == 0 || !(channels == 1 || channels == 3) {
            return Err(Error::InvalidParameter {
                name: "image",
                reason: "needs non-zero size and 1 or 3 channels",
            });
        }
        if data.len() != width * height * channels {
            return Err(Error::ImageShape {
                width,
                height,
                channels,
                len: data.len(),
            });
        }
        if !(ppd > 0.0) {
            return Err(Error::InvalidParameter {
                name: "ppd",
                reason: "must be positive",
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
            ppd,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64, ppd: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels], ppd)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        ppd: f64,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, data, ppd)
    }

    /// Builds an image from per-channel planes of `width * height` values.
    pub fn from_planes(width: usize, height: usize, planes: &[Vec<f64>], ppd: f64) -> Result<Self> {
        let channels = planes.len();
        let n = width * height;
        if let Some(bad) = planes.iter().find(|p| p.len() != n) {
            return Err(Error::ImageShape {
                width,
                height,
                channels: 1,
                len: bad.len(),
            });
        }
        let mut data = vec![0.0; n * channels];
        for (c, plane) in planes.iter().enumerate() {
            for (i, v) in plane.iter().enumerate() {
                data[i * channels + c] = *v;
            }
        }
        Self::new(width, height, channels, data, ppd)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn ppd(&self) -> f64 {
        self.ppd
    }

    pub fn nyquist_cpd(&self) -> f64 {
        self.ppd / 2.0
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    pub fn set(&mut self, x: usize, y: usize, c: usize, value: f64) {
        self.data[(y * self.width + x) * self.channels + c] = value;
    }

    /// One channel as a row-major plane.
    pub fn plane(&self, c: usize) -> Vec<f64> {
        self.data.iter().skip(c).step_by(self.channels).copied().collect()
    }

    pub fn planes(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|c| self.plane(c)).collect()
    }

    /// Mean over channels, as a plane.
    pub fn luminance(&self) -> Vec<f64> {
        let k = self.channels as f64;
        self.data
            .chunks_exact(self.channels)
            .map(|px| px.iter().sum::<f64>() / k)
            .collect()
    }

    pub fn with_ppd(mut self, ppd: f64) -> Self {
        self.ppd = ppd;
        self
    }

    pub fn clamp_unit(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
