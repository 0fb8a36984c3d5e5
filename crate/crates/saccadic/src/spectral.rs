//! Fourier-domain lowpass filtering and radial power spectra.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use saccadic_core::ImageBuffer;

use crate::{Error, Result};

/// Default Butterworth order.
pub const DEFAULT_ORDER: u32 = 5;

/// Suggested stimulus resolution for the step-schedule experiments
/// (2160 px over 33.1 deg). An approximation.
pub const DEFAULT_STIMULUS_PPD: f64 = 65.3;

/// How the image is extended past its edges before transforming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Plain transform, the image tiles the plane.
    #[default]
    Periodic,
    /// Mirror-pad to twice the size, filter, crop.
    Mirror,
}

/// Separable 2-D FFT over a row-major `width × height` buffer.
pub struct Fft2 {
    width: usize,
    height: usize,
    rows: Arc<dyn Fft<f64>>,
    cols: Arc<dyn Fft<f64>>,
    rows_inv: Arc<dyn Fft<f64>>,
    cols_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            rows: planner.plan_fft_forward(width),
            cols: planner.plan_fft_forward(height),
            rows_inv: planner.plan_fft_inverse(width),
            cols_inv: planner.plan_fft_inverse(height),
        }
    }

    fn run(&self, buf: &mut [Complex64], rows: &dyn Fft<f64>, cols: &dyn Fft<f64>) {
        let (w, h) = (self.width, self.height);
        rows.process(buf);
        let mut col = vec![Complex64::default(); h];
        for x in 0..w {
            for y in 0..h {
                col[y] = buf[y * w + x];
            }
            cols.process(&mut col);
            for y in 0..h {
                buf[y * w + x] = col[y];
            }
        }
    }

    /// Unnormalised forward transform in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, self.rows.as_ref(), self.cols.as_ref());
    }

    /// Inverse transform in place, scaled so `inverse(forward(x)) == x`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, self.rows_inv.as_ref(), self.cols_inv.as_ref());
        let scale = 1.0 / (self.width * self.height) as f64;
        for v in buf {
            *v *= scale;
        }
    }
}

/// Signed frequency of DFT bin `k` of `n`, in cycles per sample.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    let k = k as f64;
    let n_f = n as f64;
    if k <= n_f / 2.0 {
        k / n_f
    } else {
        (k - n_f) / n_f
    }
}

/// Butterworth magnitude response.
pub fn butterworth_gain(f: f64, cutoff: f64, order: u32) -> f64 {
    1.0 / (1.0 + (f / cutoff).powi(2 * order as i32)).sqrt()
}

fn mirror_pad(plane: &[f64], w: usize, h: usize) -> Vec<f64> {
    let (pw, ph) = (2 * w, 2 * h);
    let mut out = Vec::with_capacity(pw * ph);
    for y in 0..ph {
        let sy = if y < h { y } else { ph - 1 - y };
        for x in 0..pw {
            let sx = if x < w { x } else { pw - 1 - x };
            out.push(plane[sy * w + sx]);
        }
    }
    out
}

/// Applies `gain(f_cpd)` to one plane in the Fourier domain.
fn filter_plane(plane: &[f64], fft: &Fft2, gain: &[f64]) -> Vec<f64> {
    let mut buf: Vec<Complex64> = plane.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.forward(&mut buf);
    for (v, g) in buf.iter_mut().zip(gain) {
        *v *= *g;
    }
    fft.inverse(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

fn gain_table(w: usize, h: usize, ppd: f64, cutoff: f64, order: u32) -> Vec<f64> {
    let fx: Vec<f64> = (0..w).map(|k| bin_frequency(k, w)).collect();
    let mut out = Vec::with_capacity(w * h);
    for ky in 0..h {
        let fy = bin_frequency(ky, h);
        for &fx in &fx {
            let f_cpd = (fx * fx + fy * fy).sqrt() * ppd;
            out.push(butterworth_gain(f_cpd, cutoff, order));
        }
    }
    out
}

/// Butterworth lowpass, periodic boundary, output clamped to `[0, 1]`.
pub fn butterworth_lowpass(img: &ImageBuffer, cutoff_cpd: f64, order: u32) -> Result<ImageBuffer> {
    butterworth_lowpass_with(img, cutoff_cpd, order, Boundary::Periodic)
}

/// Butterworth lowpass with a chosen boundary mode.
pub fn butterworth_lowpass_with(
    img: &ImageBuffer,
    cutoff_cpd: f64,
    order: u32,
    boundary: Boundary,
) -> Result<ImageBuffer> {
    let mut out = butterworth_unclamped(img, cutoff_cpd, order, boundary)?;
    out.clamp_unit();
    Ok(out)
}

/// The filter without the final clamp. Useful for energy accounting.
pub fn butterworth_unclamped(
    img: &ImageBuffer,
    cutoff_cpd: f64,
    order: u32,
    boundary: Boundary,
) -> Result<ImageBuffer> {
    if order < 1 {
        return Err(saccadic_core::Error::InvalidParameter {
            name: "order",
            reason: "must be at least 1",
        }
        .into());
    }
    if !(cutoff_cpd > 0.0) {
        return Err(saccadic_core::Error::InvalidParameter {
            name: "cutoff_cpd",
            reason: "must be positive",
        }
        .into());
    }
    if cutoff_cpd > img.nyquist_cpd() {
        return Err(saccadic_core::Error::AboveNyquist {
            cutoff_cpd,
            nyquist_cpd: img.nyquist_cpd(),
        }
        .into());
    }
    let (w, h) = (img.width(), img.height());
    let (fw, fh) = match boundary {
        Boundary::Periodic => (w, h),
        Boundary::Mirror => (2 * w, 2 * h),
    };
    let fft = Fft2::new(fw, fh);
    let gain = gain_table(fw, fh, img.ppd(), cutoff_cpd, order);
    let planes: Vec<Vec<f64>> = img
        .planes()
        .iter()
        .map(|p| match boundary {
            Boundary::Periodic => filter_plane(p, &fft, &gain),
            Boundary::Mirror => {
                let padded = mirror_pad(p, w, h);
                let f = filter_plane(&padded, &fft, &gain);
                (0..h).flat_map(|y| f[y * fw..y * fw + w].to_vec()).collect()
            }
        })
        .collect();
    Ok(ImageBuffer::from_planes(w, h, &planes, img.ppd())?)
}

/// Rectangular analysis window in degrees, origin at the top-left corner
/// of the image, y pointing down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub center_deg: (f64, f64),
    pub size_deg: (f64, f64),
}

impl Region {
    /// A square window, e.g. 5 × 5 deg around a saccade target.
    pub fn square(center_deg: (f64, f64), side_deg: f64) -> Self {
        Self {
            center_deg,
            size_deg: (side_deg, side_deg),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    /// Bin centres in cpd, strictly increasing.
    pub freqs_cpd: Vec<f64>,
    /// Mean power per bin.
    pub power: Vec<f64>,
    /// Slope of log power against log frequency over the fit band.
    pub slope: f64,
    /// Bins used for the fit, as an index range into `freqs_cpd`.
    pub fit_bins: std::ops::Range<usize>,
}

impl RadialSpectrum {
    /// Index of the bin with the most power.
    pub fn peak_bin(&self) -> usize {
        self.power
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |(bi, bp), (i, &p)| if p > bp { (i, p) } else { (bi, bp) },
            )
            .0
    }
}

fn crop(img: &ImageBuffer, region: Option<Region>) -> Result<(Vec<f64>, usize, usize)> {
    let lum = img.luminance();
    let (w, h) = (img.width(), img.height());
    let Some(r) = region else {
        return Ok((lum, w, h));
    };
    let ppd = img.ppd();
    let rw = (r.size_deg.0 * ppd).round() as isize;
    let rh = (r.size_deg.1 * ppd).round() as isize;
    let x0 = (r.center_deg.0 * ppd - rw as f64 / 2.0).round() as isize;
    let y0 = (r.center_deg.1 * ppd - rh as f64 / 2.0).round() as isize;
    if rw < 32 || rh < 32 {
        return Err(Error::RegionTooSmall {
            width: rw.max(0) as usize,
            height: rh.max(0) as usize,
        });
    }
    if x0 < 0 || y0 < 0 || x0 + rw > w as isize || y0 + rh > h as isize {
        return Err(Error::RegionOutOfBounds);
    }
    let (x0, y0, rw, rh) = (x0 as usize, y0 as usize, rw as usize, rh as usize);
    let out = (y0..y0 + rh)
        .flat_map(|y| lum[y * w + x0..y * w + x0 + rw].to_vec())
        .collect();
    Ok((out, rw, rh))
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

/// Ordinary least-squares slope of `y` on `x`.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Radially averaged power spectrum of the image luminance.
///
/// The region is mean-subtracted and Hann-windowed. Bins are one
/// fundamental (`1 / min(w, h)` cycles per pixel) wide, up to Nyquist. The
/// slope is fitted between 1/16 and 3/8 of the sampling rate, which stays
/// clear of the window's main lobe and the corner roll-off.
pub fn radial_power_spectrum(img: &ImageBuffer, region: Option<Region>) -> Result<RadialSpectrum> {
    let (plane, w, h) = crop(img, region)?;
    if w < 32 || h < 32 {
        return Err(Error::RegionTooSmall { width: w, height: h });
    }
    let mean = plane.iter().sum::<f64>() / plane.len() as f64;
    let (wx, wy) = (hann(w), hann(h));
    let mut buf: Vec<Complex64> = plane
        .iter()
        .enumerate()
        .map(|(i, &v)| Complex64::new((v - mean) * wx[i % w] * wy[i / w], 0.0))
        .collect();
    let norm: f64 = wx.iter().map(|a| a * a).sum::<f64>() * wy.iter().map(|a| a * a).sum::<f64>();
    Fft2::new(w, h).forward(&mut buf);

    let m = w.min(h);
    let nbins = m / 2;
    let mut sum = vec![0.0; nbins + 1];
    let mut count = vec![0usize; nbins + 1];
    for ky in 0..h {
        let fy = bin_frequency(ky, h);
        for kx in 0..w {
            let fx = bin_frequency(kx, w);
            let b = ((fx * fx + fy * fy).sqrt() * m as f64).round() as usize;
            if b == 0 || b > nbins {
                continue;
            }
            sum[b] += buf[ky * w + kx].norm_sqr() / norm;
            count[b] += 1;
        }
    }
    let mut freqs_cpd = Vec::new();
    let mut power = Vec::new();
    let mut index = Vec::new();
    for b in 1..=nbins {
        if count[b] > 0 {
            freqs_cpd.push(b as f64 / m as f64 * img.ppd());
            power.push(sum[b] / count[b] as f64);
            index.push(b);
        }
    }
    let lo_b = (m / 16).max(2);
    let hi_b = 3 * m / 8;
    let start = index.iter().position(|&b| b >= lo_b).unwrap_or(0);
    let end = index.iter().rposition(|&b| b <= hi_b).map_or(index.len(), |i| i + 1);
    let (lx, ly): (Vec<f64>, Vec<f64>) = (start..end)
        .filter(|&i| power[i] > 0.0)
        .map(|i| (freqs_cpd[i].ln(), power[i].ln()))
        .unzip();
    let slope = if lx.len() >= 2 { ls_slope(&lx, &ly) } else { 0.0 };
    Ok(RadialSpectrum {
        freqs_cpd,
        power,
        slope,
        fit_bins: start..end,
    })
}

/// Total spectral power of a plane (Parseval, per pixel).
pub fn plane_power(plane: &[f64]) -> f64 {
    plane.iter().map(|v| v * v).sum::<f64>() / plane.len() as f64
}
