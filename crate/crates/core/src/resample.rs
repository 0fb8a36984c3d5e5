//! Reduced-resolution rendering emulation: Gaussian anti-aliasing prefilter,
//! resample to the target pixel grid, bilinear upsample back.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, ImageBuffer, Result};

/// Default downsample limit relative to the source resolution.
pub const MAX_DOWNSAMPLE_FACTOR: f64 = 8.0;

/// Normalised 1-D Gaussian taps for `sigma` (pixels), radius `ceil(3 sigma)`.
fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = libm::ceil(3.0 * sigma).max(1.0) as usize;
    let mut taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            libm::exp(-0.5 * d * d / (sigma * sigma))
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Index into `0..n` with mirror (reflect-101) borders.
fn reflect(v: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = v.rem_euclid(period);
    (if m < n as isize { m } else { period - m }) as usize
}

/// Separable Gaussian blur with mirrored borders.
pub fn gaussian_blur(plane: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    if !(sigma > 0.0) {
        return plane.to_vec();
    }
    let taps = gaussian_kernel(sigma);
    let r = (taps.len() / 2) as isize;

    let mut tmp = vec![0.0; plane.len()];
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in taps.iter().enumerate() {
                acc += w * row[reflect(x as isize + k as isize - r, width)];
            }
            tmp[y * width + x] = acc;
        }
    }
    let mut out = vec![0.0; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in taps.iter().enumerate() {
                acc += w * tmp[reflect(y as isize + k as isize - r, height) * width + x];
            }
            out[y * width + x] = acc;
        }
    }
    out
}

/// Bilinear resize with pixel-centre alignment and clamp-to-edge borders.
pub fn resize_bilinear(plane: &[f64], width: usize, height: usize, new_w: usize, new_h: usize) -> Vec<f64> {
    let sx = width as f64 / new_w as f64;
    let sy = height as f64 / new_h as f64;
    let mut out = Vec::with_capacity(new_w * new_h);
    for j in 0..new_h {
        let fy = ((j as f64 + 0.5) * sy - 0.5).clamp(0.0, (height - 1) as f64);
        let y0 = libm::floor(fy) as usize;
        let y1 = (y0 + 1).min(height - 1);
        let wy = fy - y0 as f64;
        for i in 0..new_w {
            let fx = ((i as f64 + 0.5) * sx - 0.5).clamp(0.0, (width - 1) as f64);
            let x0 = libm::floor(fx) as usize;
            let x1 = (x0 + 1).min(width - 1);
            let wx = fx - x0 as f64;
            let top = plane[y0 * width + x0] * (1.0 - wx) + plane[y0 * width + x1] * wx;
            let bottom = plane[y1 * width + x0] * (1.0 - wx) + plane[y1 * width + x1] * wx;
            out.push(top * (1.0 - wy) + bottom * wy);
        }
    }
    out
}

/// Emulates rendering at `target_ppd` and displaying at the image's own
/// resolution. Output has the input's geometry.
pub fn gaussian_downsample_upsample(img: &ImageBuffer, target_ppd: f64) -> Result<ImageBuffer> {
    gaussian_downsample_upsample_limited(img, target_ppd, MAX_DOWNSAMPLE_FACTOR)
}

/// As [`gaussian_downsample_upsample`] with an explicit downsample limit.
pub fn gaussian_downsample_upsample_limited(
    img: &ImageBuffer,
    target_ppd: f64,
    max_factor: f64,
) -> Result<ImageBuffer> {
    let min_ppd = img.ppd() / max_factor;
    if !(target_ppd >= min_ppd && target_ppd <= img.ppd()) {
        return Err(Error::DownsampleLimit {
            target_ppd,
            min_ppd,
            max_ppd: img.ppd(),
        });
    }
    let ratio = img.ppd() / target_ppd;
    let (w, h) = (img.width(), img.height());
    let small_w = (libm::round(w as f64 / ratio) as usize).max(1);
    let small_h = (libm::round(h as f64 / ratio) as usize).max(1);
    if small_w == w && small_h == h {
        return Ok(img.clone());
    }
    let sigma = 0.5 * ratio;
    let planes: Vec<Vec<f64>> = img
        .planes()
        .iter()
        .map(|p| {
            let blurred = gaussian_blur(p, w, h, sigma);
            let small = resize_bilinear(&blurred, w, h, small_w, small_h);
            resize_bilinear(&small, small_w, small_h, w, h)
        })
        .collect();
    ImageBuffer::from_planes(w, h, &planes, img.ppd())
}
