#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use saccadic::core::ImageBuffer;

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn white_noise(n: usize, channels: usize, ppd: f64, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n * channels).map(|_| uniform(&mut rng)).collect();
    ImageBuffer::new(n, n, channels, data, ppd).unwrap()
}

/// Vertical cosine grating with `f_cpd` cycles per degree.
pub fn grating(n: usize, ppd: f64, f_cpd: f64, mean: f64, amp: f64) -> ImageBuffer {
    ImageBuffer::from_fn(n, n, 1, ppd, |x, _, _| {
        mean + amp * (2.0 * std::f64::consts::PI * f_cpd * x as f64 / ppd).cos()
    })
    .unwrap()
}

/// Amplitude of the `cycles`-per-width cosine component along x.
pub fn cosine_amplitude(img: &ImageBuffer, cycles: f64) -> f64 {
    let (w, h) = (img.width(), img.height());
    let mut acc = 0.0;
    for y in 0..h {
        for x in 0..w {
            acc += img.get(x, y, 0) * (2.0 * std::f64::consts::PI * cycles * x as f64 / w as f64).cos();
        }
    }
    2.0 * acc / (w * h) as f64
}

fn ifft2(buf: &mut [Complex64], n: usize) {
    let fft = FftPlanner::new().plan_fft_inverse(n);
    for row in buf.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::default(); n];
    for x in 0..n {
        for y in 0..n {
            col[y] = buf[y * n + x];
        }
        fft.process(&mut col);
        for y in 0..n {
            buf[y * n + x] = col[y];
        }
    }
}

/// Random-phase image whose power falls as `1 / f^power_exp`, rescaled to
/// `[0.1, 0.9]`.
pub fn power_law_image(n: usize, ppd: f64, power_exp: f64, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let freq = |k: usize| if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    let mut buf = vec![Complex64::default(); n * n];
    for ky in 0..n {
        for kx in 0..n {
            let f = (freq(kx).powi(2) + freq(ky).powi(2)).sqrt();
            if f == 0.0 {
                continue;
            }
            let phase = 2.0 * std::f64::consts::PI * uniform(&mut rng);
            buf[ky * n + kx] = Complex64::from_polar(f.powf(-power_exp / 2.0), phase);
        }
    }
    ifft2(&mut buf, n);
    let re: Vec<f64> = buf.iter().map(|c| c.re).collect();
    let (lo, hi) = re.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let data = re.iter().map(|v| 0.1 + 0.8 * (v - lo) / (hi - lo)).collect();
    ImageBuffer::new(n, n, 1, data, ppd).unwrap()
}

/// Energy of plane `c` at radial frequencies strictly above `f_cpd`, by a
/// direct separable DFT. Slow; keep images small.
pub fn energy_above(img: &ImageBuffer, c: usize, f_cpd: f64) -> f64 {
    let (w, h) = (img.width(), img.height());
    let plane = img.plane(c);
    let mean = plane.iter().sum::<f64>() / plane.len() as f64;
    let tw = |k: usize, x: usize, n: usize| {
        let a = -2.0 * std::f64::consts::PI * (k * x % n) as f64 / n as f64;
        Complex64::new(a.cos(), a.sin())
    };
    // Rows first.
    let mut rows = vec![Complex64::default(); w * h];
    for y in 0..h {
        for k in 0..w {
            rows[y * w + k] = (0..w).map(|x| (plane[y * w + x] - mean) * tw(k, x, w)).sum();
        }
    }
    let freq = |k: usize, n: usize| {
        let k = k as f64;
        if k <= n as f64 / 2.0 {
            k / n as f64
        } else {
            (k - n as f64) / n as f64
        }
    };
    let mut total = 0.0;
    for ky in 0..h {
        for kx in 0..w {
            let f = (freq(kx, w).powi(2) + freq(ky, h).powi(2)).sqrt() * img.ppd();
            if f <= f_cpd {
                continue;
            }
            let v: Complex64 = (0..h).map(|y| rows[y * w + kx] * tw(ky, y, h)).sum();
            total += v.norm_sqr();
        }
    }
    total
}

pub fn sum_squares(img: &ImageBuffer) -> f64 {
    img.data().iter().map(|v| v * v).sum()
}
