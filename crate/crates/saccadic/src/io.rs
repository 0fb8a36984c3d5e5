//! File formats: gaze CSV, event JSON, PNG/PPM rasters.

use std::path::Path;

use image::{DynamicImage, ImageFormat};
use saccadic_core::{GazeSample, GazeTrace, ImageBuffer, OnlineEvent, SaccadeEvent};

use crate::fmt::{ms, sig6, to_json};
use crate::{Error, Result};

pub const TRACE_HEADER: [&str; 4] = ["t_ms", "x_deg", "y_deg", "valid"];

fn parse_valid(s: &str) -> Option<bool> {
    match s.trim() {
        "1" | "true" | "True" | "TRUE" => Some(true),
        "0" | "false" | "False" | "FALSE" => Some(false),
        _ => None,
    }
}

fn parse_coord(s: &str, valid: bool) -> std::result::Result<f64, ()> {
    let s = s.trim();
    if !valid && (s.is_empty() || s.eq_ignore_ascii_case("nan")) {
        return Ok(f64::NAN);
    }
    s.parse().map_err(|_| ())
}

/// Parses a gaze trace from CSV text with header `t_ms,x_deg,y_deg,valid`.
pub fn parse_trace(text: &str) -> Result<GazeTrace> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != TRACE_HEADER {
        return Err(Error::Parse(format!(
            "trace header must be {}, found {}",
            TRACE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = |what: &str| Error::Parse(format!("line {line}: bad {what}"));
        let t: f64 = rec[0].parse().map_err(|_| bad("t_ms"))?;
        let valid = parse_valid(&rec[3]).ok_or_else(|| bad("valid flag"))?;
        let x = parse_coord(&rec[1], valid).map_err(|_| bad("x_deg"))?;
        let y = parse_coord(&rec[2], valid).map_err(|_| bad("y_deg"))?;
        if valid && !(x.is_finite() && y.is_finite() && t.is_finite()) {
            return Err(bad("non-finite value"));
        }
        samples.push(if valid {
            GazeSample::new(t, x, y)
        } else {
            GazeSample::invalid(t)
        });
    }
    Ok(GazeTrace::from_samples(samples)?)
}

pub fn read_trace(path: &Path) -> Result<GazeTrace> {
    parse_trace(&std::fs::read_to_string(path)?)
}

/// CSV text for a trace. Invalid samples have empty coordinates.
pub fn format_trace(trace: &GazeTrace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for s in trace.samples() {
        if s.valid {
            w.write_record([ms(s.t), sig6(s.x), sig6(s.y), "1".into()])?;
        } else {
            w.write_record([ms(s.t), String::new(), String::new(), "0".into()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn format_events(events: &[SaccadeEvent]) -> Result<String> {
    to_json(&events)
}

pub fn parse_events(text: &str) -> Result<Vec<SaccadeEvent>> {
    Ok(serde_json::from_str(text)?)
}

pub fn format_transitions(events: &[OnlineEvent]) -> Result<String> {
    to_json(&events)
}

/// sRGB transfer function, encoded value to linear light.
pub fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

pub fn linear_to_srgb(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    if v <= 0.003_130_8 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

/// Reads a PNG or PNM file into linear-light floats. Greyscale inputs give
/// one channel, everything else three (alpha is dropped).
pub fn read_image(path: &Path, ppd: f64) -> Result<ImageBuffer> {
    let img = image::open(path)?;
    decode(img, ppd)
}

fn decode(img: DynamicImage, ppd: f64) -> Result<ImageBuffer> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let grey = !img.color().has_color();
    let data: Vec<f64> = if grey {
        img.to_luma16()
            .into_raw()
            .iter()
            .map(|&v| srgb_to_linear(v as f64 / 65535.0))
            .collect()
    } else {
        img.to_rgb16()
            .into_raw()
            .iter()
            .map(|&v| srgb_to_linear(v as f64 / 65535.0))
            .collect()
    };
    Ok(ImageBuffer::new(w, h, if grey { 1 } else { 3 }, data, ppd)?)
}

fn quantize(v: f64) -> u8 {
    (linear_to_srgb(v) * 255.0).round() as u8
}

/// Encodes linear-light data to 8-bit sRGB. Format follows the extension
/// (`.png`, `.ppm`, `.pgm`, `.pnm`). PPM output is always RGB.
pub fn encode_image(img: &ImageBuffer, format: ImageFormat, force_rgb: bool) -> Result<Vec<u8>> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let dynimg = if img.channels() == 1 && !force_rgb {
        let raw: Vec<u8> = img.data().iter().map(|&v| quantize(v)).collect();
        DynamicImage::ImageLuma8(image::GrayImage::from_raw(w, h, raw).expect("sized buffer"))
    } else {
        let raw: Vec<u8> = if img.channels() == 1 {
            img.data().iter().flat_map(|&v| [quantize(v); 3]).collect()
        } else {
            img.data().iter().map(|&v| quantize(v)).collect()
        };
        DynamicImage::ImageRgb8(image::RgbImage::from_raw(w, h, raw).expect("sized buffer"))
    };
    let mut out = std::io::Cursor::new(Vec::new());
    dynimg.write_to(&mut out, format)?;
    Ok(out.into_inner())
}

/// Format and RGB requirement implied by a file name.
pub fn image_format_for(path: &Path) -> Result<(ImageFormat, bool)> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "png" => Ok((ImageFormat::Png, false)),
        "ppm" => Ok((ImageFormat::Pnm, true)),
        "pgm" | "pnm" => Ok((ImageFormat::Pnm, false)),
        _ => Err(Error::Parse(format!(
            "unsupported image extension for {}; use .png or .ppm",
            path.display()
        ))),
    }
}
