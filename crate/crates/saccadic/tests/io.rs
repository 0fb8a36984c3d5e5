use saccadic::core::synth::generate_trace;
use saccadic::core::{ImageBuffer, OnlineEvent, SaccadeEvent, SynthConfig};
use saccadic::io::*;

#[test]
fn trace_roundtrip() {
    let cfg = SynthConfig {
        duration_ms: 500.0,
        seed: 4,
        ..SynthConfig::default()
    };
    let trace = generate_trace(&cfg).unwrap().trace;
    let text = format_trace(&trace).unwrap();
    assert!(text.starts_with("t_ms,x_deg,y_deg,valid\n0.000,"));
    let back = parse_trace(&text).unwrap();
    assert_eq!(back.len(), trace.len());
    for (a, b) in back.samples().iter().zip(trace.samples()) {
        assert_eq!(a.t, b.t);
        assert!((a.x - b.x).abs() <= 5e-6 * b.x.abs().max(1e-3));
        assert!((a.y - b.y).abs() <= 5e-6 * b.y.abs().max(1e-3));
    }
    // Formatting is a fixed point after one pass.
    assert_eq!(format_trace(&back).unwrap(), text);
}

#[test]
fn events_json_shape() {
    let ev = SaccadeEvent {
        onset: 100.0,
        offset: 140.25,
        amplitude: 12.345678,
        peak_velocity: 512.0,
        direction: 90.0,
    };
    let text = format_events(&[ev]).unwrap();
    assert_eq!(
        text,
        "[\n  {\n    \"onset\": 100.0,\n    \"offset\": 140.25,\n    \"amplitude\": 12.3457,\n    \"peak_velocity\": 512.0,\n    \"direction\": 90.0\n  }\n]\n"
    );
    let back = parse_events(&text).unwrap();
    assert_eq!(back[0].offset, 140.25);
    assert_eq!(format_events(&[]).unwrap(), "[]\n");
}

#[test]
fn transitions_json() {
    let text = format_transitions(&[OnlineEvent::Departed { t: 12.0 }, OnlineEvent::Landed { t: 50.0 }]).unwrap();
    assert!(text.contains("\"kind\": \"departed\""));
    assert!(text.contains("\"t\": 50.0"));
}

#[test]
fn png_and_ppm_roundtrip() {
    let tmp = tempfile::tempdir().unwrap();
    let img = ImageBuffer::from_fn(13, 7, 3, 60.0, |x, y, c| {
        srgb_to_linear(((x * 19 + y * 7 + c * 50) % 256) as f64 / 255.0)
    })
    .unwrap();
    for name in ["a.png", "a.ppm"] {
        let path = tmp.path().join(name);
        let (format, rgb) = image_format_for(&path).unwrap();
        std::fs::write(&path, encode_image(&img, format, rgb).unwrap()).unwrap();
        let back = read_image(&path, 60.0).unwrap();
        assert_eq!((back.width(), back.height(), back.channels()), (13, 7, 3));
        // 8-bit sRGB values survive exactly.
        assert!(back.max_abs_diff(&img) < 1e-9, "{name}");
    }
}

#[test]
fn greyscale_png_stays_single_channel_ppm_becomes_rgb() {
    let tmp = tempfile::tempdir().unwrap();
    let img = ImageBuffer::from_fn(8, 8, 1, 30.0, |x, y, _| {
        srgb_to_linear(((x + 8 * y) * 4) as f64 / 255.0)
    })
    .unwrap();
    let png = tmp.path().join("g.png");
    std::fs::write(
        &png,
        encode_image(&img, image_format_for(&png).unwrap().0, false).unwrap(),
    )
    .unwrap();
    assert_eq!(read_image(&png, 30.0).unwrap().channels(), 1);

    let ppm = tmp.path().join("g.ppm");
    let (f, rgb) = image_format_for(&ppm).unwrap();
    std::fs::write(&ppm, encode_image(&img, f, rgb).unwrap()).unwrap();
    let back = read_image(&ppm, 30.0).unwrap();
    assert_eq!(back.channels(), 3);
    assert!(back.plane(1).iter().zip(img.data()).all(|(a, b)| (a - b).abs() < 1e-9));
}

#[test]
fn unknown_extension_rejected() {
    assert!(image_format_for(std::path::Path::new("x.jpg")).is_err());
}
