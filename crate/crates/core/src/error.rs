use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("post-saccadic time must be non-negative, got {0} ms")]
    NegativeTime(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("trace has {len} samples, need more than the {window}-sample window")]
    TraceTooShort { len: usize, window: usize },
    #[error("timestamps must be strictly increasing (sample {index})")]
    NonMonotonicTime { index: usize },
    #[error("median sample interval {median_ms} ms disagrees with nominal rate {rate_hz} Hz")]
    InconsistentSampleRate { median_ms: f64, rate_hz: f64 },
    #[error("sample at {t} ms arrived after {last} ms")]
    OutOfOrder { t: f64, last: f64 },
    #[error("infeasible synthesis config: {0}")]
    InfeasibleConfig(&'static str),
    #[error("need at least 2 saccades with distinct amplitudes, got {0}")]
    InsufficientEvents(usize),
    #[error("cutoff {cutoff_cpd} cpd exceeds the image Nyquist limit {nyquist_cpd} cpd")]
    AboveNyquist { cutoff_cpd: f64, nyquist_cpd: f64 },
    #[error("target {target_ppd} ppd is outside [{min_ppd}, {max_ppd}] ppd")]
    DownsampleLimit {
        target_ppd: f64,
        min_ppd: f64,
        max_ppd: f64,
    },
    #[error("image data length {len} does not match {width}x{height}x{channels}")]
    ImageShape {
        width: usize,
        height: usize,
        channels: usize,
        len: usize,
    },
}
