//! Range compression: window, zero-pad and DFT each beat-signal pulse.
//!
//! The DFT is referenced to the middle of the chirp, which makes the point
//! response around each target real-valued and leaves the carrier phase
//! `2 pi f_c tau` at the peak.

use std::f64::consts::PI;

use num_complex::{Complex32, Complex64};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{InsarError, Result};
use crate::geometry::{derive_chirp_params, ChirpConfig};
use crate::sim::RawCapture;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    pub fn coefficients(&self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n as f64 - 1.0)).cos())
                .collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
        }
    }
}

impl std::str::FromStr for Window {
    type Err = InsarError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "none" => Ok(Window::Rectangular),
            "hann" | "hanning" => Ok(Window::Hann),
            other => Err(InsarError::InvalidConfig(format!("unknown window {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeOptions {
    /// Zero-padding factor, at least 2.
    pub oversample: usize,
    pub window: Window,
    /// Keep only bins up to this range; `None` keeps everything up to the
    /// maximum unambiguous range.
    pub max_range: Option<f64>,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions {
            oversample: 4,
            window: Window::Rectangular,
            max_range: None,
        }
    }
}

/// Range profiles for a subset of a capture's pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfileSet {
    /// Capture pulse index of each profile.
    pub pulse_indices: Vec<usize>,
    /// One profile per pulse; bin `k` sits at range `k * bin_spacing`.
    pub profiles: Vec<Vec<Complex64>>,
    pub bin_spacing: f64,
    pub padded_len: usize,
    pub oversample: usize,
    pub window: Window,
}

impl RangeProfileSet {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn bins(&self) -> usize {
        self.profiles.first().map_or(0, Vec::len)
    }

    pub fn range_of_bin(&self, bin: f64) -> f64 {
        bin * self.bin_spacing
    }
}

/// Effective one-way range per padded DFT bin: `c fs / (2 slope N_padded)`.
pub fn bin_spacing(cfg: &ChirpConfig, padded_len: usize) -> f64 {
    crate::geometry::SPEED_OF_LIGHT * cfg.sample_rate / (2.0 * cfg.ramp_slope * padded_len as f64)
}

pub fn range_compress(capture: &RawCapture, options: &RangeOptions) -> Result<RangeProfileSet> {
    let all: Vec<usize> = (0..capture.pulses.len()).collect();
    range_compress_pulses(capture, &all, options)
}

pub fn range_compress_pulses(
    capture: &RawCapture,
    pulse_indices: &[usize],
    options: &RangeOptions,
) -> Result<RangeProfileSet> {
    let cfg = &capture.chirp;
    let derived = derive_chirp_params(cfg)?;
    if options.oversample < 2 {
        return Err(InsarError::InvalidConfig(format!(
            "oversample factor must be >= 2, got {}",
            options.oversample
        )));
    }
    let n = cfg.samples_per_chirp;
    for &i in pulse_indices {
        let pulse = capture
            .pulses
            .get(i)
            .ok_or_else(|| InsarError::InvalidConfig(format!("pulse index {i} out of range")))?;
        if pulse.samples.len() != n {
            return Err(InsarError::MismatchedSamples {
                pulse: i,
                found: pulse.samples.len(),
                expected: n,
            });
        }
    }

    let padded = n * options.oversample;
    let spacing = bin_spacing(cfg, padded);
    let limit = options
        .max_range
        .unwrap_or(derived.max_range)
        .min(derived.max_range);
    let kept = ((limit / spacing).floor() as usize + 1).min(padded);

    let window = options.window.coefficients(n);
    // exp(+j pi (N-1) k / Np) moves the DFT time origin to the chirp center
    let recenter: Vec<Complex64> = (0..kept)
        .map(|k| {
            let turns = ((n as f64 - 1.0) * k as f64 / (2.0 * padded as f64)).fract();
            Complex64::from_polar(1.0, 2.0 * PI * turns)
        })
        .collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(padded);

    let profiles = pulse_indices
        .par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); padded],
            |buf, &i| {
                let samples: &[Complex32] = &capture.pulses[i].samples;
                for (dst, (s, w)) in buf.iter_mut().zip(samples.iter().zip(&window)) {
                    *dst = Complex64::new(s.re as f64 * w, s.im as f64 * w);
                }
                buf[n..].fill(Complex64::new(0.0, 0.0));
                fft.process(buf);
                buf[..kept]
                    .iter()
                    .zip(&recenter)
                    .map(|(x, r)| x * r)
                    .collect::<Vec<_>>()
            },
        )
        .collect();

    Ok(RangeProfileSet {
        pulse_indices: pulse_indices.to_vec(),
        profiles,
        bin_spacing: spacing,
        padded_len: padded,
        oversample: options.oversample,
        window: options.window,
    })
}
