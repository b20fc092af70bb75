use num_complex::Complex32;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::capture::RawCapture;
use crate::error::{InsarError, Result};

/// Mean `|s|^2` over every sample of the capture.
pub fn mean_signal_power(capture: &RawCapture) -> f64 {
    let (sum, count) = capture
        .pulses
        .iter()
        .flat_map(|p| p.samples.iter())
        .fold((0.0f64, 0usize), |(s, n), x| (s + x.norm_sqr() as f64, n + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Adds circular complex white Gaussian noise so that mean signal power over
/// noise power equals `10^(snr_db / 10)`. `snr_db = +inf` leaves the capture
/// untouched. Samples are drawn in pulse order from a seeded ChaCha stream.
pub fn add_noise(capture: &RawCapture, per_sample_snr_db: f64, seed: u64) -> Result<RawCapture> {
    if capture.pulses.is_empty() {
        return Err(InsarError::EmptyCapture);
    }
    if per_sample_snr_db == f64::INFINITY {
        return Ok(capture.clone());
    }
    if per_sample_snr_db.is_nan() {
        return Err(InsarError::InvalidConfig("snr_db is NaN".into()));
    }
    let power = mean_signal_power(capture);
    if power == 0.0 {
        return Err(InsarError::ZeroSignalPower);
    }
    let noise_power = power / 10f64.powf(per_sample_snr_db / 10.0);
    add_noise_absolute(capture, noise_power, seed)
}

/// Adds noise of a fixed complex variance, independent of the signal level.
pub fn add_noise_absolute(capture: &RawCapture, variance: f64, seed: u64) -> Result<RawCapture> {
    if capture.pulses.is_empty() {
        return Err(InsarError::EmptyCapture);
    }
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(InsarError::InvalidConfig(format!(
            "noise variance must be finite and >= 0, got {variance}"
        )));
    }
    let normal = Normal::new(0.0, (variance / 2.0).sqrt())
        .map_err(|e| InsarError::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = capture.clone();
    for pulse in &mut out.pulses {
        for s in &mut pulse.samples {
            let re: f64 = normal.sample(&mut rng);
            let im: f64 = normal.sample(&mut rng);
            *s += Complex32::new(re as f32, im as f32);
        }
    }
    Ok(out)
}
