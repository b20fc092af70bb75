//! FMCW chirp configuration and the waveform quantities derived from it.

use crate::error::{InsarError, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Timing and frequency plan of one FMCW chirp and the TDM frame around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpConfig {
    /// Instantaneous frequency at the middle of the sampled ramp, Hz.
    pub center_frequency: f64,
    /// Hz per second.
    pub ramp_slope: f64,
    pub samples_per_chirp: usize,
    /// Complex samples per second.
    pub sample_rate: f64,
    /// Chirp-to-chirp repetition interval, seconds.
    pub pri: f64,
    pub chirps_per_tx_per_frame: usize,
    pub num_tx: usize,
}

impl ChirpConfig {
    /// The modulation used on the automotive test vehicle: 77.4 GHz, 30 MHz/us,
    /// 512 samples at 18.75 Msps, 63.9 us PRI, 256 chirps per TX, 3 TX.
    pub fn automotive() -> Self {
        ChirpConfig {
            center_frequency: 77.4e9,
            ramp_slope: 30e12,
            samples_per_chirp: 512,
            sample_rate: 18.75e6,
            pri: 63.9e-6,
            chirps_per_tx_per_frame: 256,
            num_tx: 3,
        }
    }

    pub fn pulse_length(&self) -> f64 {
        self.samples_per_chirp as f64 / self.sample_rate
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_frequency
    }

    /// Duration of one full TDM cycle (every TX fires once).
    pub fn effective_pri(&self) -> f64 {
        self.num_tx as f64 * self.pri
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("center_frequency", self.center_frequency),
            ("ramp_slope", self.ramp_slope),
            ("sample_rate", self.sample_rate),
            ("pri", self.pri),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(InsarError::InvalidConfig(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if self.samples_per_chirp < 2 {
            return Err(InsarError::InvalidConfig(format!(
                "samples_per_chirp must be at least 2, got {}",
                self.samples_per_chirp
            )));
        }
        if self.chirps_per_tx_per_frame == 0 || self.num_tx == 0 {
            return Err(InsarError::InvalidConfig(
                "chirps_per_tx_per_frame and num_tx must be positive".into(),
            ));
        }
        if self.pulse_length() > self.pri {
            return Err(InsarError::InvalidConfig(format!(
                "pulse length {:.4e} s exceeds pri {:.4e} s",
                self.pulse_length(),
                self.pri
            )));
        }
        Ok(())
    }
}

impl Default for ChirpConfig {
    fn default() -> Self {
        Self::automotive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedChirpParams {
    pub wavelength: f64,
    pub bandwidth: f64,
    pub pulse_length: f64,
    pub range_resolution: f64,
    pub max_range: f64,
    pub effective_pri: f64,
}

pub fn derive_chirp_params(cfg: &ChirpConfig) -> Result<DerivedChirpParams> {
    cfg.validate()?;
    let pulse_length = cfg.pulse_length();
    let bandwidth = cfg.ramp_slope * pulse_length;
    Ok(DerivedChirpParams {
        wavelength: cfg.wavelength(),
        bandwidth,
        pulse_length,
        range_resolution: SPEED_OF_LIGHT / (2.0 * bandwidth),
        max_range: SPEED_OF_LIGHT * cfg.sample_rate / (2.0 * cfg.ramp_slope),
        effective_pri: cfg.effective_pri(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn automotive_config_matches_reported_values() {
        let d = derive_chirp_params(&ChirpConfig::automotive()).unwrap();
        assert!((d.wavelength * 1e3 - 3.87).abs() <= 0.005);
        assert!((d.bandwidth / 1e6 - 819.2).abs() < 1e-6);
        assert!((d.pulse_length * 1e6 - 27.3).abs() <= 0.05);
        assert!((d.range_resolution * 100.0 - 18.3).abs() <= 0.05);
        assert!((d.max_range - 93.7).abs() <= 0.05);
        assert!((d.effective_pri * 1e6 - 191.7).abs() <= 0.05);
    }

    #[test]
    fn doubling_sample_rate_doubles_max_range() {
        let mut cfg = ChirpConfig::automotive();
        cfg.sample_rate *= 2.0;
        let d = derive_chirp_params(&cfg).unwrap();
        // 299792458 * 37.5e6 / 60e12
        assert_relative_eq!(d.max_range, 187.370_286_25, max_relative = 1e-12);
        assert!((d.max_range - 187.4).abs() < 0.05);
    }

    #[test]
    fn doubling_slope_halves_range_resolution() {
        let base = derive_chirp_params(&ChirpConfig::automotive()).unwrap();
        let mut cfg = ChirpConfig::automotive();
        cfg.ramp_slope *= 2.0;
        let d = derive_chirp_params(&cfg).unwrap();
        assert_eq!(d.range_resolution * 2.0, base.range_resolution);
    }

    #[test]
    fn pulse_longer_than_pri_is_rejected() {
        let mut cfg = ChirpConfig::automotive();
        cfg.samples_per_chirp = 2048;
        assert!(matches!(
            derive_chirp_params(&cfg),
            Err(InsarError::InvalidConfig(_))
        ));
    }

    #[test]
    fn non_positive_fields_are_rejected() {
        let mut cfg = ChirpConfig::automotive();
        cfg.ramp_slope = 0.0;
        assert!(derive_chirp_params(&cfg).is_err());
        let mut cfg = ChirpConfig::automotive();
        cfg.samples_per_chirp = 1;
        assert!(derive_chirp_params(&cfg).is_err());
        let mut cfg = ChirpConfig::automotive();
        cfg.center_frequency = f64::NAN;
        assert!(derive_chirp_params(&cfg).is_err());
    }
}
