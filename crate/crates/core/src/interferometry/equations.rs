//! Vertical-baseline phase/elevation relations.
//!
//! A source at elevation angle `phi` reaches two elements stacked `D_v` apart
//! with a one-way delay difference `D_v sin(phi) / c`. The two-way path doubles
//! it, so the interferometric phase is `4 pi D_v sin(phi) / lambda`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{InsarError, Result};
use crate::geometry::SPEED_OF_LIGHT;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// `arg(s0 conj(s1))` in `(-pi, pi]`, with `s0` the lower-layer sample.
pub fn phase_delay(s0: Complex64, s1: Complex64) -> Result<f64> {
    if s0.norm_sqr() == 0.0 || s1.norm_sqr() == 0.0 {
        return Err(InsarError::ZeroSignal);
    }
    Ok(wrap_phase((s0 * s1.conj()).arg()))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(InsarError::InvalidConfig(format!("{name} must be positive, got {v}")))
    }
}

/// One-way delay difference `D_v sin(phi) / c`, seconds.
pub fn tau_from_elevation(phi: f64, baseline: f64) -> Result<f64> {
    check_positive("baseline", baseline)?;
    Ok(baseline * phi.sin() / SPEED_OF_LIGHT)
}

/// Unwrapped interferometric phase `4 pi (D_v / lambda) sin(phi)`.
pub fn phase_from_elevation(phi: f64, baseline: f64, wavelength: f64) -> Result<f64> {
    check_positive("baseline", baseline)?;
    check_positive("wavelength", wavelength)?;
    Ok(4.0 * PI * (baseline / wavelength) * phi.sin())
}

/// Rejects baselines longer than `lambda / 4`, beyond which the phase wraps
/// inside `[-90, 90]` degrees.
pub fn check_unambiguous(baseline: f64, wavelength: f64) -> Result<()> {
    check_positive("baseline", baseline)?;
    check_positive("wavelength", wavelength)?;
    let limit = wavelength / 4.0;
    if baseline > limit * (1.0 + 1e-9) {
        return Err(InsarError::AmbiguousBaseline { baseline, limit });
    }
    Ok(())
}

/// `asin(lambda dpsi / (4 pi D_v))`, radians.
pub fn elevation_from_phase(dpsi: f64, baseline: f64, wavelength: f64) -> Result<f64> {
    check_unambiguous(baseline, wavelength)?;
    let arg = wavelength * dpsi / (4.0 * PI * baseline);
    if !arg.is_finite() || arg.abs() > 1.0 + 1e-12 {
        return Err(InsarError::OutOfDomain(arg));
    }
    Ok(arg.clamp(-1.0, 1.0).asin())
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 3.87e-3;

    #[test]
    fn phase_delay_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(phase_delay(one, one).unwrap(), 0.0);
        let d = phase_delay(Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, 0.1)).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
        assert!(matches!(phase_delay(one, Complex64::new(0.0, 0.0)), Err(InsarError::ZeroSignal)));
        // exactly opposite phasors land on +pi, never -pi
        let d = phase_delay(Complex64::new(-1.0, -0.0), one).unwrap();
        assert_eq!(d, PI);
    }

    #[test]
    fn phase_from_elevation_examples() {
        let dv = LAMBDA / 4.0;
        assert_eq!(phase_from_elevation(0.0, dv, LAMBDA).unwrap(), 0.0);
        let p = phase_from_elevation(30f64.to_radians(), dv, LAMBDA).unwrap();
        assert!((p - PI / 2.0).abs() < 1e-12);
        let p = phase_from_elevation(10f64.to_radians(), dv, LAMBDA).unwrap();
        assert!((p - 0.5455).abs() < 5e-5);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_from_elevation(0.0, 1e-3).unwrap(), 0.0);
        let t = tau_from_elevation(30f64.to_radians(), 0.9675e-3).unwrap();
        assert!((t - 1.614e-12).abs() < 5e-16);
        let phi = 0.4;
        assert_eq!(
            tau_from_elevation(-phi, 1e-3).unwrap(),
            -tau_from_elevation(phi, 1e-3).unwrap()
        );
        assert!(tau_from_elevation(0.1, 0.0).is_err());
    }

    #[test]
    fn elevation_examples_and_errors() {
        let dv = LAMBDA / 4.0;
        assert_eq!(elevation_from_phase(0.0, dv, LAMBDA).unwrap(), 0.0);
        let e = elevation_from_phase(PI / 2.0, dv, LAMBDA).unwrap();
        assert!((e.to_degrees() - 30.0).abs() < 1e-12);
        let e = elevation_from_phase(PI, dv, LAMBDA).unwrap();
        assert!((e.to_degrees() - 90.0).abs() < 1e-12);
        assert!(matches!(
            elevation_from_phase(PI, dv / 2.0, LAMBDA),
            Err(InsarError::OutOfDomain(_))
        ));
        assert!(matches!(
            elevation_from_phase(0.1, LAMBDA / 2.0, LAMBDA),
            Err(InsarError::AmbiguousBaseline { .. })
        ));
    }

    #[test]
    fn wrap_phase_range() {
        for x in [-7.0, -PI, -3.0, 0.0, PI, 3.5, 12.0] {
            let w = wrap_phase(x);
            assert!(w > -PI && w <= PI, "{x} -> {w}");
            assert!(((x - w) / (2.0 * PI)).fract().abs() < 1e-12 || ((x - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-12);
        }
    }
}
