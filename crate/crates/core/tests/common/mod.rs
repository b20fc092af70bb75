//! Shared fixtures, independent oracles and pinned tolerances for the
//! integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::UnitQuaternion;
use num_complex::Complex64;

use insar::geometry::{ChirpConfig, Trajectory, Vec3, SPEED_OF_LIGHT};
use insar::imaging::SarFrame;
use insar::sim::{PointTarget, RawCapture, Scene};

// Tolerances. Each one is quoted from the acceptance criteria it serves.

/// Recovered reflector heights, meters.
pub const REFLECTOR_HEIGHT_TOL_M: f64 = 0.02;
/// Wall-clock budget for one reflector pipeline, seconds.
pub const REFLECTOR_RUNTIME_S: f64 = 60.0;
/// Relative band around the predicted azimuth resolution.
pub const AZIMUTH_FWHM_REL_TOL: f64 = 0.25;
/// Phase-error std ratio for 4 baselines over 1, and its band.
pub const SQRT_N_RATIO: f64 = 0.5;
pub const SQRT_N_RATIO_TOL: f64 = 0.1;
pub const MONTE_CARLO_TRIALS: usize = 10_000;
/// Closed-form identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Backprojection against the correlation oracle, relative.
pub const ORACLE_REL_TOL: f64 = 1e-3;
pub const ORACLE_RUNTIME_S: f64 = 10.0;
/// PCD write/parse round trip, relative.
pub const PCD_REL_TOL: f64 = 1e-4;
/// End-to-end inter-VX phase against the closed form, radians.
pub const PHASE_TOL_RAD: f64 = 0.05;

/// Mount height of the rail sensor above the floor, meters.
pub const TABLE_HEIGHT_M: f64 = 0.9;

/// Straight rail along world `x` at table height, identity orientation
/// (array `x` along the rail, boresight `+y`), centred on `x = 0`.
pub fn rail(length: f64, speed: f64) -> Trajectory {
    let duration = length / speed;
    Trajectory::linear(
        Vec3::new(-0.5 * length, 0.0, TABLE_HEIGHT_M),
        Vec3::new(speed, 0.0, 0.0),
        UnitQuaternion::identity(),
        0.0,
        duration,
        duration / 4.0,
    )
    .expect("rail trajectory")
}

pub fn scene(points: &[([f64; 3], f64)]) -> Scene {
    Scene::new(
        points
            .iter()
            .map(|&(p, a)| PointTarget::new(Vec3::new(p[0], p[1], p[2]), a))
            .collect(),
    )
}

/// Direct time-domain correlation of the raw samples against the ideal
/// response of a scatterer at `pixel`:
///
/// `sum_k sum_n s_k[n] exp(-j 2 pi (slope tau (n - (N-1)/2) / fs + f_c tau))`
///
/// with `tau = (|p - tx_k| + |p - rx_k|) / c`. No FFT, no interpolation and
/// no phase tables.
pub fn correlation_oracle(capture: &RawCapture, pulses: &[usize], frame: &SarFrame, pixel: Vec3) -> Complex64 {
    let cfg: &ChirpConfig = &capture.chirp;
    let world = frame.to_world(&pixel);
    let n = cfg.samples_per_chirp;
    let mid = (n as f64 - 1.0) / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for &k in pulses {
        let p = &capture.pulses[k];
        let tx = p.pose.transform(&capture.array.tx_positions[p.tx_index]);
        let rx = p.pose.transform(&capture.array.rx_positions[p.rx_index]);
        let tau = ((world - tx).norm() + (world - rx).norm()) / SPEED_OF_LIGHT;
        for (i, s) in p.samples.iter().enumerate() {
            let phase = 2.0 * PI * (cfg.ramp_slope * tau * (i as f64 - mid) / cfg.sample_rate + cfg.center_frequency * tau);
            acc += Complex64::new(s.re as f64, s.im as f64) * Complex64::from_polar(1.0, -phase);
        }
    }
    acc
}

/// Full width of `ys` at `fraction` of its peak, by linear interpolation
/// between samples.
pub fn width_at(xs: &[f64], ys: &[f64], fraction: f64) -> f64 {
    let (peak_i, peak) = ys
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &y)| if y > best.1 { (i, y) } else { best });
    let level = fraction * peak;
    let mut l = peak_i;
    while l > 0 && ys[l] > level {
        l -= 1;
    }
    let mut r = peak_i;
    while r + 1 < ys.len() && ys[r] > level {
        r += 1;
    }
    assert!(ys[l] <= level && ys[r] <= level, "response does not fall below {fraction} of peak inside the cut");
    let cross = |a: usize, b: usize| xs[a] + (level - ys[a]) / (ys[b] - ys[a]) * (xs[b] - xs[a]);
    cross(r - 1, r) - cross(l, l + 1)
}

/// FNV-1a, for comparing file contents.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}
