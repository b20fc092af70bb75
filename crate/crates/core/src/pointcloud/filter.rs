//! Pixel filtering chain and point-cloud assembly.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::project::{pixel_to_spherical, spherical_to_cartesian};
use crate::error::{InsarError, Result};
use crate::geometry::Vec3;
use crate::imaging::{ImageGrid, SarFrame};
use crate::interferometry::ElevationMap;

pub const DEFAULT_MOUNT_HEIGHT_M: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    /// Minimum amplitude SNR over the scene median, dB. May be `+inf` to
    /// reject everything.
    pub snr_threshold_db: f64,
    /// Largest accepted `|phi|`, radians.
    pub max_elevation_angle: f64,
    /// Inside this slant range the forward cone is cleared, meters.
    pub min_radius: f64,
    /// Half-width of the forward cone, radians.
    pub front_azimuth_halfwidth: f64,
    /// Cone angle that counts as "front", radians. `pi/2` is broadside to the
    /// aperture.
    pub front_cone_angle: f64,
    /// Points with `s_z` below this are underground, meters relative to the
    /// sensor.
    pub min_z: f64,
    pub max_circular_variance: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            snr_threshold_db: 15.0,
            max_elevation_angle: 45f64.to_radians(),
            min_radius: 2.0,
            front_azimuth_halfwidth: 15f64.to_radians(),
            front_cone_angle: FRAC_PI_2,
            min_z: -DEFAULT_MOUNT_HEIGHT_M,
            max_circular_variance: 0.1,
        }
    }
}

impl FilterConfig {
    /// Defaults with the ground plane placed `height` below the sensor.
    pub fn with_mount_height(height: f64) -> Self {
        FilterConfig {
            min_z: -height,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(InsarError::InvalidConfig(m));
        if self.snr_threshold_db.is_nan() || self.snr_threshold_db == f64::NEG_INFINITY {
            return bad(format!("snr threshold {} must be a number or +inf", self.snr_threshold_db));
        }
        for (name, a) in [
            ("max elevation angle", self.max_elevation_angle),
            ("front azimuth half-width", self.front_azimuth_halfwidth),
        ] {
            if !(a > 0.0 && a <= FRAC_PI_2 + 1e-12) {
                return bad(format!("{name} must be in (0, 90] degrees, got {}", a.to_degrees()));
            }
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.front_cone_angle) {
            return bad("front cone angle must be in [0, 180] degrees".into());
        }
        if !(self.min_radius >= 0.0 && self.min_radius.is_finite()) {
            return bad(format!("min radius must be finite and >= 0, got {}", self.min_radius));
        }
        if !self.min_z.is_finite() {
            return bad("min z must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.max_circular_variance) {
            return bad("max circular variance must be in [0, 1]".into());
        }
        Ok(())
    }
}

/// Why a pixel was dropped; the first failing predicate wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    NoElevation,
    Snr,
    CircularVariance,
    ElevationAngle,
    FrontCone,
    Underground,
}

impl Rejection {
    pub const ALL: [Rejection; 6] = [
        Rejection::NoElevation,
        Rejection::Snr,
        Rejection::CircularVariance,
        Rejection::ElevationAngle,
        Rejection::FrontCone,
        Rejection::Underground,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rejection::NoElevation => "no elevation",
            Rejection::Snr => "snr",
            Rejection::CircularVariance => "phase variance",
            Rejection::ElevationAngle => "elevation angle",
            Rejection::FrontCone => "front cone",
            Rejection::Underground => "underground",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FilterStats {
    pub total: usize,
    pub kept: usize,
    /// Indexed like [`Rejection::ALL`].
    pub rejected: [usize; 6],
}

impl FilterStats {
    pub fn rejected_by(&self, reason: Rejection) -> usize {
        self.rejected[reason as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    /// `(s_x, s_y, s_z)` in the SAR frame, meters.
    pub position: Vec3,
    /// Combined linear magnitude.
    pub intensity: f64,
    pub snr_db: f64,
    pub circular_variance: f64,
    /// Source pixel `(row, col)`.
    pub pixel: (usize, usize),
}

/// Where a cloud came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub grid: ImageGrid,
    pub frame: SarFrame,
    pub wavelength: f64,
    pub baseline_length: f64,
    pub baseline_count: usize,
    pub filter: FilterConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElevationPointCloud {
    pub points: Vec<CloudPoint>,
    pub provenance: Provenance,
    pub stats: FilterStats,
}

impl ElevationPointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point positions in world coordinates.
    pub fn world_positions(&self) -> Vec<Vec3> {
        self.points
            .iter()
            .map(|p| self.provenance.frame.to_world(&p.position))
            .collect()
    }

    /// Minimum, maximum and mean `s_z`, if any points survive.
    pub fn height_summary(&self) -> Option<(f64, f64, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let zs = self.points.iter().map(|p| p.position.z);
        let min = zs.clone().fold(f64::INFINITY, f64::min);
        let max = zs.clone().fold(f64::NEG_INFINITY, f64::max);
        Some((min, max, zs.sum::<f64>() / self.points.len() as f64))
    }
}

/// Applies every predicate to one pixel and de-projects it if it survives.
pub fn classify_pixel(
    map: &ElevationMap,
    pixel: (usize, usize),
    cfg: &FilterConfig,
) -> std::result::Result<CloudPoint, Rejection> {
    let q = map.pixels[pixel];
    let phi = map.elevation[pixel].ok_or(Rejection::NoElevation)?;
    if !(q.snr_db >= cfg.snr_threshold_db) {
        return Err(Rejection::Snr);
    }
    if !(q.circular_variance <= cfg.max_circular_variance) {
        return Err(Rejection::CircularVariance);
    }
    if !(phi.abs() <= cfg.max_elevation_angle) {
        return Err(Rejection::ElevationAngle);
    }
    let s = pixel_to_spherical(&map.grid, pixel, phi).expect("pixel inside grid");
    if s.r < cfg.min_radius && (s.theta - cfg.front_cone_angle).abs() <= cfg.front_azimuth_halfwidth {
        return Err(Rejection::FrontCone);
    }
    let position = spherical_to_cartesian(s);
    if !(position.z >= cfg.min_z) {
        return Err(Rejection::Underground);
    }
    Ok(CloudPoint {
        position,
        intensity: q.combined_magnitude,
        snr_db: q.snr_db,
        circular_variance: q.circular_variance,
        pixel,
    })
}

/// Runs the filter chain over every pixel, in row-major order.
pub fn filter_points(map: &ElevationMap, cfg: &FilterConfig) -> Result<ElevationPointCloud> {
    cfg.validate()?;
    let (rows, cols) = map.grid.shape();
    if map.elevation.dim() != (rows, cols) || map.pixels.dim() != (rows, cols) {
        return Err(InsarError::InvalidConfig(
            "elevation map planes disagree with its grid".into(),
        ));
    }
    let outcomes: Vec<_> = (0..rows * cols)
        .into_par_iter()
        .map(|i| classify_pixel(map, (i / cols, i % cols), cfg))
        .collect();

    let mut stats = FilterStats {
        total: outcomes.len(),
        ..Default::default()
    };
    let mut points = Vec::new();
    for o in outcomes {
        match o {
            Ok(p) => points.push(p),
            Err(r) => stats.rejected[r as usize] += 1,
        }
    }
    stats.kept = points.len();
    Ok(ElevationPointCloud {
        points,
        provenance: Provenance {
            grid: map.grid,
            frame: map.frame,
            wavelength: map.wavelength,
            baseline_length: map.baseline_length,
            baseline_count: map.baseline_count,
            filter: *cfg,
        },
        stats,
    })
}
