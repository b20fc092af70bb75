use nalgebra::UnitQuaternion;

use crate::error::{InsarError, Result};
use crate::geometry::{Pose, Vec3};

/// Regular pixel grid in the aperture frame.
///
/// `u` is along-track (the aperture axis), `v` is cross-track and both are
/// measured from the phase center. Images are stored with rows along `v` and
/// columns along `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageGrid {
    /// `(u, v)` of the grid corner, meters.
    pub origin: [f64; 2],
    /// `(u, v)` extent, meters.
    pub extent: [f64; 2],
    pub pixel_size: f64,
    /// Height of the image plane above the phase center.
    pub height: f64,
}

impl Default for ImageGrid {
    /// 30 m x 30 m at 4 cm, centered along-track, starting at the sensor.
    fn default() -> Self {
        ImageGrid {
            origin: [-15.0, 0.0],
            extent: [30.0, 30.0],
            pixel_size: 0.04,
            height: 0.0,
        }
    }
}

impl ImageGrid {
    pub fn new(origin: [f64; 2], extent: [f64; 2], pixel_size: f64) -> Self {
        ImageGrid {
            origin,
            extent,
            pixel_size,
            height: 0.0,
        }
    }

    fn count(extent: f64, pixel: f64) -> usize {
        (extent / pixel + 1e-6).floor().max(0.0) as usize
    }

    /// `(rows, cols)` = `(n_v, n_u)`.
    pub fn shape(&self) -> (usize, usize) {
        (
            Self::count(self.extent[1], self.pixel_size),
            Self::count(self.extent[0], self.pixel_size),
        )
    }

    pub fn len(&self) -> usize {
        let (r, c) = self.shape();
        r * c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.origin.iter().chain(&self.extent).all(|x| x.is_finite())
            && self.height.is_finite();
        if !finite || !(self.pixel_size > 0.0 && self.pixel_size.is_finite()) {
            return Err(InsarError::InvalidConfig(
                "grid values must be finite with a positive pixel size".into(),
            ));
        }
        if self.extent.iter().any(|&e| e <= 0.0) {
            return Err(InsarError::InvalidConfig("grid extent must be positive".into()));
        }
        let (rows, cols) = self.shape();
        if rows == 0 || cols == 0 {
            return Err(InsarError::InvalidConfig(format!(
                "grid {} x {} m is smaller than one {} m pixel",
                self.extent[0], self.extent[1], self.pixel_size
            )));
        }
        Ok(())
    }

    /// `(u, v)` of a pixel center.
    pub fn pixel_center(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.origin[0] + (col as f64 + 0.5) * self.pixel_size,
            self.origin[1] + (row as f64 + 0.5) * self.pixel_size,
        )
    }

    /// Pixel containing `(u, v)`, if inside the grid.
    pub fn pixel_at(&self, u: f64, v: f64) -> Option<(usize, usize)> {
        let (rows, cols) = self.shape();
        let c = ((u - self.origin[0]) / self.pixel_size).floor();
        let r = ((v - self.origin[1]) / self.pixel_size).floor();
        (c >= 0.0 && r >= 0.0 && (c as usize) < cols && (r as usize) < rows)
            .then_some((r as usize, c as usize))
    }
}

/// Common phase-reference frame for every per-VX image: origin at the array
/// reference point at the aperture center, axes from the array orientation
/// there (`u` = array x, `v` = array y, up = array z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SarFrame {
    pub origin: Vec3,
    pub orientation: UnitQuaternion<f64>,
}

impl SarFrame {
    pub fn from_pose(pose: &Pose) -> Self {
        SarFrame {
            origin: pose.position,
            orientation: pose.orientation,
        }
    }

    pub fn to_local(&self, world: &Vec3) -> Vec3 {
        self.orientation.inverse_transform_vector(&(world - self.origin))
    }

    pub fn to_world(&self, local: &Vec3) -> Vec3 {
        self.origin + self.orientation * local
    }

    pub fn along_track_axis(&self) -> Vec3 {
        self.orientation * Vec3::x()
    }
}
