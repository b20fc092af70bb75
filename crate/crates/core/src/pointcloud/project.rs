//! De-projection from the range-azimuth image plane to 3-D.
//!
//! Backprojection is rotationally invariant about the aperture axis, so a
//! source at elevation angle `phi` images at its slant range in the `(u, v)`
//! plane. Rotating the pixel back about the `u` axis by `phi` recovers it.

use crate::error::{InsarError, Result};
use crate::geometry::Vec3;
use crate::imaging::ImageGrid;

/// Spherical coordinates about the aperture axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical {
    /// Slant range, meters.
    pub r: f64,
    /// Cone angle from the aperture axis, radians.
    pub theta: f64,
    /// Elevation angle about the aperture axis, radians.
    pub phi: f64,
}

/// `r = |(u, v)|`, `theta = atan2(v, u)` for the pixel center, with the given
/// elevation angle.
pub fn pixel_to_spherical(grid: &ImageGrid, pixel: (usize, usize), phi: f64) -> Result<Spherical> {
    let (rows, cols) = grid.shape();
    if pixel.0 >= rows || pixel.1 >= cols {
        return Err(InsarError::InvalidConfig(format!(
            "pixel {pixel:?} outside {rows}x{cols} grid"
        )));
    }
    let (u, v) = grid.pixel_center(pixel.0, pixel.1);
    Ok(Spherical {
        r: u.hypot(v),
        theta: v.atan2(u),
        phi,
    })
}

/// `(r cos(theta), r sin(theta) cos(phi), r sin(theta) sin(phi))`.
pub fn spherical_to_cartesian(s: Spherical) -> Vec3 {
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    Vec3::new(s.r * ct, s.r * st * cp, s.r * st * sp)
}
