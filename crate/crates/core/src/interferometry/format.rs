//! `INSARELV` elevation-map files.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic "INSARELV" | u32 version
//! grid as in INSARIMG | frame: f64 x,y,z | f64 qw,qx,qy,qz
//! f64 wavelength | f64 baseline length | u32 baseline count
//! five f32 planes, rows x cols each, row-major:
//!   elevation (rad, NaN where absent) | phase delay | circular variance
//!   | magnitude | snr_db
//! ```
//!
//! Planes are stored as `f32`, so a read-back map carries single precision.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;

use super::combine::{ElevationMap, InterferogramPixel};
use crate::codec::{Decoder, Encoder};
use crate::error::Result;
use crate::imaging::format::{read_grid, write_grid};
use crate::imaging::SarFrame;

pub const ELEVATION_MAGIC: &[u8; 8] = b"INSARELV";

pub fn write_elevation_map(map: &ElevationMap, path: &Path) -> Result<()> {
    let mut enc = Encoder::new(BufWriter::new(File::create(path)?));
    enc.header(ELEVATION_MAGIC)?;
    write_grid(&mut enc, &map.grid)?;
    enc.vec3(&map.frame.origin)?;
    enc.quaternion(&map.frame.orientation)?;
    enc.f64(map.wavelength)?;
    enc.f64(map.baseline_length)?;
    enc.u32(map.baseline_count as u32)?;
    for e in map.elevation.iter() {
        enc.f32(e.map_or(f32::NAN, |v| v as f32))?;
    }
    let planes: [fn(&InterferogramPixel) -> f64; 4] = [
        |p| p.mean_phase_delay,
        |p| p.circular_variance,
        |p| p.combined_magnitude,
        |p| p.snr_db,
    ];
    for plane in planes {
        for p in map.pixels.iter() {
            enc.f32(plane(p) as f32)?;
        }
    }
    enc.into_inner().flush()?;
    Ok(())
}

pub fn read_elevation_map(path: &Path) -> Result<ElevationMap> {
    let mut dec = Decoder::new(BufReader::new(File::open(path)?), "elevation map");
    dec.header(ELEVATION_MAGIC)?;
    let grid = read_grid(&mut dec)?;
    let frame = SarFrame {
        origin: dec.vec3()?,
        orientation: dec.quaternion()?,
    };
    let wavelength = dec.f64()?;
    let baseline_length = dec.f64()?;
    let baseline_count = dec.u32()? as usize;
    let shape = grid.shape();
    let n = shape.0 * shape.1;
    let elevation: Vec<Option<f64>> = dec
        .f32s(n)?
        .into_iter()
        .map(|v| (!v.is_nan()).then_some(v as f64))
        .collect();
    let phase = dec.f32s(n)?;
    let variance = dec.f32s(n)?;
    let magnitude = dec.f32s(n)?;
    let snr = dec.f32s(n)?;
    dec.finish()?;
    let pixels = (0..n)
        .map(|i| InterferogramPixel {
            mean_phase_delay: phase[i] as f64,
            circular_variance: variance[i] as f64,
            combined_magnitude: magnitude[i] as f64,
            snr_db: snr[i] as f64,
        })
        .collect();
    Ok(ElevationMap {
        grid,
        frame,
        wavelength,
        baseline_length,
        baseline_count,
        elevation: Array2::from_shape_vec(shape, elevation).expect("grid shape"),
        pixels: Array2::from_shape_vec(shape, pixels).expect("grid shape"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::InsarError;
    use crate::geometry::Vec3;
    use crate::imaging::ImageGrid;
    use nalgebra::UnitQuaternion;

    fn map() -> ElevationMap {
        let grid = ImageGrid::new([-0.1, 2.0], [0.2, 0.12], 0.04);
        let shape = grid.shape();
        ElevationMap {
            grid,
            frame: SarFrame {
                origin: Vec3::new(1.0, 2.0, 0.9),
                orientation: UnitQuaternion::identity(),
            },
            wavelength: 3.87e-3,
            baseline_length: 3.87e-3 / 4.0,
            baseline_count: 4,
            elevation: Array2::from_shape_fn(shape, |(r, c)| (r != c).then_some(0.25 * r as f64 - 0.125 * c as f64)),
            pixels: Array2::from_shape_fn(shape, |(r, c)| InterferogramPixel {
                mean_phase_delay: 0.5 - 0.25 * c as f64,
                circular_variance: 0.125 * r as f64,
                combined_magnitude: 3.0 + r as f64,
                snr_db: -6.0 + c as f64,
            }),
        }
    }

    #[test]
    fn round_trip_of_f32_exact_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.insarelv");
        let m = map();
        write_elevation_map(&m, &path).unwrap();
        let back = read_elevation_map(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.valid_count(), m.valid_count());
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.insarelv");
        write_elevation_map(&map(), &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[5] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        let err = read_elevation_map(&path).unwrap_err();
        assert!(matches!(err, InsarError::Format { .. }));
        assert_eq!(err.exit_code(), 3);
    }
}
