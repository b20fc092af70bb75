use ndarray::Array2;
use num_complex::Complex64;

use super::backprojection::{backproject_geometry, pulse_geometry, Interpolation};
use super::grid::{ImageGrid, SarFrame};
use super::range::{range_compress_pulses, RangeOptions};
use crate::error::{InsarError, Result};
use crate::geometry::{ChirpConfig, Trajectory, Vec3, VirtualArray};
use crate::sim::RawCapture;

/// Which pulses form the synthetic aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagingAperture {
    /// Time of the aperture center; `None` uses the middle of the capture.
    pub center_time: Option<f64>,
    /// Along-track length, meters. Pulses within `+-length/2` of the center
    /// are used.
    pub length: f64,
}

impl Default for ImagingAperture {
    fn default() -> Self {
        ImagingAperture {
            center_time: None,
            length: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImagingOptions {
    pub range: RangeOptions,
    pub interpolation: Interpolation,
    pub aperture: ImagingAperture,
}

/// One complex image per virtual element, all on the same grid and phase
/// reference.
#[derive(Debug, Clone, PartialEq)]
pub struct SarImageStack {
    pub grid: ImageGrid,
    /// Indexed like `array.vx_elements`.
    pub images: Vec<Array2<Complex64>>,
    pub frame: SarFrame,
    pub aperture_length: f64,
    pub chirp: ChirpConfig,
    pub array: VirtualArray,
}

impl SarImageStack {
    pub fn phase_center(&self) -> Vec3 {
        self.frame.origin
    }

    /// Peak `|I|` over every image, with `(vx, row, col)`.
    pub fn peak(&self) -> (f64, usize, usize, usize) {
        let mut best = (0.0, 0, 0, 0);
        for (vx, img) in self.images.iter().enumerate() {
            for ((r, c), v) in img.indexed_iter() {
                if v.norm() > best.0 {
                    best = (v.norm(), vx, r, c);
                }
            }
        }
        best
    }
}

/// Pose at the aperture center, interpolated from the per-cycle poses.
pub fn aperture_center_frame(capture: &RawCapture, aperture: &ImagingAperture) -> Result<SarFrame> {
    let poses = capture.cycle_poses();
    if poses.is_empty() {
        return Err(InsarError::EmptyCapture);
    }
    let start = poses[0].time;
    let end = poses[poses.len() - 1].time;
    let t = aperture.center_time.unwrap_or(0.5 * (start + end));
    let pose = if poses.len() == 1 {
        if t != start {
            return Err(InsarError::OutOfRangeTime { time: t, start, end });
        }
        poses[0]
    } else {
        Trajectory::new(poses)?.pose_at_time(t)?
    };
    Ok(SarFrame::from_pose(&pose))
}

/// Pulses of `vx` whose pose lies within `+-length/2` along-track of the
/// frame origin.
pub fn aperture_pulses(
    capture: &RawCapture,
    vx: usize,
    frame: &SarFrame,
    length: f64,
) -> Vec<usize> {
    let axis = frame.along_track_axis();
    let half = 0.5 * length + 1e-12;
    capture
        .pulses_for_vx(vx)
        .into_iter()
        .filter(|&i| (capture.pulses[i].pose.position - frame.origin).dot(&axis).abs() <= half)
        .collect()
}

/// Largest effective range from any antenna in the aperture to any pixel.
fn max_pixel_range(capture: &RawCapture, grid: &ImageGrid, length: f64) -> f64 {
    let extent = capture
        .array
        .tx_positions
        .iter()
        .chain(&capture.array.rx_positions)
        .map(|p| p.norm())
        .fold(0.0, f64::max);
    let [u0, v0] = grid.origin;
    let [lu, lv] = grid.extent;
    let corners = [(u0, v0), (u0 + lu, v0), (u0, v0 + lv), (u0 + lu, v0 + lv)];
    corners
        .iter()
        .map(|&(u, v)| {
            let du = u.abs() + 0.5 * length;
            (du * du + v * v + grid.height * grid.height).sqrt()
        })
        .fold(0.0, f64::max)
        + extent
}

/// Range-compresses and backprojects every VX onto `grid`.
pub fn image_stack(
    capture: &RawCapture,
    grid: &ImageGrid,
    options: &ImagingOptions,
) -> Result<SarImageStack> {
    capture.validate()?;
    grid.validate()?;
    if !(options.aperture.length > 0.0) {
        return Err(InsarError::InvalidConfig(
            "aperture length must be positive".into(),
        ));
    }
    let frame = aperture_center_frame(capture, &options.aperture)?;
    let mut range = options.range;
    if range.max_range.is_none() {
        // keep the interpolator's support past the farthest pixel
        let spacing = super::range::bin_spacing(
            &capture.chirp,
            capture.chirp.samples_per_chirp * range.oversample,
        );
        range.max_range = Some(
            max_pixel_range(capture, grid, options.aperture.length) + 12.0 * spacing,
        );
    }

    let mut images = Vec::with_capacity(capture.array.num_vx());
    for vx in 0..capture.array.num_vx() {
        let pulses = aperture_pulses(capture, vx, &frame, options.aperture.length);
        if pulses.is_empty() {
            return Err(InsarError::EmptyAperture { vx });
        }
        let profiles = range_compress_pulses(capture, &pulses, &range)?;
        let geometry = pulse_geometry(capture, &profiles, &frame);
        let image = backproject_geometry(
            &profiles,
            &geometry,
            grid,
            capture.chirp.center_frequency,
            options.interpolation,
        )?;
        images.push(image);
    }

    Ok(SarImageStack {
        grid: *grid,
        images,
        frame,
        aperture_length: options.aperture.length,
        chirp: capture.chirp,
        array: capture.array.clone(),
    })
}
