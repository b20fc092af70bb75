//! Per-VX SAR image formation by range compression and backprojection.

pub mod backprojection;
pub mod format;
pub mod grid;
pub mod range;
pub mod stack;

pub use backprojection::{
    backproject, backproject_geometry, predicted_azimuth_resolution, pulse_geometry,
    sample_profile, Interpolation, PulseGeometry,
};
pub use format::{read_image_stack, write_image_stack, write_log_magnitude_pgm, IMAGE_MAGIC};
pub use grid::{ImageGrid, SarFrame};
pub use range::{range_compress, range_compress_pulses, RangeOptions, RangeProfileSet, Window};
pub use stack::{
    aperture_center_frame, aperture_pulses, image_stack, ImagingAperture, ImagingOptions,
    SarImageStack,
};
