//! Elevation from vertical-baseline phase differences between per-VX images.

pub mod combine;
pub mod equations;
pub mod format;

pub use combine::{
    combine_baselines, combine_correlations, common_baseline, elevation_map, median, snr_map,
    ElevationMap, InterferogramPixel,
};
pub use equations::{
    check_unambiguous, elevation_from_phase, phase_delay, phase_from_elevation,
    tau_from_elevation, wrap_phase,
};
pub use format::{read_elevation_map, write_elevation_map, ELEVATION_MAGIC};
