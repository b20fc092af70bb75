//! Point-target scene simulation: dechirped FMCW captures over a moving
//! platform with TDM transmit scheduling and additive noise.

pub mod capture;
pub mod format;
pub mod noise;
pub mod scene;

pub use capture::{
    synthesize_capture, synthesize_capture_with, synthesize_chirp, tdm_schedule, ApertureWindow,
    ElementPattern, PulseRecord, RawCapture, SimulationOptions, TdmSlot,
};
pub use format::{read_capture, write_capture, CAPTURE_MAGIC};
pub use noise::{add_noise, add_noise_absolute, mean_signal_power};
pub use scene::{read_scene_csv, write_scene_csv, PointTarget, Scene};
