//! Shared configuration, array geometry and trajectory types.

pub mod array;
pub mod chirp;
pub mod trajectory;

pub use array::{build_virtual_array, Vec3, VerticalBaseline, VirtualArray, VirtualElement};
pub use chirp::{derive_chirp_params, ChirpConfig, DerivedChirpParams, SPEED_OF_LIGHT};
pub use trajectory::{
    read_trajectory_csv, write_trajectory_csv, Pose, Trajectory, MAX_TDM_SPEED_MPS,
};
