//! Filtering, de-projection and point-cloud output.

pub mod filter;
pub mod pcd;
pub mod project;

pub use filter::{
    classify_pixel, filter_points, CloudPoint, ElevationPointCloud, FilterConfig, FilterStats,
    Provenance, Rejection, DEFAULT_MOUNT_HEIGHT_M,
};
pub use pcd::{format_g, read_pcd, write_cloud_csv, write_pcd, PcdPoint};
pub use project::{pixel_to_spherical, spherical_to_cartesian, Spherical};
