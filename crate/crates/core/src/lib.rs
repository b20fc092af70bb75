pub mod codec;
pub mod config;
pub mod error;
pub mod geometry;
pub mod imaging;
pub mod interferometry;
pub mod pipeline;
pub mod pointcloud;
pub mod sim;

pub use error::{InsarError, Result};
