//! Post-processing of lossily down-scaled voxelized point clouds with
//! self-supervised fractional super-resolution, plus D1 PSNR and BD-rate
//! evaluation against nearest-neighbour interpolation.

pub mod ctc;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod pipeline;
pub mod plot;
pub mod sr;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{Point, ScaleFactor, Translation, VoxelCloud};
