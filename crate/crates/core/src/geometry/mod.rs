//! Voxel clouds, PLY I/O and the exact fractional scaling transforms.

mod cloud;
pub mod ply;
mod scale;
mod transform;

pub use cloud::{depth_for, translation_of, Point, Translation, VoxelCloud, MAX_DEPTH};
pub use ply::{load_ply, read_ply, save_ply, write_ply, PlyFormat};
pub use scale::ScaleFactor;
pub use transform::{
    children_of, children_range, downscale, downscale_point, integer_upscale, upscale_nni, upscale_point,
};
pub(crate) use transform::to_point;
