use rayon::prelude::*;

use super::nn::PointIndex;
use crate::error::{Error, Result};
use crate::geometry::VoxelCloud;

/// PSNR convention `10 log10(factor * peak^2 / mse)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsnrParams {
    pub peak: f64,
    pub factor: f64,
}

impl PsnrParams {
    /// `factor = 3`, the usual MPEG geometry convention.
    pub fn with_peak(peak: u32) -> Self {
        PsnrParams { peak: peak as f64, factor: 3.0 }
    }
}

/// Sum of squared nearest-neighbour distances from each point of `a` to `b`.
///
/// The distances are integers and are summed exactly, so the result does
/// not depend on evaluation order.
pub fn directional_sse(a: &VoxelCloud, b: &VoxelCloud) -> Result<u128> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let index = PointIndex::new(b.points());
    Ok(a
        .points()
        .par_iter()
        .map(|p| index.nearest_squared_distance(p).unwrap_or(0) as u128)
        .sum())
}

/// Mean squared distance from each point of `a` to its nearest point in `b`.
pub fn directional_mse(a: &VoxelCloud, b: &VoxelCloud) -> Result<f64> {
    Ok(directional_sse(a, b)? as f64 / a.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D1Report {
    pub mse_ab: f64,
    pub mse_ba: f64,
    pub psnr: f64,
}

impl D1Report {
    pub fn mse(&self) -> f64 {
        self.mse_ab.max(self.mse_ba)
    }
}

pub fn psnr_from_mse(mse: f64, params: PsnrParams) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (params.factor * params.peak * params.peak / mse).log10()
    }
}

/// Symmetric point-to-point report using the larger directional MSE.
pub fn d1_report(a: &VoxelCloud, b: &VoxelCloud, params: PsnrParams) -> Result<D1Report> {
    let mse_ab = directional_mse(a, b)?;
    let mse_ba = directional_mse(b, a)?;
    Ok(D1Report { mse_ab, mse_ba, psnr: psnr_from_mse(mse_ab.max(mse_ba), params) })
}

/// D1 PSNR in dB; `+inf` when the clouds coincide.
pub fn d1_psnr(a: &VoxelCloud, b: &VoxelCloud, peak: u32) -> Result<f64> {
    d1_report(a, b, PsnrParams::with_peak(peak)).map(|r| r.psnr)
}
