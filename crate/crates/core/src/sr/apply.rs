use rayon::prelude::*;

use super::lut::{require_single_pass_scale, ChildSet, OccupancyLut};
use super::neighborhood::neighborhood_code;
use crate::error::{Error, Result};
use crate::geometry::{to_point, upscale_point, Point, ScaleFactor, Translation, VoxelCloud};

/// Predicts the children of every voxel in `v_d` from `lut`.
///
/// A child is emitted when its `(code, slot)` counters pass the majority
/// rule. The nearest-neighbour child of every parent is always emitted, so
/// the output contains `upscale_nni(v_d, s, t)`. Children that fall below
/// the origin are dropped.
pub fn apply_sr(v_d: &VoxelCloud, s: ScaleFactor, t: Translation, lut: &OccupancyLut) -> Result<VoxelCloud> {
    require_single_pass_scale(s)?;
    if lut.scale() != s {
        return Err(Error::ScaleMismatch { lut: lut.scale().to_string(), requested: s.to_string() });
    }
    if v_d.is_empty() {
        return Ok(VoxelCloud::empty(v_d.depth()));
    }
    let candidates: Vec<[i64; 3]> = v_d
        .points()
        .par_iter()
        .flat_map_iter(|&p| {
            let table = lut.get(neighborhood_code(v_d, p));
            let predicted = ChildSet::new(p, s, t)
                .slots()
                .filter(move |(slot, _)| table.is_some_and(|tb| tb[slot.index()].predicts_occupied()))
                .map(|(_, child)| child)
                .collect::<Vec<_>>();
            predicted.into_iter().chain(std::iter::once(upscale_point(p, s, t)))
        })
        .collect();
    let pts = candidates
        .into_iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .map(to_point)
        .collect::<Result<Vec<Point>>>()?;
    VoxelCloud::from_points(pts)
}
