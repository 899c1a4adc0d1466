//! Exact fractional coordinate transforms.
//!
//! Down-scaling maps `v` to `round((v - t) / s)` with ties rounded up. All
//! arithmetic is done on integers (`s = num / den`), so the preimage
//! intervals used by [`children_of`] are the exact inverse of
//! [`downscale_point`].

use std::ops::Range;

use super::cloud::{Point, Translation, VoxelCloud, MAX_DEPTH};
use super::scale::ScaleFactor;
use crate::error::{Error, Result};

/// `round(n / d)` with ties toward +infinity, for `d > 0`.
#[inline]
pub(crate) fn round_div(n: i64, d: i64) -> i64 {
    (2 * n + d).div_euclid(2 * d)
}

#[inline]
fn ceil_div(n: i64, d: i64) -> i64 {
    -((-n).div_euclid(d))
}

/// Image of a single coordinate under the down-scale.
#[inline]
pub fn downscale_point(v: Point, s: ScaleFactor, t: Translation) -> [i64; 3] {
    let (num, den) = (s.num() as i64, s.den() as i64);
    std::array::from_fn(|i| round_div((v[i] as i64 - t.0[i] as i64) * den, num))
}

/// Nearest-neighbour expansion of a single parent: `round(s * p) + t`.
#[inline]
pub fn upscale_point(p: Point, s: ScaleFactor, t: Translation) -> [i64; 3] {
    let (num, den) = (s.num() as i64, s.den() as i64);
    std::array::from_fn(|i| round_div(p[i] as i64 * num, den) + t.0[i] as i64)
}

/// Integers `v` on one axis with `round((v - t) / s) == p`.
///
/// In the scaled domain this is `[p - 1/2, p + 1/2)`, i.e.
/// `(2p - 1) num <= 2 (v - t) den < (2p + 1) num`.
#[inline]
pub fn children_range(p: i64, t: i64, s: ScaleFactor) -> Range<i64> {
    let (num, den) = (s.num() as i64, s.den() as i64);
    let lo = ceil_div((2 * p - 1) * num, 2 * den);
    let hi = ceil_div((2 * p + 1) * num, 2 * den);
    lo + t..hi + t
}

/// Exact preimage of parent `p`: every integer coordinate that down-scales to it.
pub fn children_of(p: Point, s: ScaleFactor, t: Translation) -> Vec<[i64; 3]> {
    let rx = children_range(p[0] as i64, t.0[0] as i64, s);
    let ry = children_range(p[1] as i64, t.0[1] as i64, s);
    let rz = children_range(p[2] as i64, t.0[2] as i64, s);
    let mut out = Vec::with_capacity(8);
    for x in rx {
        for y in ry.clone() {
            for z in rz.clone() {
                out.push([x, y, z]);
            }
        }
    }
    out
}

pub(crate) fn to_point(v: [i64; 3]) -> Result<Point> {
    let limit = 1i64 << MAX_DEPTH;
    for &c in &v {
        if c >= limit {
            return Err(Error::CoordinateOverflow { value: c, max_depth: MAX_DEPTH });
        }
        if c < 0 {
            return Err(Error::OutOfGrid { x: v[0], y: v[1], z: v[2], depth: MAX_DEPTH });
        }
    }
    Ok([v[0] as i32, v[1] as i32, v[2] as i32])
}

/// Down-scales `cloud` by `s` after subtracting `t`, merging duplicates.
pub fn downscale(cloud: &VoxelCloud, s: ScaleFactor, t: Translation) -> Result<VoxelCloud> {
    s.require_downscale()?;
    if let Some((lo, _)) = cloud.bounds() {
        if let Some(axis) = (0..3).find(|&i| t.0[i] > lo[i]) {
            return Err(Error::TranslationAboveMinimum { axis });
        }
    } else {
        return Ok(VoxelCloud::empty(1));
    }
    let pts = cloud
        .iter()
        .map(|&v| to_point(downscale_point(v, s, t)))
        .collect::<Result<Vec<_>>>()?;
    VoxelCloud::from_points(pts)
}

/// Nearest-neighbour interpolation back to the original resolution.
pub fn upscale_nni(cloud: &VoxelCloud, s: ScaleFactor, t: Translation) -> Result<VoxelCloud> {
    s.require_downscale()?;
    let pts = cloud
        .iter()
        .map(|&p| to_point(upscale_point(p, s, t)))
        .collect::<Result<Vec<_>>>()?;
    VoxelCloud::from_points(pts)
}

/// Multiplies every coordinate by the power of two `k`.
pub fn integer_upscale(cloud: &VoxelCloud, k: u32) -> Result<VoxelCloud> {
    if !k.is_power_of_two() {
        return Err(Error::InvalidScale(format!("integer up-scale {k} is not a power of two")));
    }
    let k = k as i64;
    let pts = cloud
        .iter()
        .map(|p| to_point([p[0] as i64 * k, p[1] as i64 * k, p[2] as i64 * k]))
        .collect::<Result<Vec<_>>>()?;
    VoxelCloud::from_points(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(n: u32, d: u32) -> ScaleFactor {
        ScaleFactor::new(n, d).unwrap()
    }

    fn cloud(pts: &[Point]) -> VoxelCloud {
        VoxelCloud::from_points(pts.iter().copied()).unwrap()
    }

    #[test]
    fn round_div_ties_go_up() {
        assert_eq!(round_div(1, 2), 1);
        assert_eq!(round_div(-1, 2), 0);
        assert_eq!(round_div(3, 2), 2);
        assert_eq!(round_div(-3, 2), -1);
        assert_eq!(round_div(7, 3), 2);
    }

    #[test]
    fn downscale_by_two_on_a_row() {
        let c = cloud(&[[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]]);
        let d = downscale(&c, ScaleFactor::TWO, Translation::ZERO).unwrap();
        assert_eq!(d.points(), &[[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
    }

    #[test]
    fn downscale_keeps_coarse_lattice() {
        let c = cloud(&[[0, 0, 0], [2, 0, 0]]);
        let d = downscale(&c, ScaleFactor::TWO, Translation::ZERO).unwrap();
        assert_eq!(d.points(), &[[0, 0, 0], [1, 0, 0]]);
    }

    #[test]
    fn downscale_single_point_to_origin() {
        let c = cloud(&[[2, 3, 4]]);
        let d = downscale(&c, ScaleFactor::TWO, Translation([2, 3, 4])).unwrap();
        assert_eq!(d.points(), &[[0, 0, 0]]);
    }

    #[test]
    fn downscale_rejects_translation_above_min() {
        let c = cloud(&[[2, 3, 4]]);
        assert!(matches!(
            downscale(&c, ScaleFactor::TWO, Translation([3, 0, 0])),
            Err(Error::TranslationAboveMinimum { axis: 0 })
        ));
        assert!(downscale(&c, ScaleFactor::ONE, Translation::ZERO).is_err());
    }

    #[test]
    fn children_examples() {
        assert_eq!(
            children_of([2, 0, 0], sf(4, 3), Translation::ZERO),
            vec![[2, 0, 0], [3, 0, 0]]
        );
        let c = children_of([1, 1, 1], ScaleFactor::TWO, Translation::ZERO);
        assert_eq!(c.len(), 8);
        assert!(c.iter().all(|v| v.iter().all(|&x| x == 1 || x == 2)));
        assert_eq!(children_of([0, 0, 0], sf(16, 15), Translation::ZERO), vec![[0, 0, 0]]);
    }

    #[test]
    fn children_shift_with_translation() {
        let t = Translation([10, 20, 30]);
        let base = children_of([2, 0, 0], sf(4, 3), Translation::ZERO);
        let moved = children_of([2, 0, 0], sf(4, 3), t);
        for (a, b) in base.iter().zip(&moved) {
            assert_eq!([a[0] + 10, a[1] + 20, a[2] + 30], *b);
        }
    }

    #[test]
    fn nni_examples() {
        let c = cloud(&[[0, 0, 0]]);
        assert_eq!(upscale_nni(&c, sf(4, 3), Translation::ZERO).unwrap().points(), &[[0, 0, 0]]);
        let c = cloud(&[[5, 5, 5]]);
        assert_eq!(upscale_nni(&c, sf(4, 3), Translation::ZERO).unwrap().points(), &[[7, 7, 7]]);
    }

    #[test]
    fn integer_upscale_examples() {
        let c = cloud(&[[1, 2, 3]]);
        assert_eq!(integer_upscale(&c, 1).unwrap(), c);
        assert_eq!(integer_upscale(&c, 4).unwrap().points(), &[[4, 8, 12]]);
        assert!(integer_upscale(&c, 3).is_err());
        let big = cloud(&[[1 << 23, 0, 0]]);
        assert!(matches!(integer_upscale(&big, 2), Err(Error::CoordinateOverflow { .. })));
    }
}
