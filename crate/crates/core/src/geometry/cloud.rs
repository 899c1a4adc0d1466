use std::collections::HashSet;
use std::ops::Add;

use crate::error::{Error, Result};

/// Integer voxel coordinate `[x, y, z]`.
pub type Point = [i32; 3];

/// Largest supported geometry precision in bits.
pub const MAX_DEPTH: u32 = 24;

/// Smallest depth `d >= 1` such that `max_coord < 2^d`.
pub fn depth_for(max_coord: u32) -> u32 {
    (u32::BITS - max_coord.leading_zeros()).max(1)
}

/// A deduplicated set of voxel coordinates on a `2^depth` grid.
///
/// Points are kept sorted so iteration order (and everything derived from
/// it) is deterministic. A hash index backs membership queries.
#[derive(Clone, Debug)]
pub struct VoxelCloud {
    points: Vec<Point>,
    index: HashSet<Point>,
    depth: u32,
}

impl PartialEq for VoxelCloud {
    fn eq(&self, other: &Self) -> bool {
        self.depth == other.depth && self.points == other.points
    }
}

impl Eq for VoxelCloud {}

impl VoxelCloud {
    pub fn empty(depth: u32) -> Self {
        VoxelCloud { points: Vec::new(), index: HashSet::new(), depth: depth.clamp(1, MAX_DEPTH) }
    }

    /// Builds a cloud at an explicit depth, rejecting points outside the grid.
    pub fn new(points: impl IntoIterator<Item = Point>, depth: u32) -> Result<Self> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::CoordinateOverflow { value: 1i64 << depth.min(62), max_depth: MAX_DEPTH });
        }
        let limit = (1i64 << depth) - 1;
        let mut points: Vec<Point> = points.into_iter().collect();
        for p in &points {
            if p.iter().any(|&c| c < 0 || c as i64 > limit) {
                return Err(Error::OutOfGrid { x: p[0] as i64, y: p[1] as i64, z: p[2] as i64, depth });
            }
        }
        points.sort_unstable();
        points.dedup();
        let index = points.iter().copied().collect();
        Ok(VoxelCloud { points, index, depth })
    }

    /// Builds a cloud whose depth is the smallest that fits every coordinate.
    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let points: Vec<Point> = points.into_iter().collect();
        let mut max = 0i64;
        for p in &points {
            for &c in p {
                if c < 0 {
                    return Err(Error::OutOfGrid { x: p[0] as i64, y: p[1] as i64, z: p[2] as i64, depth: MAX_DEPTH });
                }
                max = max.max(c as i64);
            }
        }
        if max >= 1i64 << MAX_DEPTH {
            return Err(Error::CoordinateOverflow { value: max, max_depth: MAX_DEPTH });
        }
        Self::new(points, depth_for(max as u32))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains(p)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `2^depth - 1`, the default PSNR peak.
    pub fn peak(&self) -> u32 {
        (1u32 << self.depth) - 1
    }

    /// Returns the same points at a different depth.
    pub fn with_depth(self, depth: u32) -> Result<Self> {
        Self::new(self.points, depth)
    }

    /// Componentwise minimum and maximum, or `None` for an empty cloud.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let first = *self.points.first()?;
        Some(self.points.iter().fold((first, first), |(mut lo, mut hi), p| {
            for i in 0..3 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
            (lo, hi)
        }))
    }

    /// Every point moved by `d`; the depth is re-inferred.
    pub fn shifted(&self, d: [i32; 3]) -> Result<Self> {
        Self::from_points(self.points.iter().map(|p| [p[0] + d[0], p[1] + d[1], p[2] + d[2]]))
    }
}

/// The translation `T` subtracted before down-scaling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Translation(pub Point);

impl Translation {
    pub const ZERO: Translation = Translation([0, 0, 0]);

    pub fn components(&self) -> Point {
        self.0
    }
}

impl Add<[i32; 3]> for Translation {
    type Output = Translation;

    fn add(self, d: [i32; 3]) -> Translation {
        Translation([self.0[0] + d[0], self.0[1] + d[1], self.0[2] + d[2]])
    }
}

/// Componentwise minimum of a non-empty cloud.
pub fn translation_of(cloud: &VoxelCloud) -> Result<Translation> {
    cloud.bounds().map(|(lo, _)| Translation(lo)).ok_or(Error::EmptyCloud)
}
