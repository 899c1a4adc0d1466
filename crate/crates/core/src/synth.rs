//! Synthetic voxelized test clouds.
//!
//! Surfaces are the boundary voxels of a solid: voxels inside the shape
//! with at least one 6-neighbour outside it.

use crate::error::Result;
use crate::geometry::{Point, VoxelCloud};

fn boundary_of(depth: u32, inside: impl Fn(f64, f64, f64) -> bool) -> Result<VoxelCloud> {
    let n = 1i32 << depth;
    let at = |x: i32, y: i32, z: i32| inside(x as f64, y as f64, z as f64);
    let mut pts: Vec<Point> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !at(x, y, z) {
                    continue;
                }
                let exposed = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
                    .iter()
                    .any(|d| !at(x + d[0], y + d[1], z + d[2]));
                if exposed {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    VoxelCloud::new(pts, depth)
}

/// Sphere surface centred in the `2^depth` grid with a 2-voxel margin.
pub fn sphere(depth: u32) -> Result<VoxelCloud> {
    let c = ((1u32 << depth) as f64 - 1.0) / 2.0;
    let r = c - 2.0;
    boundary_of(depth, move |x, y, z| (x - c).powi(2) + (y - c).powi(2) + (z - c).powi(2) <= r * r)
}

/// Surface of an axis-aligned cube spanning most of the grid.
pub fn cube_shell(depth: u32) -> Result<VoxelCloud> {
    let n = (1u32 << depth) as f64;
    let (lo, hi) = (2.0, n - 3.0);
    boundary_of(depth, move |x, y, z| [x, y, z].iter().all(|&v| v >= lo && v <= hi))
}

/// Torus surface with its axis along z.
pub fn torus(depth: u32) -> Result<VoxelCloud> {
    let c = ((1u32 << depth) as f64 - 1.0) / 2.0;
    let minor = c * 0.3;
    let major = c - minor - 2.0;
    boundary_of(depth, move |x, y, z| {
        let ring = ((x - c).powi(2) + (y - c).powi(2)).sqrt() - major;
        ring * ring + (z - c).powi(2) <= minor * minor
    })
}

/// Solid cube `[offset, offset + side)^3`.
pub fn filled_cube(side: i32, offset: i32) -> Result<VoxelCloud> {
    lattice(side, 1, offset)
}

/// `n^3` points spaced `spacing` apart starting at `offset`.
pub fn lattice(n: i32, spacing: i32, offset: i32) -> Result<VoxelCloud> {
    VoxelCloud::from_points((0..n * n * n).map(|i| {
        [offset + spacing * (i / (n * n)), offset + spacing * ((i / n) % n), offset + spacing * (i % n)]
    }))
}

/// Looks up a generator by name: `sphere`, `cube_shell`, `torus`.
pub fn by_name(name: &str, depth: u32) -> Option<Result<VoxelCloud>> {
    match name {
        "sphere" => Some(sphere(depth)),
        "cube_shell" | "cube-shell" => Some(cube_shell(depth)),
        "torus" => Some(torus(depth)),
        _ => None,
    }
}
