use crate::geometry::{Point, VoxelCloud};

/// Occupancy of the 26 voxels surrounding a coordinate.
///
/// Offset `(dx, dy, dz)` maps to `i = (dx+1)*9 + (dy+1)*3 + (dz+1)`, shifted
/// down by one above the skipped centre (`i = 13`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodCode(pub u32);

impl NeighborhoodCode {
    pub const FULL: NeighborhoodCode = NeighborhoodCode((1 << 26) - 1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn count_occupied(self) -> u32 {
        self.0.count_ones()
    }
}

/// Bit position for a neighbour offset, `None` for the centre.
pub fn bit_index(dx: i32, dy: i32, dz: i32) -> Option<u32> {
    let i = ((dx + 1) * 9 + (dy + 1) * 3 + (dz + 1)) as u32;
    match i {
        13 => None,
        i if i > 13 => Some(i - 1),
        i => Some(i),
    }
}

/// The 26 neighbour offsets, ordered by bit position.
pub const NEIGHBOR_OFFSETS: [[i32; 3]; 26] = {
    let mut out = [[0; 3]; 26];
    let mut k = 0;
    let mut i = 0;
    while i < 27 {
        if i != 13 {
            out[k] = [i / 9 - 1, (i / 3) % 3 - 1, i % 3 - 1];
            k += 1;
        }
        i += 1;
    }
    out
};

pub fn neighborhood_code(cloud: &VoxelCloud, v: Point) -> NeighborhoodCode {
    let mut bits = 0u32;
    for (bit, d) in NEIGHBOR_OFFSETS.iter().enumerate() {
        if cloud.contains(&[v[0] + d[0], v[1] + d[1], v[2] + d[2]]) {
            bits |= 1 << bit;
        }
    }
    NeighborhoodCode(bits)
}
