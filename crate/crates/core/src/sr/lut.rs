use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::neighborhood::{neighborhood_code, NeighborhoodCode};
use crate::error::{Error, Result};
use crate::geometry::{children_range, downscale, translation_of, Point, ScaleFactor, Translation, VoxelCloud};

/// Child position relative to the componentwise minimum of a parent's
/// preimage, packed as `ox * 4 + oy * 2 + oz` with each offset in `{0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChildSlot(u8);

impl ChildSlot {
    pub const COUNT: usize = 8;

    pub fn new(ox: u8, oy: u8, oz: u8) -> Self {
        debug_assert!(ox < 2 && oy < 2 && oz < 2);
        ChildSlot(ox * 4 + oy * 2 + oz)
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < Self::COUNT).then_some(ChildSlot(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn offset(self) -> [u8; 3] {
        [self.0 >> 2, (self.0 >> 1) & 1, self.0 & 1]
    }
}

/// Preimage of one parent voxel, described by its minimum corner and the
/// number of children along each axis (1 or 2 for `1 < s <= 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChildSet {
    pub min: [i64; 3],
    pub extent: [u8; 3],
}

impl ChildSet {
    pub fn new(p: Point, s: ScaleFactor, t: Translation) -> Self {
        let mut min = [0i64; 3];
        let mut extent = [0u8; 3];
        for i in 0..3 {
            let r = children_range(p[i] as i64, t.0[i] as i64, s);
            min[i] = r.start;
            extent[i] = (r.end - r.start).clamp(0, 2) as u8;
        }
        ChildSet { min, extent }
    }

    /// Geometrically valid slots with their absolute coordinates.
    pub fn slots(&self) -> impl Iterator<Item = (ChildSlot, [i64; 3])> + '_ {
        (0..ChildSlot::COUNT as u8).filter_map(move |i| {
            let slot = ChildSlot(i);
            let o = slot.offset();
            (0..3).all(|a| o[a] < self.extent[a]).then(|| {
                (slot, [self.min[0] + o[0] as i64, self.min[1] + o[1] as i64, self.min[2] + o[2] as i64])
            })
        })
    }
}

pub(crate) fn contains_i64(cloud: &VoxelCloud, v: [i64; 3]) -> bool {
    let in_range = v.iter().all(|&c| c >= i32::MIN as i64 && c <= i32::MAX as i64);
    in_range && cloud.contains(&[v[0] as i32, v[1] as i32, v[2] as i32])
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotCounts {
    pub occupied: u32,
    pub total: u32,
}

impl SlotCounts {
    /// Majority rule: occupied in at least half of the observed cases.
    pub fn predicts_occupied(&self) -> bool {
        self.total > 0 && 2 * self.occupied as u64 >= self.total as u64
    }
}

pub type SlotTable = [SlotCounts; ChildSlot::COUNT];

/// Neighbourhood code to per-slot occupancy counters, trained for one scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupancyLut {
    scale: ScaleFactor,
    entries: HashMap<NeighborhoodCode, SlotTable>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LutRow {
    code: u32,
    slot: u8,
    occupied: u32,
    total: u32,
}

impl OccupancyLut {
    pub fn new(scale: ScaleFactor) -> Self {
        OccupancyLut { scale, entries: HashMap::new() }
    }

    pub fn scale(&self) -> ScaleFactor {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, code: NeighborhoodCode) -> Option<&SlotTable> {
        self.entries.get(&code)
    }

    /// Counters for a `(code, slot)` pair; all zero if never observed.
    pub fn counts(&self, code: NeighborhoodCode, slot: ChildSlot) -> SlotCounts {
        self.get(code).map(|t| t[slot.index()]).unwrap_or_default()
    }

    pub fn record(&mut self, code: NeighborhoodCode, slot: ChildSlot, occupied: bool) {
        let c = &mut self.entries.entry(code).or_default()[slot.index()];
        c.total += 1;
        c.occupied += occupied as u32;
    }

    /// Entries sorted by code, for deterministic dumps.
    pub fn sorted_entries(&self) -> Vec<(NeighborhoodCode, SlotTable)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, t)| (*k, *t)).collect();
        v.sort_unstable_by_key(|(k, _)| *k);
        v
    }

    /// Dumps non-empty counters as CSV `code,slot,occupied,total`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for (code, table) in self.sorted_entries() {
            for (slot, c) in table.iter().enumerate().filter(|(_, c)| c.total > 0) {
                wtr.serialize(LutRow { code: code.0, slot: slot as u8, occupied: c.occupied, total: c.total })?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, scale: ScaleFactor) -> Result<Self> {
        let mut lut = OccupancyLut::new(scale);
        for row in csv::Reader::from_reader(r).deserialize::<LutRow>() {
            let row = row?;
            let slot = ChildSlot::from_index(row.slot as usize)
                .ok_or_else(|| Error::Csv(format!("slot {} out of range", row.slot)))?;
            if row.code >= 1 << 26 || row.occupied > row.total {
                return Err(Error::Csv(format!("invalid LUT row {row:?}")));
            }
            lut.entries.entry(NeighborhoodCode(row.code)).or_default()[slot.index()] =
                SlotCounts { occupied: row.occupied, total: row.total };
        }
        Ok(lut)
    }

    fn merge(mut self, other: OccupancyLut) -> Self {
        for (code, table) in other.entries {
            let dst = self.entries.entry(code).or_default();
            for (d, s) in dst.iter_mut().zip(table) {
                d.occupied += s.occupied;
                d.total += s.total;
            }
        }
        self
    }
}

/// Fails unless `1 < s <= 2`, the range a single SR pass handles.
pub(crate) fn require_single_pass_scale(s: ScaleFactor) -> Result<()> {
    if s.is_downscale() && s.le(&ScaleFactor::TWO) {
        Ok(())
    } else {
        Err(Error::InvalidScale(format!("single SR pass needs 1 < s <= 2, got {s}")))
    }
}

/// Trains a LUT on `v_d` by down-scaling it once more by `s` and recording,
/// for every coarse voxel, which of its children are occupied in `v_d`.
pub fn build_lut(v_d: &VoxelCloud, s: ScaleFactor) -> Result<OccupancyLut> {
    require_single_pass_scale(s)?;
    let t = translation_of(v_d)?;
    let v_dd = downscale(v_d, s, t)?;
    let lut = v_dd
        .points()
        .par_iter()
        .fold(
            || OccupancyLut::new(s),
            |mut lut, &p| {
                let code = neighborhood_code(&v_dd, p);
                for (slot, child) in ChildSet::new(p, s, t).slots() {
                    lut.record(code, slot, contains_i64(v_d, child));
                }
                lut
            },
        )
        .reduce(|| OccupancyLut::new(s), OccupancyLut::merge);
    Ok(lut)
}
