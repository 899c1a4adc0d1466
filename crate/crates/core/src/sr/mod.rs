//! Self-supervised fractional super-resolution.
//!
//! A LUT is trained on the decoded cloud itself: it is down-scaled once more
//! by the same factor, and for each coarse voxel the occupancy of its
//! children is recorded against its 26-neighbourhood. The LUT is then
//! applied to the decoded cloud to predict its own children.

mod apply;
mod dus;
mod lut;
mod neighborhood;
mod successive;

pub use apply::apply_sr;
pub use dus::{
    choose_s_prime, dus_prepare, dus_restore, dus_super_resolve, dus_super_resolve_decoded, MAX_S_PRIME,
    RETAIN_FRACTION,
};
pub use lut::{build_lut, ChildSet, ChildSlot, OccupancyLut, SlotCounts, SlotTable};
pub use neighborhood::{bit_index, neighborhood_code, NeighborhoodCode, NEIGHBOR_OFFSETS};
pub use successive::{factorize_scale, super_resolve, super_resolve_traced, PassStats, SrRun};
