//! Down-up-scaling wrapper for sparse clouds: densify by a power of two
//! before coding, undo it after super-resolution.

use super::successive::super_resolve;
use crate::error::{Error, Result};
use crate::geometry::{downscale, integer_upscale, translation_of, ScaleFactor, Translation, VoxelCloud};

/// Largest pre-scale that can be signalled.
pub const MAX_S_PRIME: u32 = 2048;

/// Fraction of points a pre-scale must keep to count as "densify only".
pub const RETAIN_FRACTION: f64 = 0.95;

/// Largest power of two `s' <= 2048` whose down-scale keeps at least 95% of
/// the points of `v`; 1 when no pre-scale qualifies.
pub fn choose_s_prime(v: &VoxelCloud) -> Result<u32> {
    let t = translation_of(v)?;
    let need = RETAIN_FRACTION * v.len() as f64;
    let mut best = 1;
    let mut k = 2;
    while k <= MAX_S_PRIME {
        let kept = downscale(v, ScaleFactor::integer(k)?, t)?.len();
        if kept as f64 >= need {
            best = k;
        }
        k *= 2;
    }
    Ok(best)
}

fn check_s_prime(s_prime: u32) -> Result<()> {
    if s_prime.is_power_of_two() && s_prime <= MAX_S_PRIME {
        Ok(())
    } else {
        Err(Error::InvalidScale(format!("s' = {s_prime} must be a power of two <= {MAX_S_PRIME}")))
    }
}

/// Encoder side: moves `v` to the origin and divides by `s_prime`.
/// Returns the densified cloud and the translation to restore later.
pub fn dus_prepare(v: &VoxelCloud, s_prime: u32) -> Result<(VoxelCloud, Translation)> {
    check_s_prime(s_prime)?;
    let t0 = translation_of(v)?;
    let dense = if s_prime == 1 {
        let d = t0.components();
        v.shifted([-d[0], -d[1], -d[2]])?
    } else {
        downscale(v, ScaleFactor::integer(s_prime)?, t0)?
    };
    Ok((dense, t0))
}

/// Decoder side: multiplies by `s_prime` and moves back by `t0`.
pub fn dus_restore(v_sr: &VoxelCloud, s_prime: u32, t0: Translation) -> Result<VoxelCloud> {
    check_s_prime(s_prime)?;
    integer_upscale(v_sr, s_prime)?.shifted(t0.components())
}

/// Simulated DUS pipeline: pre-scale by `s_prime`, simulate the codec with
/// a down-scale by `s`, super-resolve, then undo the pre-scale.
pub fn dus_super_resolve(v: &VoxelCloud, s: ScaleFactor, s_prime: u32) -> Result<VoxelCloud> {
    let (dense, t0) = dus_prepare(v, s_prime)?;
    let t1 = translation_of(&dense)?;
    let decoded = downscale(&dense, s, t1)?;
    dus_super_resolve_decoded(&decoded, s, t1, s_prime, t0)
}

/// DUS decoder path for an externally decoded cloud `v_d`.
pub fn dus_super_resolve_decoded(
    v_d: &VoxelCloud,
    s: ScaleFactor,
    t1: Translation,
    s_prime: u32,
    t0: Translation,
) -> Result<VoxelCloud> {
    let v_sr = super_resolve(v_d, s, t1)?;
    dus_restore(&v_sr, s_prime, t0)
}
