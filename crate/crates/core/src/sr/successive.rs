use log::debug;

use super::apply::apply_sr;
use super::lut::build_lut;
use crate::error::Result;
use crate::geometry::{ScaleFactor, Translation, VoxelCloud};

/// Splits `s` into single-pass factors: as many 2s as needed, then the
/// fractional residue in `(1, 2]`. The exact product equals `s`.
pub fn factorize_scale(s: ScaleFactor) -> Result<Vec<ScaleFactor>> {
    s.require_downscale()?;
    let mut factors = Vec::new();
    let mut rest = s;
    while !rest.le(&ScaleFactor::TWO) {
        factors.push(ScaleFactor::TWO);
        rest = rest.checked_div(ScaleFactor::TWO)?;
    }
    factors.push(rest);
    Ok(factors)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PassStats {
    pub factor: ScaleFactor,
    pub translation: Translation,
    pub lut_entries: usize,
    pub points_in: usize,
    pub points_out: usize,
}

#[derive(Clone, Debug)]
pub struct SrRun {
    pub output: VoxelCloud,
    pub passes: Vec<PassStats>,
}

/// Runs one self-trained SR pass per factor of `s`. Only the last pass
/// applies `t`; intermediate passes work at the origin.
pub fn super_resolve_traced(v_d: &VoxelCloud, s: ScaleFactor, t: Translation) -> Result<SrRun> {
    let factors = factorize_scale(s)?;
    let last = factors.len() - 1;
    let mut current = v_d.clone();
    let mut passes = Vec::with_capacity(factors.len());
    for (i, f) in factors.into_iter().enumerate() {
        let tf = if i == last { t } else { Translation::ZERO };
        let lut = build_lut(&current, f)?;
        let next = apply_sr(&current, f, tf, &lut)?;
        debug!("SR pass {i}: x{f}, {} -> {} points, {} LUT entries", current.len(), next.len(), lut.len());
        passes.push(PassStats {
            factor: f,
            translation: tf,
            lut_entries: lut.len(),
            points_in: current.len(),
            points_out: next.len(),
        });
        current = next;
    }
    Ok(SrRun { output: current, passes })
}

pub fn super_resolve(v_d: &VoxelCloud, s: ScaleFactor, t: Translation) -> Result<VoxelCloud> {
    super_resolve_traced(v_d, s, t).map(|run| run.output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{downscale, translation_of};
    use crate::sr::build_lut;

    fn sf(n: u32, d: u32) -> ScaleFactor {
        ScaleFactor::new(n, d).unwrap()
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factorize_scale(sf(4, 3)).unwrap(), vec![sf(4, 3)]);
        assert_eq!(factorize_scale(sf(8, 1)).unwrap(), vec![ScaleFactor::TWO; 3]);
        assert_eq!(factorize_scale(sf(16, 3)).unwrap(), vec![ScaleFactor::TWO, ScaleFactor::TWO, sf(4, 3)]);
        assert_eq!(factorize_scale(ScaleFactor::TWO).unwrap(), vec![ScaleFactor::TWO]);
        assert!(factorize_scale(ScaleFactor::ONE).is_err());
    }

    #[test]
    fn single_factor_matches_one_pass() {
        let pts = (0..10 * 10 * 10).map(|i| [i / 100, (i / 10) % 10, i % 10]).filter(|p| p[0] * p[1] < 20);
        let v_d = VoxelCloud::from_points(pts).unwrap();
        let s = sf(3, 2);
        let t = Translation([1, 1, 1]);
        let lut = build_lut(&v_d, s).unwrap();
        assert_eq!(super_resolve(&v_d, s, t).unwrap(), apply_sr(&v_d, s, t, &lut).unwrap());
    }

    #[test]
    fn scale_four_on_filled_cube_runs_two_passes() {
        let v = VoxelCloud::from_points((0..32 * 32 * 32).map(|i| [i / 1024, (i / 32) % 32, i % 32])).unwrap();
        let s = sf(4, 1);
        let t = translation_of(&v).unwrap();
        let v_d = downscale(&v, s, t).unwrap();
        let run = super_resolve_traced(&v_d, s, t).unwrap();
        assert_eq!(run.passes.len(), 2);
        let (lo_d, hi_d) = v_d.bounds().unwrap();
        let (lo, hi) = run.output.bounds().unwrap();
        for i in 0..3 {
            let extent_d = (hi_d[i] - lo_d[i]) as f64;
            let extent = (hi[i] - lo[i]) as f64;
            assert!((extent - 4.0 * extent_d).abs() <= 4.0, "axis {i}: {extent} vs {extent_d}");
        }
    }
}
