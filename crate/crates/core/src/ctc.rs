//! G-PCC common test condition rate points.
//!
//! Each rate point is defined by a `positionQuantizationScale` (pqs); the
//! down-scale factor is its inverse.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::ScaleFactor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RateId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl RateId {
    pub const ALL: [RateId; 6] = [RateId::R1, RateId::R2, RateId::R3, RateId::R4, RateId::R5, RateId::R6];

    fn column(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.column() + 1)
    }
}

impl FromStr for RateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let idx = s
            .strip_prefix(['R', 'r'])
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|d| (1..=6).contains(d))
            .ok_or_else(|| Error::Config(format!("unknown rate id {s:?}, expected R1..R6")))?;
        Ok(RateId::ALL[idx - 1])
    }
}

/// pqs as `(num, den)` for R1..R6, per geometry precision.
const PQS_PRECISION_10: [(u32, u32); 6] = [(1, 8), (1, 4), (1, 2), (3, 4), (7, 8), (15, 16)];
const PQS_PRECISION_11: [(u32, u32); 6] = [(1, 16), (1, 8), (1, 4), (1, 2), (3, 4), (7, 8)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CtcRatePoint {
    pub precision: u32,
    pub rate: RateId,
    pub pqs: ScaleFactor,
    pub scale: ScaleFactor,
}

pub fn ctc_rate_point(precision: u32, rate: RateId) -> Result<CtcRatePoint> {
    let table = match precision {
        10 => &PQS_PRECISION_10,
        11 => &PQS_PRECISION_11,
        p => return Err(Error::Config(format!("no CTC rate points for geometry precision {p}"))),
    };
    let (num, den) = table[rate.column()];
    let pqs = ScaleFactor::new(num, den)?;
    Ok(CtcRatePoint { precision, rate, pqs, scale: pqs.recip() })
}

/// Down-scale factor `1 / pqs` for a CTC cell.
pub fn ctc_scale(precision: u32, rate: RateId) -> Result<ScaleFactor> {
    ctc_rate_point(precision, rate).map(|p| p.scale)
}

/// Parses `PREC:RID`, e.g. `10:R4`.
pub fn parse_ctc_cell(s: &str) -> Result<(u32, RateId)> {
    let (prec, rid) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("expected PREC:RID, got {s:?}")))?;
    let prec = prec
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad geometry precision {prec:?}")))?;
    Ok((prec, rid.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(ctc_scale(10, RateId::R4).unwrap(), ScaleFactor::new(4, 3).unwrap());
        assert_eq!(ctc_scale(11, RateId::R1).unwrap(), ScaleFactor::integer(16).unwrap());
        assert_eq!(ctc_scale(10, RateId::R6).unwrap(), ScaleFactor::new(16, 15).unwrap());
    }

    #[test]
    fn rejects_unknown_cells() {
        assert!(ctc_scale(12, RateId::R1).is_err());
        assert!("R7".parse::<RateId>().is_err());
        assert!("R0".parse::<RateId>().is_err());
        assert!(parse_ctc_cell("10").is_err());
    }

    #[test]
    fn parses_cells() {
        assert_eq!(parse_ctc_cell("11:R2").unwrap(), (11, RateId::R2));
        assert_eq!(RateId::R5.to_string(), "R5");
    }
}
