use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An exact positive rational scale factor `num / den`, always stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScaleFactor {
    num: u32,
    den: u32,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ScaleFactor {
    pub const TWO: ScaleFactor = ScaleFactor { num: 2, den: 1 };
    pub const ONE: ScaleFactor = ScaleFactor { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        Self::from_u64(num as u64, den as u64)
    }

    fn from_u64(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidScale(format!("{num}/{den} must have non-zero terms")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if num > u32::MAX as u64 || den > u32::MAX as u64 {
            return Err(Error::InvalidScale(format!("{num}/{den} does not fit in 32-bit terms")));
        }
        Ok(ScaleFactor { num: num as u32, den: den as u32 })
    }

    pub fn integer(k: u32) -> Result<Self> {
        Self::new(k, 1)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `true` when `s > 1`, the domain of every down-scale and SR operation.
    pub fn is_downscale(&self) -> bool {
        self.num > self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn recip(&self) -> Self {
        ScaleFactor { num: self.den, den: self.num }
    }

    pub fn checked_mul(&self, other: ScaleFactor) -> Result<Self> {
        Self::from_u64(self.num as u64 * other.num as u64, self.den as u64 * other.den as u64)
    }

    pub fn checked_div(&self, other: ScaleFactor) -> Result<Self> {
        self.checked_mul(other.recip())
    }

    /// `self <= other`, compared exactly.
    pub fn le(&self, other: &ScaleFactor) -> bool {
        self.num as u64 * other.den as u64 <= other.num as u64 * self.den as u64
    }

    pub(crate) fn require_downscale(&self) -> Result<()> {
        if self.is_downscale() {
            Ok(())
        } else {
            Err(Error::InvalidScale(format!("{self} must be greater than 1")))
        }
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for ScaleFactor {
    type Err = Error;

    /// Accepts `N` or `N/D`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidScale(format!("cannot parse {s:?} as NUM/DEN")))
        };
        match s.split_once('/') {
            Some((n, d)) => ScaleFactor::new(parse(n)?, parse(d)?),
            None => ScaleFactor::new(parse(s)?, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let s = ScaleFactor::new(8, 6).unwrap();
        assert_eq!((s.num(), s.den()), (4, 3));
        assert_eq!(s.to_string(), "4/3");
    }

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!("16/15".parse::<ScaleFactor>().unwrap(), ScaleFactor::new(16, 15).unwrap());
        assert_eq!("2".parse::<ScaleFactor>().unwrap(), ScaleFactor::TWO);
        assert!("0/3".parse::<ScaleFactor>().is_err());
        assert!("a/b".parse::<ScaleFactor>().is_err());
    }

    #[test]
    fn exact_ordering_and_products() {
        let a = ScaleFactor::new(4, 3).unwrap();
        assert!(a.le(&ScaleFactor::TWO));
        assert!(!ScaleFactor::TWO.le(&a));
        assert_eq!(a.checked_mul(ScaleFactor::new(3, 2).unwrap()).unwrap(), ScaleFactor::TWO);
        assert!(!ScaleFactor::ONE.is_downscale());
    }
}
