use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Interest compounding (and coupon) frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compounding {
    Annual,
    Semiannual,
}

impl Compounding {
    pub const fn periods_per_year(self) -> u32 {
        match self {
            Compounding::Annual => 1,
            Compounding::Semiannual => 2,
        }
    }
}

impl fmt::Display for Compounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Compounding::Annual => "annual",
            Compounding::Semiannual => "semiannual",
        })
    }
}

/// A whole or half-year span, stored as a count of half years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tenor {
    half_years: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TenorError {
    #[error("tenor {0} is not a non-negative whole or half number of years")]
    NotHalfYear(String),
    #[error("tenor of {0} years needs semiannual compounding")]
    HalfYearNeedsSemiannual(Tenor),
}

impl Tenor {
    pub const ZERO: Tenor = Tenor { half_years: 0 };

    pub const fn years(years: u32) -> Self {
        Tenor { half_years: years * 2 }
    }

    pub const fn from_half_years(half_years: u32) -> Self {
        Tenor { half_years }
    }

    pub fn from_years_f64(years: f64) -> Result<Self, TenorError> {
        let doubled = years * 2.0;
        if years.is_finite() && years >= 0.0 && doubled.fract() == 0.0 && doubled <= u32::MAX as f64 {
            Ok(Tenor { half_years: doubled as u32 })
        } else {
            Err(TenorError::NotHalfYear(years.to_string()))
        }
    }

    pub const fn half_years(self) -> u32 {
        self.half_years
    }

    /// The tenor in years when it is a whole number of years.
    pub const fn whole_years(self) -> Option<u32> {
        if self.half_years.is_multiple_of(2) {
            Some(self.half_years / 2)
        } else {
            None
        }
    }

    pub fn as_years_f64(self) -> f64 {
        f64::from(self.half_years) / 2.0
    }

    pub const fn is_zero(self) -> bool {
        self.half_years == 0
    }

    /// Number of compounding periods the tenor spans.
    pub fn periods(self, compounding: Compounding) -> Result<u32, TenorError> {
        match compounding {
            Compounding::Semiannual => Ok(self.half_years),
            Compounding::Annual => self
                .whole_years()
                .ok_or(TenorError::HalfYearNeedsSemiannual(self)),
        }
    }

    pub fn checked_sub(self, other: Tenor) -> Option<Tenor> {
        self.half_years
            .checked_sub(other.half_years)
            .map(Tenor::from_half_years)
    }
}

impl fmt::Display for Tenor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.whole_years() {
            Some(y) => write!(f, "{y}"),
            None => write!(f, "{}.5", self.half_years / 2),
        }
    }
}

impl Serialize for Tenor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.whole_years() {
            Some(y) => serializer.serialize_u32(y),
            None => serializer.serialize_f64(self.as_years_f64()),
        }
    }
}

impl<'de> Deserialize<'de> for Tenor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let years = f64::deserialize(deserializer)?;
        Tenor::from_years_f64(years).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_years_need_semiannual() {
        let t = Tenor::from_years_f64(10.5).unwrap();
        assert_eq!(t.periods(Compounding::Semiannual), Ok(21));
        assert!(t.periods(Compounding::Annual).is_err());
        assert_eq!(Tenor::years(10).periods(Compounding::Annual), Ok(10));
        assert_eq!(t.to_string(), "10.5");
    }

    #[test]
    fn rejects_other_fractions() {
        assert!(Tenor::from_years_f64(1.25).is_err());
        assert!(Tenor::from_years_f64(-1.0).is_err());
        assert!(Tenor::from_years_f64(f64::NAN).is_err());
    }
}
