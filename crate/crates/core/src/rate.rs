use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::fixed::{self, ParsedDecimal};
use crate::money::Money;

/// Number of fractional digits a [`Rate`] resolves.
pub const RATE_DIGITS: u32 = 12;
const RATE_UNIT: i64 = 1_000_000_000_000;

/// An annual nominal rate as an exact decimal fraction (`0.1275` is 12.75%),
/// resolved to 12 fractional digits.
///
/// Construction enforces `rate > -1`; operations that price or classify
/// additionally require a non-negative rate and check it themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rate(i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RateError {
    #[error("{0:?} is not a decimal rate")]
    Malformed(String),
    #[error("{0:?} has more than {RATE_DIGITS} fractional digits")]
    TooPrecise(String),
    #[error("rate {0} must be greater than -1")]
    OutOfDomain(String),
}

impl Rate {
    pub const ZERO: Rate = Rate(0);

    /// Builds a rate from basis points, e.g. `Rate::from_bps(1275)` is 12.75%.
    pub fn from_bps(bps: i64) -> Result<Self, RateError> {
        Self::from_scaled(i128::from(bps) * i128::from(RATE_UNIT / 10_000))
    }

    /// Builds a rate from its value in units of `10^-12`.
    pub fn from_scaled(units: i128) -> Result<Self, RateError> {
        let units = i64::try_from(units).map_err(|_| RateError::OutOfDomain(units.to_string()))?;
        if units <= -RATE_UNIT {
            return Err(RateError::OutOfDomain(fixed::render_scaled(
                i128::from(units),
                RATE_DIGITS,
                None,
            )));
        }
        Ok(Rate(units))
    }

    /// Nearest representable rate to a float fraction.
    pub fn from_f64(value: f64) -> Result<Self, RateError> {
        let scaled = (value * RATE_UNIT as f64).round_ties_even();
        if !scaled.is_finite() || scaled.abs() >= i64::MAX as f64 {
            return Err(RateError::OutOfDomain(value.to_string()));
        }
        Self::from_scaled(scaled as i128)
    }

    /// Parses `"0.1275"` or `"12.75%"`.
    pub fn parse(text: &str) -> Result<Self, RateError> {
        let (body, scale) = match text.strip_suffix('%') {
            Some(body) => (body, RATE_DIGITS - 2),
            None => (text, RATE_DIGITS),
        };
        match fixed::parse_scaled(body, scale) {
            None => Err(RateError::Malformed(text.to_owned())),
            Some(ParsedDecimal::TooPrecise) => Err(RateError::TooPrecise(text.to_owned())),
            Some(ParsedDecimal::Value(v)) => Self::from_scaled(v),
        }
    }

    pub const fn scaled(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / RATE_UNIT as f64
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// `self × amount`, rounded half-to-even to the centavo.
    pub fn apply(self, amount: Money) -> Money {
        let product = i128::from(amount.centavos()) * i128::from(self.0);
        let centavos = fixed::div_round_half_even(product, i128::from(RATE_UNIT));
        Money::from_centavos(i64::try_from(centavos).expect("money overflow"))
    }

    /// Plain decimal fraction with trailing zeros trimmed: `"0.1275"`.
    pub fn to_plain(self) -> String {
        fixed::render_scaled(i128::from(self.0), RATE_DIGITS, None)
    }

    /// Percentage rendering with trailing zeros trimmed: `"12.75%"`.
    pub fn to_percent(self) -> String {
        format!("{}%", fixed::render_scaled(i128::from(self.0), RATE_DIGITS - 2, None))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_percent())
    }
}

impl FromStr for Rate {
    type Err = RateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rate::parse(s)
    }
}

impl Rate {
    /// Signed difference as a rate. Fails only when the result is `<= -1`.
    pub fn checked_sub(self, rhs: Rate) -> Result<Rate, RateError> {
        Rate::from_scaled(i128::from(self.0) - i128::from(rhs.0))
    }

    pub fn checked_neg(self) -> Result<Rate, RateError> {
        Rate::from_scaled(-i128::from(self.0))
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_plain())
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Rate::parse(&text).map_err(serde::de::Error::custom)
    }
}
