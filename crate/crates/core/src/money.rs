use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::fixed::{self, ParsedDecimal};

const CENTAVOS_PER_PESO: i64 = 100;

/// An exact, signed amount of Philippine pesos held as a count of centavos.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoneyError {
    #[error("{0:?} is not a decimal peso amount")]
    Malformed(String),
    #[error("{0:?} has more than 2 fractional digits")]
    TooPrecise(String),
    #[error("{0:?} is out of range")]
    Overflow(String),
}

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_centavos(centavos: i64) -> Self {
        Money(centavos)
    }

    pub const fn from_pesos(pesos: i64) -> Self {
        Money(pesos * CENTAVOS_PER_PESO)
    }

    /// Parses a peso amount such as `"11566298682.89"`. More than two
    /// fractional digits are rejected rather than rounded.
    pub fn parse(text: &str) -> Result<Self, MoneyError> {
        match fixed::parse_scaled(text, 2) {
            None => Err(MoneyError::Malformed(text.to_owned())),
            Some(ParsedDecimal::TooPrecise) => Err(MoneyError::TooPrecise(text.to_owned())),
            Some(ParsedDecimal::Value(v)) => i64::try_from(v)
                .map(Money)
                .map_err(|_| MoneyError::Overflow(text.to_owned())),
        }
    }

    pub const fn centavos(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn abs(self) -> Self {
        Money(self.0.abs())
    }

    pub fn max(self, other: Self) -> Self {
        Money(self.0.max(other.0))
    }

    pub fn checked_add(self, other: Self) -> Option<Self> {
        self.0.checked_add(other.0).map(Money)
    }

    pub fn checked_sub(self, other: Self) -> Option<Self> {
        self.0.checked_sub(other.0).map(Money)
    }

    /// Amount in pesos as a float, for pricing arithmetic only.
    pub fn to_pesos_f64(self) -> f64 {
        self.0 as f64 / CENTAVOS_PER_PESO as f64
    }

    /// Rounds a (finite) centavo amount half-to-even. Returns `None` when the
    /// value is not finite or does not fit.
    pub fn from_centavos_f64(centavos: f64) -> Option<Self> {
        let rounded = centavos.round_ties_even();
        if rounded.is_finite() && rounded.abs() < i64::MAX as f64 {
            Some(Money(rounded as i64))
        } else {
            None
        }
    }

    /// Plain rendering used by CSV and JSON: `"11566298682.89"`.
    pub fn to_plain(self) -> String {
        fixed::render_scaled(i128::from(self.0), 2, Some(2))
    }

    /// Report rendering with thousands separators: `"11,566,298,682.89"`.
    pub fn to_grouped(self) -> String {
        let plain = self.to_plain();
        let (sign, rest) = match plain.strip_prefix('-') {
            Some(r) => ("-", r),
            None => ("", plain.as_str()),
        };
        let (int_part, frac) = rest.split_once('.').expect("plain money has a fraction");
        let mut grouped = String::with_capacity(int_part.len() + int_part.len() / 3);
        for (i, ch) in int_part.chars().enumerate() {
            if i > 0 && (int_part.len() - i) % 3 == 0 {
                grouped.push(',');
            }
            grouped.push(ch);
        }
        format!("{sign}{grouped}.{frac}")
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl FromStr for Money {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Money::parse(s)
    }
}

impl Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        self.checked_add(rhs).expect("money overflow")
    }
}

impl Sub for Money {
    type Output = Money;

    fn sub(self, rhs: Money) -> Money {
        self.checked_sub(rhs).expect("money overflow")
    }
}

impl Neg for Money {
    type Output = Money;

    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_plain())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Money::parse(&text).map_err(serde::de::Error::custom)
    }
}
