use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rate::Rate;

/// Market rate prevailing at the beginning of a (1-based) year of an
/// instrument's life.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioYear {
    pub year: u32,
    pub market_rate: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("scenario is empty")]
    Empty,
    #[error("scenario is missing year {0}")]
    MissingYear(u32),
    #[error("scenario year {0} is out of order or repeated")]
    OutOfOrder(u32),
    #[error("market rate for year {year} is negative ({rate})")]
    NegativeRate { year: u32, rate: Rate },
}

/// Per-year market rates, contiguous from year 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScenarioYear>", into = "Vec<ScenarioYear>")]
pub struct RateScenario {
    years: Vec<ScenarioYear>,
}

impl RateScenario {
    pub fn new(years: Vec<ScenarioYear>) -> Result<Self, ScenarioError> {
        if years.is_empty() {
            return Err(ScenarioError::Empty);
        }
        for (expected, entry) in (1u32..).zip(&years) {
            if entry.year > expected {
                return Err(ScenarioError::MissingYear(expected));
            }
            if entry.year < expected {
                return Err(ScenarioError::OutOfOrder(entry.year));
            }
            if entry.market_rate.is_negative() {
                return Err(ScenarioError::NegativeRate {
                    year: entry.year,
                    rate: entry.market_rate,
                });
            }
        }
        Ok(RateScenario { years })
    }

    /// Scenario listing `rates` for years 1, 2, ...
    pub fn from_rates<I: IntoIterator<Item = Rate>>(rates: I) -> Result<Self, ScenarioError> {
        RateScenario::new(
            (1u32..)
                .zip(rates)
                .map(|(year, market_rate)| ScenarioYear { year, market_rate })
                .collect(),
        )
    }

    /// Constant rate for years `1..=years`.
    pub fn flat(rate: Rate, years: u32) -> Result<Self, ScenarioError> {
        RateScenario::from_rates(std::iter::repeat_n(rate, years as usize))
    }

    pub fn rate_for(&self, year: u32) -> Option<Rate> {
        year.checked_sub(1)
            .and_then(|i| self.years.get(i as usize))
            .map(|e| e.market_rate)
    }

    pub fn last_year(&self) -> u32 {
        self.years.len() as u32
    }

    pub fn years(&self) -> &[ScenarioYear] {
        &self.years
    }
}

impl TryFrom<Vec<ScenarioYear>> for RateScenario {
    type Error = ScenarioError;

    fn try_from(years: Vec<ScenarioYear>) -> Result<Self, Self::Error> {
        RateScenario::new(years)
    }
}

impl From<RateScenario> for Vec<ScenarioYear> {
    fn from(scenario: RateScenario) -> Self {
        scenario.years
    }
}
