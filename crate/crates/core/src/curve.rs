//! Yield curves and the deposit/lending spread behind maturity
//! transformation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixed;
use crate::money::Money;
use crate::rate::{Rate, RateError};
use crate::tenor::Tenor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvePoint {
    pub tenor: Tenor,
    #[serde(rename = "yield")]
    pub yield_rate: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("a yield curve needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("curve tenors must be positive")]
    ZeroTenor,
    #[error("curve tenor {0} is not above the previous tenor")]
    NotIncreasing(Tenor),
    #[error("tenor {tenor} lies outside the curve's [{first}, {last}]")]
    OutOfRange { tenor: Tenor, first: Tenor, last: Tenor },
}

/// Yields at strictly increasing tenors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CurvePoint>", into = "Vec<CurvePoint>")]
pub struct YieldCurve {
    points: Vec<CurvePoint>,
}

impl YieldCurve {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooFewPoints(points.len()));
        }
        if points[0].tenor.is_zero() {
            return Err(CurveError::ZeroTenor);
        }
        if let Some(w) = points.windows(2).find(|w| w[1].tenor <= w[0].tenor) {
            return Err(CurveError::NotIncreasing(w[1].tenor));
        }
        Ok(YieldCurve { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }
}

impl TryFrom<Vec<CurvePoint>> for YieldCurve {
    type Error = CurveError;

    fn try_from(points: Vec<CurvePoint>) -> Result<Self, Self::Error> {
        YieldCurve::new(points)
    }
}

impl From<YieldCurve> for Vec<CurvePoint> {
    fn from(curve: YieldCurve) -> Self {
        curve.points
    }
}

/// Linear interpolation between the neighbouring nodes; no extrapolation.
pub fn interpolate(curve: &YieldCurve, tenor: Tenor) -> Result<Rate, CurveError> {
    let points = curve.points();
    let first = points[0].tenor;
    let last = points[points.len() - 1].tenor;
    if tenor < first || tenor > last {
        return Err(CurveError::OutOfRange { tenor, first, last });
    }
    let upper = points
        .iter()
        .position(|p| p.tenor >= tenor)
        .expect("tenor is within range");
    let hi = points[upper];
    if hi.tenor == tenor {
        return Ok(hi.yield_rate);
    }
    let lo = points[upper - 1];
    let span = i128::from(hi.tenor.half_years() - lo.tenor.half_years());
    let offset = i128::from(tenor.half_years() - lo.tenor.half_years());
    let y0 = i128::from(lo.yield_rate.scaled());
    let y1 = i128::from(hi.yield_rate.scaled());
    let scaled = fixed::div_round_half_even(y0 * span + (y1 - y0) * offset, span);
    Ok(Rate::from_scaled(scaled).expect("interpolant lies between two rates"))
}

/// Whether yield rises strictly with every step out the curve.
pub fn is_upward_sloping(curve: &YieldCurve) -> bool {
    curve
        .points()
        .windows(2)
        .all(|w| w[1].yield_rate > w[0].yield_rate)
}

/// `lending_rate − deposit_rate`.
pub fn spread(lending_rate: Rate, deposit_rate: Rate) -> Result<Rate, RateError> {
    lending_rate.checked_sub(deposit_rate)
}

/// Interest earned on `assets` less interest paid on `liabilities`,
/// rounded half-to-even to the centavo once.
pub fn net_interest_income(assets: Money, lending_rate: Rate, liabilities: Money, deposit_rate: Rate) -> Money {
    let unit = 10i128.pow(crate::rate::RATE_DIGITS);
    let income = i128::from(assets.centavos()) * i128::from(lending_rate.scaled());
    let expense = i128::from(liabilities.centavos()) * i128::from(deposit_rate.scaled());
    let centavos = fixed::div_round_half_even(income - expense, unit);
    Money::from_centavos(i64::try_from(centavos).expect("money overflow"))
}

/// Summary statistics of a historical annual rate series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RateSeriesStats {
    pub label: &'static str,
    pub first_year: u16,
    pub last_year: u16,
    pub average: Rate,
    pub high: (Rate, u16),
    pub low: (Rate, u16),
    /// Most recent observation, when it is reported separately.
    pub latest: Option<(Rate, u16)>,
}

fn bps(b: i64) -> Rate {
    Rate::from_bps(b).expect("valid rate")
}

/// Philippine deposit interest rates, CY 1980 to CY 2015.
pub fn deposit_rate_history() -> RateSeriesStats {
    RateSeriesStats {
        label: "Philippine deposit interest rate",
        first_year: 1980,
        last_year: 2015,
        average: bps(913),
        high: (bps(2117), 1984),
        low: (bps(123), 2014),
        latest: Some((bps(160), 2015)),
    }
}

/// Philippine bank lending rates, CY 1976 to CY 2016.
pub fn lending_rate_history() -> RateSeriesStats {
    RateSeriesStats {
        label: "Philippine bank lending rate",
        first_year: 1976,
        last_year: 2016,
        average: bps(1345),
        high: (bps(3973), 1984),
        low: (bps(509), 2015),
        latest: None,
    }
}
