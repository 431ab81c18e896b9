//! Bond pricing against market rates.
//!
//! Prices are computed in `f64` over centavo amounts and rounded half-to-even
//! to the centavo once, at the end of each operation. A market rate is the
//! nominal annual rate compounded at the instrument's own frequency.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instrument::Instrument;
use crate::money::Money;
use crate::rate::{Rate, RateError};
use crate::scenario::RateScenario;
use crate::tenor::{Compounding, Tenor, TenorError};

/// Bisection stops once the yield bracket is narrower than this.
pub const YIELD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("market rate must be non-negative, got {0}")]
    NegativeRate(Rate),
    #[error("face value must be positive, got {0}")]
    NonPositiveFace(Money),
    #[error(transparent)]
    Tenor(#[from] TenorError),
    #[error("time to maturity {time} exceeds the instrument tenor {tenor}")]
    BeyondTenor { time: Tenor, tenor: Tenor },
    #[error("price must be positive, got {0}")]
    NonPositivePrice(Money),
    #[error("price {price} above face {face} implies a negative yield")]
    PriceAboveFace { price: Money, face: Money },
    #[error("yield is undefined at zero time to maturity")]
    ZeroTimeToMaturity,
    #[error("price {0} implies a yield outside [0, 1]")]
    YieldOutOfBracket(Money),
    #[error("price paths need a whole-year tenor, got {0}")]
    FractionalTenor(Tenor),
    #[error("scenario is missing year {0}")]
    MissingScenarioYear(u32),
    #[error("scenario runs to year {last}, past maturity row {maturity_row}")]
    ScenarioBeyondMaturity { last: u32, maturity_row: u32 },
    #[error("price does not fit in a money amount")]
    Overflow,
    #[error(transparent)]
    Rate(#[from] RateError),
}

fn check_rate(rate: Rate) -> Result<(), ValuationError> {
    if rate.is_negative() {
        Err(ValuationError::NegativeRate(rate))
    } else {
        Ok(())
    }
}

fn to_money(centavos: f64) -> Result<Money, ValuationError> {
    Money::from_centavos_f64(centavos).ok_or(ValuationError::Overflow)
}

/// `(1 + rate/m)^periods`.
fn growth(rate: f64, compounding: Compounding, periods: u32) -> f64 {
    let m = f64::from(compounding.periods_per_year());
    (1.0 + rate / m).powf(f64::from(periods))
}

/// Unrounded present value in centavos of a level-coupon bond.
fn present_value(face: Money, coupon: Rate, rate: f64, compounding: Compounding, periods: u32) -> f64 {
    let face = face.centavos() as f64;
    let principal = face / growth(rate, compounding, periods);
    if coupon == Rate::ZERO {
        return principal;
    }
    let m = f64::from(compounding.periods_per_year());
    let per_period = coupon.to_f64() * face / m;
    let coupons: f64 = (1..=periods)
        .map(|k| per_period / growth(rate, compounding, k))
        .sum();
    coupons + principal
}

/// `face / (1 + rate/m)^(m·n)`, rounded to the centavo. Returns `face` at
/// zero time to maturity.
pub fn zero_coupon_price(
    face: Money,
    rate: Rate,
    time_to_maturity: Tenor,
    compounding: Compounding,
) -> Result<Money, ValuationError> {
    check_rate(rate)?;
    if !face.is_positive() {
        return Err(ValuationError::NonPositiveFace(face));
    }
    let periods = time_to_maturity.periods(compounding)?;
    if periods == 0 {
        return Ok(face);
    }
    to_money(present_value(face, Rate::ZERO, rate.to_f64(), compounding, periods))
}

/// Clean price of `instrument` with `time_to_maturity` left, discounting its
/// remaining coupons and face at `market_rate`.
pub fn coupon_bond_price(
    instrument: &Instrument,
    market_rate: Rate,
    time_to_maturity: Tenor,
) -> Result<Money, ValuationError> {
    if time_to_maturity > instrument.tenor() {
        return Err(ValuationError::BeyondTenor {
            time: time_to_maturity,
            tenor: instrument.tenor(),
        });
    }
    if instrument.is_zero_coupon() {
        return zero_coupon_price(
            instrument.face_value(),
            market_rate,
            time_to_maturity,
            instrument.compounding(),
        );
    }
    check_rate(market_rate)?;
    let periods = time_to_maturity.periods(instrument.compounding())?;
    if periods == 0 {
        return Ok(instrument.face_value());
    }
    to_money(present_value(
        instrument.face_value(),
        instrument.coupon_rate(),
        market_rate.to_f64(),
        instrument.compounding(),
        periods,
    ))
}

/// Zero-coupon yield implied by `price`, in closed form:
/// `m·((face/price)^(1/(m·n)) − 1)`.
pub fn yield_from_price(
    face: Money,
    price: Money,
    time_to_maturity: Tenor,
    compounding: Compounding,
) -> Result<Rate, ValuationError> {
    if !price.is_positive() {
        return Err(ValuationError::NonPositivePrice(price));
    }
    if price > face {
        return Err(ValuationError::PriceAboveFace { price, face });
    }
    let periods = time_to_maturity.periods(compounding)?;
    if periods == 0 {
        return Err(ValuationError::ZeroTimeToMaturity);
    }
    let m = f64::from(compounding.periods_per_year());
    let ratio = face.centavos() as f64 / price.centavos() as f64;
    let rate = m * (ratio.ln() / f64::from(periods)).exp_m1();
    Ok(Rate::from_f64(rate)?)
}

/// Yield of a coupon-bearing instrument by bisection on `[0, 1]`.
pub fn coupon_yield_from_price(
    instrument: &Instrument,
    price: Money,
    time_to_maturity: Tenor,
) -> Result<Rate, ValuationError> {
    if !price.is_positive() {
        return Err(ValuationError::NonPositivePrice(price));
    }
    let periods = time_to_maturity.periods(instrument.compounding())?;
    if periods == 0 {
        return Err(ValuationError::ZeroTimeToMaturity);
    }
    let pv = |y: f64| {
        present_value(
            instrument.face_value(),
            instrument.coupon_rate(),
            y,
            instrument.compounding(),
            periods,
        )
    };
    let target = price.centavos() as f64;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if target > pv(lo) || target < pv(hi) {
        return Err(ValuationError::YieldOutOfBracket(price));
    }
    while hi - lo > YIELD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        // price falls as yield rises
        if pv(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Rate::from_f64(0.5 * (lo + hi))?)
}

/// `face − price`; negative for a premium.
pub fn discount(face: Money, price: Money) -> Money {
    face - price
}

/// `sell − buy`; negative for a loss.
pub fn holding_gain(buy_price: Money, sell_price: Money) -> Money {
    sell_price - buy_price
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRow {
    pub year: u32,
    pub market_rate: Rate,
    pub time_to_maturity: Tenor,
    pub price: Money,
}

/// Beginning-of-year fair prices over an instrument's life, plus a final row
/// at maturity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricePath {
    pub face_value: Money,
    pub rows: Vec<PathRow>,
}

impl PricePath {
    pub fn price_in(&self, year: u32) -> Option<Money> {
        self.rows.iter().find(|r| r.year == year).map(|r| r.price)
    }

    pub fn maturity_row(&self) -> &PathRow {
        self.rows.last().expect("price path is never empty")
    }
}

/// Prices `instrument` at the start of each year `k`, with `tenor − k + 1`
/// years left, at the scenario rate for year `k`. The maturity row (year
/// `tenor + 1`) is priced at face; it reports the scenario rate for that
/// year when given, otherwise the final year's rate.
pub fn price_path(instrument: &Instrument, scenario: &RateScenario) -> Result<PricePath, ValuationError> {
    let tenor = instrument.tenor();
    let years = tenor
        .whole_years()
        .ok_or(ValuationError::FractionalTenor(tenor))?;
    let maturity_row = years + 1;
    if scenario.last_year() > maturity_row {
        return Err(ValuationError::ScenarioBeyondMaturity {
            last: scenario.last_year(),
            maturity_row,
        });
    }
    let mut rows = Vec::with_capacity(maturity_row as usize);
    for year in 1..=years {
        let market_rate = scenario
            .rate_for(year)
            .ok_or(ValuationError::MissingScenarioYear(year))?;
        let time_to_maturity = Tenor::years(years - year + 1);
        rows.push(PathRow {
            year,
            market_rate,
            time_to_maturity,
            price: coupon_bond_price(instrument, market_rate, time_to_maturity)?,
        });
    }
    let final_rate = scenario
        .rate_for(maturity_row)
        .or_else(|| scenario.rate_for(years))
        .ok_or(ValuationError::MissingScenarioYear(years))?;
    rows.push(PathRow {
        year: maturity_row,
        market_rate: final_rate,
        time_to_maturity: Tenor::ZERO,
        price: instrument.face_value(),
    });
    Ok(PricePath {
        face_value: instrument.face_value(),
        rows,
    })
}

/// First year from 2 onward whose price recovers `initial_investment`.
pub fn breakeven_year(path: &PricePath, initial_investment: Money) -> Option<u32> {
    path.rows
        .iter()
        .filter(|r| r.year >= 2)
        .find(|r| r.price >= initial_investment)
        .map(|r| r.year)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ReplicatesDeposit,
    FailsDepositFeatures,
}

/// Thresholds an instrument must meet to count as deposit-like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessPolicy {
    /// Latest year by which the holder must be able to exit at cost.
    pub max_breakeven_year: u32,
    pub max_tenor: Tenor,
}

impl Default for FitnessPolicy {
    fn default() -> Self {
        FitnessPolicy {
            max_breakeven_year: 2,
            max_tenor: Tenor::years(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub initial_investment: Money,
    pub breakeven_year: Option<u32>,
    pub capital_preservation_breached: bool,
    /// Largest shortfall of a later price below the initial investment.
    pub max_drawdown: Money,
    pub verdict: Verdict,
}

/// Capital-preservation and liquidity check of a buy-at-issue holder along
/// the scenario's price path.
pub fn deposit_fitness(instrument: &Instrument, scenario: &RateScenario) -> Result<FitnessReport, ValuationError> {
    deposit_fitness_with(instrument, scenario, &FitnessPolicy::default())
}

pub fn deposit_fitness_with(
    instrument: &Instrument,
    scenario: &RateScenario,
    policy: &FitnessPolicy,
) -> Result<FitnessReport, ValuationError> {
    let path = price_path(instrument, scenario)?;
    Ok(fitness_of_path(&path, instrument.tenor(), policy))
}

pub fn fitness_of_path(path: &PricePath, tenor: Tenor, policy: &FitnessPolicy) -> FitnessReport {
    let initial_investment = path.rows[0].price;
    let maturity_year = path.maturity_row().year;
    let holding_rows = || {
        path.rows
            .iter()
            .filter(move |r| r.year >= 2 && r.year < maturity_year)
    };
    let capital_preservation_breached = holding_rows().any(|r| r.price < initial_investment);
    let max_drawdown = holding_rows()
        .map(|r| initial_investment - r.price)
        .fold(Money::ZERO, Money::max);
    let breakeven = breakeven_year(path, initial_investment);
    let replicates = !capital_preservation_breached
        && breakeven.is_some_and(|y| y <= policy.max_breakeven_year)
        && tenor <= policy.max_tenor;
    FitnessReport {
        initial_investment,
        breakeven_year: breakeven,
        capital_preservation_breached,
        max_drawdown,
        verdict: if replicates {
            Verdict::ReplicatesDeposit
        } else {
            Verdict::FailsDepositFeatures
        },
    }
}
