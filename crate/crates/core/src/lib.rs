//! Pricing, classification and tax treatment of peso debt instruments.
//!
//! The crate prices zero-coupon and coupon bonds against market rates, walks
//! a bond through a rate scenario to test whether a holder can get their
//! principal back when they want it, decides whether an instrument is a
//! deposit substitute under several counting rules, and resolves the income
//! tax on its gains and interest.
//!
//! ```
//! use depsub_core::{zero_coupon_price, Compounding, Money, Rate, Tenor};
//!
//! let price = zero_coupon_price(
//!     Money::parse("30000000000.00").unwrap(),
//!     Rate::parse("0.10").unwrap(),
//!     Tenor::years(10),
//!     Compounding::Annual,
//! )
//! .unwrap();
//! assert_eq!(price.to_grouped(), "11,566,298,682.89");
//! ```

mod fixed;

pub mod classification;
pub mod curve;
pub mod instrument;
pub mod money;
pub mod rate;
pub mod scenario;
pub mod tax;
pub mod tenor;
pub mod valuation;

pub use classification::{
    classify, lender_count_at, Classification, ClassificationError, Element, ElementCheck, RuleSet,
    RuleSetId, Transaction, TransactionKind, TransactionLedger,
};
pub use curve::{
    deposit_rate_history, interpolate, is_upward_sloping, lending_rate_history, net_interest_income,
    spread, CurveError, CurvePoint,
    RateSeriesStats, YieldCurve,
};
pub use instrument::{Instrument, InstrumentError, InstrumentKind, InstrumentTerms};
pub use money::{Money, MoneyError};
pub use rate::{Rate, RateError};
pub use scenario::{RateScenario, ScenarioError, ScenarioYear};
pub use tax::{
    interest_income_treatment, is_ltdic, trading_gain_treatment, withholding_amount, InterestIncome,
    PretermBracket, PretermRate, TaxCategory, TaxError, TaxRuleSet, TaxTreatment, Years,
};
pub use tenor::{Compounding, Tenor, TenorError};
pub use valuation::{
    breakeven_year, coupon_bond_price, coupon_yield_from_price, deposit_fitness,
    deposit_fitness_with, discount, fitness_of_path, holding_gain, price_path, yield_from_price,
    zero_coupon_price, FitnessPolicy, FitnessReport, PathRow, PricePath, ValuationError, Verdict,
};
