//! Income-tax treatment of debt-instrument gains and interest under the
//! NIRC of 1997.
//!
//! Trading gains turn on the instrument's tenor; interest income on whether
//! the instrument is a long-term deposit or investment certificate (LTDIC),
//! then on whether it is a deposit substitute.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::classification::Classification;
use crate::fixed::{self, ParsedDecimal};
use crate::instrument::Instrument;
use crate::money::Money;
use crate::rate::Rate;
use crate::tenor::Tenor;

const YEAR_DIGITS: u32 = 6;
const MICROS_PER_YEAR: u64 = 1_000_000;

/// A non-negative length of time in years, exact to six decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Years(u64);

impl Years {
    pub const ZERO: Years = Years(0);

    pub const fn whole(years: u32) -> Self {
        Years(years as u64 * MICROS_PER_YEAR)
    }

    pub fn parse(text: &str) -> Result<Self, TaxError> {
        let bad = || TaxError::BadYears(text.to_owned());
        match fixed::parse_scaled(text, YEAR_DIGITS) {
            Some(ParsedDecimal::Value(v)) if v >= 0 => u64::try_from(v).map(Years).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }

    pub fn from_tenor(tenor: Tenor) -> Self {
        Years(u64::from(tenor.half_years()) * MICROS_PER_YEAR / 2)
    }
}

impl fmt::Display for Years {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fixed::render_scaled(i128::from(self.0), YEAR_DIGITS, None))
    }
}

impl FromStr for Years {
    type Err = TaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Years::parse(s)
    }
}

impl Serialize for Years {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Years {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Years::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxError {
    #[error("{0:?} is not a non-negative number of years")]
    BadYears(String),
    #[error("regular income tax rate is not configured")]
    RegularRateNotConfigured,
    #[error("interest income must be non-negative, got {0}")]
    NegativeIncome(Money),
    #[error("{name} rate {rate} is outside [0, 1]")]
    RateOutOfRange { name: &'static str, rate: Rate },
    #[error("pre-termination brackets must start at 0 years")]
    BracketsNotFromZero,
    #[error("pre-termination bracket starting at {0} years leaves a gap or overlap")]
    BracketDiscontinuity(Years),
    #[error("pre-termination bracket starting at {0} years is empty")]
    EmptyBracket(Years),
    #[error("only the last pre-termination bracket may be open-ended")]
    OpenBracketNotLast,
    #[error("the last pre-termination bracket must be open-ended")]
    BracketsBounded,
}

/// Rate applied within a pre-termination bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PretermRate {
    Exempt,
    Final(Rate),
}

impl Serialize for PretermRate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PretermRate::Exempt => serializer.serialize_str("exempt"),
            PretermRate::Final(rate) => rate.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for PretermRate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        if text == "exempt" {
            return Ok(PretermRate::Exempt);
        }
        Rate::parse(&text)
            .map(PretermRate::Final)
            .map_err(serde::de::Error::custom)
    }
}

/// Holding periods in `[min_years, max_years)` are taxed at `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PretermBracket {
    pub min_years: Years,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_years: Option<Years>,
    pub rate: PretermRate,
}

impl PretermBracket {
    fn contains(&self, holding: Years) -> bool {
        holding >= self.min_years && self.max_years.is_none_or(|max| holding < max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxRuleSetRecord {
    pub fwt_rate: Rate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_rate: Option<Rate>,
    pub ltdic_min_tenor_years: Tenor,
    pub trading_gain_exclusion_min_tenor_years: Tenor,
    pub ltdic_min_denomination: Money,
    pub preterm_brackets: Vec<PretermBracket>,
}

/// Rates and thresholds of the tax treatment rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TaxRuleSetRecord", into = "TaxRuleSetRecord")]
pub struct TaxRuleSet {
    record: TaxRuleSetRecord,
}

fn unit_rate(name: &'static str, rate: Rate) -> Result<(), TaxError> {
    if rate.is_negative() || rate > Rate::from_bps(10_000).expect("100% is a rate") {
        Err(TaxError::RateOutOfRange { name, rate })
    } else {
        Ok(())
    }
}

impl TaxRuleSet {
    pub fn new(record: TaxRuleSetRecord) -> Result<Self, TaxError> {
        unit_rate("final withholding", record.fwt_rate)?;
        if let Some(rate) = record.regular_rate {
            unit_rate("regular", rate)?;
        }
        let brackets = &record.preterm_brackets;
        match brackets.first() {
            Some(b) if b.min_years == Years::ZERO => {}
            _ => return Err(TaxError::BracketsNotFromZero),
        }
        for (i, b) in brackets.iter().enumerate() {
            if let PretermRate::Final(rate) = b.rate {
                unit_rate("pre-termination", rate)?;
            }
            let last = i + 1 == brackets.len();
            match (b.max_years, last) {
                (None, false) => return Err(TaxError::OpenBracketNotLast),
                (Some(_), true) => return Err(TaxError::BracketsBounded),
                (Some(max), false) => {
                    if max <= b.min_years {
                        return Err(TaxError::EmptyBracket(b.min_years));
                    }
                    if brackets[i + 1].min_years != max {
                        return Err(TaxError::BracketDiscontinuity(brackets[i + 1].min_years));
                    }
                }
                (None, true) => {}
            }
        }
        Ok(TaxRuleSet { record })
    }

    pub fn with_regular_rate(mut self, rate: Rate) -> Result<Self, TaxError> {
        unit_rate("regular", rate)?;
        self.record.regular_rate = Some(rate);
        Ok(self)
    }

    pub fn record(&self) -> &TaxRuleSetRecord {
        &self.record
    }

    pub fn fwt_rate(&self) -> Rate {
        self.record.fwt_rate
    }

    pub fn regular_rate(&self) -> Result<Rate, TaxError> {
        self.record.regular_rate.ok_or(TaxError::RegularRateNotConfigured)
    }

    pub fn preterm_brackets(&self) -> &[PretermBracket] {
        &self.record.preterm_brackets
    }

    pub fn preterm_rate(&self, holding: Years) -> PretermRate {
        self.record
            .preterm_brackets
            .iter()
            .find(|b| b.contains(holding))
            .map(|b| b.rate)
            .expect("brackets partition every holding period")
    }
}

impl Default for TaxRuleSet {
    /// 20% final withholding; LTDIC pre-termination at 20% under 3 years,
    /// 12% from 3 to 4, 5% from 4 to 5, exempt from 5. No regular rate.
    fn default() -> Self {
        let rate = |bps| PretermRate::Final(Rate::from_bps(bps).expect("valid rate"));
        let bracket = |min, max: Option<u32>, rate| PretermBracket {
            min_years: Years::whole(min),
            max_years: max.map(Years::whole),
            rate,
        };
        TaxRuleSet::new(TaxRuleSetRecord {
            fwt_rate: Rate::from_bps(2000).expect("valid rate"),
            regular_rate: None,
            ltdic_min_tenor_years: Tenor::years(5),
            trading_gain_exclusion_min_tenor_years: Tenor::years(5),
            ltdic_min_denomination: Money::from_pesos(10_000),
            preterm_brackets: vec![
                bracket(0, Some(3), rate(2000)),
                bracket(3, Some(4), rate(1200)),
                bracket(4, Some(5), rate(500)),
                bracket(5, None, PretermRate::Exempt),
            ],
        })
        .expect("default tax rules are valid")
    }
}

impl TryFrom<TaxRuleSetRecord> for TaxRuleSet {
    type Error = TaxError;

    fn try_from(record: TaxRuleSetRecord) -> Result<Self, Self::Error> {
        TaxRuleSet::new(record)
    }
}

impl From<TaxRuleSet> for TaxRuleSetRecord {
    fn from(rules: TaxRuleSet) -> Self {
        rules.record
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaxCategory {
    ExcludedFromGrossIncome,
    FinalWithholding,
    Exempt,
    PretermFinal,
    RegularIncome,
}

impl fmt::Display for TaxCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaxCategory::ExcludedFromGrossIncome => "excluded from gross income",
            TaxCategory::FinalWithholding => "final withholding",
            TaxCategory::Exempt => "exempt",
            TaxCategory::PretermFinal => "pre-termination final tax",
            TaxCategory::RegularIncome => "regular income",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxTreatment {
    pub category: TaxCategory,
    pub applied_rate: Rate,
    pub base: Money,
    pub tax_due: Money,
    pub statutory_basis: String,
}

impl TaxTreatment {
    fn untaxed(category: TaxCategory, base: Money, statutory_basis: String) -> Self {
        TaxTreatment {
            category,
            applied_rate: Rate::ZERO,
            base,
            tax_due: Money::ZERO,
            statutory_basis,
        }
    }

    fn taxed(category: TaxCategory, rate: Rate, base: Money, statutory_basis: String) -> Self {
        TaxTreatment {
            category,
            applied_rate: rate,
            base,
            tax_due: withholding_amount(base, rate),
            statutory_basis,
        }
    }
}

/// `rate × base`, rounded half-to-even to the centavo.
pub fn withholding_amount(base: Money, rate: Rate) -> Money {
    rate.apply(base)
}

/// Gains on bonds maturing in more than the exclusion tenor are excluded
/// from gross income; other gains are taxed at the regular rate, and losses
/// carry a zero base.
pub fn trading_gain_treatment(
    instrument: &Instrument,
    gain: Money,
    rules: &TaxRuleSet,
) -> Result<TaxTreatment, TaxError> {
    let limit = rules.record.trading_gain_exclusion_min_tenor_years;
    if instrument.tenor() > limit {
        return Ok(TaxTreatment::untaxed(
            TaxCategory::ExcludedFromGrossIncome,
            gain,
            format!("NIRC Sec. 32(B)(7)(g): maturity of {}y is more than {limit}y", instrument.tenor()),
        ));
    }
    let rate = rules.regular_rate()?;
    Ok(TaxTreatment::taxed(
        TaxCategory::RegularIncome,
        rate,
        gain.max(Money::ZERO),
        format!(
            "NIRC Sec. 32(B)(7)(g) exclusion unavailable: maturity of {}y is not more than {limit}y",
            instrument.tenor()
        ),
    ))
}

/// Holder, issuer and income facts for an interest-income determination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterestIncome {
    pub holder_is_individual: bool,
    pub issuer_is_bank: bool,
    pub holding_years: Years,
    pub amount: Money,
}

/// Whether the instrument qualifies as an LTDIC: bank-issued to an
/// individual, at or above the minimum denomination, maturing in no less
/// than the LTDIC tenor.
pub fn is_ltdic(instrument: &Instrument, income: &InterestIncome, rules: &TaxRuleSet) -> bool {
    income.issuer_is_bank
        && income.holder_is_individual
        && instrument.face_value() >= rules.record.ltdic_min_denomination
        && instrument.tenor() >= rules.record.ltdic_min_tenor_years
}

/// Applies, in order: the LTDIC holding-period brackets, final withholding
/// on deposit substitutes, and the regular rate.
pub fn interest_income_treatment(
    instrument: &Instrument,
    classification: &Classification,
    income: &InterestIncome,
    rules: &TaxRuleSet,
) -> Result<TaxTreatment, TaxError> {
    if income.amount.is_negative() {
        return Err(TaxError::NegativeIncome(income.amount));
    }
    if is_ltdic(instrument, income, rules) {
        return Ok(match rules.preterm_rate(income.holding_years) {
            PretermRate::Exempt => TaxTreatment::untaxed(
                TaxCategory::Exempt,
                income.amount,
                format!(
                    "NIRC Sec. 22(FF): long-term certificate held {} years",
                    income.holding_years
                ),
            ),
            PretermRate::Final(rate) => TaxTreatment::taxed(
                TaxCategory::PretermFinal,
                rate,
                income.amount,
                format!(
                    "NIRC Sec. 22(FF): long-term certificate pre-terminated after {} years",
                    income.holding_years
                ),
            ),
        });
    }
    if classification.is_deposit_substitute {
        return Ok(TaxTreatment::taxed(
            TaxCategory::FinalWithholding,
            rules.fwt_rate(),
            income.amount,
            format!(
                "NIRC Secs. 24(B)(1), 25(A)(2), 27(D)(1), 28(A)(7)(a): deposit substitute under {}",
                classification.rule_set
            ),
        ));
    }
    Ok(TaxTreatment::taxed(
        TaxCategory::RegularIncome,
        rules.regular_rate()?,
        income.amount,
        format!(
            "not a deposit substitute under {}; creditable withholding (RR 14-2012) not computed",
            classification.rule_set
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn years(text: &str) -> Years {
        Years::parse(text).unwrap()
    }

    #[test]
    fn years_parse() {
        assert_eq!(years("3.5"), Years(3_500_000));
        assert_eq!(years("5"), Years::whole(5));
        assert!(Years::parse("-1").is_err());
        assert!(Years::parse("1.0000001").is_err());
        assert_eq!(years("3.25").to_string(), "3.25");
        assert_eq!(Years::from_tenor(Tenor::from_half_years(3)), years("1.5"));
    }

    #[test]
    fn default_brackets() {
        let rules = TaxRuleSet::default();
        let r = |bps| PretermRate::Final(Rate::from_bps(bps).unwrap());
        assert_eq!(rules.preterm_rate(years("0")), r(2000));
        assert_eq!(rules.preterm_rate(years("2.999999")), r(2000));
        assert_eq!(rules.preterm_rate(years("3")), r(1200));
        assert_eq!(rules.preterm_rate(years("4")), r(500));
        assert_eq!(rules.preterm_rate(years("4.999999")), r(500));
        assert_eq!(rules.preterm_rate(years("5")), PretermRate::Exempt);
        assert_eq!(rules.preterm_rate(years("40")), PretermRate::Exempt);
    }

    fn with_brackets(brackets: Vec<PretermBracket>) -> Result<TaxRuleSet, TaxError> {
        let mut record = TaxRuleSet::default().record;
        record.preterm_brackets = brackets;
        TaxRuleSet::new(record)
    }

    fn b(min: u32, max: Option<u32>) -> PretermBracket {
        PretermBracket {
            min_years: Years::whole(min),
            max_years: max.map(Years::whole),
            rate: PretermRate::Exempt,
        }
    }

    #[test]
    fn bracket_partition_is_enforced() {
        assert_eq!(with_brackets(vec![]).unwrap_err(), TaxError::BracketsNotFromZero);
        assert_eq!(with_brackets(vec![b(1, None)]).unwrap_err(), TaxError::BracketsNotFromZero);
        assert_eq!(
            with_brackets(vec![b(0, Some(2)), b(3, None)]).unwrap_err(),
            TaxError::BracketDiscontinuity(Years::whole(3))
        );
        assert_eq!(
            with_brackets(vec![b(0, Some(3)), b(2, None)]).unwrap_err(),
            TaxError::BracketDiscontinuity(Years::whole(2))
        );
        assert_eq!(with_brackets(vec![b(0, None), b(3, None)]).unwrap_err(), TaxError::OpenBracketNotLast);
        assert_eq!(with_brackets(vec![b(0, Some(3))]).unwrap_err(), TaxError::BracketsBounded);
        assert_eq!(
            with_brackets(vec![b(0, Some(0)), b(0, None)]).unwrap_err(),
            TaxError::EmptyBracket(Years::ZERO)
        );
        assert!(with_brackets(vec![b(0, None)]).is_ok());
    }

    #[test]
    fn rates_must_be_fractions() {
        let mut record = TaxRuleSet::default().record;
        record.fwt_rate = Rate::parse("1.2").unwrap();
        assert!(matches!(TaxRuleSet::new(record), Err(TaxError::RateOutOfRange { .. })));
        assert!(TaxRuleSet::default().with_regular_rate(Rate::parse("-0.1").unwrap()).is_err());
        assert_eq!(TaxRuleSet::default().regular_rate(), Err(TaxError::RegularRateNotConfigured));
    }

    #[test]
    fn rules_json_round_trip() {
        let rules = TaxRuleSet::default();
        let json = serde_json::to_string(&rules).unwrap();
        assert!(json.contains(r#""rate":"exempt""#));
        let back: TaxRuleSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rules);
    }
}
