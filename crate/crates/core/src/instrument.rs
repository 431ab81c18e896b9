use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::money::Money;
use crate::rate::Rate;
use crate::tenor::{Compounding, Tenor};

/// Instrument forms; the last few are the deposit-substitute forms the
/// central bank's manual lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrumentKind {
    TreasuryBond,
    TreasuryNote,
    Repo,
    PromissoryNote,
    CertAssignmentWithRecourse,
    CertParticipationWithRecourse,
    Deposit,
    Other,
}

impl fmt::Display for InstrumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstrumentKind::TreasuryBond => "treasury bond",
            InstrumentKind::TreasuryNote => "treasury note",
            InstrumentKind::Repo => "repurchase agreement",
            InstrumentKind::PromissoryNote => "promissory note",
            InstrumentKind::CertAssignmentWithRecourse => "certificate of assignment with recourse",
            InstrumentKind::CertParticipationWithRecourse => {
                "certificate of participation with recourse"
            }
            InstrumentKind::Deposit => "deposit",
            InstrumentKind::Other => "other",
        })
    }
}

/// Unvalidated instrument fields, the shape instrument documents use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentTerms {
    pub face_value: Money,
    pub contractual_rate: Rate,
    pub tenor: Tenor,
    pub compounding: Compounding,
    #[serde(default)]
    pub coupon_rate: Rate,
    pub kind: InstrumentKind,
    #[serde(default)]
    pub issuer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstrumentError {
    #[error("face value must be positive, got {0}")]
    NonPositiveFace(Money),
    #[error("contractual rate must be non-negative, got {0}")]
    NegativeContractualRate(Rate),
    #[error("tenor must be positive")]
    ZeroTenor,
    #[error("tenor of {0} years needs semiannual compounding")]
    HalfYearTenor(Tenor),
    #[error("coupon rate must be non-negative, got {0}")]
    NegativeCoupon(Rate),
}

impl InstrumentError {
    /// The document field the violation belongs to.
    pub fn field(&self) -> &'static str {
        match self {
            InstrumentError::NonPositiveFace(_) => "face_value",
            InstrumentError::NegativeContractualRate(_) => "contractual_rate",
            InstrumentError::ZeroTenor | InstrumentError::HalfYearTenor(_) => "tenor",
            InstrumentError::NegativeCoupon(_) => "coupon_rate",
        }
    }
}

/// A validated debt instrument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "InstrumentTerms", try_from = "InstrumentTerms")]
pub struct Instrument {
    terms: InstrumentTerms,
}

impl Instrument {
    pub fn new(terms: InstrumentTerms) -> Result<Self, InstrumentError> {
        if !terms.face_value.is_positive() {
            return Err(InstrumentError::NonPositiveFace(terms.face_value));
        }
        if terms.contractual_rate.is_negative() {
            return Err(InstrumentError::NegativeContractualRate(terms.contractual_rate));
        }
        if terms.tenor.is_zero() {
            return Err(InstrumentError::ZeroTenor);
        }
        if terms.tenor.periods(terms.compounding).is_err() {
            return Err(InstrumentError::HalfYearTenor(terms.tenor));
        }
        if terms.coupon_rate.is_negative() {
            return Err(InstrumentError::NegativeCoupon(terms.coupon_rate));
        }
        Ok(Instrument { terms })
    }

    /// Zero-coupon treasury bond with an empty issuer label.
    pub fn zero_coupon(
        face_value: Money,
        contractual_rate: Rate,
        tenor: Tenor,
        compounding: Compounding,
    ) -> Result<Self, InstrumentError> {
        Instrument::new(InstrumentTerms {
            face_value,
            contractual_rate,
            tenor,
            compounding,
            coupon_rate: Rate::ZERO,
            kind: InstrumentKind::TreasuryBond,
            issuer: String::new(),
        })
    }

    pub fn terms(&self) -> &InstrumentTerms {
        &self.terms
    }

    pub fn face_value(&self) -> Money {
        self.terms.face_value
    }

    pub fn contractual_rate(&self) -> Rate {
        self.terms.contractual_rate
    }

    pub fn tenor(&self) -> Tenor {
        self.terms.tenor
    }

    pub fn compounding(&self) -> Compounding {
        self.terms.compounding
    }

    pub fn coupon_rate(&self) -> Rate {
        self.terms.coupon_rate
    }

    pub fn kind(&self) -> InstrumentKind {
        self.terms.kind
    }

    pub fn issuer(&self) -> &str {
        &self.terms.issuer
    }

    pub fn is_zero_coupon(&self) -> bool {
        self.terms.coupon_rate == Rate::ZERO
    }
}

impl From<Instrument> for InstrumentTerms {
    fn from(instrument: Instrument) -> Self {
        instrument.terms
    }
}

impl TryFrom<InstrumentTerms> for Instrument {
    type Error = InstrumentError;

    fn try_from(terms: InstrumentTerms) -> Result<Self, Self::Error> {
        Instrument::new(terms)
    }
}
