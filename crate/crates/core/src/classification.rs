//! Deposit-substitute classification of a debt instrument from the ledger of
//! transactions through which it raised funds.
//!
//! A borrowing is "public" once a single transaction draws on at least
//! `lender_threshold` lenders. The rule sets differ in which transactions
//! count and whether the instrument's maturity matters.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instrument::Instrument;
use crate::tenor::Tenor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransactionKind {
    Origination,
    SecondarySale,
}

/// Transaction fields as written in ledger documents. `lender_count` may be
/// left out when `counterparties` is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransactionRecord {
    pub id: String,
    pub sequence: u32,
    pub kind: TransactionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lender_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterparties: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TransactionRecord", into = "TransactionRecord")]
pub struct Transaction {
    id: String,
    sequence: u32,
    kind: TransactionKind,
    lender_count: u32,
    counterparties: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassificationError {
    #[error("transaction {0:?} needs a lender count or a counterparty list")]
    MissingLenderCount(String),
    #[error("transaction {0:?} must have at least one lender")]
    NoLenders(String),
    #[error("transaction {id:?} lists {listed} counterparties but a lender count of {count}")]
    CounterpartyMismatch { id: String, listed: usize, count: u32 },
    #[error("ledger has no transactions")]
    EmptyLedger,
    #[error("the first transaction must be the origination")]
    OriginationNotFirst,
    #[error("transaction {0:?} is a second origination")]
    ExtraOrigination(String),
    #[error("transaction id {0:?} is repeated")]
    DuplicateId(String),
    #[error("no transaction with id {0:?}")]
    UnknownTransaction(String),
    #[error("lender threshold must be at least 2, got {0}")]
    ThresholdTooLow(u32),
}

impl Transaction {
    pub fn new(
        id: impl Into<String>,
        sequence: u32,
        kind: TransactionKind,
        lender_count: u32,
    ) -> Result<Self, ClassificationError> {
        Transaction::try_from(TransactionRecord {
            id: id.into(),
            sequence,
            kind,
            lender_count: Some(lender_count),
            counterparties: None,
        })
    }

    pub fn with_counterparties(
        id: impl Into<String>,
        sequence: u32,
        kind: TransactionKind,
        counterparties: Vec<String>,
    ) -> Result<Self, ClassificationError> {
        Transaction::try_from(TransactionRecord {
            id: id.into(),
            sequence,
            kind,
            lender_count: None,
            counterparties: Some(counterparties),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn sequence(&self) -> u32 {
        self.sequence
    }

    pub fn kind(&self) -> TransactionKind {
        self.kind
    }

    pub fn lender_count(&self) -> u32 {
        self.lender_count
    }

    pub fn counterparties(&self) -> Option<&[String]> {
        self.counterparties.as_deref()
    }
}

impl TryFrom<TransactionRecord> for Transaction {
    type Error = ClassificationError;

    fn try_from(record: TransactionRecord) -> Result<Self, Self::Error> {
        let listed = record.counterparties.as_ref().map(Vec::len);
        let lender_count = match (record.lender_count, listed) {
            (Some(count), Some(n)) if n != count as usize => {
                return Err(ClassificationError::CounterpartyMismatch {
                    id: record.id,
                    listed: n,
                    count,
                });
            }
            (Some(count), _) => count,
            (None, Some(n)) => u32::try_from(n).unwrap_or(u32::MAX),
            (None, None) => return Err(ClassificationError::MissingLenderCount(record.id)),
        };
        if lender_count == 0 {
            return Err(ClassificationError::NoLenders(record.id));
        }
        Ok(Transaction {
            id: record.id,
            sequence: record.sequence,
            kind: record.kind,
            lender_count,
            counterparties: record.counterparties,
        })
    }
}

impl From<Transaction> for TransactionRecord {
    fn from(tx: Transaction) -> Self {
        TransactionRecord {
            lender_count: Some(tx.lender_count),
            id: tx.id,
            sequence: tx.sequence,
            kind: tx.kind,
            counterparties: tx.counterparties,
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerRecord {
    pub instrument: Instrument,
    /// Funds were raised through issuing, endorsing or accepting debt
    /// instruments for the borrower's own account.
    #[serde(default = "yes")]
    pub instrument_form: bool,
    /// Funds were raised to relend, buy receivables, or finance the
    /// borrower's (or its agent's) own needs.
    #[serde(default = "yes")]
    pub purpose: bool,
    pub transactions: Vec<Transaction>,
}

/// An instrument and its transactions, origination first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LedgerRecord", into = "LedgerRecord")]
pub struct TransactionLedger {
    record: LedgerRecord,
}

impl TransactionLedger {
    pub fn new(instrument: Instrument, transactions: Vec<Transaction>) -> Result<Self, ClassificationError> {
        TransactionLedger::try_from(LedgerRecord {
            instrument,
            instrument_form: true,
            purpose: true,
            transactions,
        })
    }

    pub fn instrument(&self) -> &Instrument {
        &self.record.instrument
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.record.transactions
    }

    pub fn origination(&self) -> &Transaction {
        &self.record.transactions[0]
    }

    pub fn instrument_form(&self) -> bool {
        self.record.instrument_form
    }

    pub fn purpose(&self) -> bool {
        self.record.purpose
    }

    pub fn with_element_facts(mut self, instrument_form: bool, purpose: bool) -> Self {
        self.record.instrument_form = instrument_form;
        self.record.purpose = purpose;
        self
    }
}

impl TryFrom<LedgerRecord> for TransactionLedger {
    type Error = ClassificationError;

    fn try_from(record: LedgerRecord) -> Result<Self, Self::Error> {
        let first = record
            .transactions
            .first()
            .ok_or(ClassificationError::EmptyLedger)?;
        if first.kind != TransactionKind::Origination {
            return Err(ClassificationError::OriginationNotFirst);
        }
        if let Some(extra) = record.transactions[1..]
            .iter()
            .find(|t| t.kind == TransactionKind::Origination)
        {
            return Err(ClassificationError::ExtraOrigination(extra.id.clone()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = record.transactions.iter().find(|t| !seen.insert(t.id.as_str())) {
            return Err(ClassificationError::DuplicateId(dup.id.clone()));
        }
        Ok(TransactionLedger { record })
    }
}

impl From<TransactionLedger> for LedgerRecord {
    fn from(ledger: TransactionLedger) -> Self {
        ledger.record
    }
}

pub fn lender_count_at(ledger: &TransactionLedger, transaction_id: &str) -> Result<u32, ClassificationError> {
    ledger
        .transactions()
        .iter()
        .find(|t| t.id == transaction_id)
        .map(Transaction::lender_count)
        .ok_or_else(|| ClassificationError::UnknownTransaction(transaction_id.to_owned()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleSetId {
    /// Lenders are counted only at original issuance.
    StatutoryOrigination,
    /// Lenders are counted at every transaction.
    StatutoryAnyTransaction,
    /// Every transaction counts, and only instruments maturing within the
    /// tenor limit qualify.
    ProposedShortTerm,
}

impl RuleSetId {
    pub const ALL: [RuleSetId; 3] = [
        RuleSetId::StatutoryOrigination,
        RuleSetId::StatutoryAnyTransaction,
        RuleSetId::ProposedShortTerm,
    ];

    pub fn counts_origination_only(self) -> bool {
        self == RuleSetId::StatutoryOrigination
    }

    /// The kebab-case name used on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            RuleSetId::StatutoryOrigination => "statutory-origination",
            RuleSetId::StatutoryAnyTransaction => "statutory-any",
            RuleSetId::ProposedShortTerm => "proposed",
        }
    }
}

impl fmt::Display for RuleSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleSetId::StatutoryOrigination => "STATUTORY_ORIGINATION",
            RuleSetId::StatutoryAnyTransaction => "STATUTORY_ANY_TRANSACTION",
            RuleSetId::ProposedShortTerm => "PROPOSED_SHORT_TERM",
        })
    }
}

pub const DEFAULT_LENDER_THRESHOLD: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleSetRecord", into = "RuleSetRecord")]
pub struct RuleSet {
    id: RuleSetId,
    lender_threshold: u32,
    max_tenor: Option<Tenor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSetRecord {
    pub id: RuleSetId,
    #[serde(default = "default_threshold")]
    pub lender_threshold: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tenor_years: Option<Tenor>,
}

fn default_threshold() -> u32 {
    DEFAULT_LENDER_THRESHOLD
}

impl RuleSet {
    pub fn new(id: RuleSetId, lender_threshold: u32, max_tenor: Option<Tenor>) -> Result<Self, ClassificationError> {
        if lender_threshold < 2 {
            return Err(ClassificationError::ThresholdTooLow(lender_threshold));
        }
        Ok(RuleSet {
            id,
            lender_threshold,
            max_tenor,
        })
    }

    /// The rule set with its default threshold and tenor limit.
    pub fn preset(id: RuleSetId) -> Self {
        let max_tenor = match id {
            RuleSetId::ProposedShortTerm => Some(Tenor::years(1)),
            _ => None,
        };
        RuleSet {
            id,
            lender_threshold: DEFAULT_LENDER_THRESHOLD,
            max_tenor,
        }
    }

    pub fn statutory_origination() -> Self {
        RuleSet::preset(RuleSetId::StatutoryOrigination)
    }

    pub fn statutory_any_transaction() -> Self {
        RuleSet::preset(RuleSetId::StatutoryAnyTransaction)
    }

    pub fn proposed_short_term() -> Self {
        RuleSet::preset(RuleSetId::ProposedShortTerm)
    }

    pub fn id(&self) -> RuleSetId {
        self.id
    }

    pub fn lender_threshold(&self) -> u32 {
        self.lender_threshold
    }

    pub fn max_tenor(&self) -> Option<Tenor> {
        self.max_tenor
    }
}

impl TryFrom<RuleSetRecord> for RuleSet {
    type Error = ClassificationError;

    fn try_from(r: RuleSetRecord) -> Result<Self, Self::Error> {
        RuleSet::new(r.id, r.lender_threshold, r.max_tenor_years)
    }
}

impl From<RuleSet> for RuleSetRecord {
    fn from(r: RuleSet) -> Self {
        RuleSetRecord {
            id: r.id,
            lender_threshold: r.lender_threshold,
            max_tenor_years: r.max_tenor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    PublicBorrowing,
    InstrumentForm,
    Purpose,
    Maturity,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Element::PublicBorrowing => "public borrowing",
            Element::InstrumentForm => "instrument form",
            Element::Purpose => "purpose",
            Element::Maturity => "maturity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCheck {
    pub element: Element,
    pub satisfied: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub rule_set: RuleSetId,
    pub is_deposit_substitute: bool,
    pub triggering_transaction: Option<String>,
    /// One check per element, in the order public borrowing, instrument
    /// form, purpose, maturity.
    pub rationale: Vec<ElementCheck>,
}

pub fn classify(ledger: &TransactionLedger, rules: &RuleSet) -> Classification {
    let threshold = rules.lender_threshold;
    let inspected: &[Transaction] = if rules.id.counts_origination_only() {
        &ledger.transactions()[..1]
    } else {
        ledger.transactions()
    };
    let trigger = inspected.iter().find(|t| t.lender_count >= threshold);

    let public = match trigger {
        Some(t) => ElementCheck {
            element: Element::PublicBorrowing,
            satisfied: true,
            detail: format!("{} drew on {} lenders (threshold {threshold})", t.id, t.lender_count),
        },
        None => {
            let most = inspected.iter().max_by_key(|t| t.lender_count).expect("ledger is non-empty");
            let scope = if rules.id.counts_origination_only() {
                "origination"
            } else {
                "any transaction"
            };
            ElementCheck {
                element: Element::PublicBorrowing,
                satisfied: false,
                detail: format!(
                    "at most {} lenders in {scope} ({}; threshold {threshold})",
                    most.lender_count, most.id
                ),
            }
        }
    };

    let fact = |element, satisfied: bool| ElementCheck {
        element,
        satisfied,
        detail: if satisfied { "stated" } else { "not stated" }.to_owned(),
    };

    let tenor = ledger.instrument().tenor();
    let maturity = match rules.max_tenor {
        None => ElementCheck {
            element: Element::Maturity,
            satisfied: true,
            detail: "no maturity limit".to_owned(),
        },
        Some(limit) => ElementCheck {
            element: Element::Maturity,
            satisfied: tenor <= limit,
            detail: format!("tenor {tenor}y against limit {limit}y"),
        },
    };

    let rationale = vec![
        public,
        fact(Element::InstrumentForm, ledger.instrument_form()),
        fact(Element::Purpose, ledger.purpose()),
        maturity,
    ];
    let is_deposit_substitute = rationale.iter().all(|c| c.satisfied);
    Classification {
        rule_set: rules.id,
        is_deposit_substitute,
        triggering_transaction: trigger
            .filter(|_| is_deposit_substitute)
            .map(|t| t.id.clone()),
        rationale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money::Money;
    use crate::rate::Rate;
    use crate::tenor::Compounding;

    fn instrument(years: u32) -> Instrument {
        Instrument::zero_coupon(
            Money::from_pesos(1_000_000),
            Rate::from_bps(500).unwrap(),
            Tenor::years(years),
            Compounding::Annual,
        )
        .unwrap()
    }

    fn ledger(years: u32, counts: &[u32]) -> TransactionLedger {
        let txs = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let kind = if i == 0 {
                    TransactionKind::Origination
                } else {
                    TransactionKind::SecondarySale
                };
                Transaction::new(format!("t{i}"), i as u32, kind, n).unwrap()
            })
            .collect();
        TransactionLedger::new(instrument(years), txs).unwrap()
    }

    #[test]
    fn ledger_validation() {
        let orig = Transaction::new("a", 0, TransactionKind::Origination, 1).unwrap();
        let sale = Transaction::new("b", 1, TransactionKind::SecondarySale, 1).unwrap();
        assert_eq!(
            TransactionLedger::new(instrument(1), vec![]).unwrap_err(),
            ClassificationError::EmptyLedger
        );
        assert_eq!(
            TransactionLedger::new(instrument(1), vec![sale.clone(), orig.clone()]).unwrap_err(),
            ClassificationError::OriginationNotFirst
        );
        let mut second = orig.clone();
        second.id = "c".into();
        assert_eq!(
            TransactionLedger::new(instrument(1), vec![orig.clone(), second]).unwrap_err(),
            ClassificationError::ExtraOrigination("c".into())
        );
        let mut dup = sale.clone();
        dup.id = "a".into();
        assert_eq!(
            TransactionLedger::new(instrument(1), vec![orig, dup]).unwrap_err(),
            ClassificationError::DuplicateId("a".into())
        );
    }

    #[test]
    fn transaction_validation() {
        assert_eq!(
            Transaction::new("x", 0, TransactionKind::Origination, 0).unwrap_err(),
            ClassificationError::NoLenders("x".into())
        );
        let names: Vec<String> = (0..20).map(|i| format!("lender {i}")).collect();
        let t = Transaction::with_counterparties("x", 0, TransactionKind::SecondarySale, names.clone()).unwrap();
        assert_eq!(t.lender_count(), 20);
        let err = Transaction::try_from(TransactionRecord {
            id: "x".into(),
            sequence: 0,
            kind: TransactionKind::SecondarySale,
            lender_count: Some(19),
            counterparties: Some(names),
        })
        .unwrap_err();
        assert!(matches!(err, ClassificationError::CounterpartyMismatch { listed: 20, count: 19, .. }));
    }

    #[test]
    fn threshold_floor() {
        assert_eq!(
            RuleSet::new(RuleSetId::StatutoryAnyTransaction, 1, None).unwrap_err(),
            ClassificationError::ThresholdTooLow(1)
        );
        assert!(RuleSet::new(RuleSetId::StatutoryAnyTransaction, 2, None).is_ok());
    }

    #[test]
    fn lender_count_lookup() {
        let l = ledger(1, &[1, 8]);
        assert_eq!(lender_count_at(&l, "t1"), Ok(8));
        assert_eq!(
            lender_count_at(&l, "zz"),
            Err(ClassificationError::UnknownTransaction("zz".into()))
        );
    }

    #[test]
    fn rationale_order_and_trigger() {
        let c = classify(&ledger(10, &[1, 20]), &RuleSet::statutory_any_transaction());
        assert!(c.is_deposit_substitute);
        assert_eq!(c.triggering_transaction.as_deref(), Some("t1"));
        let order: Vec<_> = c.rationale.iter().map(|e| e.element).collect();
        assert_eq!(
            order,
            [Element::PublicBorrowing, Element::InstrumentForm, Element::Purpose, Element::Maturity]
        );

        let c = classify(&ledger(10, &[1, 20]), &RuleSet::proposed_short_term());
        assert!(!c.is_deposit_substitute);
        assert_eq!(c.triggering_transaction, None);
        assert!(!c.rationale[3].satisfied);

        let c = classify(&ledger(1, &[1, 20]), &RuleSet::proposed_short_term());
        assert!(c.is_deposit_substitute);
    }

    #[test]
    fn element_facts_can_fail() {
        let l = ledger(1, &[25]).with_element_facts(true, false);
        let c = classify(&l, &RuleSet::statutory_origination());
        assert!(!c.is_deposit_substitute);
        assert!(c.rationale[0].satisfied);
        assert!(!c.rationale[2].satisfied);
    }
}
