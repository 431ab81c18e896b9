//! Input documents: JSON instruments, scenarios, ledgers, rule sets, tax
//! rules and PEACe-style cases, plus CSV or JSON yield curves.
//!
//! Every failure carries a JSON-pointer path to the offending field, and a
//! line and column when the document did not deserialize at all.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use depsub_core::classification::{LedgerRecord, RuleSetRecord, TransactionRecord};
use depsub_core::tax::TaxRuleSetRecord;
use depsub_core::{
    ClassificationError, CurvePoint, Instrument, InstrumentTerms, Rate, RateScenario, RuleSet,
    ScenarioError, ScenarioYear, TaxError, TaxRuleSet, Tenor, Transaction, TransactionLedger,
    YieldCurve,
};

use crate::error::DocumentError;

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut pointer = String::new();
    for segment in path.iter() {
        pointer.push('/');
        match segment {
            Segment::Seq { index } => pointer.push_str(&index.to_string()),
            Segment::Map { key } => pointer.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => pointer.push_str(variant),
            Segment::Unknown => pointer.push('?'),
        }
    }
    pointer
}

/// Deserializes `text`, reporting the failing field as a JSON pointer.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, DocumentError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let pointer = pointer_of(err.path());
        let inner = err.into_inner();
        DocumentError {
            pointer,
            position: Some((inner.line(), inner.column())),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|inner| DocumentError {
        pointer: String::new(),
        position: Some((inner.line(), inner.column())),
        message: strip_position(&inner.to_string()),
    })?;
    Ok(value)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_owned(),
        None => message.to_owned(),
    }
}

fn join(prefix: &str, field: &str) -> String {
    format!("{prefix}/{field}")
}

fn validate_instrument(terms: InstrumentTerms, prefix: &str) -> Result<Instrument, DocumentError> {
    Instrument::new(terms).map_err(|e| DocumentError::at(join(prefix, e.field()), e))
}

pub fn parse_instrument(text: &str) -> Result<Instrument, DocumentError> {
    validate_instrument(from_json(text)?, "")
}

pub fn parse_scenario(text: &str) -> Result<RateScenario, DocumentError> {
    let years: Vec<ScenarioYear> = from_json(text)?;
    let index_of = |year: u32| years.iter().position(|y| y.year == year).unwrap_or(0);
    RateScenario::new(years.clone()).map_err(|e| {
        let pointer = match &e {
            ScenarioError::Empty => String::new(),
            ScenarioError::MissingYear(year) => {
                format!("/{}/year", years.iter().position(|y| y.year > *year).unwrap_or(0))
            }
            ScenarioError::OutOfOrder(year) => format!("/{}/year", index_of(*year)),
            ScenarioError::NegativeRate { year, .. } => format!("/{}/market_rate", index_of(*year)),
        };
        DocumentError::at(pointer, e)
    })
}

/// A ledger document; its instrument is validated with full field paths.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerDoc {
    instrument: InstrumentTerms,
    #[serde(default = "yes")]
    instrument_form: bool,
    #[serde(default = "yes")]
    purpose: bool,
    transactions: Vec<TransactionRecord>,
}

fn yes() -> bool {
    true
}

fn validate_ledger(doc: LedgerDoc, prefix: &str) -> Result<TransactionLedger, DocumentError> {
    let instrument = validate_instrument(doc.instrument, &join(prefix, "instrument"))?;
    let transactions = doc
        .transactions
        .into_iter()
        .enumerate()
        .map(|(i, record)| {
            Transaction::try_from(record).map_err(|e| {
                let field = match e {
                    ClassificationError::CounterpartyMismatch { .. } => "/counterparties",
                    _ => "/lender_count",
                };
                DocumentError::at(format!("{prefix}/transactions/{i}{field}"), e)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    TransactionLedger::try_from(LedgerRecord {
        instrument,
        instrument_form: doc.instrument_form,
        purpose: doc.purpose,
        transactions,
    })
    .map_err(|e| DocumentError::at(join(prefix, "transactions"), e))
}

pub fn parse_ledger(text: &str) -> Result<TransactionLedger, DocumentError> {
    validate_ledger(from_json(text)?, "")
}

pub fn parse_rule_set(text: &str) -> Result<RuleSet, DocumentError> {
    let record: RuleSetRecord = from_json(text)?;
    RuleSet::try_from(record).map_err(|e| DocumentError::at("/lender_threshold", e))
}

pub fn parse_tax_rules(text: &str) -> Result<TaxRuleSet, DocumentError> {
    let record: TaxRuleSetRecord = from_json(text)?;
    TaxRuleSet::new(record).map_err(|e| {
        let pointer = match &e {
            TaxError::RateOutOfRange { name: "final withholding", .. } => "/fwt_rate",
            TaxError::RateOutOfRange { name: "regular", .. } => "/regular_rate",
            _ => "/preterm_brackets",
        };
        DocumentError::at(pointer, e)
    })
}

pub fn parse_curve_json(text: &str) -> Result<YieldCurve, DocumentError> {
    let points: Vec<CurvePoint> = from_json(text)?;
    YieldCurve::new(points).map_err(|e| DocumentError::at("", e))
}

/// Parses a `tenor_years,yield` CSV with a header row.
pub fn parse_curve_csv(text: &str) -> Result<YieldCurve, DocumentError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| DocumentError::at("", e))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    if headers != ["tenor_years", "yield"] {
        return Err(DocumentError {
            pointer: String::new(),
            message: format!("expected header tenor_years,yield, found {}", headers.join(",")),
            position: Some((1, 1)),
        });
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DocumentError::at("", e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let at = |column: usize, message: String| DocumentError {
            pointer: String::new(),
            message,
            position: Some((line, column)),
        };
        let tenor = record[0]
            .parse::<f64>()
            .map_err(|e| e.to_string())
            .and_then(|y| Tenor::from_years_f64(y).map_err(|e| e.to_string()))
            .map_err(|m| at(1, m))?;
        let yield_rate = Rate::parse(&record[1]).map_err(|e| at(2, e.to_string()))?;
        points.push(CurvePoint { tenor, yield_rate });
    }
    YieldCurve::new(points).map_err(|e| DocumentError::at("", e))
}

/// Which position a seller bought: the original issue or an earlier sale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acquisition {
    Origination,
    Sale(String),
}

/// A sale of the whole issue `elapsed_years` after origination, priced at
/// `market_rate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sale {
    pub id: String,
    pub seller: String,
    pub acquired: Acquisition,
    pub elapsed_years: u32,
    pub market_rate: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub ledger: TransactionLedger,
    pub sales: Vec<Sale>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseDoc {
    ledger: LedgerDoc,
    sales: Vec<Sale>,
}

/// An end-to-end case: a ledger and the resales whose gains to report.
pub fn parse_case(text: &str) -> Result<Case, DocumentError> {
    let doc: CaseDoc = from_json(text)?;
    let ledger = validate_ledger(doc.ledger, "/ledger")?;
    let tenor = ledger.instrument().tenor();
    for (i, sale) in doc.sales.iter().enumerate() {
        if Tenor::years(sale.elapsed_years) > tenor {
            return Err(DocumentError::at(
                format!("/sales/{i}/elapsed_years"),
                format!("{} years is past the {tenor}-year tenor", sale.elapsed_years),
            ));
        }
        if sale.market_rate.is_negative() {
            return Err(DocumentError::at(format!("/sales/{i}/market_rate"), "rate must be non-negative"));
        }
        if let Acquisition::Sale(from) = &sale.acquired {
            if !doc.sales[..i].iter().any(|s| &s.id == from) {
                return Err(DocumentError::at(
                    format!("/sales/{i}/acquired"),
                    format!("{from:?} is not an earlier sale"),
                ));
            }
        }
    }
    Ok(Case {
        ledger,
        sales: doc.sales,
    })
}
