//! Command-line front end for `depsub-core`.
//!
//! Each command loads and validates every input document first, runs the
//! engine, and builds a [`Report`] that renders as an aligned table, CSV or
//! JSON.

pub mod commands;
pub mod docs;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use depsub_core::{Compounding, Money, Rate, RuleSetId, Tenor, Years};

pub use commands::{execute, run};
pub use error::CliError;
pub use report::{Format, Report};

#[derive(Debug, Clone, Parser)]
#[command(name = "depsub", version, about = "Bond pricing, deposit-substitute classification and tax treatment")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Price a bond at a market rate.
    Price(PriceArgs),
    /// Yield implied by a price.
    Yield(YieldArgs),
    /// Beginning-of-year prices along a rate scenario.
    Path(PathArgs),
    /// Capital-preservation and liquidity check along a rate scenario.
    Fitness(FitnessArgs),
    /// Classify a ledger under one or all rule sets.
    Classify(ClassifyArgs),
    /// Income-tax treatment of interest and trading gains.
    Tax(TaxArgs),
    /// Yield-curve shape and interpolation, or the historical rate dataset.
    Curve(CurveArgs),
    /// The PEACe bonds case end to end.
    Peace(PeaceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompoundingArg {
    Annual,
    Semiannual,
}

impl From<CompoundingArg> for Compounding {
    fn from(c: CompoundingArg) -> Self {
        match c {
            CompoundingArg::Annual => Compounding::Annual,
            CompoundingArg::Semiannual => Compounding::Semiannual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RulesArg {
    StatutoryOrigination,
    StatutoryAny,
    Proposed,
}

impl From<RulesArg> for RuleSetId {
    fn from(r: RulesArg) -> Self {
        match r {
            RulesArg::StatutoryOrigination => RuleSetId::StatutoryOrigination,
            RulesArg::StatutoryAny => RuleSetId::StatutoryAnyTransaction,
            RulesArg::Proposed => RuleSetId::ProposedShortTerm,
        }
    }
}

fn money_arg(s: &str) -> Result<Money, String> {
    Money::parse(s).map_err(|e| e.to_string())
}

fn rate_arg(s: &str) -> Result<Rate, String> {
    Rate::parse(s).map_err(|e| e.to_string())
}

fn tenor_arg(s: &str) -> Result<Tenor, String> {
    let years: f64 = s.parse().map_err(|_| format!("{s:?} is not a number of years"))?;
    Tenor::from_years_f64(years).map_err(|e| e.to_string())
}

fn years_arg(s: &str) -> Result<Years, String> {
    Years::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct PriceArgs {
    /// Instrument document; otherwise give --face and --years.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = money_arg)]
    pub face: Option<Money>,
    /// Market rate, as a fraction (0.12) or percentage (12%).
    #[arg(long, value_parser = rate_arg)]
    pub rate: Rate,
    /// Time to maturity; defaults to the instrument's tenor.
    #[arg(long, value_parser = tenor_arg)]
    pub years: Option<Tenor>,
    #[arg(long, value_enum)]
    pub compounding: Option<CompoundingArg>,
}

#[derive(Debug, Clone, Args)]
pub struct YieldArgs {
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = money_arg)]
    pub face: Option<Money>,
    #[arg(long, value_parser = money_arg)]
    pub price: Money,
    #[arg(long, value_parser = tenor_arg)]
    pub years: Option<Tenor>,
    #[arg(long, value_enum)]
    pub compounding: Option<CompoundingArg>,
}

#[derive(Debug, Clone, Args)]
pub struct PathArgs {
    /// Instrument document.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Scenario document.
    #[arg(long, value_name = "FILE")]
    pub scenario: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FitnessArgs {
    #[command(flatten)]
    pub path: PathArgs,
    /// Latest year by which the holder must be able to exit at cost.
    #[arg(long, default_value_t = 2)]
    pub max_breakeven_year: u32,
    /// Longest tenor that can behave like a deposit.
    #[arg(long, value_parser = tenor_arg, default_value = "1")]
    pub max_tenor_years: Tenor,
}

#[derive(Debug, Clone, Args)]
pub struct RuleSelection {
    /// Preset rule set; `classify` evaluates all three when omitted.
    #[arg(long, value_enum, conflicts_with = "rule_set")]
    pub rules: Option<RulesArg>,
    /// Rule-set document.
    #[arg(long, value_name = "FILE")]
    pub rule_set: Option<PathBuf>,
    /// Override the lender threshold.
    #[arg(long)]
    pub threshold: Option<u32>,
    /// Override the maximum tenor.
    #[arg(long, value_parser = tenor_arg)]
    pub max_tenor_years: Option<Tenor>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    /// Ledger document.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub rules: RuleSelection,
}

#[derive(Debug, Clone, Args)]
pub struct TaxArgs {
    /// Ledger document.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Classification rule set (default statutory-any).
    #[command(flatten)]
    pub rules: RuleSelection,
    /// Tax rules document; the built-in defaults otherwise.
    #[arg(long, value_name = "FILE")]
    pub tax_rules: Option<PathBuf>,
    #[arg(long, value_parser = rate_arg)]
    pub regular_rate: Option<Rate>,
    /// Interest income; defaults to the discount at issue.
    #[arg(long, value_parser = money_arg)]
    pub income: Option<Money>,
    /// Holding period; defaults to the instrument's tenor.
    #[arg(long, value_parser = years_arg)]
    pub holding_years: Option<Years>,
    #[arg(long)]
    pub holder_individual: bool,
    #[arg(long)]
    pub issuer_bank: bool,
    /// Trading gain to treat as well.
    #[arg(long, value_parser = money_arg, allow_hyphen_values = true)]
    pub gain: Option<Money>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Curve as CSV (`tenor_years,yield`) or a JSON array of points. Without
    /// it, the historical deposit and lending rates are shown.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Tenors to interpolate at.
    #[arg(long, value_parser = tenor_arg)]
    pub at: Vec<Tenor>,
}

#[derive(Debug, Clone, Args)]
pub struct PeaceArgs {
    /// Case document; the bundled PEACe case otherwise.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub tax_rules: Option<PathBuf>,
    #[arg(long, value_parser = rate_arg)]
    pub regular_rate: Option<Rate>,
}
