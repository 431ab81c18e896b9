use std::fs;
use std::path::{Path, PathBuf};

use depsub_core::{
    classify, coupon_bond_price, coupon_yield_from_price, deposit_rate_history, discount,
    fitness_of_path, holding_gain, interest_income_treatment, interpolate, is_upward_sloping,
    lending_rate_history, price_path, spread, trading_gain_treatment, withholding_amount,
    yield_from_price, zero_coupon_price, Classification, Compounding, FitnessPolicy, Instrument,
    InterestIncome, Money, PricePath, RateSeriesStats, RuleSet, RuleSetId, TaxCategory, TaxError,
    TaxRuleSet, TaxTreatment, Tenor, TransactionLedger, Verdict, Years,
};

use crate::docs::{self, Acquisition, Case};
use crate::error::{CliError, DocumentError};
use crate::report::{Cell, Report, Section};
use crate::{
    ClassifyArgs, Command, CurveArgs, FitnessArgs, PathArgs, PeaceArgs, PriceArgs, RuleSelection,
    RunConfig, TaxArgs, YieldArgs,
};

const PEACE_CASE: &str = include_str!("../fixtures/peace-case.json");

/// Runs the command and renders its report, writing it to `--out` when
/// given. Returns the rendered text.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    if let Some(out) = &config.out {
        if inputs(&config.command).iter().any(|p| same_file(p, out)) {
            return Err(CliError::Usage(format!(
                "refusing to overwrite input {} with output",
                out.display()
            )));
        }
    }
    let text = run(&config.command)?.render(config.format);
    if let Some(out) = &config.out {
        fs::write(out, &text).map_err(|source| CliError::Output {
            path: out.clone(),
            source,
        })?;
    }
    Ok(text)
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Price(a) => price(a),
        Command::Yield(a) => yield_(a),
        Command::Path(a) => path(a),
        Command::Fitness(a) => fitness(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Tax(a) => tax(a),
        Command::Curve(a) => curve(a),
        Command::Peace(a) => peace(a),
    }
}

fn inputs(command: &Command) -> Vec<&Path> {
    let mut paths: Vec<Option<&PathBuf>> = Vec::new();
    match command {
        Command::Price(a) => paths.push(a.input.as_ref()),
        Command::Yield(a) => paths.push(a.input.as_ref()),
        Command::Path(a) => paths.extend([Some(&a.input), Some(&a.scenario)]),
        Command::Fitness(a) => paths.extend([Some(&a.path.input), Some(&a.path.scenario)]),
        Command::Classify(a) => paths.extend([Some(&a.input), a.rules.rule_set.as_ref()]),
        Command::Tax(a) => paths.extend([Some(&a.input), a.rules.rule_set.as_ref(), a.tax_rules.as_ref()]),
        Command::Curve(a) => paths.push(a.input.as_ref()),
        Command::Peace(a) => paths.extend([a.input.as_ref(), a.tax_rules.as_ref()]),
    }
    paths.into_iter().flatten().map(PathBuf::as_path).collect()
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, DocumentError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|e| e.in_file(path))
}

fn tenor_cell(t: Tenor) -> Cell {
    Cell::text(t.to_string())
}

fn compounding_name(c: Compounding) -> &'static str {
    match c {
        Compounding::Annual => "annual",
        Compounding::Semiannual => "semiannual",
    }
}

fn instrument_section(i: &Instrument) -> Section {
    let mut s = Section::new("instrument", &["face_value", "contractual_rate", "coupon_rate", "tenor_years", "compounding", "issuer"]);
    s.row(vec![
        i.face_value().into(),
        i.contractual_rate().into(),
        i.coupon_rate().into(),
        tenor_cell(i.tenor()),
        compounding_name(i.compounding()).into(),
        i.issuer().into(),
    ]);
    s
}

/// An instrument from `--input`, or a zero-coupon one from `--face`.
fn instrument_from(
    input: &Option<PathBuf>,
    face: Option<Money>,
    years: Option<Tenor>,
    compounding: Option<crate::CompoundingArg>,
) -> Result<(Instrument, Tenor), CliError> {
    match input {
        Some(path) => {
            if face.is_some() {
                return Err(CliError::Usage("--face conflicts with --input".into()));
            }
            if compounding.is_some() {
                return Err(CliError::Usage("--compounding conflicts with --input".into()));
            }
            let instrument = load(path, docs::parse_instrument)?;
            let ttm = years.unwrap_or(instrument.tenor());
            Ok((instrument, ttm))
        }
        None => {
            let face = face.ok_or_else(|| CliError::Usage("give --input or --face".into()))?;
            let years = years.ok_or_else(|| CliError::Usage("--years is required with --face".into()))?;
            let compounding = compounding.map_or(Compounding::Annual, Into::into);
            // the contractual rate is irrelevant to pricing at a market rate
            let instrument = Instrument::zero_coupon(face, depsub_core::Rate::ZERO, years, compounding)
                .map_err(CliError::domain)?;
            Ok((instrument, years))
        }
    }
}

fn price(a: &PriceArgs) -> Result<Report, CliError> {
    let (instrument, ttm) = instrument_from(&a.input, a.face, a.years, a.compounding)?;
    let price = if instrument.is_zero_coupon() {
        zero_coupon_price(instrument.face_value(), a.rate, ttm, instrument.compounding())
    } else {
        coupon_bond_price(&instrument, a.rate, ttm)
    }
    .map_err(CliError::domain)?;
    let mut s = Section::new("price", &["face_value", "market_rate", "time_to_maturity", "compounding", "price", "discount"]);
    s.row(vec![
        instrument.face_value().into(),
        a.rate.into(),
        tenor_cell(ttm),
        compounding_name(instrument.compounding()).into(),
        price.into(),
        discount(instrument.face_value(), price).into(),
    ]);
    let mut r = Report::new("Price");
    r.push(s);
    Ok(r)
}

fn yield_(a: &YieldArgs) -> Result<Report, CliError> {
    let (instrument, ttm) = instrument_from(&a.input, a.face, a.years, a.compounding)?;
    let rate = if instrument.is_zero_coupon() {
        yield_from_price(instrument.face_value(), a.price, ttm, instrument.compounding())
    } else {
        coupon_yield_from_price(&instrument, a.price, ttm)
    }
    .map_err(CliError::domain)?;
    let mut s = Section::new("yield", &["face_value", "price", "time_to_maturity", "compounding", "yield"]);
    s.row(vec![
        instrument.face_value().into(),
        a.price.into(),
        tenor_cell(ttm),
        compounding_name(instrument.compounding()).into(),
        rate.into(),
    ]);
    let mut r = Report::new("Yield");
    r.push(s);
    Ok(r)
}

fn load_path(a: &PathArgs) -> Result<(Instrument, PricePath), CliError> {
    let instrument = load(&a.input, docs::parse_instrument)?;
    let scenario = load(&a.scenario, docs::parse_scenario)?;
    let path = price_path(&instrument, &scenario).map_err(CliError::domain)?;
    Ok((instrument, path))
}

fn path_section(path: &PricePath) -> Section {
    let initial = path.rows[0].price;
    let mut s = Section::new("path", &["year", "market_rate", "time_to_maturity", "price", "gain_vs_issue"]);
    for row in &path.rows {
        s.row(vec![
            row.year.into(),
            row.market_rate.into(),
            tenor_cell(row.time_to_maturity),
            row.price.into(),
            holding_gain(initial, row.price).into(),
        ]);
    }
    s
}

fn path(a: &PathArgs) -> Result<Report, CliError> {
    let (instrument, path) = load_path(a)?;
    let mut r = Report::new("Price path");
    r.push(instrument_section(&instrument));
    r.push(path_section(&path));
    Ok(r)
}

fn fitness(a: &FitnessArgs) -> Result<Report, CliError> {
    let policy = FitnessPolicy {
        max_breakeven_year: a.max_breakeven_year,
        max_tenor: a.max_tenor_years,
    };
    let (instrument, path) = load_path(&a.path)?;
    let f = fitness_of_path(&path, instrument.tenor(), &policy);
    let verdict = match f.verdict {
        Verdict::ReplicatesDeposit => "replicates deposit",
        Verdict::FailsDepositFeatures => "fails deposit features",
    };
    let mut s = Section::new(
        "fitness",
        &["initial_investment", "breakeven_year", "capital_preservation_breached", "max_drawdown", "verdict"],
    );
    s.row(vec![
        f.initial_investment.into(),
        f.breakeven_year.into(),
        f.capital_preservation_breached.into(),
        f.max_drawdown.into(),
        verdict.into(),
    ]);
    let mut r = Report::new("Deposit fitness");
    r.push(instrument_section(&instrument));
    r.push(path_section(&path));
    r.push(s);
    Ok(r)
}

/// Rule sets named by the selection, or `default` when none is.
fn rule_sets(sel: &RuleSelection, default: &[RuleSetId]) -> Result<Vec<RuleSet>, CliError> {
    let base: Vec<RuleSet> = match (&sel.rule_set, sel.rules) {
        (Some(path), _) => vec![load(path, docs::parse_rule_set)?],
        (None, Some(id)) => vec![RuleSet::preset(id.into())],
        (None, None) => default.iter().map(|id| RuleSet::preset(*id)).collect(),
    };
    base.into_iter()
        .map(|r| {
            let threshold = sel.threshold.unwrap_or(r.lender_threshold());
            let max_tenor = sel.max_tenor_years.or(r.max_tenor());
            RuleSet::new(r.id(), threshold, max_tenor).map_err(|e| CliError::Usage(format!("--threshold: {e}")))
        })
        .collect()
}

fn classification_section(ledger: &TransactionLedger, sets: &[RuleSet]) -> (Section, Vec<Classification>) {
    let mut s = Section::new(
        "classification",
        &["rule_set", "lender_threshold", "max_tenor_years", "deposit_substitute", "triggering_transaction", "unmet"],
    );
    let mut all = Vec::new();
    for rules in sets {
        let c = classify(ledger, rules);
        let unmet: Vec<String> = c
            .rationale
            .iter()
            .filter(|e| !e.satisfied)
            .map(|e| format!("{}: {}", e.element, e.detail))
            .collect();
        s.row(vec![
            rules.id().slug().into(),
            rules.lender_threshold().into(),
            rules.max_tenor().map(tenor_cell).unwrap_or(Cell::Empty),
            c.is_deposit_substitute.into(),
            c.triggering_transaction.clone().into(),
            if unmet.is_empty() { Cell::Empty } else { Cell::Text(unmet.join("; ")) },
        ]);
        all.push(c);
    }
    (s, all)
}

fn elements_section(classifications: &[Classification]) -> Section {
    let mut s = Section::new("elements", &["rule_set", "element", "satisfied", "detail"]);
    for c in classifications {
        for e in &c.rationale {
            s.row(vec![c.rule_set.slug().into(), e.element.to_string().into(), e.satisfied.into(), e.detail.clone().into()]);
        }
    }
    s
}

fn classify_cmd(a: &ClassifyArgs) -> Result<Report, CliError> {
    let ledger = load(&a.input, docs::parse_ledger)?;
    let sets = rule_sets(&a.rules, &RuleSetId::ALL)?;
    let mut counts = Section::new("transactions", &["id", "sequence", "kind", "lender_count"]);
    for t in ledger.transactions() {
        let kind = match t.kind() {
            depsub_core::TransactionKind::Origination => "origination",
            depsub_core::TransactionKind::SecondarySale => "secondary_sale",
        };
        counts.row(vec![t.id().into(), t.sequence().into(), kind.into(), t.lender_count().into()]);
    }
    let (summary, all) = classification_section(&ledger, &sets);
    let mut r = Report::new("Deposit-substitute classification");
    r.push(counts);
    r.push(summary);
    r.push(elements_section(&all));
    Ok(r)
}

fn tax_rules(path: &Option<PathBuf>, regular: Option<depsub_core::Rate>) -> Result<TaxRuleSet, CliError> {
    let rules = match path {
        Some(p) => load(p, docs::parse_tax_rules)?,
        None => TaxRuleSet::default(),
    };
    match regular {
        Some(rate) => rules
            .with_regular_rate(rate)
            .map_err(|e| CliError::Usage(format!("--regular-rate: {e}"))),
        None => Ok(rules),
    }
}

const TREATMENT_COLUMNS: [&str; 7] = ["item", "category", "applied_rate", "base", "tax_due", "statutory_basis", "note"];

fn treatment_row(s: &mut Section, item: impl Into<Cell>, result: Result<TaxTreatment, TaxError>) -> Result<(), CliError> {
    match result {
        Ok(t) => {
            s.row(vec![
                item.into(),
                t.category.to_string().into(),
                t.applied_rate.into(),
                t.base.into(),
                t.tax_due.into(),
                t.statutory_basis.into(),
                Cell::Empty,
            ]);
            Ok(())
        }
        // an unconfigured regular rate is reported in place, not fatal
        Err(e @ TaxError::RegularRateNotConfigured) => {
            s.row(vec![
                item.into(),
                TaxCategory::RegularIncome.to_string().into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                e.to_string().into(),
            ]);
            Ok(())
        }
        Err(e) => Err(CliError::domain(e)),
    }
}

fn issue_price(instrument: &Instrument) -> Result<Money, CliError> {
    coupon_bond_price(instrument, instrument.contractual_rate(), instrument.tenor()).map_err(CliError::domain)
}

fn tax(a: &TaxArgs) -> Result<Report, CliError> {
    let ledger = load(&a.input, docs::parse_ledger)?;
    let sets = rule_sets(&a.rules, &[RuleSetId::StatutoryAnyTransaction])?;
    let rules = tax_rules(&a.tax_rules, a.regular_rate)?;
    let instrument = ledger.instrument();
    let amount = match a.income {
        Some(m) => m,
        None => discount(instrument.face_value(), issue_price(instrument)?),
    };
    let income = InterestIncome {
        holder_is_individual: a.holder_individual,
        issuer_is_bank: a.issuer_bank,
        holding_years: a.holding_years.unwrap_or(Years::from_tenor(instrument.tenor())),
        amount,
    };
    let (summary, all) = classification_section(&ledger, &sets);
    let mut s = Section::new("treatment", &TREATMENT_COLUMNS);
    for c in &all {
        treatment_row(&mut s, format!("interest ({})", c.rule_set.slug()), interest_income_treatment(instrument, c, &income, &rules))?;
    }
    if let Some(gain) = a.gain {
        treatment_row(&mut s, "trading gain", trading_gain_treatment(instrument, gain, &rules))?;
    }
    let mut r = Report::new("Tax treatment");
    r.push(instrument_section(instrument));
    r.push(summary);
    r.push(s);
    Ok(r)
}

fn history_row(s: &mut Section, h: &RateSeriesStats) {
    s.row(vec![
        h.label.into(),
        format!("{}-{}", h.first_year, h.last_year).into(),
        h.average.into(),
        h.high.0.into(),
        u32::from(h.high.1).into(),
        h.low.0.into(),
        u32::from(h.low.1).into(),
        h.latest.map(|l| l.0).into(),
        h.latest.map(|l| u32::from(l.1)).into(),
    ]);
}

fn curve(a: &CurveArgs) -> Result<Report, CliError> {
    let Some(path) = &a.input else {
        if !a.at.is_empty() {
            return Err(CliError::Usage("--at needs --input".into()));
        }
        let (dep, lend) = (deposit_rate_history(), lending_rate_history());
        let mut h = Section::new("history", &["series", "years", "average", "high", "high_year", "low", "low_year", "latest", "latest_year"]);
        history_row(&mut h, &dep);
        history_row(&mut h, &lend);
        let mut s = Section::new("spread", &["measure", "lending", "deposit", "spread"]);
        for (name, l, d) in [("average", lend.average, dep.average), ("high (1984)", lend.high.0, dep.high.0)] {
            s.row(vec![name.into(), l.into(), d.into(), spread(l, d).map_err(CliError::domain)?.into()]);
        }
        let mut r = Report::new("Philippine interest rates");
        r.push(h);
        r.push(s);
        return Ok(r);
    };
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('[') {
        docs::parse_curve_json(&text)
    } else {
        docs::parse_curve_csv(&text)
    };
    let curve = parsed.map_err(|e| e.in_file(path))?;
    let mut points = Section::new("curve", &["tenor_years", "yield"]);
    for p in curve.points() {
        points.row(vec![tenor_cell(p.tenor), p.yield_rate.into()]);
    }
    let mut shape = Section::new("shape", &["upward_sloping"]);
    shape.row(vec![is_upward_sloping(&curve).into()]);
    let mut r = Report::new("Yield curve");
    r.push(points);
    r.push(shape);
    if !a.at.is_empty() {
        let mut s = Section::new("interpolated", &["tenor_years", "yield"]);
        for t in &a.at {
            s.row(vec![tenor_cell(*t), interpolate(&curve, *t).map_err(CliError::domain)?.into()]);
        }
        r.push(s);
    }
    Ok(r)
}

fn peace(a: &PeaceArgs) -> Result<Report, CliError> {
    let case: Case = match &a.input {
        Some(path) => load(path, docs::parse_case)?,
        None => docs::parse_case(PEACE_CASE).expect("bundled case is valid"),
    };
    let rules = tax_rules(&a.tax_rules, a.regular_rate)?;
    let instrument = case.ledger.instrument();
    let face = instrument.face_value();

    let issue = issue_price(instrument)?;
    let issue_discount = discount(face, issue);
    let mut origination = Section::new("origination", &["buyer_count", "price", "discount"]);
    origination.row(vec![case.ledger.origination().lender_count().into(), issue.into(), issue_discount.into()]);

    let mut sales = Section::new(
        "sales",
        &["id", "seller", "elapsed_years", "market_rate", "time_to_maturity", "cost", "price", "gain"],
    );
    let mut gains = Section::new("trading_gains", &TREATMENT_COLUMNS);
    let mut prices: Vec<(String, Money)> = Vec::new();
    for sale in &case.sales {
        let ttm = instrument
            .tenor()
            .checked_sub(Tenor::years(sale.elapsed_years))
            .expect("sale within tenor");
        let price = coupon_bond_price(instrument, sale.market_rate, ttm).map_err(CliError::domain)?;
        let cost = match &sale.acquired {
            Acquisition::Origination => issue,
            Acquisition::Sale(id) => prices.iter().find(|(p, _)| p == id).expect("validated earlier sale").1,
        };
        let gain = holding_gain(cost, price);
        sales.row(vec![
            sale.id.as_str().into(),
            sale.seller.as_str().into(),
            sale.elapsed_years.into(),
            sale.market_rate.into(),
            tenor_cell(ttm),
            cost.into(),
            price.into(),
            gain.into(),
        ]);
        treatment_row(&mut gains, format!("{} gain", sale.id), trading_gain_treatment(instrument, gain, &rules))?;
        prices.push((sale.id.clone(), price));
    }

    let sets: Vec<RuleSet> = RuleSetId::ALL.iter().map(|id| RuleSet::preset(*id)).collect();
    let (summary, all) = classification_section(&case.ledger, &sets);

    let income = InterestIncome {
        holder_is_individual: false,
        issuer_is_bank: false,
        holding_years: Years::from_tenor(instrument.tenor()),
        amount: issue_discount,
    };
    let mut interest = Section::new("interest_income", &TREATMENT_COLUMNS);
    interest.row(vec![
        "discount if a deposit substitute".into(),
        TaxCategory::FinalWithholding.to_string().into(),
        rules.fwt_rate().into(),
        issue_discount.into(),
        withholding_amount(issue_discount, rules.fwt_rate()).into(),
        "NIRC Secs. 24(B)(1), 27(D)(1): final withholding on deposit-substitute interest".into(),
        Cell::Empty,
    ]);
    for c in &all {
        treatment_row(&mut interest, format!("discount ({})", c.rule_set.slug()), interest_income_treatment(instrument, c, &income, &rules))?;
    }

    let mut r = Report::new("PEACe bonds case");
    r.push(instrument_section(instrument));
    r.push(origination);
    r.push(sales);
    r.push(summary);
    r.push(interest);
    r.push(gains);
    Ok(r)
}
