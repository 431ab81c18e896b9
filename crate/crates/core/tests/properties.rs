use depsub_core::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rate_bps() -> impl Strategy<Value = Rate> {
    (0i64..=5000).prop_map(|b| Rate::from_bps(b).unwrap())
}

fn face() -> impl Strategy<Value = Money> {
    (1_000_000i64..=100_000_000_000).prop_map(Money::from_pesos)
}

fn ledger_counts() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=40, 1..=10)
}

fn ledger(years: u32, counts: &[u32]) -> TransactionLedger {
    let instrument = Instrument::zero_coupon(
        Money::from_pesos(1_000_000),
        Rate::from_bps(600).unwrap(),
        Tenor::years(years),
        Compounding::Annual,
    )
    .unwrap();
    let txs = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let kind = if i == 0 { TransactionKind::Origination } else { TransactionKind::SecondarySale };
            Transaction::new(format!("tx-{i}"), i as u32, kind, n).unwrap()
        })
        .collect();
    TransactionLedger::new(instrument, txs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn price_rises_as_maturity_nears(face in face(), rate in 1i64..=5000, n in 1u32..=30) {
        let rate = Rate::from_bps(rate).unwrap();
        let far = zero_coupon_price(face, rate, Tenor::years(n), Compounding::Annual).unwrap();
        let near = zero_coupon_price(face, rate, Tenor::years(n - 1), Compounding::Annual).unwrap();
        prop_assert!(near > far);
    }

    #[test]
    fn semiannual_discounts_deeper(face in face(), rate in rate_bps(), n in 1u32..=30) {
        let annual = zero_coupon_price(face, rate, Tenor::years(n), Compounding::Annual).unwrap();
        let semi = zero_coupon_price(face, rate, Tenor::years(n), Compounding::Semiannual).unwrap();
        prop_assert!(semi <= annual);
    }

    #[test]
    fn flat_path_accretes(face in face(), rate in 1i64..=3000, years in 1u32..=15) {
        let rate = Rate::from_bps(rate).unwrap();
        let bond = Instrument::zero_coupon(face, rate, Tenor::years(years), Compounding::Annual).unwrap();
        let path = price_path(&bond, &RateScenario::flat(rate, years).unwrap()).unwrap();
        prop_assert_eq!(path.rows.len() as u32, years + 1);
        prop_assert!(path.rows.windows(2).all(|w| w[1].price > w[0].price));
        prop_assert_eq!(path.maturity_row().price, face);
        prop_assert_eq!(path.maturity_row().time_to_maturity, Tenor::ZERO);
        prop_assert_eq!(breakeven_year(&path, path.rows[0].price), Some(2));
    }

    #[test]
    fn fitness_invariants(face in face(), rates in prop::collection::vec(rate_bps(), 1..=12)) {
        let years = rates.len() as u32;
        let bond = Instrument::zero_coupon(face, rates[0], Tenor::years(years), Compounding::Annual).unwrap();
        let scenario = RateScenario::from_rates(rates).unwrap();
        let path = price_path(&bond, &scenario).unwrap();
        let report = deposit_fitness(&bond, &scenario).unwrap();
        let breached = path.rows.iter().any(|r| r.year >= 2 && r.year <= years && r.price < report.initial_investment);
        prop_assert_eq!(report.capital_preservation_breached, breached);
        let fails = report.verdict == Verdict::FailsDepositFeatures;
        let late = report.breakeven_year.is_none_or(|y| y > 2);
        prop_assert!(!(breached || late) || fails);
        prop_assert_eq!(report.max_drawdown.is_positive(), breached);
    }

    #[test]
    fn interpolation_exact_at_nodes_and_bounded(
        mut tenors in prop::collection::btree_set(1u32..=60, 2..=8),
        yields in prop::collection::vec(0i64..=2000, 8),
        query in 0u32..=60,
    ) {
        let tenors: Vec<u32> = std::mem::take(&mut tenors).into_iter().collect();
        let points: Vec<CurvePoint> = tenors
            .iter()
            .zip(&yields)
            .map(|(&t, &y)| CurvePoint { tenor: Tenor::from_half_years(t), yield_rate: Rate::from_bps(y).unwrap() })
            .collect();
        let curve = YieldCurve::new(points.clone()).unwrap();
        for p in &points {
            prop_assert_eq!(interpolate(&curve, p.tenor).unwrap(), p.yield_rate);
        }
        let q = Tenor::from_half_years(query);
        match interpolate(&curve, q) {
            Ok(y) => {
                let hi = points.iter().position(|p| p.tenor >= q).unwrap();
                let lo = hi.saturating_sub(1);
                let (a, b) = (points[lo].yield_rate, points[hi].yield_rate);
                prop_assert!(a.min(b) <= y && y <= a.max(b));
            }
            Err(_) => prop_assert!(q < points[0].tenor || q > points[points.len() - 1].tenor),
        }
    }

    #[test]
    fn slope_ignores_tenor_scale(
        tenors in prop::collection::btree_set(1u32..=20, 2..=6),
        yields in prop::collection::vec(0i64..=2000, 6),
        scale in 1u32..=5,
    ) {
        let build = |k: u32| {
            YieldCurve::new(
                tenors.iter().zip(&yields)
                    .map(|(&t, &y)| CurvePoint { tenor: Tenor::from_half_years(t * k), yield_rate: Rate::from_bps(y).unwrap() })
                    .collect(),
            ).unwrap()
        };
        prop_assert_eq!(is_upward_sloping(&build(1)), is_upward_sloping(&build(scale)));
    }

    #[test]
    fn spread_is_antisymmetric(a in rate_bps(), b in rate_bps()) {
        prop_assert_eq!(spread(a, b).unwrap().scaled(), -spread(b, a).unwrap().scaled());
    }

    #[test]
    fn net_interest_without_liabilities(assets in 0i64..=10i64.pow(15), rate in 0i64..=10i64.pow(12)) {
        let assets = Money::from_centavos(assets);
        let rate = Rate::from_scaled(i128::from(rate)).unwrap();
        let nii = net_interest_income(assets, rate, Money::ZERO, Rate::from_bps(900).unwrap());
        prop_assert_eq!(nii, rate.apply(assets));
        // big-integer floor/ceil bracket the result
        let exact = BigInt::from(assets.centavos()) * BigInt::from(rate.scaled());
        let unit = BigInt::from(10i64.pow(12));
        let got = BigInt::from(nii.centavos()) * &unit;
        prop_assert!((got - exact).magnitude() * 2u32 <= unit.magnitude().clone());
    }

    #[test]
    fn proposed_implies_any_transaction(counts in ledger_counts(), years in 1u32..=3) {
        let l = ledger(years, &counts);
        if classify(&l, &RuleSet::proposed_short_term()).is_deposit_substitute {
            prop_assert!(classify(&l, &RuleSet::statutory_any_transaction()).is_deposit_substitute);
        }
        if classify(&l, &RuleSet::statutory_origination()).is_deposit_substitute {
            prop_assert!(classify(&l, &RuleSet::statutory_any_transaction()).is_deposit_substitute);
        }
    }

    #[test]
    fn classification_is_deterministic(counts in ledger_counts()) {
        let a = ledger(1, &counts);
        let b = ledger(1, &counts);
        for id in RuleSetId::ALL {
            prop_assert_eq!(classify(&a, &RuleSet::preset(id)), classify(&b, &RuleSet::preset(id)));
        }
    }

    #[test]
    fn threshold_sharpness(len in 1usize..=10, raised in 0usize..10) {
        let raised = raised % len;
        let mut counts = vec![19; len];
        let l = ledger(1, &counts);
        for id in RuleSetId::ALL {
            prop_assert!(!classify(&l, &RuleSet::preset(id)).is_deposit_substitute);
        }
        counts[raised] = 20;
        let l = ledger(1, &counts);
        let any = classify(&l, &RuleSet::statutory_any_transaction());
        prop_assert!(any.is_deposit_substitute);
        prop_assert_eq!(any.triggering_transaction, Some(format!("tx-{raised}")));
        prop_assert_eq!(
            classify(&l, &RuleSet::statutory_origination()).is_deposit_substitute,
            raised == 0
        );
    }

    #[test]
    fn every_interest_case_resolves(
        individual: bool,
        bank: bool,
        ds: bool,
        tenor in 1u32..=12,
        holding in 0u64..=12_000_000,
        income in 0i64..=10i64.pow(12),
    ) {
        let rules = TaxRuleSet::default().with_regular_rate(Rate::from_bps(3000).unwrap()).unwrap();
        let bond = Instrument::zero_coupon(Money::from_pesos(100_000), Rate::from_bps(500).unwrap(), Tenor::years(tenor), Compounding::Annual).unwrap();
        let counts = if ds { vec![25] } else { vec![1] };
        let c = classify(&ledger(tenor, &counts), &RuleSet::statutory_any_transaction());
        let facts = InterestIncome {
            holder_is_individual: individual,
            issuer_is_bank: bank,
            holding_years: Years::parse(&format!("{}.{:06}", holding / 1_000_000, holding % 1_000_000)).unwrap(),
            amount: Money::from_centavos(income),
        };
        let t = interest_income_treatment(&bond, &c, &facts, &rules).unwrap();
        let ltdic = individual && bank && tenor >= 5;
        let expected = match (ltdic, holding >= 5_000_000, ds) {
            (true, true, _) => TaxCategory::Exempt,
            (true, false, _) => TaxCategory::PretermFinal,
            (false, _, true) => TaxCategory::FinalWithholding,
            (false, _, false) => TaxCategory::RegularIncome,
        };
        prop_assert_eq!(t.category, expected);
        if matches!(t.category, TaxCategory::Exempt | TaxCategory::ExcludedFromGrossIncome) {
            prop_assert_eq!(t.tax_due, Money::ZERO);
        }
        prop_assert_eq!(t.tax_due, withholding_amount(t.base, t.applied_rate));
    }
}

#[test]
fn preterm_rate_steps_only_at_three_four_five() {
    let rules = TaxRuleSet::default();
    let mut previous = None;
    let mut breaks = Vec::new();
    // scan in thousandths of a year
    for milli in 0..=8000u32 {
        let held = Years::parse(&format!("{}.{:03}", milli / 1000, milli % 1000)).unwrap();
        let rate = rules.preterm_rate(held);
        if previous.is_some_and(|p| p != rate) {
            breaks.push(milli);
        }
        previous = Some(rate);
    }
    assert_eq!(breaks, [3000, 4000, 5000]);
}
