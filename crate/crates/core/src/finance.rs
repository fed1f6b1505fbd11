//! Investment ledger, depreciation, yearly cash flows and summary metrics.
//!
//! Money is exact decimal arithmetic. Rates are fractions per year (0.05 = 5 %/yr).
//! Year 0 carries the own-funds outlay; years 1..=lifetime carry operating flows, and
//! escalation, inflation and production aging compound from year 1.

use std::fmt;
use std::io::Write;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use rust_decimal::prelude::*;
use rust_decimal::RoundingStrategy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact currency amount. Serialized as a string with two decimals; deserialized from a
/// string or a number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Money(pub Decimal);

impl Serialize for Money {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        decimal_serde::deserialize(d).map(Money)
    }
}

/// Accepts a decimal written as a string, integer or float. Floats go through their
/// shortest round-trip text, so `9.68` becomes exactly 9.68.
pub mod decimal_serde {
    use rust_decimal::Decimal;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Float(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Decimal, D::Error> {
        let text = match Raw::deserialize(d)? {
            Raw::Int(i) => return Ok(Decimal::from(i)),
            Raw::Float(f) if f.is_finite() => f.to_string(),
            Raw::Float(f) => return Err(D::Error::custom(format!("{f} is not a decimal amount"))),
            Raw::Text(s) => s,
        };
        let t = text.trim().replace(['_', ','], "");
        Decimal::from_str_exact(&t)
            .or_else(|_| Decimal::from_scientific(&t))
            .map_err(|e| D::Error::custom(format!("invalid decimal {text:?}: {e}")))
    }
}

impl Money {
    pub const ZERO: Money = Money(Decimal::ZERO);

    pub fn new(amount: Decimal) -> Self {
        Money(amount)
    }

    /// Half-up rounding to minor units.
    pub fn rounded(self) -> Money {
        Money(self.0.round_dp_with_strategy(2, RoundingStrategy::MidpointAwayFromZero))
    }

    /// Half-up rounding to whole currency units.
    pub fn whole(self) -> Decimal {
        self.0.round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero)
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn max(self, other: Money) -> Money {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.rounded().0)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Mul<Decimal> for Money {
    type Output = Money;
    fn mul(self, rhs: Decimal) -> Money {
        Money(self.0 * rhs)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DepreciationMethod {
    #[default]
    #[serde(rename = "straight-line")]
    StraightLine,
}

impl FromStr for DepreciationMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "straight-line" => Ok(DepreciationMethod::StraightLine),
            other => Err(Error::validation(format!("unsupported depreciation method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostItem {
    pub name: String,
    #[serde(default)]
    pub category: Option<String>,
    #[serde(deserialize_with = "decimal_serde::deserialize")]
    pub quantity: Decimal,
    pub unit_cost: Money,
    #[serde(default)]
    pub depreciable: bool,
    /// Years; falls back to the schedule-wide period.
    #[serde(default)]
    pub depreciation_period: Option<u32>,
    #[serde(default)]
    pub salvage: Money,
}

impl CostItem {
    pub fn total(&self) -> Money {
        self.unit_cost * self.quantity
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostLedger {
    pub items: Vec<CostItem>,
}

impl CostLedger {
    pub fn total(&self) -> Money {
        self.items.iter().map(CostItem::total).sum()
    }

    pub fn depreciable_base(&self) -> Money {
        self.items.iter().filter(|i| i.depreciable).map(CostItem::total).sum()
    }

    pub fn validate(&self) -> Result<()> {
        for i in &self.items {
            if i.quantity.is_sign_negative() || i.unit_cost.0.is_sign_negative() {
                return Err(Error::validation(format!("cost item '{}' has a negative quantity or cost", i.name)));
            }
            if i.salvage > i.total() {
                return Err(Error::validation(format!("cost item '{}' salvage exceeds its cost", i.name)));
            }
            if i.depreciation_period == Some(0) {
                return Err(Error::validation(format!("cost item '{}' has a zero depreciation period", i.name)));
            }
        }
        Ok(())
    }
}

/// Yearly depreciation allowance; element `k` belongs to year `k + 1`.
///
/// Each depreciable item writes off `total − salvage` evenly over its period. Annual
/// amounts are rounded to minor units and the last year absorbs the remainder, so the
/// schedule sums exactly to the depreciable amount.
pub fn depreciation_schedule(ledger: &CostLedger, method: DepreciationMethod, period: u32) -> Result<Vec<Money>> {
    if period == 0 {
        return Err(Error::domain("depreciation period must be > 0"));
    }
    let DepreciationMethod::StraightLine = method;
    let mut schedule: Vec<Money> = Vec::new();
    for item in ledger.items.iter().filter(|i| i.depreciable) {
        let years = item.depreciation_period.unwrap_or(period);
        if years == 0 {
            return Err(Error::domain(format!("item '{}' has a zero depreciation period", item.name)));
        }
        if schedule.len() < years as usize {
            schedule.resize(years as usize, Money::ZERO);
        }
        let amount = item.total() - item.salvage;
        let annual = Money(amount.0 / Decimal::from(years)).rounded();
        for slot in schedule.iter_mut().take(years as usize - 1) {
            *slot += annual;
        }
        schedule[years as usize - 1] += amount - annual * Decimal::from(years - 1);
    }
    Ok(schedule)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinanceParams {
    pub lifetime: u32,
    pub start_year: i32,
    pub currency: String,
    /// per kWh exported
    #[serde(deserialize_with = "decimal_serde::deserialize")]
    pub feed_in_tariff: Decimal,
    /// per kWh self-consumed
    #[serde(deserialize_with = "decimal_serde::deserialize")]
    pub consumption_tariff: Decimal,
    #[serde(default, deserialize_with = "decimal_serde::deserialize")]
    pub discount_rate: Decimal,
    /// Applied to running costs.
    #[serde(default, deserialize_with = "decimal_serde::deserialize")]
    pub inflation: Decimal,
    #[serde(default, deserialize_with = "decimal_serde::deserialize")]
    pub income_tax_rate: Decimal,
    /// Applied to both tariffs.
    #[serde(default, deserialize_with = "decimal_serde::deserialize")]
    pub tariff_escalation: Decimal,
    /// Yearly fractional loss of production.
    #[serde(default, deserialize_with = "decimal_serde::deserialize")]
    pub production_aging: Decimal,
    /// Running costs per year.
    pub opex: Money,
    pub own_funds: Money,
    #[serde(default)]
    pub depreciation_method: DepreciationMethod,
    pub depreciation_period: u32,
}

impl FinanceParams {
    pub fn validate(&self) -> Result<()> {
        if self.lifetime == 0 {
            return Err(Error::validation("lifetime must be > 0 years"));
        }
        for (name, r) in [
            ("discount_rate", self.discount_rate),
            ("inflation", self.inflation),
            ("income_tax_rate", self.income_tax_rate),
            ("tariff_escalation", self.tariff_escalation),
            ("production_aging", self.production_aging),
        ] {
            if r < -Decimal::ONE {
                return Err(Error::validation(format!("{name} must be >= -100 %")));
            }
        }
        Ok(())
    }
}

/// Energy delivered in the first operating year, kWh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnualEnergy {
    pub sold_kwh: f64,
    pub self_consumed_kwh: f64,
}

impl AnnualEnergy {
    pub fn total_kwh(&self) -> f64 {
        self.sold_kwh + self.self_consumed_kwh
    }
}

/// kWh to a decimal at watt-hour resolution.
fn kwh_decimal(kwh: f64) -> Result<Decimal> {
    if !(kwh >= 0.0 && kwh.is_finite()) {
        return Err(Error::domain(format!("energy must be a finite value >= 0, got {kwh}")));
    }
    Decimal::from_f64(kwh)
        .map(|d| d.round_dp(3))
        .ok_or_else(|| Error::domain(format!("energy {kwh} not representable")))
}

fn growth(rate: Decimal, years: u32) -> Decimal {
    let base = Decimal::ONE + rate;
    (0..years).fold(Decimal::ONE, |acc, _| acc * base)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashFlowRow {
    pub year: u32,
    pub calendar_year: i32,
    pub electricity_sale: Money,
    pub own_funds: Money,
    pub running_costs: Money,
    pub depreciation_allowance: Money,
    pub taxable_income: Money,
    pub taxes: Money,
    pub after_tax_profit: Money,
    pub self_consumption_saving: Money,
    pub cumulative_profit: Money,
    /// Fraction of own funds recovered, 1.0 = 100 %.
    pub percent_amortized: Decimal,
}

impl CashFlowRow {
    /// Net cash flow of the year as seen by the investor.
    pub fn net_flow(&self) -> Money {
        self.after_tax_profit + self.self_consumption_saving - self.own_funds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashFlowTotals {
    pub electricity_sale: Money,
    pub own_funds: Money,
    pub running_costs: Money,
    pub depreciation_allowance: Money,
    pub taxable_income: Money,
    pub taxes: Money,
    pub after_tax_profit: Money,
    pub self_consumption_saving: Money,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashFlowSchedule {
    pub currency: String,
    pub rows: Vec<CashFlowRow>,
}

impl CashFlowSchedule {
    pub fn own_funds(&self) -> Money {
        self.rows.first().map(|r| r.own_funds).unwrap_or_default()
    }

    pub fn net_flows(&self) -> Vec<Money> {
        self.rows.iter().map(CashFlowRow::net_flow).collect()
    }

    pub fn final_cumulative(&self) -> Money {
        self.rows.last().map(|r| r.cumulative_profit).unwrap_or_default()
    }

    /// Column sums recomputed from the rows.
    pub fn totals(&self) -> CashFlowTotals {
        let sum = |f: fn(&CashFlowRow) -> Money| self.rows.iter().map(f).sum();
        CashFlowTotals {
            electricity_sale: sum(|r| r.electricity_sale),
            own_funds: sum(|r| r.own_funds),
            running_costs: sum(|r| r.running_costs),
            depreciation_allowance: sum(|r| r.depreciation_allowance),
            taxable_income: sum(|r| r.taxable_income),
            taxes: sum(|r| r.taxes),
            after_tax_profit: sum(|r| r.after_tax_profit),
            self_consumption_saving: sum(|r| r.self_consumption_saving),
        }
    }

    /// CSV with the yearly-table column names, amounts in whole currency units.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "Year",
            "Electricity sale",
            "Own funds",
            "Run. costs",
            "Deprec. allow.",
            "Taxable income",
            "Taxes",
            "After-tax profit",
            "Self-cons. saving",
            "Cumul. profit",
            "% amort.",
        ])?;
        let pct = |d: Decimal| {
            format!(
                "{:.1}%",
                (d * Decimal::ONE_HUNDRED).round_dp_with_strategy(1, RoundingStrategy::MidpointAwayFromZero)
            )
        };
        for r in &self.rows {
            w.write_record([
                r.year.to_string(),
                r.electricity_sale.whole().to_string(),
                r.own_funds.whole().to_string(),
                r.running_costs.whole().to_string(),
                r.depreciation_allowance.whole().to_string(),
                r.taxable_income.whole().to_string(),
                r.taxes.whole().to_string(),
                r.after_tax_profit.whole().to_string(),
                r.self_consumption_saving.whole().to_string(),
                r.cumulative_profit.whole().to_string(),
                pct(r.percent_amortized),
            ])?;
        }
        let t = self.totals();
        let last = self.rows.last();
        w.write_record([
            "Total".to_string(),
            t.electricity_sale.whole().to_string(),
            t.own_funds.whole().to_string(),
            t.running_costs.whole().to_string(),
            t.depreciation_allowance.whole().to_string(),
            t.taxable_income.whole().to_string(),
            t.taxes.whole().to_string(),
            t.after_tax_profit.whole().to_string(),
            t.self_consumption_saving.whole().to_string(),
            last.map(|r| r.cumulative_profit.whole().to_string()).unwrap_or_default(),
            last.map(|r| pct(r.percent_amortized)).unwrap_or_default(),
        ])?;
        w.flush()
    }
}

/// Year-by-year economic table.
pub fn cash_flow_table(params: &FinanceParams, ledger: &CostLedger, energy: AnnualEnergy) -> Result<CashFlowSchedule> {
    params.validate()?;
    ledger.validate()?;
    let sold = kwh_decimal(energy.sold_kwh)?;
    let self_used = kwh_decimal(energy.self_consumed_kwh)?;
    let depreciation = depreciation_schedule(ledger, params.depreciation_method, params.depreciation_period)?;
    let own = params.own_funds;
    let amortized = |cum: Money| {
        if own.0.is_zero() {
            Decimal::ZERO
        } else {
            (cum.0 + own.0) / own.0
        }
    };

    let mut rows = Vec::with_capacity(params.lifetime as usize + 1);
    rows.push(CashFlowRow {
        year: 0,
        calendar_year: params.start_year,
        electricity_sale: Money::ZERO,
        own_funds: own,
        running_costs: Money::ZERO,
        depreciation_allowance: Money::ZERO,
        taxable_income: Money::ZERO,
        taxes: Money::ZERO,
        after_tax_profit: Money::ZERO,
        self_consumption_saving: Money::ZERO,
        cumulative_profit: -own,
        percent_amortized: Decimal::ZERO,
    });
    let mut cumulative = -own;
    for year in 1..=params.lifetime {
        let k = year - 1;
        let production = growth(-params.production_aging, k);
        let tariff = growth(params.tariff_escalation, k);
        let sale = Money(sold * production * params.feed_in_tariff * tariff);
        let saving = Money(self_used * production * params.consumption_tariff * tariff);
        let running = params.opex * growth(params.inflation, k);
        let dep = depreciation.get(k as usize).copied().unwrap_or_default();
        let taxable = (sale - running - dep).max(Money::ZERO);
        let taxes = taxable * params.income_tax_rate;
        let after_tax = sale - running - taxes;
        cumulative = cumulative + after_tax + saving;
        rows.push(CashFlowRow {
            year,
            calendar_year: params.start_year + year as i32,
            electricity_sale: sale,
            own_funds: Money::ZERO,
            running_costs: running,
            depreciation_allowance: dep,
            taxable_income: taxable,
            taxes,
            after_tax_profit: after_tax,
            self_consumption_saving: saving,
            cumulative_profit: cumulative,
            percent_amortized: amortized(cumulative),
        });
    }
    Ok(CashFlowSchedule { currency: params.currency.clone(), rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaybackConvention {
    /// Linear interpolation inside the break-even year.
    #[default]
    Interpolated,
    /// First whole year with non-negative cumulative profit.
    WholeYears,
}

/// Years until cumulative profit reaches zero; `None` when it never does.
pub fn simple_payback(schedule: &CashFlowSchedule, convention: PaybackConvention) -> Option<f64> {
    let rows = &schedule.rows;
    let first = rows.first()?;
    if first.cumulative_profit >= Money::ZERO {
        return Some(0.0);
    }
    rows.windows(2).find(|w| w[1].cumulative_profit >= Money::ZERO).map(|w| {
        let (prev, next) = (w[0].cumulative_profit.to_f64(), w[1].cumulative_profit.to_f64());
        match convention {
            PaybackConvention::WholeYears => w[1].year as f64,
            PaybackConvention::Interpolated => w[0].year as f64 + (-prev) / (next - prev),
        }
    })
}

/// Net present value of the net flows; year 0 is undiscounted.
pub fn npv(schedule: &CashFlowSchedule, discount_rate: Decimal) -> Result<Money> {
    if discount_rate <= -Decimal::ONE {
        return Err(Error::domain(format!("discount rate must be > -100 %, got {discount_rate}")));
    }
    let base = Decimal::ONE + discount_rate;
    let mut factor = Some(Decimal::ONE);
    let mut total = Money::ZERO;
    for row in &schedule.rows {
        let f = if row.year == 0 { Some(Decimal::ONE) } else { factor.and_then(|f| f.checked_mul(base)) };
        if row.year > 0 {
            factor = f;
        }
        // a factor beyond decimal range discounts the flow to nothing
        if let Some(f) = f {
            total += Money(row.net_flow().0 / f);
        }
    }
    Ok(total)
}

/// NPV with floating-point discounting, for root finding.
pub fn npv_f64(flows: &[f64], rate: f64) -> f64 {
    let base = 1.0 + rate;
    flows.iter().enumerate().map(|(y, f)| f / base.powi(y as i32)).sum()
}

pub fn roi(npv: Money, own_funds: Money) -> Option<f64> {
    if own_funds.0.is_zero() {
        None
    } else {
        (npv.0 / own_funds.0).to_f64()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrResult {
    pub rate: f64,
    pub warning: Option<String>,
}

pub const IRR_LOWER: f64 = -0.99;
pub const IRR_UPPER: f64 = 10.0;
pub const IRR_TOLERANCE: f64 = 1e-7;

/// Bisection on a sign-changing bracket, run to floating-point resolution so that the
/// residual NPV is negligible even for large flows.
fn bisect(flows: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = npv_f64(flows, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = npv_f64(flows, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= IRR_TOLERANCE);
    0.5 * (lo + hi)
}

/// Internal rate of return by bracketing bisection on [-0.99, 10].
pub fn irr(schedule: &CashFlowSchedule) -> Result<IrrResult> {
    let flows: Vec<f64> = schedule.net_flows().iter().map(|m| m.to_f64()).collect();
    irr_of_flows(&flows)
}

pub fn irr_of_flows(flows: &[f64]) -> Result<IrrResult> {
    let signs: Vec<bool> = flows.iter().filter(|f| **f != 0.0).map(|f| *f > 0.0).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if changes == 0 {
        return Err(Error::domain("cash flows never change sign; IRR undefined"));
    }
    if changes == 1 {
        let (f_lo, f_hi) = (npv_f64(flows, IRR_LOWER), npv_f64(flows, IRR_UPPER));
        if (f_lo > 0.0) == (f_hi > 0.0) {
            return Err(Error::domain("IRR outside [-99 %, 1000 %]"));
        }
        return Ok(IrrResult { rate: bisect(flows, IRR_LOWER, IRR_UPPER), warning: None });
    }
    // several sign changes: report the smallest positive root, else the largest negative one
    const STEPS: usize = 20_000;
    let grid = |a: f64, b: f64| (0..=STEPS).map(move |i| a + (b - a) * i as f64 / STEPS as f64);
    let warning = Some(format!("cash flows change sign {changes} times; IRR may not be unique"));
    let first_root = |points: Vec<f64>| {
        points.windows(2).find_map(|w| {
            let (a, b) = (npv_f64(flows, w[0]), npv_f64(flows, w[1]));
            ((a > 0.0) != (b > 0.0)).then(|| bisect(flows, w[0], w[1]))
        })
    };
    if let Some(rate) = first_root(grid(0.0, IRR_UPPER).collect()) {
        return Ok(IrrResult { rate, warning });
    }
    if let Some(rate) = first_root(grid(IRR_LOWER, 0.0).rev().collect()) {
        return Ok(IrrResult { rate, warning });
    }
    Err(Error::domain("no IRR root in [-99 %, 1000 %]"))
}

/// Levelized cost of energy per kWh over the lifetime.
///
/// Discounted capital and running costs over discounted production. Capital is spent in
/// year 0; running costs and energy occur in years 1..=lifetime.
pub fn lcoe(ledger: &CostLedger, params: &FinanceParams, annual_energy_kwh: f64) -> Result<f64> {
    params.validate()?;
    if !(annual_energy_kwh > 0.0) {
        return Err(Error::domain(format!("annual energy must be > 0 kWh, got {annual_energy_kwh}")));
    }
    let r = params.discount_rate.to_f64().unwrap_or(0.0);
    if r <= -1.0 {
        return Err(Error::domain("discount rate must be > -100 %"));
    }
    let inflation = params.inflation.to_f64().unwrap_or(0.0);
    let aging = params.production_aging.to_f64().unwrap_or(0.0);
    let opex = params.opex.to_f64();
    let mut cost = ledger.total().to_f64();
    let mut energy = 0.0;
    for year in 1..=params.lifetime {
        let k = (year - 1) as i32;
        let df = (1.0 + r).powi(year as i32);
        cost += opex * (1.0 + inflation).powi(k) / df;
        energy += annual_energy_kwh * (1.0 - aging).powi(k) / df;
    }
    Ok(cost / energy)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinanceSummary {
    pub currency: String,
    pub total_investment: Money,
    pub depreciable_base: Money,
    pub annual_depreciation_year1: Money,
    pub opex: Money,
    pub payback_years: Option<f64>,
    pub npv: Money,
    pub irr: Option<IrrResult>,
    pub roi: Option<f64>,
    pub lcoe: f64,
    pub final_cumulative_profit: Money,
}

pub fn summarize(
    params: &FinanceParams,
    ledger: &CostLedger,
    energy: AnnualEnergy,
    schedule: &CashFlowSchedule,
    convention: PaybackConvention,
) -> Result<FinanceSummary> {
    let npv_value = npv(schedule, params.discount_rate)?;
    Ok(FinanceSummary {
        currency: params.currency.clone(),
        total_investment: ledger.total(),
        depreciable_base: ledger.depreciable_base(),
        annual_depreciation_year1: schedule.rows.get(1).map(|r| r.depreciation_allowance).unwrap_or_default(),
        opex: params.opex,
        payback_years: simple_payback(schedule, convention),
        npv: npv_value,
        irr: irr(schedule).ok(),
        roi: roi(npv_value, schedule.own_funds()),
        lcoe: lcoe(ledger, params, energy.total_kwh())?,
        final_cumulative_profit: schedule.final_cumulative(),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    fn item(name: &str, qty: u32, unit: &str, depreciable: bool) -> CostItem {
        CostItem {
            name: name.into(),
            category: None,
            quantity: Decimal::from(qty),
            unit_cost: Money(dec(unit)),
            depreciable,
            depreciation_period: None,
            salvage: Money::ZERO,
        }
    }

    pub fn installation_ledger() -> CostLedger {
        CostLedger {
            items: vec![
                item("LG 400 Q1C-A6", 126, "23278.00", true),
                item("LG 395 Q1C-A6", 126, "20278.00", true),
                item("Supports for modules", 252, "1000.00", true),
                item("SOFAR 40000TL", 2, "263188.50", true),
                item("Accessories, fasteners", 1, "50000.00", true),
                item("Wiring", 1, "50000.00", false),
                item("Combiner box", 2, "25000.00", false),
                item("Surge arrester", 4, "12500.00", false),
                item("Global installation cost per module", 252, "1000.00", false),
                item("Global installation cost per inverter", 2, "25000.00", false),
                item("Transport", 1, "50000.00", false),
                item("Settings", 1, "25000.00", false),
                item("Grid connection", 1, "50000.00", false),
            ],
        }
    }

    pub fn params() -> FinanceParams {
        FinanceParams {
            lifetime: 20,
            start_year: 2024,
            currency: "PHP".into(),
            feed_in_tariff: dec("9.68"),
            consumption_tariff: dec("5.90"),
            discount_rate: Decimal::ZERO,
            inflation: Decimal::ZERO,
            income_tax_rate: Decimal::ZERO,
            tariff_escalation: Decimal::ZERO,
            production_aging: Decimal::ZERO,
            opex: Money(dec("305275.40")),
            own_funds: Money(dec("6893433.00")),
            depreciation_method: DepreciationMethod::StraightLine,
            depreciation_period: 20,
        }
    }

    pub fn energy() -> AnnualEnergy {
        AnnualEnergy { sold_kwh: 61_975.0, self_consumed_kwh: 78_877.6 }
    }
}
