//! Electrical load schedule in apparent power.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadItem {
    pub name: String,
    pub va_per_unit: f64,
    pub quantity: i64,
}

impl LoadItem {
    pub fn new(name: impl Into<String>, va_per_unit: f64, quantity: i64) -> Self {
        LoadItem { name: name.into(), va_per_unit, quantity }
    }

    /// kVA
    pub fn subtotal(&self) -> f64 {
        self.va_per_unit * self.quantity as f64 / 1000.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub name: String,
    pub va_per_unit: f64,
    pub quantity: i64,
    /// kVA
    pub subtotal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadSchedule {
    pub items: Vec<ScheduleRow>,
    /// kVA
    pub total: f64,
}

/// Convenience-outlet provision, kVA.
pub fn outlet_load(floor_area: f64, va_per_m2: f64) -> Result<f64> {
    if floor_area < 0.0 || va_per_m2 < 0.0 {
        return Err(Error::domain("outlet area and density must be >= 0"));
    }
    Ok(floor_area * va_per_m2 / 1000.0)
}

/// Outlet provision as a single schedule line.
pub fn outlet_item(floor_area: f64, va_per_m2: f64) -> Result<LoadItem> {
    Ok(LoadItem::new("Outlets", outlet_load(floor_area, va_per_m2)? * 1000.0, 1))
}

pub fn aggregate_loads(items: &[LoadItem]) -> Result<LoadSchedule> {
    let mut rows = Vec::with_capacity(items.len());
    for item in items {
        if item.quantity < 0 {
            return Err(Error::validation(format!("load '{}' has negative quantity", item.name)));
        }
        if !(item.va_per_unit >= 0.0) {
            return Err(Error::validation(format!("load '{}' has negative VA per unit", item.name)));
        }
        rows.push(ScheduleRow {
            name: item.name.clone(),
            va_per_unit: item.va_per_unit,
            quantity: item.quantity,
            subtotal: item.subtotal(),
        });
    }
    // summed in VA so the total is independent of item order for realistic magnitudes
    let total_va: f64 = rows.iter().map(|r| r.va_per_unit * r.quantity as f64).sum();
    Ok(LoadSchedule { items: rows, total: total_va / 1000.0 })
}

/// Half-up rounding to two decimals for presentation.
pub fn round2(x: f64) -> f64 {
    let scaled = (x * 100.0).abs();
    let r = (scaled + 0.5 + 1e-9).floor() / 100.0;
    r.copysign(x)
}

impl LoadSchedule {
    /// Writes the schedule with the columns `Load,VA per unit,Units,Subtotal kVA`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["Load", "VA per unit", "Units", "Subtotal kVA"])?;
        for r in &self.items {
            w.write_record([
                r.name.clone(),
                format!("{}", r.va_per_unit),
                r.quantity.to_string(),
                format!("{:.2}", round2(r.subtotal)),
            ])?;
        }
        w.write_record(["Total".into(), String::new(), String::new(), format!("{:.2}", round2(self.total))])?;
        w.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> Vec<LoadItem> {
        vec![
            LoadItem::new("Lightings", 200.0, 24),
            LoadItem::new("ACUs", 4500.0, 18),
            outlet_item(1608.0, 8.0).unwrap(),
        ]
    }

    #[test]
    fn outlet_provision() {
        assert_eq!(round2(outlet_load(1608.0, 8.0).unwrap()), 12.86);
        assert_eq!(outlet_load(0.0, 8.0).unwrap(), 0.0);
        assert_eq!(round2(outlet_load(804.0, 8.0).unwrap()), 6.43);
        assert!(outlet_load(-1.0, 8.0).is_err());
    }

    #[test]
    fn gymnasium_schedule() {
        let s = aggregate_loads(&table()).unwrap();
        let sub: Vec<f64> = s.items.iter().map(|r| round2(r.subtotal)).collect();
        assert_eq!(sub, vec![4.8, 81.0, 12.86]);
        assert_eq!(round2(s.total), 98.66);
        assert_eq!(s.items[0].name, "Lightings");
    }

    #[test]
    fn empty_and_negative() {
        assert_eq!(aggregate_loads(&[]).unwrap().total, 0.0);
        assert!(matches!(aggregate_loads(&[LoadItem::new("x", 10.0, -1)]), Err(Error::Validation(_))));
    }

    #[test]
    fn csv_mirrors_table_columns() {
        let mut buf = Vec::new();
        aggregate_loads(&table()).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("Load,VA per unit,Units,Subtotal kVA\n"));
        assert!(text.contains("ACUs,4500,18,81.00\n"));
        assert!(text.trim_end().ends_with("Total,,,98.66"));
    }

    #[test]
    fn half_up() {
        assert_eq!(round2(0.125), 0.13);
        assert_eq!(round2(-0.125), -0.13);
        assert_eq!(round2(12.864), 12.86);
    }

    proptest! {
        #[test]
        fn total_permutation_invariant_and_additive(
            a in prop::collection::vec((0.0f64..10_000.0, 0i64..100), 0..12),
            b in prop::collection::vec((0.0f64..10_000.0, 0i64..100), 0..12),
        ) {
            let items = |v: &[(f64, i64)]| v.iter().enumerate()
                .map(|(i, (va, q))| LoadItem::new(format!("l{i}"), va.round(), *q)).collect::<Vec<_>>();
            let (ia, ib) = (items(&a), items(&b));
            let mut rev = ia.clone();
            rev.reverse();
            let ta = aggregate_loads(&ia).unwrap().total;
            prop_assert!((ta - aggregate_loads(&rev).unwrap().total).abs() < 1e-9);
            let joined: Vec<_> = ia.iter().chain(ib.iter()).cloned().collect();
            let tb = aggregate_loads(&ib).unwrap().total;
            prop_assert!((aggregate_loads(&joined).unwrap().total - (ta + tb)).abs() < 1e-9);
        }
    }
}
