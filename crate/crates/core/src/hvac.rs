//! Occupant heat gains and air-conditioning unit count.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default sensible gain per occupant, W.
pub const DEFAULT_SENSIBLE_GAIN_PER_PERSON: f64 = 70.0;
/// Fractional overshoot of a whole unit that is absorbed instead of adding another unit.
pub const DEFAULT_UNIT_TOLERANCE: f64 = 0.05;

/// kW of sensible heat released by `occupants` people.
pub fn occupant_sensible_load(occupants: u32, per_person: f64) -> f64 {
    occupants as f64 * per_person / 1000.0
}

/// Units of `unit_capacity` kJ/hr needed to carry `total_load` kW.
///
/// The exact ratio is rounded up unless its fractional part is within `tolerance`
/// of the unit below. A positive load always needs at least one unit.
pub fn acu_count_with_tolerance(total_load: f64, unit_capacity: f64, tolerance: f64) -> Result<u32> {
    if !(unit_capacity > 0.0) {
        return Err(Error::domain(format!("unit capacity must be > 0 kJ/hr, got {unit_capacity}")));
    }
    if !(total_load >= 0.0) {
        return Err(Error::domain(format!("cooling load must be >= 0 kW, got {total_load}")));
    }
    if !(0.0..1.0).contains(&tolerance) {
        return Err(Error::domain(format!("unit tolerance must be in [0, 1), got {tolerance}")));
    }
    let ratio = total_load * 3600.0 / unit_capacity;
    let whole = ratio.floor();
    let n = if ratio - whole <= tolerance && whole >= 1.0 { whole } else { ratio.ceil() };
    if n > u32::MAX as f64 {
        return Err(Error::domain("unit count overflows"));
    }
    Ok(n as u32)
}

pub fn acu_count(total_load: f64, unit_capacity: f64) -> Result<u32> {
    acu_count_with_tolerance(total_load, unit_capacity, DEFAULT_UNIT_TOLERANCE)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingDesign {
    pub occupants: u32,
    /// W
    pub sensible_gain_per_person: f64,
    /// kW
    pub sensible_load: f64,
    /// L/s
    pub ventilation_flow: f64,
    /// m³/kg dry air, of the air state used for the flow
    pub specific_volume: f64,
    /// kW
    pub total_coil_load: f64,
    /// kJ/hr
    pub unit_capacity: f64,
    pub unit_refrigeration_tons: Option<f64>,
    /// VA
    pub unit_power_demand: f64,
    pub units_required: u32,
    /// kJ/hr
    pub installed_capacity: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn occupant_gains() {
        assert_eq!(occupant_sensible_load(1500, 70.0), 105.0);
        assert_eq!(occupant_sensible_load(0, 70.0), 0.0);
        assert_eq!(occupant_sensible_load(1500, 140.0), 210.0);
    }

    #[test]
    fn gymnasium_unit_count() {
        assert_eq!(acu_count(200.6, 40_090.0).unwrap(), 18);
        assert_eq!(acu_count(18.0 * 40_090.0 / 3600.0, 40_090.0).unwrap(), 18);
        assert_eq!(acu_count(250.0, 40_090.0).unwrap(), 23);
    }

    #[test]
    fn strict_ceiling_when_tolerance_zero() {
        assert_eq!(acu_count_with_tolerance(200.6, 40_090.0, 0.0).unwrap(), 19);
    }

    #[test]
    fn small_load_needs_one_unit() {
        assert_eq!(acu_count(0.1, 40_090.0).unwrap(), 1);
        assert_eq!(acu_count(0.0, 40_090.0).unwrap(), 0);
    }

    #[test]
    fn bad_capacity() {
        assert!(matches!(acu_count(10.0, 0.0), Err(Error::Domain(_))));
        assert!(acu_count(10.0, -5.0).is_err());
    }

    proptest! {
        #[test]
        fn installed_capacity_covers_95_percent(load in 0.01f64..5000.0, cap in 1000.0f64..200_000.0) {
            let n = acu_count(load, cap).unwrap();
            prop_assert!(n as f64 * cap >= 0.95 * load * 3600.0);
        }

        #[test]
        fn monotone(a in 0.0f64..3000.0, b in 0.0f64..3000.0, c1 in 1000.0f64..100_000.0, c2 in 1000.0f64..100_000.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(acu_count(lo, c1).unwrap() <= acu_count(hi, c1).unwrap());
            let (small, big) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            prop_assert!(acu_count(hi, big).unwrap() <= acu_count(hi, small).unwrap());
        }
    }
}
