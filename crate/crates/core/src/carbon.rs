//! Avoided grid CO₂ over the system lifetime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarbonParams {
    /// tCO₂/MWh displaced from the grid.
    pub grid_emission_factor: f64,
    /// tCO₂ embodied in the system.
    #[serde(default)]
    pub system_embodied: f64,
    /// years
    pub lifetime: u32,
    /// MWh/yr
    pub annual_energy: f64,
}

impl CarbonParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("grid_emission_factor", self.grid_emission_factor),
            ("system_embodied", self.system_embodied),
            ("annual_energy", self.annual_energy),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{name} must be a finite value >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvoidedEmissions {
    /// Gross displaced emissions, tCO₂.
    pub gross: f64,
    /// Gross minus embodied; negative when the system never pays back its carbon.
    pub raw: f64,
    /// `raw` floored at zero.
    pub reported: f64,
}

pub fn avoided_emissions(params: &CarbonParams) -> Result<AvoidedEmissions> {
    params.validate()?;
    let gross = params.annual_energy * params.lifetime as f64 * params.grid_emission_factor;
    let raw = gross - params.system_embodied;
    Ok(AvoidedEmissions { gross, raw, reported: raw.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gym() -> CarbonParams {
        CarbonParams { grid_emission_factor: 0.72, system_embodied: 0.0, lifetime: 20, annual_energy: 140.853 }
    }

    #[test]
    fn twenty_year_total() {
        let a = avoided_emissions(&gym()).unwrap();
        assert!((a.reported - 2028.3).abs() <= 0.01 * 2028.3, "{a:?}");
        assert!((a.reported - 2028.2832).abs() < 1e-9);
    }

    #[test]
    fn zero_factor() {
        let a = avoided_emissions(&CarbonParams { grid_emission_factor: 0.0, ..gym() }).unwrap();
        assert_eq!(a.reported, 0.0);
    }

    #[test]
    fn embodied_exceeding_gross_floors() {
        let a = avoided_emissions(&CarbonParams { system_embodied: 5000.0, ..gym() }).unwrap();
        assert_eq!(a.reported, 0.0);
        assert!(a.raw < 0.0);
    }

    #[test]
    fn negative_input_rejected() {
        assert!(avoided_emissions(&CarbonParams { annual_energy: -1.0, ..gym() }).is_err());
    }

    proptest! {
        #[test]
        fn linear_in_energy_and_lifetime(e in 0.0f64..1e4, years in 1u32..50, f in 0.0f64..2.0, k in 1u32..5) {
            let p = CarbonParams { grid_emission_factor: f, system_embodied: 0.0, lifetime: years, annual_energy: e };
            let base = avoided_emissions(&p).unwrap().reported;
            let scaled_e = avoided_emissions(&CarbonParams { annual_energy: e * k as f64, ..p }).unwrap().reported;
            let scaled_l = avoided_emissions(&CarbonParams { lifetime: years * k, ..p }).unwrap().reported;
            prop_assert!((scaled_e - k as f64 * base).abs() <= 1e-9 * scaled_e.max(1.0));
            prop_assert!((scaled_l - k as f64 * base).abs() <= 1e-9 * scaled_l.max(1.0));
        }
    }
}
