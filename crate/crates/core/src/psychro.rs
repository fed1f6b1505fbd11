//! Moist-air properties and the sensible-heat ventilation relation.
//!
//! Everything is per kilogram of dry air. The correlation set lives in [`constants`]:
//! perfect-gas mixing relations plus the Hyland–Wexler saturation pressure over
//! liquid water.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod constants {
    /// Standard sea-level atmospheric pressure, kPa.
    pub const STANDARD_PRESSURE_KPA: f64 = 101.325;
    /// Gas constant of dry air, kJ/(kg·K).
    pub const R_DRY_AIR: f64 = 0.287042;
    /// Ratio of molar masses water/dry air.
    pub const MOLAR_MASS_RATIO: f64 = 0.621945;
    /// 1 / MOLAR_MASS_RATIO, used in the specific-volume expression.
    pub const VOLUME_FACTOR: f64 = 1.607858;
    /// Specific heat of dry air in the enthalpy expression, kJ/(kg·K).
    pub const CP_DRY_AIR_ENTHALPY: f64 = 1.006;
    /// Latent heat of vaporisation at 0 °C, kJ/kg.
    pub const LATENT_HEAT_0C: f64 = 2501.0;
    /// Specific heat of water vapour, kJ/(kg·K).
    pub const CP_VAPOUR: f64 = 1.86;
    /// Default specific heat used in the sensible-heat relation, kJ/(kg·K).
    pub const CP_SENSIBLE_DEFAULT: f64 = 1.005;
    pub const KELVIN_OFFSET: f64 = 273.15;

    /// Hyland–Wexler coefficients, saturation over liquid water (ln p in Pa).
    pub(crate) const HW: [f64; 6] =
        [-5.800_220_6e3, 1.391_499_3, -4.864_023_9e-2, 4.176_476_8e-5, -1.445_209_3e-8, 6.545_967_3];

    pub const SATURATION_T_MIN: f64 = -40.0;
    pub const SATURATION_T_MAX: f64 = 120.0;
}

use constants::*;

/// Saturation vapour pressure of water over liquid, kPa.
pub fn saturation_pressure(dry_bulb: f64) -> Result<f64> {
    if !(SATURATION_T_MIN..=SATURATION_T_MAX).contains(&dry_bulb) {
        return Err(Error::domain(format!(
            "saturation pressure defined for {SATURATION_T_MIN}..{SATURATION_T_MAX} °C, got {dry_bulb}"
        )));
    }
    let t = dry_bulb + KELVIN_OFFSET;
    let [c8, c9, c10, c11, c12, c13] = HW;
    let ln_pa = c8 / t + c9 + c10 * t + c11 * t * t + c12 * t * t * t + c13 * t.ln();
    Ok(ln_pa.exp() / 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoistAirState {
    /// °C
    pub dry_bulb: f64,
    /// kPa
    pub pressure: f64,
    /// kg water / kg dry air
    pub humidity_ratio: f64,
    /// m³ / kg dry air
    pub specific_volume: f64,
    /// kJ / kg dry air
    pub enthalpy: f64,
    /// 0..1
    pub relative_humidity: f64,
}

impl MoistAirState {
    /// State from dry-bulb temperature and relative humidity.
    pub fn from_db_rh(dry_bulb: f64, rh: f64, pressure: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rh) {
            return Err(Error::domain(format!("relative humidity must be in [0, 1], got {rh}")));
        }
        let p_ws = saturation_pressure(dry_bulb)?;
        let p_w = rh * p_ws;
        if !(pressure > p_w) {
            return Err(Error::domain(format!("pressure {pressure} kPa must exceed vapour pressure {p_w:.4} kPa")));
        }
        let w = MOLAR_MASS_RATIO * p_w / (pressure - p_w);
        Ok(Self::assemble(dry_bulb, w, pressure, rh))
    }

    /// State from dry-bulb temperature and humidity ratio.
    pub fn from_db_w(dry_bulb: f64, humidity_ratio: f64, pressure: f64) -> Result<Self> {
        if humidity_ratio < 0.0 {
            return Err(Error::domain(format!("humidity ratio must be >= 0, got {humidity_ratio}")));
        }
        let rh = relative_humidity(dry_bulb, humidity_ratio, pressure)?;
        if rh > 1.0 + 1e-9 {
            return Err(Error::domain(format!("humidity ratio {humidity_ratio} is supersaturated at {dry_bulb} °C")));
        }
        Ok(Self::assemble(dry_bulb, humidity_ratio, pressure, rh.min(1.0)))
    }

    fn assemble(dry_bulb: f64, w: f64, pressure: f64, rh: f64) -> Self {
        MoistAirState {
            dry_bulb,
            pressure,
            humidity_ratio: w,
            specific_volume: specific_volume(dry_bulb, w, pressure),
            enthalpy: enthalpy(dry_bulb, w),
            relative_humidity: rh,
        }
    }
}

pub fn specific_volume(dry_bulb: f64, humidity_ratio: f64, pressure: f64) -> f64 {
    R_DRY_AIR * (dry_bulb + KELVIN_OFFSET) * (1.0 + VOLUME_FACTOR * humidity_ratio) / pressure
}

pub fn enthalpy(dry_bulb: f64, humidity_ratio: f64) -> f64 {
    CP_DRY_AIR_ENTHALPY * dry_bulb + humidity_ratio * (LATENT_HEAT_0C + CP_VAPOUR * dry_bulb)
}

/// Specific heat of moist air per kg dry air at humidity ratio `w`, kJ/(kg·K).
pub fn humid_specific_heat(humidity_ratio: f64) -> f64 {
    CP_DRY_AIR_ENTHALPY + CP_VAPOUR * humidity_ratio
}

/// Relative humidity recovered from (t, W, p).
pub fn relative_humidity(dry_bulb: f64, humidity_ratio: f64, pressure: f64) -> Result<f64> {
    let p_w = pressure * humidity_ratio / (MOLAR_MASS_RATIO + humidity_ratio);
    Ok(p_w / saturation_pressure(dry_bulb)?)
}

/// Inputs of the sensible-heat relation `Qs = (V / v) · cp · ΔT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VentilationSpec {
    /// kW
    pub sensible_load: f64,
    /// Supply-to-room temperature rise, K.
    pub delta_t: f64,
    /// kJ/(kg·K)
    pub cp: f64,
}

impl VentilationSpec {
    pub fn new(sensible_load: f64, delta_t: f64) -> Self {
        VentilationSpec { sensible_load, delta_t, cp: CP_SENSIBLE_DEFAULT }
    }
}

/// Default temperature rise between supply and room air, K.
pub const DEFAULT_DELTA_T: f64 = 8.0;
/// Default air state whose specific volume enters the flow calculation: 30 °C, 60 % RH.
pub const DEFAULT_AIR_DRY_BULB: f64 = 30.0;
pub const DEFAULT_AIR_RH: f64 = 0.60;

/// Volume flow (L/s) that removes `spec.sensible_load` at the given temperature rise.
pub fn ventilation_flow_for_sensible_load(spec: &VentilationSpec, air: &MoistAirState) -> Result<f64> {
    if !(spec.delta_t > 0.0) {
        return Err(Error::domain(format!("temperature rise must be > 0 K, got {}", spec.delta_t)));
    }
    if !(spec.cp > 0.0) {
        return Err(Error::domain(format!("cp must be > 0, got {}", spec.cp)));
    }
    if spec.sensible_load < 0.0 {
        return Err(Error::domain(format!("sensible load must be >= 0, got {}", spec.sensible_load)));
    }
    let m3_per_s = spec.sensible_load * air.specific_volume / (spec.cp * spec.delta_t);
    Ok(m3_per_s * 1000.0)
}

/// Sensible load (kW) carried by `volume_flow` L/s; inverse of [`ventilation_flow_for_sensible_load`].
pub fn sensible_load_for_flow(volume_flow: f64, specific_volume: f64, cp: f64, delta_t: f64) -> f64 {
    volume_flow / 1000.0 / specific_volume * cp * delta_t
}

/// Total (sensible + latent) coil load in kW; positive when the coil cools the air.
pub fn coil_load(volume_flow: f64, inlet: &MoistAirState, outlet: &MoistAirState) -> Result<f64> {
    if !(volume_flow > 0.0) {
        return Err(Error::domain(format!("volume flow must be > 0 L/s, got {volume_flow}")));
    }
    let mass_flow = volume_flow / 1000.0 / inlet.specific_volume;
    Ok(mass_flow * (inlet.enthalpy - outlet.enthalpy))
}
