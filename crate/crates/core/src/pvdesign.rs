//! PV module and inverter models, string sizing and array configuration.
//!
//! Azimuths are measured from due south: 0° faces south, negative angles turn east,
//! positive angles turn west, ±180° faces north. Use [`Orientation::from_compass`] to
//! convert a north-referenced clockwise bearing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference cell temperature of the STC rating, °C.
pub const STC_TEMPERATURE: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PVModuleSpec {
    pub name: String,
    /// Wp
    pub p_stc: f64,
    pub v_mp: f64,
    pub v_oc: f64,
    pub i_mp: f64,
    pub i_sc: f64,
    /// Power temperature coefficient, %/K.
    pub gamma_p: f64,
    /// Open-circuit voltage temperature coefficient, %/K.
    pub beta_voc: f64,
    /// °C
    pub noct: f64,
    /// m²
    pub module_area: f64,
}

impl PVModuleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_stc > 0.0) {
            return Err(Error::validation(format!("module {}: p_stc must be > 0", self.name)));
        }
        if !(self.v_oc > self.v_mp && self.v_mp > 0.0) {
            return Err(Error::validation(format!("module {}: need v_oc > v_mp > 0", self.name)));
        }
        if self.gamma_p > 0.0 || self.beta_voc > 0.0 {
            return Err(Error::validation(format!("module {}: temperature coefficients must be <= 0", self.name)));
        }
        Ok(())
    }

    /// String open-circuit voltage per module at cell temperature `t`.
    pub fn v_oc_at(&self, t: f64) -> f64 {
        self.v_oc * (1.0 + self.beta_voc / 100.0 * (t - STC_TEMPERATURE))
    }

    /// Maximum-power voltage per module at cell temperature `t`, derated with `gamma_p`.
    pub fn v_mp_at(&self, t: f64) -> f64 {
        self.v_mp * (1.0 + self.gamma_p / 100.0 * (t - STC_TEMPERATURE))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverterSpec {
    pub name: String,
    /// W
    pub p_ac_nominal: f64,
    pub mppt_v_min: f64,
    pub mppt_v_max: f64,
    pub v_dc_max: f64,
    pub efficiency: f64,
}

impl InverterSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.mppt_v_min && self.mppt_v_min < self.mppt_v_max && self.mppt_v_max <= self.v_dc_max) {
            return Err(Error::validation(format!(
                "inverter {}: need 0 < mppt_v_min < mppt_v_max <= v_dc_max",
                self.name
            )));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::validation(format!("inverter {}: efficiency must be in (0, 1]", self.name)));
        }
        if !(self.p_ac_nominal > 0.0) {
            return Err(Error::validation(format!("inverter {}: p_ac_nominal must be > 0", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Orientation {
    /// Degrees from horizontal.
    pub tilt: f64,
    /// Degrees from south, west positive.
    pub azimuth: f64,
}

impl Orientation {
    /// From a compass bearing (0° = north, 90° = east, clockwise).
    pub fn from_compass(tilt: f64, bearing: f64) -> Self {
        Orientation { tilt, azimuth: wrap_degrees(bearing - 180.0) }
    }

    pub fn compass_bearing(&self) -> f64 {
        (self.azimuth + 180.0).rem_euclid(360.0)
    }
}

/// Wraps an angle into (-180, 180].
fn wrap_degrees(a: f64) -> f64 {
    let w = (a + 180.0).rem_euclid(360.0) - 180.0;
    if w == -180.0 {
        180.0
    } else {
        w
    }
}

/// Design temperature extremes for string sizing, °C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizingTemperatures {
    /// Lowest expected cell temperature (cold morning, open circuit).
    pub t_min: f64,
    /// Highest expected operating cell temperature.
    pub t_cell_max: f64,
}

impl Default for SizingTemperatures {
    fn default() -> Self {
        SizingTemperatures { t_min: 15.0, t_cell_max: 65.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubArray {
    pub module: PVModuleSpec,
    pub modules_in_series: u32,
    pub parallel_strings: u32,
    pub orientation: Orientation,
}

impl SubArray {
    pub fn module_count(&self) -> u32 {
        self.modules_in_series * self.parallel_strings
    }

    /// W
    pub fn nominal_dc(&self) -> f64 {
        self.module.p_stc * self.module_count() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrayDesign {
    pub sub_arrays: Vec<SubArray>,
    pub inverter: InverterSpec,
    pub inverter_count: u32,
    pub temperatures: SizingTemperatures,
}

impl ArrayDesign {
    pub fn module_count(&self) -> u32 {
        self.sub_arrays.iter().map(SubArray::module_count).sum()
    }

    pub fn string_count(&self) -> u32 {
        self.sub_arrays.iter().map(|s| s.parallel_strings).sum()
    }

    /// W
    pub fn nominal_dc(&self) -> f64 {
        self.sub_arrays.iter().map(SubArray::nominal_dc).sum()
    }

    /// W
    pub fn nominal_ac(&self) -> f64 {
        self.inverter.p_ac_nominal * self.inverter_count as f64
    }

    pub fn dc_ac_ratio(&self) -> f64 {
        let ac = self.nominal_ac();
        if ac > 0.0 {
            self.nominal_dc() / ac
        } else {
            0.0
        }
    }

    pub fn module_area(&self) -> f64 {
        self.sub_arrays.iter().map(|s| s.module.module_area * s.module_count() as f64).sum()
    }

    /// One line per sub-array describing its string layout.
    pub fn connection_summary(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .sub_arrays
            .iter()
            .enumerate()
            .map(|(i, s)| {
                format!(
                    "orientation {} (tilt {}°, azimuth {}°): {} strings x {} in series of {} = {} modules, {:.2} kWp",
                    i + 1,
                    s.orientation.tilt,
                    s.orientation.azimuth,
                    s.parallel_strings,
                    s.modules_in_series,
                    s.module.name,
                    s.module_count(),
                    s.nominal_dc() / 1000.0
                )
            })
            .collect();
        lines.push(format!(
            "{} x {} ({:.1} kWac total), DC:AC {:.3}",
            self.inverter_count,
            self.inverter.name,
            self.nominal_ac() / 1000.0,
            self.dc_ac_ratio()
        ));
        lines
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeriesBounds {
    pub min_series: u32,
    pub max_series: u32,
}

/// Admissible modules-in-series range for one module/inverter pair.
///
/// The upper bound keeps the cold open-circuit string voltage under the inverter's DC
/// limit; the lower bound keeps the hot maximum-power voltage above the MPPT floor.
pub fn series_bounds(
    module: &PVModuleSpec,
    inverter: &InverterSpec,
    temps: SizingTemperatures,
) -> Result<SeriesBounds> {
    if !(temps.t_min < STC_TEMPERATURE && STC_TEMPERATURE < temps.t_cell_max) {
        return Err(Error::domain(format!(
            "sizing temperatures must straddle 25 °C, got t_min {} and t_cell_max {}",
            temps.t_min, temps.t_cell_max
        )));
    }
    module.validate()?;
    inverter.validate()?;
    let cold_voc = module.v_oc_at(temps.t_min);
    let hot_vmp = module.v_mp_at(temps.t_cell_max);
    if !(hot_vmp > 0.0) {
        return Err(Error::design(format!("module {} has no usable voltage at {} °C", module.name, temps.t_cell_max)));
    }
    let max_series = (inverter.v_dc_max / cold_voc).floor() as u32;
    let min_series = ((inverter.mppt_v_min / hot_vmp).ceil() as u32).max(1);
    if min_series > max_series {
        return Err(Error::design(format!(
            "no series length fits {} on {}: need at least {min_series}, at most {max_series}",
            module.name, inverter.name
        )));
    }
    Ok(SeriesBounds { min_series, max_series })
}

/// One roof face to populate, with the module model mounted on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceRequest {
    pub orientation: Orientation,
    pub module: PVModuleSpec,
}

/// Lays out strings to approach `target_dc` watts.
///
/// All faces use one common series length, the longest admissible for every module, and
/// the same number of strings. The string count is the one whose nominal power lies
/// closest to the target; ties go to fewer strings.
pub fn configure_array(
    target_dc: f64,
    faces: &[FaceRequest],
    inverter: &InverterSpec,
    inverter_count: u32,
    temps: SizingTemperatures,
) -> Result<ArrayDesign> {
    if !(target_dc > 0.0) {
        return Err(Error::domain(format!("target DC power must be > 0, got {target_dc}")));
    }
    if faces.is_empty() {
        return Err(Error::design("no orientations to place modules on"));
    }
    if inverter_count == 0 {
        return Err(Error::design("at least one inverter is required"));
    }
    let mut lo = 1;
    let mut hi = u32::MAX;
    for face in faces {
        let b = series_bounds(&face.module, inverter, temps)?;
        lo = lo.max(b.min_series);
        hi = hi.min(b.max_series);
    }
    if lo > hi {
        return Err(Error::design(format!(
            "modules on different faces admit no common series length (need {lo}..{hi})"
        )));
    }
    let series = hi;
    let round_power: f64 = faces.iter().map(|f| f.module.p_stc * series as f64).sum();
    let below = (target_dc / round_power).floor();
    let strings = if below < 1.0 {
        1.0
    } else if target_dc - below * round_power <= (below + 1.0) * round_power - target_dc {
        below
    } else {
        below + 1.0
    };
    if strings > u32::MAX as f64 / series as f64 {
        return Err(Error::design("target needs an unrealistic number of strings"));
    }
    let strings = strings as u32;
    Ok(ArrayDesign {
        sub_arrays: faces
            .iter()
            .map(|f| SubArray {
                module: f.module.clone(),
                modules_in_series: series,
                parallel_strings: strings,
                orientation: f.orientation,
            })
            .collect(),
        inverter: inverter.clone(),
        inverter_count,
        temperatures: temps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StringVoltages {
    pub module: String,
    pub cold_voc: f64,
    pub hot_vmp: f64,
    pub cold_vmp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignValidation {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub dc_ac_ratio: f64,
    pub strings: Vec<StringVoltages>,
}

impl DesignValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every string against the inverter voltage window. Problems are returned as data.
pub fn validate_design(design: &ArrayDesign) -> DesignValidation {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let mut strings = Vec::new();
    let inv = &design.inverter;
    let t = design.temperatures;
    if let Err(e) = inv.validate() {
        violations.push(e.to_string());
    }
    for (i, s) in design.sub_arrays.iter().enumerate() {
        if let Err(e) = s.module.validate() {
            violations.push(e.to_string());
            continue;
        }
        if s.parallel_strings == 0 {
            continue;
        }
        let n = s.modules_in_series as f64;
        let v = StringVoltages {
            module: s.module.name.clone(),
            cold_voc: n * s.module.v_oc_at(t.t_min),
            hot_vmp: n * s.module.v_mp_at(t.t_cell_max),
            cold_vmp: n * s.module.v_mp_at(t.t_min),
        };
        if v.cold_voc > inv.v_dc_max {
            violations.push(format!(
                "sub-array {}: cold Voc {:.1} V exceeds inverter maximum {:.1} V",
                i + 1,
                v.cold_voc,
                inv.v_dc_max
            ));
        }
        if v.hot_vmp < inv.mppt_v_min {
            violations.push(format!(
                "sub-array {}: hot Vmp {:.1} V below MPPT minimum {:.1} V",
                i + 1,
                v.hot_vmp,
                inv.mppt_v_min
            ));
        }
        if v.cold_vmp > inv.mppt_v_max {
            warnings.push(format!(
                "sub-array {}: cold Vmp {:.1} V above MPPT maximum {:.1} V",
                i + 1,
                v.cold_vmp,
                inv.mppt_v_max
            ));
        }
        strings.push(v);
    }
    let dc_ac_ratio = design.dc_ac_ratio();
    if design.string_count() == 0 {
        warnings.push("design has no strings (DC:AC ratio 0)".to_string());
    }
    DesignValidation { violations, warnings, dc_ac_ratio, strings }
}
