//! Project file: one TOML document describing the building, the PV plant and the
//! economics. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::carbon::CarbonParams;
use crate::error::{Error, Result};
use crate::finance::{AnnualEnergy, CostItem, CostLedger, FinanceParams, PaybackConvention};
use crate::lighting::{CoefficientOfUtilization, Grid3, LuminaireSpec, RoomLightingModel};
use crate::loads::LoadItem;
use crate::psychro;
use crate::pvdesign::{FaceRequest, InverterSpec, Orientation, PVModuleSpec, SizingTemperatures};
use crate::simproduction::{SimulationOptions, SiteSpec, WeeklyTemplate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    pub schema_version: u32,
    pub name: String,
    pub site: SiteSpec,
    pub lighting: LightingSection,
    pub hvac: HvacSection,
    pub loads: LoadsSection,
    pub pv: PvSection,
    pub finance: FinanceSection,
    pub carbon: CarbonSection,
    /// Reference values checked by `verify`, keyed by report path.
    #[serde(default)]
    pub expected: BTreeMap<String, Expected>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightingSection {
    /// lux
    pub target_lux: f64,
    pub room: RoomLightingModel,
    pub luminaire: LuminaireSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LuminaireSection {
    #[serde(default)]
    pub name: Option<String>,
    pub lamps_per_fixture: u32,
    pub lumens_per_lamp: f64,
    /// Fixed coefficient of utilization.
    #[serde(default)]
    pub cu: Option<f64>,
    /// CSV table `rcr,ceiling_reflectance,wall_reflectance,cu`, relative to the project file.
    #[serde(default)]
    pub cu_table: Option<PathBuf>,
    pub lamp_lumen_depreciation: f64,
    pub luminaire_dirt_depreciation: f64,
    /// VA
    pub input_power_per_fixture: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvacSection {
    pub occupants: u32,
    /// W
    #[serde(default = "default_gain")]
    pub sensible_gain_per_person: f64,
    /// Supply-to-room temperature difference, K.
    #[serde(default = "default_delta_t")]
    pub delta_t: f64,
    /// kJ/(kg·K)
    #[serde(default = "default_cp")]
    pub cp: f64,
    /// Air state whose specific volume converts mass to volume flow.
    #[serde(default = "default_air")]
    pub air: AirState,
    /// kW; when absent it is computed from `coil`.
    #[serde(default)]
    pub total_coil_load: Option<f64>,
    #[serde(default)]
    pub coil: Option<CoilStates>,
    #[serde(default = "default_unit_tolerance")]
    pub unit_tolerance: f64,
    pub unit: CoolingUnit,
}

fn default_gain() -> f64 {
    crate::hvac::DEFAULT_SENSIBLE_GAIN_PER_PERSON
}
fn default_delta_t() -> f64 {
    psychro::DEFAULT_DELTA_T
}
fn default_cp() -> f64 {
    psychro::constants::CP_SENSIBLE_DEFAULT
}
fn default_air() -> AirState {
    AirState {
        dry_bulb: psychro::DEFAULT_AIR_DRY_BULB,
        relative_humidity: psychro::DEFAULT_AIR_RH,
        pressure: psychro::constants::STANDARD_PRESSURE_KPA,
    }
}
fn default_unit_tolerance() -> f64 {
    crate::hvac::DEFAULT_UNIT_TOLERANCE
}
fn default_pressure() -> f64 {
    psychro::constants::STANDARD_PRESSURE_KPA
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AirState {
    /// °C
    pub dry_bulb: f64,
    /// fraction
    pub relative_humidity: f64,
    /// kPa
    #[serde(default = "default_pressure")]
    pub pressure: f64,
}

impl AirState {
    pub fn state(&self) -> Result<psychro::MoistAirState> {
        psychro::MoistAirState::from_db_rh(self.dry_bulb, self.relative_humidity, self.pressure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoilStates {
    pub inlet: AirState,
    pub outlet: AirState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingUnit {
    pub name: String,
    /// kJ/hr
    pub capacity: f64,
    /// VA
    pub power_demand: f64,
    #[serde(default)]
    pub refrigeration_tons: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadsSection {
    /// Adds a row for the designed lighting fixtures.
    #[serde(default = "yes")]
    pub include_lighting: bool,
    /// Adds a row for the designed air-conditioning units.
    #[serde(default = "yes")]
    pub include_cooling: bool,
    #[serde(default)]
    pub outlets: Option<OutletProvision>,
    #[serde(default)]
    pub items: Vec<LoadItem>,
    /// Converts kVA to kW for the building demand profile.
    #[serde(default = "default_power_factor")]
    pub power_factor: f64,
}

fn yes() -> bool {
    true
}
fn default_power_factor() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutletProvision {
    /// m²
    pub floor_area: f64,
    /// VA/m²
    pub va_per_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvSection {
    /// W
    pub target_dc: f64,
    /// Name of an entry in `inverters`.
    pub inverter: String,
    pub inverter_count: u32,
    #[serde(default)]
    pub temperatures: SizingTemperatures,
    pub modules: Vec<PVModuleSpec>,
    pub inverters: Vec<InverterSpec>,
    pub faces: Vec<FaceSection>,
    #[serde(default)]
    pub simulation: SimulationOptions,
    pub building_load: BuildingLoadSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSection {
    /// Name of an entry in `modules`.
    pub module: String,
    /// Degrees from horizontal.
    pub tilt: f64,
    /// Degrees from south, west positive.
    pub azimuth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingLoadSection {
    /// W; defaults to the load schedule total times the power factor.
    #[serde(default)]
    pub peak: Option<f64>,
    pub template: WeeklyTemplate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinanceSection {
    pub params: FinanceParams,
    pub ledger: Vec<CostItem>,
    /// First-year energy basis; when absent the simulated split is used.
    #[serde(default)]
    pub energy: Option<AnnualEnergy>,
    #[serde(default)]
    pub payback_convention: PaybackConvention,
}

impl FinanceSection {
    pub fn ledger(&self) -> CostLedger {
        CostLedger { items: self.ledger.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarbonSection {
    /// tCO₂/MWh
    pub grid_emission_factor: f64,
    /// tCO₂
    #[serde(default)]
    pub system_embodied: f64,
    /// Years; defaults to the finance lifetime.
    #[serde(default)]
    pub lifetime: Option<u32>,
    /// MWh/yr; defaults to the finance energy basis.
    #[serde(default)]
    pub annual_energy: Option<f64>,
}

impl CarbonSection {
    pub fn params(&self, lifetime: u32, annual_energy_mwh: f64) -> CarbonParams {
        CarbonParams {
            grid_emission_factor: self.grid_emission_factor,
            system_embodied: self.system_embodied,
            lifetime: self.lifetime.unwrap_or(lifetime),
            annual_energy: self.annual_energy.unwrap_or(annual_energy_mwh),
        }
    }
}

/// A reference value: bare numbers use the run-wide relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expected {
    Value(f64),
    WithTolerance {
        value: f64,
        /// Absolute.
        tolerance: f64,
    },
}

impl Expected {
    pub fn value(&self) -> f64 {
        match *self {
            Expected::Value(v) | Expected::WithTolerance { value: v, .. } => v,
        }
    }
}

/// A parsed project together with the directory its relative paths resolve against.
#[derive(Debug, Clone, PartialEq)]
pub struct Project {
    pub file: ProjectFile,
    pub path: PathBuf,
}

impl Project {
    pub fn load(path: &Path) -> Result<Project> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Project::parse(&text, path)
    }

    /// Parses `text`; `path` locates relative references and error messages.
    pub fn parse(text: &str, path: &Path) -> Result<Project> {
        let file: ProjectFile = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1)).unwrap_or(1);
            let line = match e.span() {
                Some(s) if text[..s.start.min(text.len())].ends_with('\n') => line + 1,
                _ => line,
            };
            Error::Parse { path: path.to_owned(), line, message: e.message().to_string() }
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::validation(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let project = Project { file, path: path.to_owned() };
        project.resolve_faces()?;
        project.inverter()?;
        Ok(project)
    }

    pub fn base_dir(&self) -> &Path {
        self.path.parent().unwrap_or(Path::new("."))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_owned()
        } else {
            self.base_dir().join(p)
        }
    }

    pub fn luminaire(&self) -> Result<LuminaireSpec> {
        let l = &self.file.lighting.luminaire;
        let cu = match (l.cu, &l.cu_table) {
            (Some(cu), None) => CoefficientOfUtilization::Direct(cu),
            (None, Some(table)) => CoefficientOfUtilization::Grid(Grid3::from_csv(&self.resolve(table))?),
            _ => return Err(Error::validation("luminaire needs exactly one of 'cu' or 'cu_table'")),
        };
        Ok(LuminaireSpec {
            lamps_per_fixture: l.lamps_per_fixture,
            lumens_per_lamp: l.lumens_per_lamp,
            cu,
            lamp_lumen_depreciation: l.lamp_lumen_depreciation,
            luminaire_dirt_depreciation: l.luminaire_dirt_depreciation,
            input_power_per_fixture: l.input_power_per_fixture,
        })
    }

    pub fn module(&self, name: &str) -> Result<&PVModuleSpec> {
        self.file
            .pv
            .modules
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::validation(format!("unknown module '{name}' (not in pv.modules)")))
    }

    pub fn inverter(&self) -> Result<&InverterSpec> {
        let name = &self.file.pv.inverter;
        self.file
            .pv
            .inverters
            .iter()
            .find(|i| &i.name == name)
            .ok_or_else(|| Error::validation(format!("unknown inverter '{name}' (not in pv.inverters)")))
    }

    pub fn resolve_faces(&self) -> Result<Vec<FaceRequest>> {
        self.file
            .pv
            .faces
            .iter()
            .map(|f| {
                Ok(FaceRequest {
                    orientation: Orientation { tilt: f.tilt, azimuth: f.azimuth },
                    module: self.module(&f.module)?.clone(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub const MINIMAL: &str = r#"
schema_version = 1
name = "test"

[site]
latitude = 15.5
longitude = 120.6
timezone = 8

[lighting]
target_lux = 500
[lighting.room]
length = 31.0
width = 19.51
ceiling_height = 10.6
fixture_mounting_height = 7.9
reflectances = { ceiling = 0.8, wall = 0.5, floor = 0.35 }
[lighting.luminaire]
lamps_per_fixture = 1
lumens_per_lamp = 26000
cu = 0.805
lamp_lumen_depreciation = 0.7
luminaire_dirt_depreciation = 0.88
input_power_per_fixture = 200

[hvac]
occupants = 1500
total_coil_load = 200.6
unit = { name = "3 TR", capacity = 40090, power_demand = 4500 }

[loads]
outlets = { floor_area = 1608, va_per_m2 = 8 }

[pv]
target_dc = 100000
inverter = "inv"
inverter_count = 2
modules = [
  { name = "m", p_stc = 400, v_mp = 36.6, v_oc = 42.9, i_mp = 10.93, i_sc = 11.41, gamma_p = -0.29, beta_voc = -0.24, noct = 44, module_area = 1.8135 },
]
inverters = [
  { name = "inv", p_ac_nominal = 40000, mppt_v_min = 250, mppt_v_max = 960, v_dc_max = 960, efficiency = 0.97 },
]
faces = [{ module = "m", tilt = 15, azimuth = -8 }]
[pv.building_load.template]
weekday = [0,0,0,0,0,0,0.2,0.5,0.8,0.8,0.8,0.8,0.6,0.8,0.8,0.8,0.8,0.6,0.4,0.2,0,0,0,0]
saturday = [0,0,0,0,0,0,0,0.2,0.5,0.5,0.5,0.5,0.4,0.5,0.5,0.5,0.3,0.1,0,0,0,0,0,0]
sunday = [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]

[finance]
params = { lifetime = 20, start_year = 2024, currency = "PHP", feed_in_tariff = 9.68, consumption_tariff = "5.90", opex = 305275.40, own_funds = "6893433.00", depreciation_period = 20 }
ledger = [{ name = "x", quantity = 1, unit_cost = 100.10, depreciable = true }]

[carbon]
grid_emission_factor = 0.72
"#;

    fn parse(s: &str) -> Result<Project> {
        Project::parse(s, Path::new("/tmp/p.toml"))
    }

    #[test]
    fn minimal_project_parses_with_defaults() {
        let p = parse(MINIMAL).unwrap();
        assert_eq!(p.file.hvac.sensible_gain_per_person, 70.0);
        assert_eq!(p.file.hvac.delta_t, 8.0);
        assert_eq!(p.file.hvac.air.dry_bulb, 30.0);
        assert_eq!(p.file.pv.simulation.derate, 0.9);
        assert_eq!(p.file.finance.params.feed_in_tariff.to_string(), "9.68");
        assert_eq!(p.file.finance.params.opex.to_string(), "305275.40");
        assert_eq!(p.file.finance.ledger[0].unit_cost.0.to_string(), "100.1");
        assert_eq!(p.resolve_faces().unwrap()[0].module.p_stc, 400.0);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = MINIMAL.replace("occupants = 1500", "occupants = 1500\noccupantz = 3");
        match parse(&text).unwrap_err() {
            Error::Parse { line, message, .. } => {
                let expected = text.lines().position(|l| l.starts_with("occupantz")).unwrap() + 1;
                assert_eq!(line, expected, "{message}");
                assert!(message.contains("occupantz"), "{message}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn unresolved_catalog_names() {
        let e = parse(&MINIMAL.replace("module = \"m\"", "module = \"nope\"")).unwrap_err();
        assert!(e.to_string().contains("nope"));
        assert_eq!(e.exit_code(), 2);
        let e = parse(&MINIMAL.replace("inverter = \"inv\"", "inverter = \"x\"")).unwrap_err();
        assert!(e.to_string().contains("'x'"));
    }

    #[test]
    fn schema_version_checked() {
        assert!(parse(&MINIMAL.replace("schema_version = 1", "schema_version = 9")).is_err());
    }

    #[test]
    fn cu_source_must_be_unique() {
        let p = parse(&MINIMAL.replace("cu = 0.805", "cu = 0.805\ncu_table = \"t.csv\"")).unwrap();
        assert!(p.luminaire().is_err());
    }

    #[test]
    fn expected_values_accept_both_forms() {
        let text = format!("{MINIMAL}\n[expected]\n\"lighting.fixtures\" = 24\n\"finance.payback\" = {{ value = 9.1, tolerance = 0.05 }}\n");
        let p = parse(&text).unwrap();
        assert_eq!(p.file.expected["lighting.fixtures"], Expected::Value(24.0));
        assert_eq!(p.file.expected["finance.payback"].value(), 9.1);
    }
}
