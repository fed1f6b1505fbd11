//! Pipeline orchestration and report emission.
//!
//! Every stage is a function of the project (and, for the simulation, the meteo year).
//! The full report calls the same functions as the individual stages, so their numbers
//! agree by construction. Emitters work on the serialized report: JSON as is, CSV and
//! text as flattened `key,value` pairs in document order.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::carbon::{avoided_emissions, AvoidedEmissions, CarbonParams};
use crate::error::{Error, Result};
use crate::finance::{self, AnnualEnergy, CashFlowSchedule, FinanceSummary};
use crate::hvac::{self, CoolingDesign};
use crate::lighting::{design_lighting, LightingDesign};
use crate::loads::{self, LoadItem, LoadSchedule, ScheduleRow};
use crate::project::{Expected, Project};
use crate::psychro::{self, VentilationSpec};
use crate::pvdesign::{self, ArrayDesign, DesignValidation, SeriesBounds};
use crate::simproduction::{self, EnergyResult, LoadProfile, MeteoSeries};

pub fn lighting(project: &Project) -> Result<LightingDesign> {
    let l = &project.file.lighting;
    design_lighting(&l.room, &project.luminaire()?, l.target_lux)
}

pub fn cooling(project: &Project) -> Result<CoolingDesign> {
    let h = &project.file.hvac;
    let sensible_load = hvac::occupant_sensible_load(h.occupants, h.sensible_gain_per_person);
    let air = h.air.state()?;
    let spec = VentilationSpec { sensible_load, delta_t: h.delta_t, cp: h.cp };
    let ventilation_flow = psychro::ventilation_flow_for_sensible_load(&spec, &air)?;
    let total_coil_load = match (h.total_coil_load, &h.coil) {
        (Some(q), _) => q,
        (None, Some(c)) => psychro::coil_load(ventilation_flow, &c.inlet.state()?, &c.outlet.state()?)?,
        (None, None) => return Err(Error::validation("hvac needs 'total_coil_load' or a 'coil' inlet/outlet pair")),
    };
    let units_required = hvac::acu_count_with_tolerance(total_coil_load, h.unit.capacity, h.unit_tolerance)?;
    Ok(CoolingDesign {
        occupants: h.occupants,
        sensible_gain_per_person: h.sensible_gain_per_person,
        sensible_load,
        ventilation_flow,
        specific_volume: air.specific_volume,
        total_coil_load,
        unit_capacity: h.unit.capacity,
        unit_refrigeration_tons: h.unit.refrigeration_tons,
        unit_power_demand: h.unit.power_demand,
        units_required,
        installed_capacity: units_required as f64 * h.unit.capacity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadsReport {
    pub items: Vec<ScheduleRow>,
    /// kVA, rounded half-up to two decimals
    pub total_kva: f64,
    /// kVA, unrounded
    pub total_kva_exact: f64,
}

impl From<&LoadSchedule> for LoadsReport {
    fn from(s: &LoadSchedule) -> Self {
        LoadsReport { items: s.items.clone(), total_kva: loads::round2(s.total), total_kva_exact: s.total }
    }
}

pub fn load_schedule(project: &Project, lights: &LightingDesign, cool: &CoolingDesign) -> Result<LoadSchedule> {
    let l = &project.file.loads;
    let mut items = Vec::new();
    if l.include_lighting {
        let per_fixture = project.file.lighting.luminaire.input_power_per_fixture;
        items.push(LoadItem::new("Lighting", per_fixture, lights.fixtures as i64));
    }
    if l.include_cooling {
        items.push(LoadItem::new("Air-conditioning units", cool.unit_power_demand, cool.units_required as i64));
    }
    if let Some(o) = l.outlets {
        items.push(loads::outlet_item(o.floor_area, o.va_per_m2)?);
    }
    items.extend(l.items.iter().cloned());
    loads::aggregate_loads(&items)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubArrayReport {
    pub module: String,
    pub tilt: f64,
    pub azimuth: f64,
    pub modules_in_series: u32,
    pub parallel_strings: u32,
    pub modules: u32,
    /// kWp
    pub nominal_dc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRange {
    pub module: String,
    #[serde(flatten)]
    pub bounds: SeriesBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PvDesignReport {
    pub modules: u32,
    pub strings: u32,
    pub sub_arrays: Vec<SubArrayReport>,
    pub series_ranges: Vec<SeriesRange>,
    pub inverter: String,
    pub inverter_count: u32,
    /// kWp
    pub nominal_dc: f64,
    /// kW
    pub nominal_ac: f64,
    pub dc_ac_ratio: f64,
    /// m²
    pub module_area: f64,
    pub connections: Vec<String>,
    pub validation: DesignValidation,
}

/// Lays out the array; a layout that breaks the inverter's voltage limits is a design error.
pub fn array_design(project: &Project) -> Result<(ArrayDesign, PvDesignReport)> {
    let pv = &project.file.pv;
    let faces = project.resolve_faces()?;
    let inverter = project.inverter()?;
    let design = pvdesign::configure_array(pv.target_dc, &faces, inverter, pv.inverter_count, pv.temperatures)?;
    let validation = pvdesign::validate_design(&design);
    if !validation.is_valid() {
        return Err(Error::design(validation.violations.join("; ")));
    }
    let mut series_ranges: Vec<SeriesRange> = Vec::new();
    for f in &faces {
        if series_ranges.iter().all(|r| r.module != f.module.name) {
            series_ranges.push(SeriesRange {
                module: f.module.name.clone(),
                bounds: pvdesign::series_bounds(&f.module, inverter, pv.temperatures)?,
            });
        }
    }
    let report = PvDesignReport {
        modules: design.module_count(),
        strings: design.string_count(),
        sub_arrays: design
            .sub_arrays
            .iter()
            .map(|s| SubArrayReport {
                module: s.module.name.clone(),
                tilt: s.orientation.tilt,
                azimuth: s.orientation.azimuth,
                modules_in_series: s.modules_in_series,
                parallel_strings: s.parallel_strings,
                modules: s.module_count(),
                nominal_dc: s.nominal_dc() / 1000.0,
            })
            .collect(),
        series_ranges,
        inverter: design.inverter.name.clone(),
        inverter_count: design.inverter_count,
        nominal_dc: design.nominal_dc() / 1000.0,
        nominal_ac: design.nominal_ac() / 1000.0,
        dc_ac_ratio: design.dc_ac_ratio(),
        module_area: design.module_area(),
        connections: design.connection_summary(),
        validation,
    };
    Ok((design, report))
}

/// Hourly building demand: the template scaled to the configured peak, W.
pub fn building_load(project: &Project, schedule: &LoadSchedule, meteo: &MeteoSeries) -> Result<LoadProfile> {
    let b = &project.file.pv.building_load;
    b.template.validate()?;
    let pf = project.file.loads.power_factor;
    if !(pf > 0.0 && pf <= 1.0) {
        return Err(Error::validation(format!("power factor must be in (0, 1], got {pf}")));
    }
    let peak = b.peak.unwrap_or(schedule.total * pf * 1000.0);
    if !(peak >= 0.0) {
        return Err(Error::validation(format!("building peak load must be >= 0 W, got {peak}")));
    }
    Ok(LoadProfile::from_template(&b.template, peak, meteo))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    /// kWh
    pub annual_dc: f64,
    /// kWh
    pub annual_ac: f64,
    /// kWh
    pub self_consumed: f64,
    /// kWh
    pub exported: f64,
    /// kWh
    pub building_demand: f64,
    /// kWh/kWp
    pub specific_yield: f64,
    pub performance_ratio: f64,
    /// kWh/m²
    pub poa_insolation: f64,
    /// kWh/m²
    pub ghi_insolation: f64,
    /// W
    pub peak_ac: u64,
    /// kWh per month
    pub monthly_ac: [f64; 12],
    pub transposition_model: &'static str,
    pub decomposition_model: &'static str,
}

impl From<&EnergyResult> for EnergyReport {
    fn from(e: &EnergyResult) -> Self {
        EnergyReport {
            annual_dc: e.annual_dc(),
            annual_ac: e.annual_ac(),
            self_consumed: e.self_consumed(),
            exported: e.exported(),
            building_demand: e.annual_load_wh as f64 / 1000.0,
            specific_yield: e.specific_yield,
            performance_ratio: e.performance_ratio,
            poa_insolation: e.poa_insolation,
            ghi_insolation: e.ghi_insolation,
            peak_ac: e.hourly.iter().map(|h| h.ac_wh).max().unwrap_or(0),
            monthly_ac: e.monthly_ac_kwh,
            transposition_model: e.transposition_model,
            decomposition_model: e.decomposition_model,
        }
    }
}

/// Runs lighting → cooling → loads → design → hourly simulation.
pub fn simulate(project: &Project, meteo: &MeteoSeries) -> Result<(ArrayDesign, EnergyResult)> {
    let lights = lighting(project)?;
    let cool = cooling(project)?;
    let schedule = load_schedule(project, &lights, &cool)?;
    let (design, _) = array_design(project)?;
    let load = building_load(project, &schedule, meteo)?;
    let energy =
        simproduction::annual_simulation(&design, meteo, &project.file.site, &load, &project.file.pv.simulation)?;
    Ok((design, energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergySource {
    /// Taken from the project's finance section.
    Project,
    /// Taken from the hourly simulation.
    Simulation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinanceReport {
    pub energy_source: EnergySource,
    pub energy: AnnualEnergy,
    #[serde(flatten)]
    pub summary: FinanceSummary,
    pub cash_flow: CashFlowSchedule,
}

/// Energy basis for the economics: the project's figures if given, else the simulation.
pub fn finance_energy(project: &Project, energy: Option<&EnergyResult>) -> Result<(EnergySource, AnnualEnergy)> {
    match (project.file.finance.energy, energy) {
        (Some(e), _) => Ok((EnergySource::Project, e)),
        (None, Some(r)) => Ok((
            EnergySource::Simulation,
            AnnualEnergy { sold_kwh: r.exported(), self_consumed_kwh: r.self_consumed() },
        )),
        (None, None) => Err(Error::validation(
            "finance needs either [finance.energy] in the project or a meteo file (--meteo) to simulate",
        )),
    }
}

pub fn finance(project: &Project, energy: Option<&EnergyResult>) -> Result<FinanceReport> {
    let f = &project.file.finance;
    let (source, basis) = finance_energy(project, energy)?;
    let ledger = f.ledger();
    let schedule = finance::cash_flow_table(&f.params, &ledger, basis)?;
    let summary = finance::summarize(&f.params, &ledger, basis, &schedule, f.payback_convention)?;
    Ok(FinanceReport { energy_source: source, energy: basis, summary, cash_flow: schedule })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarbonReport {
    pub params: CarbonParams,
    /// tCO₂
    #[serde(flatten)]
    pub avoided: AvoidedEmissions,
}

pub fn carbon(project: &Project, energy: Option<&EnergyResult>) -> Result<CarbonReport> {
    let c = &project.file.carbon;
    let annual_mwh = match c.annual_energy {
        Some(e) => e,
        None => finance_energy(project, energy)?.1.total_kwh() / 1000.0,
    };
    let params = c.params(project.file.finance.params.lifetime, annual_mwh);
    Ok(CarbonReport { params, avoided: avoided_emissions(&params)? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullReport {
    pub project: String,
    pub lighting: LightingDesign,
    pub cooling: CoolingDesign,
    pub loads: LoadsReport,
    pub pv_design: PvDesignReport,
    pub energy: Option<EnergyReport>,
    pub finance: FinanceReport,
    pub carbon: CarbonReport,
}

/// Everything a run produced: the structured report plus the tables behind plot data.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub schedule: Option<LoadSchedule>,
    pub cash_flow: Option<CashFlowSchedule>,
    pub energy: Option<EnergyResult>,
}

impl Outcome {
    fn new(report: impl Serialize) -> Result<Self> {
        let report = serde_json::to_value(report).map_err(|e| Error::validation(format!("report encoding: {e}")))?;
        Ok(Outcome { report, schedule: None, cash_flow: None, energy: None })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Lighting,
    Cooling,
    Loads,
    PvDesign,
    PvSimulate,
    Finance,
    Carbon,
    Report,
}

impl Stage {
    pub fn needs_meteo(self) -> bool {
        matches!(self, Stage::PvSimulate | Stage::Report)
    }
}

/// Runs one stage. `meteo` is required by the simulation stages and used by finance and
/// carbon when the project gives no energy basis.
pub fn run(stage: Stage, project: &Project, meteo: Option<&MeteoSeries>) -> Result<Outcome> {
    if stage.needs_meteo() && meteo.is_none() {
        return Err(Error::validation("missing input: this command requires a meteo file (--meteo)"));
    }
    let simulated = |m: Option<&MeteoSeries>| -> Result<Option<EnergyResult>> {
        m.map(|m| simulate(project, m).map(|(_, e)| e)).transpose()
    };
    match stage {
        Stage::Lighting => Outcome::new(lighting(project)?),
        Stage::Cooling => Outcome::new(cooling(project)?),
        Stage::Loads => {
            let s = load_schedule(project, &lighting(project)?, &cooling(project)?)?;
            let mut o = Outcome::new(LoadsReport::from(&s))?;
            o.schedule = Some(s);
            Ok(o)
        }
        Stage::PvDesign => Outcome::new(array_design(project)?.1),
        Stage::PvSimulate => {
            let energy = simulated(meteo)?.expect("meteo checked above");
            let mut o = Outcome::new(EnergyReport::from(&energy))?;
            o.energy = Some(energy);
            Ok(o)
        }
        Stage::Finance => {
            let energy = if project.file.finance.energy.is_some() { None } else { simulated(meteo)? };
            let f = finance(project, energy.as_ref())?;
            let mut o = Outcome::new(&f)?;
            o.cash_flow = Some(f.cash_flow);
            o.energy = energy;
            Ok(o)
        }
        Stage::Carbon => {
            let c = &project.file.carbon;
            let energy = if c.annual_energy.is_some() || project.file.finance.energy.is_some() {
                None
            } else {
                simulated(meteo)?
            };
            Outcome::new(carbon(project, energy.as_ref())?)
        }
        Stage::Report => full_report(project, meteo),
    }
}

/// Full pipeline. Without a meteo year the energy section is omitted and the economics
/// must rely on the project's energy basis.
pub fn full_report(project: &Project, meteo: Option<&MeteoSeries>) -> Result<Outcome> {
    let lights = lighting(project)?;
    let cool = cooling(project)?;
    let schedule = load_schedule(project, &lights, &cool)?;
    let (design, pv_design) = array_design(project)?;
    let energy = match meteo {
        Some(m) => {
            let load = building_load(project, &schedule, m)?;
            Some(simproduction::annual_simulation(&design, m, &project.file.site, &load, &project.file.pv.simulation)?)
        }
        None => None,
    };
    let fin = finance(project, energy.as_ref())?;
    let carb = carbon(project, energy.as_ref())?;
    let report = FullReport {
        project: project.file.name.clone(),
        lighting: lights,
        cooling: cool,
        loads: LoadsReport::from(&schedule),
        pv_design,
        energy: energy.as_ref().map(EnergyReport::from),
        finance: fin.clone(),
        carbon: carb,
    };
    let mut o = Outcome::new(&report)?;
    o.schedule = Some(schedule);
    o.cash_flow = Some(fin.cash_flow);
    o.energy = energy;
    Ok(o)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::validation(format!("unknown format '{other}' (json, csv, text)"))),
        }
    }
}

/// Leaf values keyed by dotted path (`finance.cash_flow.rows.3.taxes`), in document order.
pub fn flatten(value: &Value) -> Vec<(String, Value)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            leaf => out.push((prefix.to_string(), leaf.clone())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn leaf_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Serializes a report; all three formats carry the same leaf values.
pub fn emit(report: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::validation(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::validation(format!("csv encoding: {e}"));
            w.write_record(["key", "value"]).map_err(io)?;
            for (k, v) in flatten(report) {
                w.write_record([k, leaf_text(&v)]).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::validation(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Text => {
            let rows = flatten(report);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in rows {
                let _ = writeln!(s, "{k:<width$}  {}", leaf_text(&v));
            }
            Ok(s)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    CumulativeProfit,
    MonthlyEnergy,
    DurationCurve,
}

impl PlotKind {
    pub const ALL: [PlotKind; 3] = [PlotKind::CumulativeProfit, PlotKind::MonthlyEnergy, PlotKind::DurationCurve];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::CumulativeProfit => "cumulative-profit",
            PlotKind::MonthlyEnergy => "monthly-energy",
            PlotKind::DurationCurve => "duration-curve",
        }
    }
}

impl FromStr for PlotKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PlotKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::validation(format!("unknown plot kind '{s}' (cumulative-profit, monthly-energy, duration-curve)"))
        })
    }
}

/// Writes a plot-ready CSV series.
///
/// * `cumulative-profit`: `year,cumulative_profit` in currency units
/// * `monthly-energy`: `month,ac_energy_kwh`
/// * `duration-curve`: `rank,ac_power_w`, hourly AC power sorted high to low
pub fn emit_plot_data<W: Write>(outcome: &Outcome, kind: PlotKind, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::validation(format!("csv encoding: {e}"));
    let need = |what: &str| Error::validation(format!("plot '{}' needs {what}", kind.name()));
    match kind {
        PlotKind::CumulativeProfit => {
            let cf = outcome.cash_flow.as_ref().ok_or_else(|| need("a finance run"))?;
            w.write_record(["year", "cumulative_profit"]).map_err(io)?;
            for r in &cf.rows {
                w.write_record([r.year.to_string(), r.cumulative_profit.to_string()]).map_err(io)?;
            }
        }
        PlotKind::MonthlyEnergy => {
            let e = outcome.energy.as_ref().ok_or_else(|| need("a simulation run"))?;
            w.write_record(["month", "ac_energy_kwh"]).map_err(io)?;
            for (m, kwh) in e.monthly_ac_kwh.iter().enumerate() {
                w.write_record([(m + 1).to_string(), format!("{kwh:.3}")]).map_err(io)?;
            }
        }
        PlotKind::DurationCurve => {
            let e = outcome.energy.as_ref().ok_or_else(|| need("a simulation run"))?;
            w.write_record(["rank", "ac_power_w"]).map_err(io)?;
            for (i, p) in e.duration_curve().iter().enumerate() {
                w.write_record([(i + 1).to_string(), p.to_string()]).map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| Error::validation(format!("write failed: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub key: String,
    pub expected: f64,
    pub actual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares report values against the project's `[expected]` table. Bare expected
/// values use `relative_tolerance`; explicit tolerances are absolute.
pub fn verify(report: &Value, project: &Project, relative_tolerance: f64) -> Vec<Check> {
    let flat = flatten(report);
    project
        .file
        .expected
        .iter()
        .map(|(key, exp)| {
            let actual = flat.iter().find(|(k, _)| k == key).and_then(|(_, v)| match v {
                Value::Number(n) => n.as_f64(),
                Value::String(s) => s.parse().ok(),
                _ => None,
            });
            let tolerance = match *exp {
                Expected::Value(v) => relative_tolerance * v.abs(),
                Expected::WithTolerance { tolerance, .. } => tolerance,
            };
            let pass = actual.is_some_and(|a| (a - exp.value()).abs() <= tolerance);
            Check { key: key.clone(), expected: exp.value(), actual, tolerance, pass }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::project::tests::MINIMAL;
    use std::path::Path;

    fn project() -> Project {
        Project::parse(MINIMAL, Path::new("/tmp/p.toml")).unwrap()
    }

    #[test]
    fn stages_without_meteo() {
        let p = project();
        assert_eq!(lighting(&p).unwrap().fixtures, 24);
        let c = cooling(&p).unwrap();
        assert_eq!(c.units_required, 18);
        assert!((c.ventilation_flow - 11_494.0).abs() / 11_494.0 < 0.01);
        let s = load_schedule(&p, &lighting(&p).unwrap(), &c).unwrap();
        assert_eq!(LoadsReport::from(&s).total_kva, 98.66);
    }

    #[test]
    fn simulation_stages_require_meteo() {
        let e = run(Stage::PvSimulate, &project(), None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("--meteo"));
        // finance falls back to the simulation, which needs the meteo year
        assert!(run(Stage::Finance, &project(), None).unwrap_err().to_string().contains("--meteo"));
    }

    #[test]
    fn formats_carry_the_same_values() {
        let o = run(Stage::Cooling, &project(), None).unwrap();
        let csv = emit(&o.report, Format::Csv).unwrap();
        let text = emit(&o.report, Format::Text).unwrap();
        let json = emit(&o.report, Format::Json).unwrap();
        for (k, v) in flatten(&o.report) {
            let t = leaf_text(&v);
            let field = k.rsplit('.').next().unwrap();
            assert!(json.contains(&format!("\"{field}\": {v}")), "{k}");
            assert!(csv.lines().any(|l| l == format!("{k},{t}")), "{k}");
            assert!(text.lines().any(|l| l.starts_with(&k) && l.ends_with(&t)), "{k}");
        }
    }

    #[test]
    fn flatten_paths() {
        let v: Value = serde_json::json!({"a": {"b": [1, {"c": "x"}]}, "d": null});
        let f = flatten(&v);
        assert_eq!(f[0], ("a.b.0".to_string(), Value::from(1)));
        assert_eq!(f[1], ("a.b.1.c".to_string(), Value::from("x")));
        assert_eq!(f[2].0, "d");
    }

    #[test]
    fn unknown_plot_kind() {
        assert!("pie".parse::<PlotKind>().is_err());
        assert_eq!("duration-curve".parse::<PlotKind>().unwrap(), PlotKind::DurationCurve);
    }

    #[test]
    fn empty_trace_gives_header_only() {
        let mut o = run(Stage::Cooling, &project(), None).unwrap();
        let meteo = MeteoSeries { records: vec![] };
        o.energy = Some(
            simproduction::annual_simulation(
                &array_design(&project()).unwrap().0,
                &meteo,
                &project().file.site,
                &LoadProfile { hourly: vec![] },
                &Default::default(),
            )
            .unwrap(),
        );
        let mut buf = Vec::new();
        emit_plot_data(&o, PlotKind::DurationCurve, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "rank,ac_power_w\n");
    }

    #[test]
    fn design_violation_is_infeasible() {
        let text = MINIMAL
            .replace("v_dc_max = 960", "v_dc_max = 200")
            .replace("mppt_v_max = 960", "mppt_v_max = 200")
            .replace("mppt_v_min = 250", "mppt_v_min = 150");
        let p = Project::parse(&text, Path::new("/tmp/p.toml")).unwrap();
        let e = array_design(&p).unwrap_err();
        assert_eq!(e.exit_code(), 3, "{e}");
    }
}
