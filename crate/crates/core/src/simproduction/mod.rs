//! Hourly energy-yield simulation of a configured array.
//!
//! Per hour: sun position at mid-interval, beam/diffuse split, plane-of-array irradiance
//! per sub-array, NOCT cell temperature, temperature-corrected DC power with a single
//! loss derate, inverter efficiency and clipping at the AC rating. AC output is split
//! against the building load into self-consumed and exported energy.

pub mod irradiance;
pub mod meteo;
pub mod solar;

use std::io::Write;

use chrono::{Datelike, NaiveDateTime, TimeDelta, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pvdesign::{ArrayDesign, STC_TEMPERATURE};
pub use irradiance::{decompose_ghi, poa_irradiance, BeamDiffuse};
pub use meteo::{load_meteo, MeteoRecord, MeteoSeries};
pub use solar::{solar_position, SiteSpec, SunPosition};

/// Default lumped DC loss factor (soiling, wiring, mismatch).
pub const DEFAULT_DERATE: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationOptions {
    #[serde(default = "default_derate")]
    pub derate: f64,
    /// Replaces the inverter AC ceiling (W); `None` uses the design's rating.
    #[serde(default)]
    pub ac_limit_override: Option<f64>,
}

fn default_derate() -> f64 {
    DEFAULT_DERATE
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions { derate: DEFAULT_DERATE, ac_limit_override: None }
    }
}

/// NOCT cell-temperature model, °C.
pub fn cell_temperature(t_ambient: f64, poa: f64, noct: f64) -> f64 {
    t_ambient + (noct - 20.0) / 800.0 * poa
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerStep {
    /// W
    pub dc: f64,
    /// W
    pub ac: f64,
    /// Cell temperature per sub-array, °C.
    pub t_cell: Vec<f64>,
}

/// DC and AC power for one time step; `poa` holds one irradiance per sub-array.
pub fn ac_power_step(design: &ArrayDesign, poa: &[f64], t_ambient: f64, options: &SimulationOptions) -> PowerStep {
    debug_assert_eq!(poa.len(), design.sub_arrays.len());
    let mut dc = 0.0;
    let mut t_cell = Vec::with_capacity(poa.len());
    for (sa, &g) in design.sub_arrays.iter().zip(poa) {
        let tc = cell_temperature(t_ambient, g, sa.module.noct);
        let temp_factor = (1.0 + sa.module.gamma_p / 100.0 * (tc - STC_TEMPERATURE)).max(0.0);
        dc += sa.nominal_dc() * (g / 1000.0) * temp_factor * options.derate;
        t_cell.push(tc);
    }
    let dc = dc.max(0.0);
    let limit = options.ac_limit_override.unwrap_or_else(|| design.nominal_ac());
    let ac = (dc * design.inverter.efficiency).min(limit);
    PowerStep { dc, ac, t_cell }
}

/// Weekly occupancy template: hourly fractions of the peak building load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeeklyTemplate {
    pub weekday: [f64; 24],
    pub saturday: [f64; 24],
    pub sunday: [f64; 24],
}

impl WeeklyTemplate {
    pub fn fraction(&self, t: NaiveDateTime) -> f64 {
        let day = match t.weekday() {
            Weekday::Sat => &self.saturday,
            Weekday::Sun => &self.sunday,
            _ => &self.weekday,
        };
        day[chrono::Timelike::hour(&t) as usize]
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.weekday.iter().chain(&self.saturday).chain(&self.sunday);
        for &f in all {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::validation(format!("load template fraction {f} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Hourly building demand in W.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile {
    pub hourly: Vec<f64>,
}

impl LoadProfile {
    pub fn from_template(template: &WeeklyTemplate, peak_w: f64, meteo: &MeteoSeries) -> Self {
        LoadProfile { hourly: meteo.records.iter().map(|r| peak_w * template.fraction(r.timestamp)).collect() }
    }

    pub fn constant(w: f64, hours: usize) -> Self {
        LoadProfile { hourly: vec![w; hours] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HourlyPoint {
    pub timestamp: NaiveDateTime,
    pub ghi: f64,
    /// Plane-of-array irradiance averaged over sub-arrays by DC share, W/m².
    pub poa: f64,
    pub dc_wh: u64,
    pub ac_wh: u64,
    pub load_wh: u64,
    pub self_consumed_wh: u64,
    pub exported_wh: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyResult {
    pub annual_dc_wh: u64,
    pub annual_ac_wh: u64,
    pub self_consumed_wh: u64,
    pub exported_wh: u64,
    pub annual_load_wh: u64,
    /// kWh/kWp
    pub specific_yield: f64,
    pub performance_ratio: f64,
    /// Annual plane-of-array insolation weighted by sub-array DC share, kWh/m².
    pub poa_insolation: f64,
    /// kWh/m²
    pub ghi_insolation: f64,
    /// AC energy per calendar month, kWh.
    pub monthly_ac_kwh: [f64; 12],
    pub transposition_model: &'static str,
    pub decomposition_model: &'static str,
    #[serde(skip)]
    pub hourly: Vec<HourlyPoint>,
}

impl EnergyResult {
    pub fn annual_dc(&self) -> f64 {
        self.annual_dc_wh as f64 / 1000.0
    }

    /// kWh
    pub fn annual_ac(&self) -> f64 {
        self.annual_ac_wh as f64 / 1000.0
    }

    pub fn self_consumed(&self) -> f64 {
        self.self_consumed_wh as f64 / 1000.0
    }

    pub fn exported(&self) -> f64 {
        self.exported_wh as f64 / 1000.0
    }

    /// Hourly AC power sorted from highest to lowest, W.
    pub fn duration_curve(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.hourly.iter().map(|h| h.ac_wh).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn write_hourly_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "timestamp",
            "ghi_w_m2",
            "poa_w_m2",
            "dc_wh",
            "ac_wh",
            "load_wh",
            "self_consumed_wh",
            "exported_wh",
        ])?;
        for h in &self.hourly {
            w.write_record([
                h.timestamp.format("%Y-%m-%dT%H:%M").to_string(),
                format!("{:.1}", h.ghi),
                format!("{:.1}", h.poa),
                h.dc_wh.to_string(),
                h.ac_wh.to_string(),
                h.load_wh.to_string(),
                h.self_consumed_wh.to_string(),
                h.exported_wh.to_string(),
            ])?;
        }
        w.flush()
    }
}

fn to_wh(x: f64) -> u64 {
    x.max(0.0).round() as u64
}

/// Runs the hourly simulation over a full meteo year.
pub fn annual_simulation(
    design: &ArrayDesign,
    meteo: &MeteoSeries,
    site: &SiteSpec,
    load: &LoadProfile,
    options: &SimulationOptions,
) -> Result<EnergyResult> {
    if load.hourly.len() != meteo.len() {
        return Err(Error::validation(format!(
            "load profile has {} hours but meteo series has {}",
            load.hourly.len(),
            meteo.len()
        )));
    }
    if !(site.latitude.abs() <= 90.0) {
        return Err(Error::validation(format!("latitude {} outside [-90, 90]", site.latitude)));
    }
    if !(options.derate > 0.0 && options.derate <= 1.0) {
        return Err(Error::validation(format!("derate must be in (0, 1], got {}", options.derate)));
    }
    let nominal_w = design.nominal_dc();
    let shares: Vec<f64> =
        design.sub_arrays.iter().map(|s| if nominal_w > 0.0 { s.nominal_dc() / nominal_w } else { 0.0 }).collect();

    let mut poa = vec![0.0; design.sub_arrays.len()];
    let mut poa_wh = vec![0.0; design.sub_arrays.len()];
    let mut hourly = Vec::with_capacity(meteo.len());
    let mut monthly = [0u64; 12];
    let mut ghi_wh = 0.0;
    let half_hour = TimeDelta::minutes(30);

    for (rec, &load_w) in meteo.records.iter().zip(&load.hourly) {
        let sun = solar_position(site, rec.timestamp + half_hour);
        let bd = decompose_ghi(rec, sun.elevation);
        for (k, sa) in design.sub_arrays.iter().enumerate() {
            poa[k] = poa_irradiance(bd.dni, bd.dhi, rec.ghi, &sun, &sa.orientation, site.albedo);
            poa_wh[k] += poa[k];
        }
        ghi_wh += rec.ghi;
        let step = ac_power_step(design, &poa, rec.t_ambient, options);
        let ac = to_wh(step.ac);
        let load_wh = to_wh(load_w);
        let self_consumed = ac.min(load_wh);
        monthly[rec.timestamp.month0() as usize] += ac;
        hourly.push(HourlyPoint {
            timestamp: rec.timestamp,
            ghi: rec.ghi,
            poa: poa.iter().zip(&shares).map(|(p, s)| p * s).sum(),
            dc_wh: to_wh(step.dc),
            ac_wh: ac,
            load_wh,
            self_consumed_wh: self_consumed,
            exported_wh: ac - self_consumed,
        });
    }

    let annual_ac_wh: u64 = hourly.iter().map(|h| h.ac_wh).sum();
    let poa_insolation = poa_wh.iter().zip(&shares).map(|(p, s)| p * s).sum::<f64>() / 1000.0;
    let kwp = nominal_w / 1000.0;
    let annual_ac_kwh = annual_ac_wh as f64 / 1000.0;
    let specific_yield = if kwp > 0.0 { annual_ac_kwh / kwp } else { 0.0 };
    let reference = kwp * poa_insolation;
    Ok(EnergyResult {
        annual_dc_wh: hourly.iter().map(|h| h.dc_wh).sum(),
        annual_ac_wh,
        self_consumed_wh: hourly.iter().map(|h| h.self_consumed_wh).sum(),
        exported_wh: hourly.iter().map(|h| h.exported_wh).sum(),
        annual_load_wh: hourly.iter().map(|h| h.load_wh).sum(),
        specific_yield,
        performance_ratio: if reference > 0.0 { annual_ac_kwh / reference } else { 0.0 },
        poa_insolation,
        ghi_insolation: ghi_wh / 1000.0,
        monthly_ac_kwh: monthly.map(|m| m as f64 / 1000.0),
        transposition_model: irradiance::TRANSPOSITION_MODEL,
        decomposition_model: irradiance::DECOMPOSITION_MODEL,
        hourly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pvdesign::fixtures::paper_design;
    use crate::pvdesign::Orientation;
    use approx::assert_relative_eq;

    fn site() -> SiteSpec {
        SiteSpec { latitude: 15.8, longitude: 120.59, elevation: 51.0, timezone: 8.0, albedo: 0.2 }
    }

    /// Clear-ish sky: GHI follows the sine of solar elevation.
    fn bell_year() -> MeteoSeries {
        let s = site();
        MeteoSeries::synthetic(2023, |t| {
            let el = solar_position(&s, t + TimeDelta::minutes(30)).elevation;
            let ghi = if el > 0.0 { 1000.0 * el.to_radians().sin() } else { 0.0 };
            (ghi, None, 28.0)
        })
    }

    #[test]
    fn cell_temperature_example() {
        assert_eq!(cell_temperature(30.0, 800.0, 45.0), 55.0);
    }

    #[test]
    fn night_step_is_zero() {
        let d = paper_design();
        let s = ac_power_step(&d, &[0.0, 0.0], 25.0, &SimulationOptions::default());
        assert_eq!((s.dc, s.ac), (0.0, 0.0));
    }

    #[test]
    fn clipping_at_inverter_rating() {
        let d = paper_design();
        let s = ac_power_step(&d, &[1400.0, 1400.0], 25.0, &SimulationOptions::default());
        assert!(s.dc * 0.97 > 80_000.0);
        assert_eq!(s.ac, 80_000.0);
    }

    #[test]
    fn clip_ceiling_from_design() {
        let mut d = paper_design();
        d.sub_arrays.truncate(1);
        // a step whose dc is exactly 95 kW: 95 000 · 0.97 = 92 150 > 80 000
        let g = 1000.0;
        let tc = cell_temperature(25.0, g, d.sub_arrays[0].module.noct);
        let tf = 1.0 + d.sub_arrays[0].module.gamma_p / 100.0 * (tc - 25.0);
        d.sub_arrays[0].module.p_stc = 95_000.0 / (tf * d.sub_arrays[0].module_count() as f64);
        let s = ac_power_step(&d, &[g], 25.0, &SimulationOptions { derate: 1.0, ac_limit_override: None });
        assert_relative_eq!(s.dc, 95_000.0, max_relative = 1e-12);
        assert_eq!(s.ac, 80_000.0);
    }

    #[test]
    fn zero_irradiance_year() {
        let m = MeteoSeries::synthetic(2023, |_| (0.0, None, 25.0));
        let r = annual_simulation(&paper_design(), &m, &site(), &LoadProfile::constant(5e4, 8760), &Default::default())
            .unwrap();
        assert_eq!((r.annual_dc_wh, r.annual_ac_wh, r.self_consumed_wh, r.exported_wh), (0, 0, 0, 0));
        assert_eq!(r.performance_ratio, 0.0);
        assert_eq!(r.specific_yield, 0.0);
    }

    #[test]
    fn zero_load_exports_everything() {
        let m = bell_year();
        let r = annual_simulation(&paper_design(), &m, &site(), &LoadProfile::constant(0.0, 8760), &Default::default())
            .unwrap();
        assert!(r.annual_ac_wh > 0);
        assert_eq!(r.exported_wh, r.annual_ac_wh);
        assert_eq!(r.self_consumed_wh, 0);
    }

    #[test]
    fn split_and_clipping_invariants() {
        let m = bell_year();
        let d = paper_design();
        let load = LoadProfile { hourly: (0..8760).map(|h| 40_000.0 * ((h % 24) as f64 / 23.0)).collect() };
        let r = annual_simulation(&d, &m, &site(), &load, &Default::default()).unwrap();
        assert_eq!(r.self_consumed_wh + r.exported_wh, r.annual_ac_wh);
        for h in &r.hourly {
            assert!(h.ac_wh <= 80_000);
            assert!(h.ac_wh as f64 <= h.dc_wh as f64 * 0.97 + 1.0);
            assert_eq!(h.self_consumed_wh + h.exported_wh, h.ac_wh);
        }
        assert_eq!(r.monthly_ac_kwh.iter().sum::<f64>().round(), r.annual_ac().round());
        assert!(r.performance_ratio > 0.0 && r.performance_ratio < 1.0);
        let dc = r.duration_curve();
        assert!(dc.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn flat_plane_sees_ghi_every_hour() {
        let mut d = paper_design();
        for s in &mut d.sub_arrays {
            s.orientation = Orientation { tilt: 0.0, azimuth: s.orientation.azimuth };
        }
        let m = bell_year();
        let r = annual_simulation(&d, &m, &site(), &LoadProfile::constant(0.0, 8760), &Default::default()).unwrap();
        for h in &r.hourly {
            assert!((h.poa - h.ghi).abs() <= 1e-9 * h.ghi.max(1.0));
        }
    }

    #[test]
    fn linear_in_irradiance_without_losses_that_depend_on_it() {
        // fully diffuse sky, no temperature coefficient, no clipping: output scales exactly
        let mut d = paper_design();
        for sa in &mut d.sub_arrays {
            sa.module.gamma_p = 0.0;
        }
        let mut base = bell_year();
        for r in &mut base.records {
            r.dhi = Some(r.ghi);
        }
        let mut doubled = base.clone();
        for r in &mut doubled.records {
            r.ghi *= 2.0;
            r.dhi = Some(r.ghi);
        }
        let opts = SimulationOptions { ac_limit_override: Some(f64::INFINITY), ..Default::default() };
        let load = LoadProfile::constant(0.0, 8760);
        let a = annual_simulation(&d, &base, &site(), &load, &opts).unwrap();
        let b = annual_simulation(&d, &doubled, &site(), &load, &opts).unwrap();
        let ratio = b.annual_dc_wh as f64 / a.annual_dc_wh as f64;
        assert!((ratio - 2.0).abs() < 1e-4, "ratio {ratio}");
    }

    #[test]
    fn load_length_mismatch() {
        let m = bell_year();
        let e = annual_simulation(&paper_design(), &m, &site(), &LoadProfile::constant(0.0, 10), &Default::default());
        assert!(matches!(e, Err(Error::Validation(_))));
    }

    #[test]
    fn template_picks_day_type() {
        let mut t = WeeklyTemplate { weekday: [0.5; 24], saturday: [0.25; 24], sunday: [0.0; 24] };
        t.weekday[9] = 1.0;
        // 2023-01-02 is a Monday
        let mon = chrono::NaiveDate::from_ymd_opt(2023, 1, 2).unwrap().and_hms_opt(9, 0, 0).unwrap();
        assert_eq!(t.fraction(mon), 1.0);
        assert_eq!(t.fraction(mon - TimeDelta::days(1)), 0.0);
        assert_eq!(t.fraction(mon - TimeDelta::days(2)), 0.25);
        assert!(t.validate().is_ok());
        t.sunday[0] = 1.5;
        assert!(t.validate().is_err());
    }

    #[test]
    fn hourly_csv_has_header_only_when_empty() {
        let m = MeteoSeries::synthetic(2023, |_| (0.0, None, 25.0));
        let mut r =
            annual_simulation(&paper_design(), &m, &site(), &LoadProfile::constant(0.0, 8760), &Default::default())
                .unwrap();
        r.hourly.clear();
        let mut buf = Vec::new();
        r.write_hourly_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }
}
