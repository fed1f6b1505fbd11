//! Zonal-cavity (lumen method) lighting design.
//!
//! A room is split into three cavities by the luminaire plane and the work plane. Each
//! cavity gets a cavity ratio `5·h·(L + W) / (L·W)`; the ceiling and floor cavities are
//! replaced by equivalent planes with an effective reflectance; the coefficient of
//! utilization then gives the fraction of lamp lumens reaching the work plane.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceReflectances {
    pub ceiling: f64,
    pub wall: f64,
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomLightingModel {
    pub length: f64,
    pub width: f64,
    pub ceiling_height: f64,
    pub fixture_mounting_height: f64,
    #[serde(default)]
    pub work_plane_height: f64,
    pub reflectances: SurfaceReflectances,
    /// Replaces the computed effective ceiling-cavity reflectance.
    #[serde(default)]
    pub effective_ceiling_reflectance: Option<f64>,
    /// Replaces the computed effective floor-cavity reflectance.
    #[serde(default)]
    pub effective_floor_reflectance: Option<f64>,
}

impl RoomLightingModel {
    pub fn floor_area(&self) -> f64 {
        self.length * self.width
    }

    pub fn room_cavity_height(&self) -> f64 {
        self.fixture_mounting_height - self.work_plane_height
    }

    pub fn ceiling_cavity_height(&self) -> f64 {
        self.ceiling_height - self.fixture_mounting_height
    }

    pub fn floor_cavity_height(&self) -> f64 {
        self.work_plane_height
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0) {
            return Err(Error::validation("room length and width must be > 0"));
        }
        if !(0.0 <= self.work_plane_height
            && self.work_plane_height < self.fixture_mounting_height
            && self.fixture_mounting_height <= self.ceiling_height)
        {
            return Err(Error::validation("heights must satisfy 0 <= work plane < mounting height <= ceiling height"));
        }
        let r = &self.reflectances;
        let overrides = [self.effective_ceiling_reflectance, self.effective_floor_reflectance];
        for v in [r.ceiling, r.wall, r.floor].into_iter().chain(overrides.into_iter().flatten()) {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(format!("reflectance {v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// `5·h·(L + W) / (L·W)`.
pub fn cavity_ratio(cavity_height: f64, length: f64, width: f64) -> Result<f64> {
    if !(length > 0.0 && width > 0.0) {
        return Err(Error::domain(format!("plan dimensions must be > 0, got {length} x {width}")));
    }
    if cavity_height < 0.0 {
        return Err(Error::domain(format!("cavity height must be >= 0, got {cavity_height}")));
    }
    Ok(5.0 * cavity_height * (length + width) / (length * width))
}

/// Effective reflectance of a cavity opening.
///
/// The cavity is treated as an enclosure with a diffusely reflecting base and walls.
/// Wall-to-base area is `0.4·CR`; with `ρ̄` the area-weighted reflectance and `f` the
/// opening-to-surface area ratio, `ρ_eff = ρ̄·f / (1 − ρ̄·(1 − f))`.
pub fn effective_cavity_reflectance(base: f64, wall: f64, cavity_ratio: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&base) || !(0.0..=1.0).contains(&wall) {
        return Err(Error::domain("reflectances must be in [0, 1]"));
    }
    if cavity_ratio < 0.0 {
        return Err(Error::domain(format!("cavity ratio must be >= 0, got {cavity_ratio}")));
    }
    let wall_area = 0.4 * cavity_ratio;
    let surface_area = 1.0 + wall_area;
    let mean = (base + wall * wall_area) / surface_area;
    let opening = 1.0 / surface_area;
    let denom = 1.0 - mean * (1.0 - opening);
    if denom <= 0.0 {
        // only reachable with perfectly reflecting surfaces
        return Ok(1.0);
    }
    Ok(mean * opening / denom)
}

/// Regular 3-D grid with trilinear interpolation, clamped at the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3 {
    axes: [Vec<f64>; 3],
    values: Vec<f64>,
}

impl Grid3 {
    /// Builds a grid from `(x, y, z, value)` rows that must cover every axis combination.
    pub fn from_rows(rows: &[[f64; 4]]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::validation("grid has no rows"));
        }
        let axis = |k: usize| {
            let mut v: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let axes = [axis(0), axis(1), axis(2)];
        let n = axes[0].len() * axes[1].len() * axes[2].len();
        if n != rows.len() {
            return Err(Error::validation(format!(
                "grid is not a complete lattice: {} rows for {}x{}x{} axes",
                rows.len(),
                axes[0].len(),
                axes[1].len(),
                axes[2].len()
            )));
        }
        let mut values = vec![f64::NAN; n];
        for r in rows {
            let i = axes[0].iter().position(|&a| a == r[0]).unwrap();
            let j = axes[1].iter().position(|&a| a == r[1]).unwrap();
            let k = axes[2].iter().position(|&a| a == r[2]).unwrap();
            let idx = (i * axes[1].len() + j) * axes[2].len() + k;
            if !values[idx].is_nan() {
                return Err(Error::validation(format!("duplicate grid point ({}, {}, {})", r[0], r[1], r[2])));
            }
            values[idx] = r[3];
        }
        Ok(Grid3 { axes, values })
    }

    /// Reads `x,y,z,value` rows from a CSV file with a header line.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| csv_error(path, e))?;
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| csv_error(path, e))?;
            if rec.len() != 4 {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line,
                    message: format!("expected 4 columns, found {}", rec.len()),
                });
            }
            let mut row = [0.0; 4];
            for (k, field) in rec.iter().enumerate() {
                row[k] = field.parse().map_err(|_| Error::Parse {
                    path: path.to_owned(),
                    line,
                    message: format!("not a number: {field:?}"),
                })?;
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn interpolate(&self, x: f64, y: f64, z: f64) -> f64 {
        let (i0, i1, tx) = bracket(&self.axes[0], x);
        let (j0, j1, ty) = bracket(&self.axes[1], y);
        let (k0, k1, tz) = bracket(&self.axes[2], z);
        let at = |i: usize, j: usize, k: usize| self.values[(i * self.axes[1].len() + j) * self.axes[2].len() + k];
        let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
        let c00 = lerp(at(i0, j0, k0), at(i1, j0, k0), tx);
        let c01 = lerp(at(i0, j0, k1), at(i1, j0, k1), tx);
        let c10 = lerp(at(i0, j1, k0), at(i1, j1, k0), tx);
        let c11 = lerp(at(i0, j1, k1), at(i1, j1, k1), tx);
        lerp(lerp(c00, c10, ty), lerp(c01, c11, ty), tz)
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path: path.to_owned(), source },
        other => Error::Parse { path: path.to_owned(), line, message: format!("{other:?}") },
    }
}

fn bracket(axis: &[f64], x: f64) -> (usize, usize, f64) {
    if axis.len() == 1 || x <= axis[0] {
        return (0, 0, 0.0);
    }
    let last = axis.len() - 1;
    if x >= axis[last] {
        return (last, last, 0.0);
    }
    let hi = axis.partition_point(|&a| a <= x);
    let lo = hi - 1;
    (lo, hi, (x - axis[lo]) / (axis[hi] - axis[lo]))
}

/// Where the coefficient of utilization comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientOfUtilization {
    Direct(f64),
    /// Lookup over (room cavity ratio, effective ceiling reflectance, wall reflectance).
    Grid(Grid3),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LuminaireSpec {
    pub lamps_per_fixture: u32,
    pub lumens_per_lamp: f64,
    pub cu: CoefficientOfUtilization,
    pub lamp_lumen_depreciation: f64,
    pub luminaire_dirt_depreciation: f64,
    /// VA
    pub input_power_per_fixture: f64,
}

/// Cavity geometry and reflectances resolved for one room.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityAnalysis {
    pub floor_area: f64,
    pub room_cavity_height: f64,
    pub room_cavity_ratio: f64,
    pub ceiling_cavity_height: f64,
    pub ceiling_cavity_ratio: f64,
    pub effective_ceiling_reflectance: f64,
    pub floor_cavity_height: f64,
    pub floor_cavity_ratio: f64,
    pub effective_floor_reflectance: f64,
}

pub fn analyse_cavities(room: &RoomLightingModel) -> Result<CavityAnalysis> {
    room.validate()?;
    let (l, w) = (room.length, room.width);
    let r = room.reflectances;
    let ccr = cavity_ratio(room.ceiling_cavity_height(), l, w)?;
    let fcr = cavity_ratio(room.floor_cavity_height(), l, w)?;
    let rho_cc = match room.effective_ceiling_reflectance {
        Some(v) => v,
        None => effective_cavity_reflectance(r.ceiling, r.wall, ccr)?,
    };
    let rho_fc = match room.effective_floor_reflectance {
        Some(v) => v,
        None => effective_cavity_reflectance(r.floor, r.wall, fcr)?,
    };
    Ok(CavityAnalysis {
        floor_area: room.floor_area(),
        room_cavity_height: room.room_cavity_height(),
        room_cavity_ratio: cavity_ratio(room.room_cavity_height(), l, w)?,
        ceiling_cavity_height: room.ceiling_cavity_height(),
        ceiling_cavity_ratio: ccr,
        effective_ceiling_reflectance: rho_cc,
        floor_cavity_height: room.floor_cavity_height(),
        floor_cavity_ratio: fcr,
        effective_floor_reflectance: rho_fc,
    })
}

impl LuminaireSpec {
    pub fn resolve_cu(&self, cavities: &CavityAnalysis, wall_reflectance: f64) -> f64 {
        match &self.cu {
            CoefficientOfUtilization::Direct(v) => *v,
            CoefficientOfUtilization::Grid(g) => {
                g.interpolate(cavities.room_cavity_ratio, cavities.effective_ceiling_reflectance, wall_reflectance)
            }
        }
    }

    /// Maintained lumens delivered to the work plane by one fixture.
    fn effective_lumens(&self, cu: f64) -> Result<f64> {
        let factors = [cu, self.lamp_lumen_depreciation, self.luminaire_dirt_depreciation];
        if factors.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
            return Err(Error::domain(format!(
                "CU, LLD and LDD must lie in (0, 1], got {cu}, {}, {}",
                self.lamp_lumen_depreciation, self.luminaire_dirt_depreciation
            )));
        }
        if !(self.lumens_per_lamp > 0.0) || self.lamps_per_fixture == 0 {
            return Err(Error::domain("fixture must emit a positive lumen output"));
        }
        Ok(self.lamps_per_fixture as f64 * self.lumens_per_lamp * factors.iter().product::<f64>())
    }
}

/// Number of fixtures needed for `target_lux`, rounded up.
pub fn required_fixtures(room: &RoomLightingModel, lum: &LuminaireSpec, target_lux: f64) -> Result<u32> {
    if !(target_lux >= 0.0) {
        return Err(Error::domain(format!("target illuminance must be >= 0, got {target_lux}")));
    }
    let cav = analyse_cavities(room)?;
    let per_fixture = lum.effective_lumens(lum.resolve_cu(&cav, room.reflectances.wall))?;
    let n = (target_lux * cav.floor_area / per_fixture).ceil();
    if n > u32::MAX as f64 {
        return Err(Error::domain("fixture count overflows"));
    }
    Ok(n as u32)
}

/// Maintained illuminance delivered by `fixture_count` fixtures, lux.
pub fn achieved_illuminance(fixture_count: u32, room: &RoomLightingModel, lum: &LuminaireSpec) -> Result<f64> {
    let cav = analyse_cavities(room)?;
    let per_fixture = lum.effective_lumens(lum.resolve_cu(&cav, room.reflectances.wall))?;
    Ok(fixture_count as f64 * per_fixture / cav.floor_area)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LightingDesign {
    pub cavities: CavityAnalysis,
    pub coefficient_of_utilization: f64,
    pub target_lux: f64,
    pub fixtures: u32,
    pub achieved_lux: f64,
    /// kVA
    pub connected_load: f64,
}

pub fn design_lighting(room: &RoomLightingModel, lum: &LuminaireSpec, target_lux: f64) -> Result<LightingDesign> {
    let cavities = analyse_cavities(room)?;
    let fixtures = required_fixtures(room, lum, target_lux)?;
    Ok(LightingDesign {
        cavities,
        coefficient_of_utilization: lum.resolve_cu(&cavities, room.reflectances.wall),
        target_lux,
        fixtures,
        achieved_lux: achieved_illuminance(fixtures, room, lum)?,
        connected_load: fixtures as f64 * lum.input_power_per_fixture / 1000.0,
    })
}
