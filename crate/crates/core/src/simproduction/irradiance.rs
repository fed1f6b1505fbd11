//! Beam/diffuse split and isotropic-sky transposition onto a tilted plane.

use serde::Serialize;

use super::meteo::MeteoRecord;
use super::solar::{extraterrestrial_normal, SunPosition};
use crate::pvdesign::Orientation;

/// Name of the transposition model, carried into reports.
pub const TRANSPOSITION_MODEL: &str = "isotropic sky (Liu-Jordan)";
pub const DECOMPOSITION_MODEL: &str = "Erbs clearness-index correlation";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamDiffuse {
    pub dni: f64,
    pub dhi: f64,
}

/// Erbs diffuse fraction of global irradiance for clearness index `kt`.
pub fn erbs_diffuse_fraction(kt: f64) -> f64 {
    if kt <= 0.22 {
        1.0 - 0.09 * kt
    } else if kt <= 0.8 {
        0.9511 - 0.1604 * kt + 4.388 * kt.powi(2) - 16.638 * kt.powi(3) + 12.336 * kt.powi(4)
    } else {
        0.165
    }
}

/// Splits GHI into direct-normal and diffuse components.
///
/// Measured DHI is used when present, otherwise the Erbs correlation. The result always
/// closes, `ghi = dhi + dni·sin(elevation)`; DNI is capped at the extraterrestrial value
/// and any excess is returned to the diffuse part.
pub fn decompose_ghi(record: &MeteoRecord, sun_elevation: f64) -> BeamDiffuse {
    let ghi = record.ghi.max(0.0);
    if ghi == 0.0 {
        return BeamDiffuse { dni: 0.0, dhi: 0.0 };
    }
    let sin_el = sun_elevation.to_radians().sin();
    if sin_el <= 0.0 {
        return BeamDiffuse { dni: 0.0, dhi: ghi };
    }
    let i0 = extraterrestrial_normal(record.timestamp);
    let dhi = match record.dhi {
        Some(d) => d.clamp(0.0, ghi),
        None => ghi * erbs_diffuse_fraction(ghi / (i0 * sin_el)),
    };
    let dni = ((ghi - dhi) / sin_el).clamp(0.0, i0);
    BeamDiffuse { dni, dhi: ghi - dni * sin_el }
}

/// Cosine of the angle between the sun and the plane normal (may be negative).
pub fn cos_incidence(sun: &SunPosition, plane: &Orientation) -> f64 {
    let zen = sun.zenith().to_radians();
    let tilt = plane.tilt.to_radians();
    zen.cos() * tilt.cos() + zen.sin() * tilt.sin() * (sun.azimuth - plane.azimuth).to_radians().cos()
}

/// Plane-of-array irradiance for a known incidence cosine, W/m².
pub fn poa_from_incidence(cos_incidence: f64, dni: f64, dhi: f64, ghi: f64, tilt: f64, albedo: f64) -> f64 {
    let ct = tilt.to_radians().cos();
    let beam = dni * cos_incidence.max(0.0);
    let sky = dhi * (1.0 + ct) / 2.0;
    let ground = ghi * albedo * (1.0 - ct) / 2.0;
    (beam + sky + ground).max(0.0)
}

pub fn poa_irradiance(dni: f64, dhi: f64, ghi: f64, sun: &SunPosition, plane: &Orientation, albedo: f64) -> f64 {
    let cos_inc = if sun.elevation > 0.0 { cos_incidence(sun, plane) } else { 0.0 };
    poa_from_incidence(cos_inc, dni, dhi, ghi, plane.tilt, albedo)
}
