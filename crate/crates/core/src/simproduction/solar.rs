//! Sun position from declination, equation of time and hour angle (Spencer series).

use std::f64::consts::PI;

use chrono::{Datelike, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    /// Degrees, north positive.
    pub latitude: f64,
    /// Degrees, east positive.
    pub longitude: f64,
    /// m
    #[serde(default)]
    pub elevation: f64,
    /// Hours ahead of UTC of the timestamps in the meteo file.
    pub timezone: f64,
    #[serde(default = "default_albedo")]
    pub albedo: f64,
}

fn default_albedo() -> f64 {
    0.2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SunPosition {
    /// Degrees above the horizon.
    pub elevation: f64,
    /// Degrees from south, west positive.
    pub azimuth: f64,
}

impl SunPosition {
    pub fn zenith(&self) -> f64 {
        90.0 - self.elevation
    }
}

/// Fractional-year angle (radians) at a local clock time.
fn fractional_year(timestamp: NaiveDateTime) -> f64 {
    let days = if timestamp.date().leap_year() { 366.0 } else { 365.0 };
    let hour = timestamp.hour() as f64 + timestamp.minute() as f64 / 60.0;
    2.0 * PI / days * (timestamp.ordinal0() as f64 + (hour - 12.0) / 24.0)
}

/// Solar declination, radians.
pub fn declination(timestamp: NaiveDateTime) -> f64 {
    let g = fractional_year(timestamp);
    0.006918 - 0.399912 * g.cos() + 0.070257 * g.sin() - 0.006758 * (2.0 * g).cos() + 0.000907 * (2.0 * g).sin()
        - 0.002697 * (3.0 * g).cos()
        + 0.00148 * (3.0 * g).sin()
}

/// Equation of time, minutes.
pub fn equation_of_time(timestamp: NaiveDateTime) -> f64 {
    let g = fractional_year(timestamp);
    229.18
        * (0.000075 + 0.001868 * g.cos() - 0.032077 * g.sin() - 0.014615 * (2.0 * g).cos() - 0.040849 * (2.0 * g).sin())
}

/// Extraterrestrial normal irradiance, W/m².
pub fn extraterrestrial_normal(timestamp: NaiveDateTime) -> f64 {
    const SOLAR_CONSTANT: f64 = 1367.0;
    SOLAR_CONSTANT * (1.0 + 0.033 * (2.0 * PI * timestamp.ordinal() as f64 / 365.0).cos())
}

pub fn solar_position(site: &SiteSpec, timestamp: NaiveDateTime) -> SunPosition {
    let clock_min = timestamp.hour() as f64 * 60.0 + timestamp.minute() as f64 + timestamp.second() as f64 / 60.0;
    let true_solar_min = clock_min + equation_of_time(timestamp) + 4.0 * site.longitude - 60.0 * site.timezone;
    let hour_angle = (true_solar_min / 4.0 - 180.0).to_radians();
    let lat = site.latitude.to_radians();
    let decl = declination(timestamp);

    let cos_zen = (lat.sin() * decl.sin() + lat.cos() * decl.cos() * hour_angle.cos()).clamp(-1.0, 1.0);
    let elevation = 90.0 - cos_zen.acos().to_degrees();
    let azimuth = hour_angle.sin().atan2(hour_angle.cos() * lat.sin() - decl.tan() * lat.cos()).to_degrees();
    SunPosition { elevation, azimuth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn tarlac() -> SiteSpec {
        SiteSpec { latitude: 15.8, longitude: 120.59, elevation: 51.0, timezone: 8.0, albedo: 0.2 }
    }

    fn day_max(site: &SiteSpec, y: i32, m: u32, d: u32) -> SunPosition {
        let start = NaiveDate::from_ymd_opt(y, m, d).unwrap().and_hms_opt(0, 0, 0).unwrap();
        (0..1440)
            .map(|k| solar_position(site, start + chrono::TimeDelta::minutes(k)))
            .max_by(|a, b| a.elevation.total_cmp(&b.elevation))
            .unwrap()
    }

    #[test]
    fn equinox_noon_elevation() {
        let noon = day_max(&tarlac(), 2023, 3, 20);
        assert!((noon.elevation - 74.2).abs() < 0.5, "{noon:?}");
        assert!(noon.azimuth.abs() < 1.0);
    }

    #[test]
    fn midnight_below_horizon() {
        let t = NaiveDate::from_ymd_opt(2023, 6, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
        assert!(solar_position(&tarlac(), t).elevation < 0.0);
    }

    #[test]
    fn solstice_noon_higher_than_equinox_at_this_latitude() {
        // with latitude 15.8° and declination 23.44° the June sun culminates north of zenith
        let june = day_max(&tarlac(), 2023, 6, 21);
        let march = day_max(&tarlac(), 2023, 3, 20);
        assert!(june.elevation > march.elevation);
        assert!((june.elevation - (90.0 - (23.44 - 15.8))).abs() < 0.5, "{june:?}");
        assert!(june.azimuth.abs() > 170.0);
    }

    #[test]
    fn morning_sun_in_the_east() {
        let t = NaiveDate::from_ymd_opt(2023, 3, 20).unwrap().and_hms_opt(8, 0, 0).unwrap();
        let p = solar_position(&tarlac(), t);
        assert!(p.elevation > 0.0 && p.azimuth < -45.0, "{p:?}");
    }
}
