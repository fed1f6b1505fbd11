//! Writes a synthetic hourly meteo year for a tropical monsoon site.
//!
//! Clear-sky GHI (Haurwitz) is scaled by a daily cloudiness factor drawn from a seeded
//! generator, with a sunnier dry season (December to May) and a cloudier wet season.
//! The result is representative in magnitude only; it is not measured data.
//!
//! Usage: cargo run -p nzeb-core --example synth_meteo -- OUT.csv [LAT LON TZ YEAR SEED]

use std::error::Error;
use std::io::Write;

use chrono::{Datelike, NaiveDate, TimeDelta, Timelike};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nzeb_core::simproduction::meteo::hours_in_year;
use nzeb_core::simproduction::{solar_position, SiteSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = args.first().ok_or("usage: synth_meteo OUT.csv [LAT LON TZ YEAR SEED]")?;
    let num = |i: usize, default: f64| -> Result<f64, Box<dyn Error>> {
        Ok(args.get(i).map(|s| s.parse()).transpose()?.unwrap_or(default))
    };
    let site = SiteSpec {
        latitude: num(1, 15.48)?,
        longitude: num(2, 120.59)?,
        elevation: 0.0,
        timezone: num(3, 8.0)?,
        albedo: 0.2,
    };
    let year = num(4, 2023.0)? as i32;
    let mut rng = ChaCha8Rng::seed_from_u64(num(5, 20230101.0)? as u64);

    let start = NaiveDate::from_ymd_opt(year, 1, 1).ok_or("bad year")?.and_hms_opt(0, 0, 0).unwrap();
    let mut w = std::io::BufWriter::new(std::fs::File::create(out)?);
    writeln!(w, "timestamp,ghi,dhi,tamb")?;
    let mut day_clearness = 1.0;
    let mut day_temp = 0.0;
    for h in 0..hours_in_year(year) {
        let t = start + TimeDelta::hours(h as i64);
        let month = t.month();
        let wet = (6..=11).contains(&month);
        if t.hour() == 0 {
            let (mean, spread): (f64, f64) = if wet { (0.58, 0.28) } else { (0.78, 0.12) };
            day_clearness = (mean + spread * (rng.gen::<f64>() - 0.5) * 2.0).clamp(0.15, 1.0);
            day_temp = rng.gen_range(-1.0..1.0);
        }
        let sun = solar_position(&site, t + TimeDelta::minutes(30));
        let cos_z = sun.elevation.to_radians().sin();
        let ghi = if cos_z > 0.0 {
            let clear = 1098.0 * cos_z * (-0.057 / cos_z).exp();
            let hourly = (day_clearness * (1.0 + 0.08 * (rng.gen::<f64>() - 0.5))).clamp(0.1, 1.0);
            (clear * hourly).max(0.0)
        } else {
            0.0
        };
        // warmest in April-May, diurnal peak at 14:00
        let seasonal = 27.5 + 1.8 * (2.0 * std::f64::consts::PI * (t.ordinal() as f64 - 120.0) / 365.0).cos();
        let diurnal = 4.0 * (2.0 * std::f64::consts::PI * (t.hour() as f64 - 8.0) / 24.0).sin();
        let tamb = seasonal + diurnal + day_temp;
        writeln!(w, "{},{:.1},,{:.1}", t.format("%Y-%m-%dT%H:%M"), ghi, tamb)?;
    }
    w.flush()?;
    Ok(())
}
