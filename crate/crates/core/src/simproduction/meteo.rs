//! Hourly meteorological input.
//!
//! File format: CSV with header `timestamp,ghi,dhi,tamb`, ISO-8601 local timestamps
//! (`2023-01-01T00:00`), irradiance in W/m², temperature in °C. `dhi` may be left
//! empty. A file holds exactly one calendar year at hourly resolution, starting at
//! 1 January 00:00; each row is the hour beginning at its timestamp.

use std::io::Read;
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveDateTime, TimeDelta};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeteoRecord {
    pub timestamp: NaiveDateTime,
    pub ghi: f64,
    pub dhi: Option<f64>,
    pub t_ambient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeteoSeries {
    pub records: Vec<MeteoRecord>,
}

impl MeteoSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn year(&self) -> Option<i32> {
        self.records.first().map(|r| r.timestamp.year())
    }

    /// A full year of records with every value produced by `f(timestamp)`; mostly for tests.
    pub fn synthetic(year: i32, mut f: impl FnMut(NaiveDateTime) -> (f64, Option<f64>, f64)) -> Self {
        let start = NaiveDate::from_ymd_opt(year, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let records = (0..hours_in_year(year))
            .map(|h| {
                let timestamp = start + TimeDelta::hours(h as i64);
                let (ghi, dhi, t_ambient) = f(timestamp);
                MeteoRecord { timestamp, ghi, dhi, t_ambient }
            })
            .collect();
        MeteoSeries { records }
    }
}

pub fn hours_in_year(year: i32) -> usize {
    if NaiveDate::from_ymd_opt(year, 2, 29).is_some() {
        8784
    } else {
        8760
    }
}

pub fn load_meteo(path: &Path) -> Result<MeteoSeries> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    parse_meteo(file, path)
}

/// Parses a meteo CSV; `origin` is only used in error messages.
pub fn parse_meteo<R: Read>(reader: R, origin: &Path) -> Result<MeteoSeries> {
    let err = |line: usize, message: String| Error::Parse { path: origin.to_owned(), line, message };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(reader);
    let headers = rdr.headers().map_err(|e| crate::lighting::csv_error(origin, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| err(1, format!("missing column '{name}' (expected timestamp,ghi,dhi,tamb)")))
    };
    let (c_ts, c_ghi, c_dhi, c_t) = (column("timestamp")?, column("ghi")?, column("dhi")?, column("tamb")?);

    let mut records: Vec<MeteoRecord> = Vec::with_capacity(8784);
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| crate::lighting::csv_error(origin, e))?;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let timestamp =
            parse_timestamp(field(c_ts)).ok_or_else(|| err(line, format!("bad timestamp {:?}", field(c_ts))))?;
        let number = |c: usize, name: &str| -> Result<f64> {
            let v: f64 = field(c).parse().map_err(|_| err(line, format!("{name} is not a number: {:?}", field(c))))?;
            if !v.is_finite() {
                return Err(err(line, format!("{name} is not finite")));
            }
            Ok(v)
        };
        let ghi = number(c_ghi, "ghi")?;
        if ghi < 0.0 {
            return Err(err(line, format!("ghi must be >= 0, got {ghi}")));
        }
        let dhi = if field(c_dhi).is_empty() {
            None
        } else {
            let d = number(c_dhi, "dhi")?;
            if d < 0.0 || d > ghi {
                return Err(err(line, format!("dhi must lie in [0, ghi], got {d} with ghi {ghi}")));
            }
            Some(d)
        };
        let t_ambient = number(c_t, "tamb")?;

        match records.last() {
            None => {
                if (timestamp.month(), timestamp.day(), timestamp.time()) != (1, 1, chrono::NaiveTime::MIN) {
                    return Err(err(line, format!("series must start at 1 January 00:00, got {timestamp}")));
                }
            }
            Some(prev) => {
                if timestamp != prev.timestamp + TimeDelta::hours(1) {
                    return Err(err(
                        line,
                        format!("timestamp {timestamp} does not follow {} by one hour", prev.timestamp),
                    ));
                }
            }
        }
        records.push(MeteoRecord { timestamp, ghi, dhi, t_ambient });
    }

    let Some(first) = records.first() else {
        return Err(err(1, "no data rows".into()));
    };
    let expected = hours_in_year(first.timestamp.year());
    if records.len() != expected {
        return Err(err(
            records.len() + 1,
            format!("expected {expected} hourly rows for {}, found {}", first.timestamp.year(), records.len()),
        ));
    }
    Ok(MeteoSeries { records })
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_for(year: i32, hours: usize, tweak: impl Fn(usize, &mut String)) -> String {
        let start = NaiveDate::from_ymd_opt(year, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let mut s = String::from("timestamp,ghi,dhi,tamb\n");
        for h in 0..hours {
            let ts = start + TimeDelta::hours(h as i64);
            let mut row = format!("{},{},{},{}", ts.format("%Y-%m-%dT%H:%M"), 100, "", 28.5);
            tweak(h, &mut row);
            s.push_str(&row);
            s.push('\n');
        }
        s
    }

    fn parse(s: &str) -> Result<MeteoSeries> {
        parse_meteo(s.as_bytes(), Path::new("test.csv"))
    }

    #[test]
    fn full_year() {
        let m = parse(&csv_for(2023, 8760, |_, _| {})).unwrap();
        assert_eq!(m.len(), 8760);
        assert_eq!(m.records[0].dhi, None);
        assert!(m.records.windows(2).all(|w| w[0].timestamp < w[1].timestamp));
    }

    #[test]
    fn leap_year() {
        assert_eq!(parse(&csv_for(2020, 8784, |_, _| {})).unwrap().len(), 8784);
        assert!(parse(&csv_for(2020, 8760, |_, _| {})).is_err());
    }

    #[test]
    fn negative_ghi_names_row() {
        let e = parse(&csv_for(2023, 8760, |h, r| {
            if h == 10 {
                *r = r.replacen(",100,", ",-5,", 1);
            }
        }))
        .unwrap_err();
        match e {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 12);
                assert!(message.contains("ghi"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gap_rejected() {
        let e = parse(&csv_for(2023, 8761, |h, r| {
            if h == 5 {
                *r = "2023-01-01T04:00,0,,25".into();
            }
        }))
        .unwrap_err();
        assert!(matches!(e, Error::Parse { line: 7, .. }), "{e:?}");
    }

    #[test]
    fn wrong_count_and_missing_column() {
        assert!(parse(&csv_for(2023, 100, |_, _| {})).is_err());
        let e = parse("timestamp,ghi,tamb\n2023-01-01T00:00,0,25\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn dhi_above_ghi_rejected() {
        let e = parse(&csv_for(2023, 8760, |h, r| {
            if h == 0 {
                *r = "2023-01-01T00:00,100,150,25".into();
            }
        }));
        assert!(e.is_err());
    }

    #[test]
    fn synthetic_series_has_full_year() {
        assert_eq!(MeteoSeries::synthetic(2024, |_| (0.0, None, 25.0)).len(), 8784);
    }
}
