//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 input or parse error, 3 infeasible design,
//! 4 `verify` found a value outside tolerance.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nzeb_core::report::{self, Format, Outcome, PlotKind, Stage};
use nzeb_core::simproduction::{load_meteo, MeteoSeries};
use nzeb_core::{project::Project, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "nzeb", version, about = "Energy, PV and economic feasibility of a building retrofit")]
struct Cli {
    /// Project file (TOML).
    #[arg(long, global = true)]
    project: Option<PathBuf>,
    /// Hourly meteo CSV (timestamp,ghi,dhi,tamb) for one calendar year.
    #[arg(long, global = true)]
    meteo: Option<PathBuf>,
    /// Output directory; without it the report goes to stdout.
    #[arg(long, global = true, env = "NZEB_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixture count by the zonal-cavity method.
    Lighting,
    /// Ventilation flow and air-conditioning units.
    Cooling,
    /// Electrical load schedule.
    Loads,
    /// String layout and voltage checks.
    PvDesign,
    /// Hourly energy-yield simulation (needs --meteo).
    PvSimulate,
    /// Cash flows, payback, NPV, IRR, ROI and LCOE.
    Finance,
    /// Avoided CO2 over the lifetime.
    Carbon,
    /// Full pipeline (needs --meteo).
    Report,
    /// Plot-ready CSV series.
    Plot {
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Compares the full report against the project's `[expected]` table.
    Verify {
        /// Relative tolerance for expected values given without their own tolerance.
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    CumulativeProfit,
    MonthlyEnergy,
    DurationCurve,
}

impl From<KindArg> for PlotKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::CumulativeProfit => PlotKind::CumulativeProfit,
            KindArg::MonthlyEnergy => PlotKind::MonthlyEnergy,
            KindArg::DurationCurve => PlotKind::DurationCurve,
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Writes to stdout; a closed pipe (for example `| head`) is not an error.
fn stdout(bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    let mut lock = std::io::stdout().lock();
    match lock.write_all(bytes).and_then(|_| lock.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Error::Io { path: PathBuf::from("<stdout>"), source: e })
        }
        _ => Ok(()),
    }
}

fn plot_bytes(outcome: &Outcome, kind: PlotKind) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    report::emit_plot_data(outcome, kind, &mut buf)?;
    Ok(buf)
}

/// Writes the report and, for the full pipeline, its tables and plot series.
fn deliver(name: &str, outcome: &Outcome, format: Format, out: Option<&Path>) -> Result<()> {
    let text = report::emit(&outcome.report, format)?;
    let Some(dir) = out else {
        return stdout(text.as_bytes());
    };
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
    write_file(&dir.join(format!("{name}.{}", format.extension())), text.as_bytes())?;
    if let Some(s) = &outcome.schedule {
        let mut buf = Vec::new();
        s.write_csv(&mut buf).map_err(|source| Error::Io { path: dir.join("load-schedule.csv"), source })?;
        write_file(&dir.join("load-schedule.csv"), &buf)?;
    }
    if let Some(cf) = &outcome.cash_flow {
        let mut buf = Vec::new();
        cf.write_csv(&mut buf).map_err(|source| Error::Io { path: dir.join("cash-flow.csv"), source })?;
        write_file(&dir.join("cash-flow.csv"), &buf)?;
    }
    if let Some(e) = &outcome.energy {
        let mut buf = Vec::new();
        e.write_hourly_csv(&mut buf).map_err(|source| Error::Io { path: dir.join("hourly.csv"), source })?;
        write_file(&dir.join("hourly.csv"), &buf)?;
    }
    for kind in PlotKind::ALL {
        if let Ok(bytes) = plot_bytes(outcome, kind) {
            write_file(&dir.join(format!("{}.csv", kind.name())), &bytes)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let project_path =
        cli.project.as_deref().ok_or_else(|| Error::Validation("missing input: --project is required".into()))?;
    let project = Project::load(project_path)?;
    let meteo: Option<MeteoSeries> = cli.meteo.as_deref().map(load_meteo).transpose()?;
    let meteo = meteo.as_ref();
    let format = Format::from(cli.format);
    let out = cli.out.as_deref();

    let stage = match cli.command {
        Command::Lighting => Stage::Lighting,
        Command::Cooling => Stage::Cooling,
        Command::Loads => Stage::Loads,
        Command::PvDesign => Stage::PvDesign,
        Command::PvSimulate => Stage::PvSimulate,
        Command::Finance => Stage::Finance,
        Command::Carbon => Stage::Carbon,
        Command::Report => Stage::Report,
        Command::Plot { kind } => {
            let kind = PlotKind::from(kind);
            let stage = if kind == PlotKind::CumulativeProfit { Stage::Finance } else { Stage::PvSimulate };
            let bytes = plot_bytes(&report::run(stage, &project, meteo)?, kind)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
                    write_file(&dir.join(format!("{}.csv", kind.name())), &bytes)?;
                }
                None => stdout(&bytes)?,
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Verify { tolerance } => {
            if !(tolerance >= 0.0) {
                return Err(Error::Validation(format!("tolerance must be >= 0, got {tolerance}")));
            }
            if project.file.expected.is_empty() {
                return Err(Error::Validation("project has no [expected] table to verify against".into()));
            }
            let outcome = report::full_report(&project, meteo)?;
            let checks = report::verify(&outcome.report, &project, tolerance);
            for c in &checks {
                let actual = c.actual.map(|a| a.to_string()).unwrap_or_else(|| "missing".into());
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                println!("{verdict} {}: expected {} ± {}, got {actual}", c.key, c.expected, c.tolerance);
            }
            return Ok(if checks.iter().all(|c| c.pass) { ExitCode::SUCCESS } else { ExitCode::from(4) });
        }
    };
    let outcome = report::run(stage, &project, meteo)?;
    let name = match stage {
        Stage::Lighting => "lighting",
        Stage::Cooling => "cooling",
        Stage::Loads => "loads",
        Stage::PvDesign => "pv-design",
        Stage::PvSimulate => "pv-simulate",
        Stage::Finance => "finance",
        Stage::Carbon => "carbon",
        Stage::Report => "report",
    };
    deliver(name, &outcome, format, out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(1)
        }
    }
}
