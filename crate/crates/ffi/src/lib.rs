//! C ABI over `nzeb-core`.
//!
//! Every fallible function returns an [`NzebStatus`] and writes its result through an out
//! pointer. On failure [`nzeb_last_error`] describes the error on the calling thread.
//! Strings returned to the caller are freed with [`nzeb_string_free`], projects with
//! [`nzeb_project_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nzeb_core::project::Project;
use nzeb_core::report::{self, Stage};
use nzeb_core::simproduction::{load_meteo, MeteoSeries};
use nzeb_core::{finance, hvac, lighting, psychro, Error};

/// Result codes; the nonzero values match the `nzeb` command's exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NzebStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    Infeasible = 3,
    NullArgument = 5,
}

/// Report stages accepted by [`nzeb_project_report`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NzebStage {
    Lighting = 0,
    Cooling = 1,
    Loads = 2,
    PvDesign = 3,
    PvSimulate = 4,
    Finance = 5,
    Carbon = 6,
    Report = 7,
}

impl From<NzebStage> for Stage {
    fn from(s: NzebStage) -> Stage {
        match s {
            NzebStage::Lighting => Stage::Lighting,
            NzebStage::Cooling => Stage::Cooling,
            NzebStage::Loads => Stage::Loads,
            NzebStage::PvDesign => Stage::PvDesign,
            NzebStage::PvSimulate => Stage::PvSimulate,
            NzebStage::Finance => Stage::Finance,
            NzebStage::Carbon => Stage::Carbon,
            NzebStage::Report => Stage::Report,
        }
    }
}

/// Moist-air properties at a given state.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NzebMoistAir {
    /// kg water / kg dry air
    pub humidity_ratio: f64,
    /// m³ / kg dry air
    pub specific_volume: f64,
    /// kJ / kg dry air
    pub enthalpy: f64,
}

/// Opaque handle to a loaded project and its optional meteo year.
pub struct NzebProject {
    project: Project,
    meteo: Option<MeteoSeries>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(e: Error) -> NzebStatus {
    let status = match e.exit_code() {
        3 => NzebStatus::Infeasible,
        _ => NzebStatus::InvalidInput,
    };
    set_last_error(e.to_string());
    status
}

/// Runs `f` behind a panic guard and clears the thread's last error first.
fn guard(f: impl FnOnce() -> Result<(), NzebStatus>) -> NzebStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NzebStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal failure".into());
            NzebStatus::Internal
        }
    }
}

fn null(what: &str) -> NzebStatus {
    set_last_error(format!("null argument: {what}"));
    NzebStatus::NullArgument
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn path_arg<'a>(p: *const c_char, what: &str) -> Result<&'a Path, NzebStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| {
        set_last_error(format!("{what} is not valid UTF-8"));
        NzebStatus::InvalidInput
    })?;
    Ok(Path::new(s))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), NzebStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer stays valid
/// until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nzeb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nzeb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a TOML project file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_project_load(path: *const c_char, out: *mut *mut NzebProject) -> NzebStatus {
    guard(|| {
        let path = path_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let project = Project::load(path).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(NzebProject { project, meteo: None })), "out")
    })
}

/// Attaches an hourly meteo CSV to a project, replacing any earlier one.
///
/// # Safety
/// `project` must come from [`nzeb_project_load`]; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nzeb_project_load_meteo(project: *mut NzebProject, path: *const c_char) -> NzebStatus {
    guard(|| {
        let p = project.as_mut().ok_or_else(|| null("project"))?;
        let path = path_arg(path, "path")?;
        p.meteo = Some(load_meteo(path).map_err(fail)?);
        Ok(())
    })
}

/// Frees a project. Null is ignored.
///
/// # Safety
/// `project` must be null or come from [`nzeb_project_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nzeb_project_free(project: *mut NzebProject) {
    if !project.is_null() {
        drop(Box::from_raw(project));
    }
}

/// Runs one stage and returns its report as a JSON string.
///
/// # Safety
/// `project` must come from [`nzeb_project_load`]; `out_json` must be valid for writes.
/// The string is freed with [`nzeb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn nzeb_project_report(
    project: *const NzebProject,
    stage: NzebStage,
    out_json: *mut *mut c_char,
) -> NzebStatus {
    guard(|| {
        let p = project.as_ref().ok_or_else(|| null("project"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let outcome = report::run(stage.into(), &p.project, p.meteo.as_ref()).map_err(fail)?;
        let text = report::emit(&outcome.report, report::Format::Json).map_err(fail)?;
        let text = CString::new(text).map_err(|_| {
            set_last_error("report contains a NUL byte".into());
            NzebStatus::Internal
        })?;
        write_out(out_json, text.into_raw(), "out_json")
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nzeb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Saturation vapour pressure over water or ice, kPa.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_saturation_pressure(dry_bulb: f64, out: *mut f64) -> NzebStatus {
    guard(|| write_out(out, psychro::saturation_pressure(dry_bulb).map_err(fail)?, "out"))
}

/// Moist-air properties from dry bulb (°C), relative humidity (0..1) and pressure (kPa).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_moist_air(dry_bulb: f64, rh: f64, pressure: f64, out: *mut NzebMoistAir) -> NzebStatus {
    guard(|| {
        let s = psychro::MoistAirState::from_db_rh(dry_bulb, rh, pressure).map_err(fail)?;
        let props =
            NzebMoistAir { humidity_ratio: s.humidity_ratio, specific_volume: s.specific_volume, enthalpy: s.enthalpy };
        write_out(out, props, "out")
    })
}

/// Cavity ratio `5 h (L + W) / (L W)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_cavity_ratio(height: f64, length: f64, width: f64, out: *mut f64) -> NzebStatus {
    guard(|| write_out(out, lighting::cavity_ratio(height, length, width).map_err(fail)?, "out"))
}

/// Air-conditioning units needed for `total_load` kW with units of `unit_capacity` kJ/hr.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_acu_count(total_load: f64, unit_capacity: f64, out: *mut u32) -> NzebStatus {
    guard(|| write_out(out, hvac::acu_count(total_load, unit_capacity).map_err(fail)?, "out"))
}

/// Internal rate of return of `len` yearly flows starting at year 0.
///
/// # Safety
/// `flows` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nzeb_irr(flows: *const f64, len: usize, out: *mut f64) -> NzebStatus {
    guard(|| {
        if flows.is_null() {
            return Err(null("flows"));
        }
        let flows = std::slice::from_raw_parts(flows, len);
        write_out(out, finance::irr_of_flows(flows).map_err(fail)?.rate, "out")
    })
}
