use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::ptr;

use nzeb_ffi::*;

fn fixture(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/tsu-gymnasium").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = nzeb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn report(p: *const NzebProject, stage: NzebStage) -> serde_json::Value {
    let mut out = ptr::null_mut();
    let status = unsafe { nzeb_project_report(p, stage, &mut out) };
    assert_eq!(status, NzebStatus::Ok, "{}", last_error());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { nzeb_string_free(out) };
    serde_json::from_str(&text).unwrap()
}

#[test]
fn project_round_trip() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { nzeb_project_load(fixture("tsu.toml").as_ptr(), &mut p) }, NzebStatus::Ok);
    assert!(!p.is_null());
    assert!(nzeb_last_error().is_null());

    assert_eq!(report(p, NzebStage::Lighting)["fixtures"], 24);
    assert_eq!(report(p, NzebStage::Cooling)["units_required"], 18);
    assert_eq!(report(p, NzebStage::PvDesign)["modules"], 252);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nzeb_project_report(p, NzebStage::PvSimulate, &mut out) }, NzebStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains("meteo"));

    let meteo = fixture("tarlac-synthetic-year.csv");
    assert_eq!(unsafe { nzeb_project_load_meteo(p, meteo.as_ptr()) }, NzebStatus::Ok);
    let e = report(p, NzebStage::PvSimulate);
    assert!(e["annual_ac"].as_f64().unwrap() > 100_000.0);
    unsafe { nzeb_project_free(p) };
}

#[test]
fn load_errors_are_reported() {
    let mut p = ptr::null_mut();
    let missing = CString::new("/nonexistent/project.toml").unwrap();
    assert_eq!(unsafe { nzeb_project_load(missing.as_ptr(), &mut p) }, NzebStatus::InvalidInput);
    assert!(p.is_null());
    assert!(last_error().contains("nonexistent"));

    assert_eq!(unsafe { nzeb_project_load(ptr::null(), &mut p) }, NzebStatus::NullArgument);
    assert_eq!(unsafe { nzeb_project_load(fixture("tsu.toml").as_ptr(), ptr::null_mut()) }, NzebStatus::NullArgument);
    assert_eq!(
        unsafe { nzeb_project_report(ptr::null(), NzebStage::Lighting, &mut ptr::null_mut()) },
        NzebStatus::NullArgument
    );
    unsafe {
        nzeb_project_free(ptr::null_mut());
        nzeb_string_free(ptr::null_mut());
    }
}

#[test]
fn infeasible_design_status() {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/tsu-gymnasium/tsu.toml"))
            .unwrap()
            .replacen("mppt_v_max = 960\nv_dc_max = 960", "mppt_v_max = 300\nv_dc_max = 300", 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.toml");
    std::fs::write(&path, text).unwrap();
    let path = CString::new(path.to_str().unwrap()).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { nzeb_project_load(path.as_ptr(), &mut p) }, NzebStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nzeb_project_report(p, NzebStage::PvDesign, &mut out) }, NzebStatus::Infeasible);
    unsafe { nzeb_project_free(p) };
}

#[test]
fn scalar_functions() {
    let mut x = 0.0;
    assert_eq!(unsafe { nzeb_saturation_pressure(20.0, &mut x) }, NzebStatus::Ok);
    assert!((x - 2.3389).abs() < 1e-3, "{x}");

    let mut air = NzebMoistAir::default();
    assert_eq!(unsafe { nzeb_moist_air(30.0, 0.6, 101.325, &mut air) }, NzebStatus::Ok);
    assert!((air.humidity_ratio - 0.01604090).abs() / 0.01604090 < 0.005);
    assert!((air.specific_volume - 0.8809383).abs() / 0.8809383 < 0.005);
    assert!((air.enthalpy - 71.193380).abs() / 71.193380 < 0.005);
    assert_eq!(unsafe { nzeb_moist_air(30.0, 1.5, 101.325, &mut air) }, NzebStatus::InvalidInput);

    assert_eq!(unsafe { nzeb_cavity_ratio(7.9, 31.0, 19.51, &mut x) }, NzebStatus::Ok);
    assert!((x - 3.2988).abs() < 1e-4);
    assert_eq!(unsafe { nzeb_cavity_ratio(1.0, 0.0, 5.0, &mut x) }, NzebStatus::InvalidInput);

    let mut n = 0u32;
    assert_eq!(unsafe { nzeb_acu_count(200.6, 40_090.0, &mut n) }, NzebStatus::Ok);
    assert_eq!(n, 18);
    assert_eq!(unsafe { nzeb_acu_count(200.6, 40_090.0, ptr::null_mut()) }, NzebStatus::NullArgument);

    let flows = [-100.0, 60.0, 60.0];
    assert_eq!(unsafe { nzeb_irr(flows.as_ptr(), flows.len(), &mut x) }, NzebStatus::Ok);
    assert!((x - 0.130662).abs() < 1e-5, "{x}");
    assert_eq!(unsafe { nzeb_irr(flows.as_ptr(), 1, &mut x) }, NzebStatus::InvalidInput);

    let v = unsafe { CStr::from_ptr(nzeb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nzeb.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).expect("build script writes include/nzeb.h");
    for sym in [
        "nzeb_last_error",
        "nzeb_version",
        "nzeb_project_load",
        "nzeb_project_load_meteo",
        "nzeb_project_free",
        "nzeb_project_report",
        "nzeb_string_free",
        "nzeb_saturation_pressure",
        "nzeb_moist_air",
        "nzeb_cavity_ratio",
        "nzeb_acu_count",
        "nzeb_irr",
        "typedef struct NzebProject NzebProject",
        "NZEB_STATUS_INFEASIBLE = 3",
        "NZEB_STAGE_REPORT = 7",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"nzeb.h\"\nint main(void) { NzebProject *p = 0; NzebStatus s = nzeb_project_load(\"x\", &p); return s == NZEB_STATUS_OK; }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
