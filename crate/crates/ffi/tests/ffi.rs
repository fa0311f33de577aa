use curveforms_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cf_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn forms_through_handles() {
    unsafe {
        let mut curve = ptr::null_mut();
        assert_eq!(cf_curve_parse(11, cstr("x^5+y^5+x*y").as_ptr(), &mut curve), CfStatus::Ok);
        let mut forms = ptr::null_mut();
        assert_eq!(cf_forms_compute(curve, 0, &mut forms), CfStatus::Ok);
        assert_eq!(cf_forms_genus(forms), 5);
        let mut s = ptr::null_mut();
        assert_eq!(cf_forms_denominator(forms, &mut s), CfStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "y^4 + 9*x");
        cf_string_free(s);
        assert_eq!(cf_forms_numerator(forms, 5, &mut s), CfStatus::OutOfRange);
        let mut m = [7u32; 25];
        assert_eq!(cf_forms_cartier_matrix(forms, m.as_mut_ptr(), 24), CfStatus::OutOfRange);
        assert_eq!(cf_forms_cartier_matrix(forms, m.as_mut_ptr(), 25), CfStatus::Ok);
        assert!(m.iter().all(|&v| v == 0));
        let mut inv = CfInvariants::default();
        assert_eq!(cf_forms_invariants(forms, &mut inv), CfStatus::Ok);
        assert_eq!((inv.genus, inv.a_number, inv.p_rank, inv.superspecial), (5, 5, 0, true));
        cf_forms_free(forms);
        cf_curve_free(curve);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut curve = ptr::null_mut();
        assert_eq!(cf_curve_parse(11, cstr("x^5+(y").as_ptr(), &mut curve), CfStatus::Parse);
        assert!(curve.is_null());
        assert!(last_error().starts_with("[cli]"));
        assert_eq!(cf_curve_parse(11, ptr::null(), &mut curve), CfStatus::NullPointer);
        assert_eq!(cf_curve_parse(3, cstr("x^3+y^3").as_ptr(), &mut curve), CfStatus::Ok);
        let mut forms = ptr::null_mut();
        assert_eq!(cf_forms_compute(curve, 0, &mut forms), CfStatus::Inseparable);
        assert!(last_error().contains("[forms]"));
        cf_curve_free(curve);
        assert_eq!(cf_forms_compute(ptr::null(), 0, &mut forms), CfStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(
            cf_run_json(CfCommand::Normalize, 11, cstr("x^5+y^5+x*y").as_ptr(), 1, &mut out),
            CfStatus::IterationLimit
        );
        cf_curve_free(ptr::null_mut());
        cf_forms_free(ptr::null_mut());
        cf_string_free(ptr::null_mut());
    }
}

#[test]
fn json_report() {
    unsafe {
        let mut out = ptr::null_mut();
        let st = cf_run_json(CfCommand::Invariants, 2, cstr("x^5+y^5+(x+y)^3+x*y").as_ptr(), 0, &mut out);
        assert_eq!(st, CfStatus::Ok);
        assert_eq!(last_error(), "");
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        cf_string_free(out);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["a_number"], 1);
    }
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_against_the_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcurveforms_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}; skipping", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("curveforms-smoke-{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert_eq!(run.status.code(), Some(0), "smoke program failed: {:?}", run);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

fn which_cc() -> Result<String, ()> {
    for c in ["cc", "gcc", "clang"] {
        if Command::new(c).arg("--version").output().is_ok() {
            return Ok(c.to_string());
        }
    }
    Err(())
}
