use std::ffi::{CStr, CString};
use std::ptr;

use specbound_ffi::*;

fn last_error() -> String {
    let p = sb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn disk_eigenvalue_and_constant() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(sb_model_euclidean(2, &mut model), SbStatus::Ok);
        let mut lambda = 0.0;
        assert_eq!(sb_principal_eigenvalue(model, 1.0, 1e-10, &mut lambda), SbStatus::Ok);
        assert!((lambda - 2.404825557695773f64.powi(2)).abs() < 1e-6);

        let mut profile = ptr::null_mut();
        assert_eq!(sb_profile_power_law((4.0 * std::f64::consts::PI).sqrt(), 2, &mut profile), SbStatus::Ok);
        let mut aif = ptr::null_mut();
        assert_eq!(sb_aif_new(profile, &mut aif), SbStatus::Ok);
        sb_profile_free(profile);

        let (mut c, mut closed) = (0.0, 0.0);
        assert_eq!(sb_eigen_bound_constant(0.5, 2.0, aif, &mut c), SbStatus::Ok);
        assert_eq!(sb_hadamard_constant(0.5, 2.0, 2, (4.0 * std::f64::consts::PI).sqrt(), &mut closed), SbStatus::Ok);
        assert!((c - closed).abs() < 1e-9 * closed);

        let mut t = 0.0;
        assert_eq!(sb_aif_inverse(aif, 1.0, &mut t), SbStatus::Ok);
        let mut back = 0.0;
        assert_eq!(sb_aif_eval(aif, t, &mut back), SbStatus::Ok);
        assert!((back - 1.0).abs() < 1e-9);

        sb_aif_free(aif);
        sb_model_free(model);
    }
}

#[test]
fn torsion_check_through_handles() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(sb_model_hyperbolic(2, 1.0, &mut model), SbStatus::Ok);
        let mut profile = ptr::null_mut();
        assert_eq!(sb_profile_model(model, &mut profile), SbStatus::Ok);
        let mut result = SbCheckResult { lhs: 0.0, rhs: 0.0, slack: 0.0, status: SbCheckStatus::Failed };
        assert_eq!(sb_torsion_bound_check(model, 1.0, profile, &mut result), SbStatus::Ok);
        assert_eq!(result.status, SbCheckStatus::Satisfied);
        let exact = 2.0 * 0.5f64.cosh().ln();
        assert!((result.lhs - exact).abs() < 1e-8 && (result.rhs - exact).abs() < 1e-8);
        let mut volume = 0.0;
        assert_eq!(sb_ball_volume(model, 1.0, &mut volume), SbStatus::Ok);
        assert!((volume - 2.0 * std::f64::consts::PI * (1f64.cosh() - 1.0)).abs() < 1e-10);
        sb_profile_free(profile);
        sb_model_free(model);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(sb_model_euclidean(1, &mut model), SbStatus::InvalidModel);
        assert!(model.is_null());
        assert!(last_error().contains("dimension"));

        assert_eq!(sb_model_euclidean(2, ptr::null_mut()), SbStatus::NullPointer);
        assert!(last_error().contains("out_model"));

        let mut x = 0.0;
        assert_eq!(sb_hadamard_constant(1.0, 1.5, 2, 1.0, &mut x), SbStatus::Domain);
        assert_eq!(x, 0.0);

        let mut profile = ptr::null_mut();
        let volumes = [1.0, 2.0];
        let values = [1.0, 1.5];
        assert_eq!(sb_profile_tabulated(volumes.as_ptr(), values.as_ptr(), 2, &mut profile), SbStatus::Ok);
        let mut aif = ptr::null_mut();
        assert_eq!(sb_aif_new(profile, &mut aif), SbStatus::Ok);
        assert_eq!(sb_aif_inverse(aif, 1e6, &mut x), SbStatus::Range);
        sb_aif_free(aif);
        sb_profile_free(profile);

        let missing = CString::new("/nonexistent/profile.csv").unwrap();
        assert_eq!(sb_profile_tabulated_csv(missing.as_ptr(), &mut profile), SbStatus::Io);

        sb_model_free(ptr::null_mut());
        sb_profile_free(ptr::null_mut());
        sb_aif_free(ptr::null_mut());
    }
}

#[test]
fn last_error_is_thread_local() {
    unsafe {
        let mut x = 0.0;
        assert_eq!(sb_hadamard_constant(-1.0, 2.0, 2, 1.0, &mut x), SbStatus::Domain);
    }
    let other = std::thread::spawn(|| sb_last_error_message().is_null()).join().unwrap();
    assert!(other);
    assert!(!sb_last_error_message().is_null());
}

#[test]
fn run_config_reports_exit_code() {
    let dir = std::env::temp_dir().join(format!("specbound-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{"schema": 1,
            "models": [{"name": "plane", "kind": "euclidean", "dimension": 2}],
            "profiles": [{"name": "ball", "kind": "model", "model": "plane"}],
            "scenarios": [{"id": "t", "check": "torsion_bound", "model": "plane", "profile": "ball", "radius": 1.0}]}"#,
    )
    .unwrap();
    let path = CString::new(config.to_str().unwrap()).unwrap();
    let out = CString::new(dir.join("out").to_str().unwrap()).unwrap();
    let mut code = -1;
    unsafe {
        assert_eq!(sb_run_config(path.as_ptr(), out.as_ptr(), 1, &mut code), SbStatus::Ok);
    }
    assert_eq!(code, 0);
    assert!(dir.join("out/report.csv").exists());
    let missing = CString::new(dir.join("absent.json").to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(sb_run_config(missing.as_ptr(), ptr::null(), 0, &mut code), SbStatus::Io);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/specbound.h")).unwrap();
    for name in [
        "sb_model_euclidean",
        "sb_model_hyperbolic",
        "sb_model_free",
        "sb_profile_power_law",
        "sb_profile_tabulated_csv",
        "sb_aif_new",
        "sb_aif_inverse",
        "sb_eigen_bound_constant",
        "sb_torsion_bound_check",
        "sb_run_config",
        "sb_last_error_message",
        "typedef struct SbModel SbModel",
        "SB_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    assert!(unsafe { CStr::from_ptr(sb_version()) }.to_str().unwrap().starts_with("0."));
}
