use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ising_avn_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ia_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    ia_string_free(p);
    s
}

#[test]
fn certify_standard_and_excited_sets() {
    unsafe {
        let mut state = ptr::null_mut();
        let mut set = ptr::null_mut();
        assert_eq!(ia_state_closed_form_4(0.0, &mut state), IaStatus::Ok);
        assert_eq!(ia_set_standard(4, &mut set), IaStatus::Ok);
        let mut certified = false;
        let mut json = ptr::null_mut();
        assert_eq!(ia_certify(set, state, 1e-10, &mut certified, &mut json), IaStatus::Ok);
        assert!(certified);
        assert!(ia_last_error_message().is_null());
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["classical"]["certificate"], serde_json::json!([0, 1, 2, 3]));
        ia_set_free(set);
        ia_state_free(state);

        assert_eq!(ia_state_first_excited_4(&mut state), IaStatus::Ok);
        assert_eq!(ia_set_excited_4(&mut set), IaStatus::Ok);
        assert_eq!(ia_certify(set, state, 1e-10, &mut certified, ptr::null_mut()), IaStatus::Ok);
        assert!(certified);
        ia_set_free(set);
        ia_state_free(state);
    }
}

#[test]
fn custom_set_and_state() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(ia_set_new(3, &mut set), IaStatus::Ok);
        for (obs, ev) in [("Y1 Y2 Z3", -1), ("+YZY", -1), ("ZYY", -1), ("ZZZ", 1)] {
            assert_eq!(ia_set_push(set, c(obs).as_ptr(), ev), IaStatus::Ok, "{obs}");
        }
        assert_eq!(ia_set_push(set, c("XII").as_ptr(), 1), IaStatus::NotCommuting);
        assert!(last_error().contains("commute"));
        assert_eq!(ia_set_push(set, c("ZZZ").as_ptr(), 2), IaStatus::InvalidArgument);
        assert_eq!(ia_set_push(set, c("ZQZ").as_ptr(), 1), IaStatus::Parse);
        assert_eq!(ia_set_push(set, c("ZZ").as_ptr(), 1), IaStatus::Parse);
        let mut len = 0;
        assert_eq!(ia_set_len(set, &mut len), IaStatus::Ok);
        assert_eq!(len, 4);

        // (|000> + |011> + |101> + |110>)/2, unnormalized on input.
        let re = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        let mut state = ptr::null_mut();
        assert_eq!(ia_state_from_amplitudes(3, re.as_ptr(), ptr::null(), 8, &mut state), IaStatus::Ok);
        let mut n = 0;
        assert_eq!(ia_state_sites(state, &mut n), IaStatus::Ok);
        assert_eq!(n, 3);
        let mut out_re = [0.0; 8];
        let mut out_im = [1.0; 8];
        assert_eq!(ia_state_amplitudes(state, out_re.as_mut_ptr(), out_im.as_mut_ptr(), 8), IaStatus::Ok);
        assert_eq!(out_re, re.map(|a| a / 2.0));
        assert_eq!(out_im, [0.0; 8]);
        assert_eq!(ia_state_amplitudes(state, out_re.as_mut_ptr(), ptr::null_mut(), 4), IaStatus::SizeMismatch);

        let mut certified = false;
        assert_eq!(ia_certify(set, state, 1e-10, &mut certified, ptr::null_mut()), IaStatus::Ok);
        assert!(certified);

        let mut fractions = [0.0; 4];
        let mut json = ptr::null_mut();
        assert_eq!(
            ia_run_experiment(state, set, 500, 11, fractions.as_mut_ptr(), 4, &mut json),
            IaStatus::Ok
        );
        assert_eq!(fractions, [1.0; 4]);
        let stats: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(stats["seed"], 11);
        assert_eq!(ia_run_experiment(state, set, 0, 11, ptr::null_mut(), 0, ptr::null_mut()), IaStatus::InvalidArgument);
        assert_eq!(ia_run_experiment(state, set, 5, 11, fractions.as_mut_ptr(), 3, ptr::null_mut()), IaStatus::SizeMismatch);

        ia_state_free(state);
        ia_set_free(set);
    }
}

#[test]
fn null_handles_and_bad_arguments() {
    unsafe {
        let mut state = ptr::null_mut();
        assert_eq!(ia_state_even_parity(3, ptr::null_mut()), IaStatus::NullPointer);
        assert_eq!(ia_state_even_parity(1, &mut state), IaStatus::InvalidArgument);
        assert!(state.is_null());
        assert_eq!(ia_set_push(ptr::null_mut(), c("ZZZ").as_ptr(), 1), IaStatus::NullPointer);
        let mut certified = false;
        assert_eq!(ia_certify(ptr::null(), ptr::null(), 1e-10, &mut certified, ptr::null_mut()), IaStatus::NullPointer);
        assert_eq!(ia_state_ground(3, 0.0, 7, &mut state), IaStatus::InvalidArgument);
        assert_eq!(ia_state_ground(3, 0.0, -1, &mut state), IaStatus::DegenerateGroundState);
        assert_eq!(ia_state_ground(3, -1.0, 0, &mut state), IaStatus::InvalidArgument);
        let mut eig = [0.0; 4];
        assert_eq!(ia_lowest_eigenvalues(15, 0.0, eig.as_mut_ptr(), 4), IaStatus::CapExceeded);
        assert_eq!(ia_lowest_eigenvalues(2, 0.0, eig.as_mut_ptr(), 5), IaStatus::InvalidArgument);
        // Null handles are ignored by the release functions.
        ia_state_free(ptr::null_mut());
        ia_set_free(ptr::null_mut());
        ia_string_free(ptr::null_mut());
    }
}

#[test]
fn spectrum_and_ground_states() {
    unsafe {
        let mut eig = [0.0; 3];
        assert_eq!(ia_lowest_eigenvalues(4, 0.0, eig.as_mut_ptr(), 3), IaStatus::Ok);
        assert!((eig[0] + 4.0).abs() < 1e-10 && (eig[1] + 4.0).abs() < 1e-10 && eig[2].abs() < 1e-10);
        let mut dim = 0;
        assert_eq!(ia_ground_degeneracy(5, 0.0, 1e-8, &mut dim), IaStatus::Ok);
        assert_eq!(dim, 2);
        assert_eq!(ia_ground_degeneracy(5, 1.0, 1e-8, &mut dim), IaStatus::Ok);
        assert_eq!(dim, 1);

        let mut odd = ptr::null_mut();
        assert_eq!(ia_state_ground(3, 0.0, 1, &mut odd), IaStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(ia_search(odd, 1e-8, 4, &mut json), IaStatus::Ok);
        let found: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(found["avn_sets"].as_array().unwrap().len(), 1);
        ia_state_free(odd);

        let mut unique = ptr::null_mut();
        assert_eq!(ia_state_ground(3, 0.5, -1, &mut unique), IaStatus::Ok);
        assert_eq!(ia_search(unique, 1e-8, 4, &mut json), IaStatus::Ok);
        let found: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert!(found["avn_sets"].as_array().unwrap().is_empty());
        assert_eq!(found["inventory"]["entries"].as_array().unwrap().len(), 2);
        ia_state_free(unique);
    }
}

#[test]
fn pauli_helpers() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ia_pauli_multiply(c("X").as_ptr(), c("Z").as_ptr(), &mut out), IaStatus::Ok);
        assert_eq!(take_string(out), "-iY");
        let mut commutes = false;
        assert_eq!(ia_pauli_commutes(c("XX").as_ptr(), c("YY").as_ptr(), &mut commutes), IaStatus::Ok);
        assert!(commutes);
        assert_eq!(ia_pauli_commutes(c("XI").as_ptr(), c("ZI").as_ptr(), &mut commutes), IaStatus::Ok);
        assert!(!commutes);
        assert_eq!(ia_pauli_commutes(c("XI").as_ptr(), c("ZII").as_ptr(), &mut commutes), IaStatus::Parse);
    }
}

#[test]
fn run_command_matches_library_reports() {
    unsafe {
        let mut out = ptr::null_mut();
        let config = c(r#"{"command": "avn", "n": 4, "excited": true}"#);
        assert_eq!(ia_run_command(config.as_ptr(), &mut out), IaStatus::Ok);
        let report = ising_avn::report::Report::from_json(&take_string(out)).unwrap();
        assert!(report.succeeded());

        let config = c(r#"{"command": "avn", "n": 3, "field_b": 0.5}"#);
        assert_eq!(ia_run_command(config.as_ptr(), &mut out), IaStatus::CheckFailed);
        let report = ising_avn::report::Report::from_json(&take_string(out)).unwrap();
        assert!(!report.succeeded());

        let config = c(r#"{"command": "simulate", "n": 3, "shots": 0}"#);
        assert_eq!(ia_run_command(config.as_ptr(), &mut out), IaStatus::InvalidArgument);
        let config = c(r#"{"command": "frobnicate"}"#);
        assert_eq!(ia_run_command(config.as_ptr(), &mut out), IaStatus::InvalidArgument);
        assert!(last_error().contains("bad run configuration"));
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ia_version()) }.to_str().unwrap();
    assert_eq!(v, ising_avn::report::VERSION);
}
