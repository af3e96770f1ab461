use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use dpl_ffi::*;

const ROD: &str = r#"
[experiment]
kind = "conservation-law"
t_end = 0.5

[delays]
tau_q = 1.0
tau_T = 1.0

[material]
a = 1.0
k = 1.0

[geometry]
h = 1.0
length = 1.0
n_cells = 64

[initial]
temperature = "gaussian(0, 0.2, 1)"

[boundary]
left = { kind = "temperature", value = 0.0 }
right = { kind = "flux", value = 0.0 }
"#;

fn last_error() -> String {
    let p = dpl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn classifies_regimes() {
    let mut r = DplRegime::Stable;
    unsafe {
        assert_eq!(dpl_classify_regime(1.0, 0.25, &mut r), DplStatus::Ok);
        assert_eq!(r, DplRegime::Growth);
        assert_eq!(dpl_classify_regime(1.0, 0.0, &mut r), DplStatus::Ok);
        assert_eq!(r, DplRegime::DegenerateZeroTauT);
        assert_eq!(
            dpl_classify_regime(-1.0, 0.5, &mut r),
            DplStatus::InvalidInput
        );
        assert!(!last_error().is_empty());
        assert_eq!(
            dpl_classify_regime(1.0, 1.0, ptr::null_mut()),
            DplStatus::NullPointer
        );
    }
}

#[test]
fn reports_speeds_and_frequencies() {
    let (mut c, mut b, mut w, mut nu) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(
            dpl_speeds(1.0, 1.0, 1.0, 1.0, &mut c, &mut b),
            DplStatus::Ok
        );
        assert!((c - 2f64.sqrt()).abs() < 1e-12);
        assert!((b - 2.5f64.sqrt()).abs() < 1e-12);
        let pi = std::f64::consts::PI;
        assert_eq!(
            dpl_critical_frequency(pi, 1.0, 0.5, 1.0, 1.0, &mut w),
            DplStatus::Ok
        );
        assert!((w - 1.0).abs() < 1e-12);
        assert_eq!(
            dpl_decay_rate(pi, 1.0, 0.5, 1.0, 1.0, 0.5, &mut nu),
            DplStatus::Ok
        );
        assert!(nu > 0.0 && nu.is_finite());
        assert_eq!(
            dpl_decay_rate(pi, 1.0, 0.5, 1.0, 1.0, 1.5, &mut nu),
            DplStatus::Domain
        );
    }
}

#[test]
fn transient_handle_round_trip() {
    let cfg = CString::new(ROD).unwrap();
    let mut h: *mut DplTransient = ptr::null_mut();
    unsafe {
        assert_eq!(dpl_transient_new(cfg.as_ptr(), &mut h), DplStatus::Ok);
        let mut n = 0usize;
        assert_eq!(dpl_transient_node_count(h, &mut n), DplStatus::Ok);
        assert_eq!(n, 65);
        let mut t = 0.0;
        assert_eq!(dpl_transient_advance(h, 0.25, &mut t), DplStatus::Ok);
        assert!((0.25..0.3).contains(&t));
        assert_eq!(dpl_transient_advance(h, 10.0, &mut t), DplStatus::Ok);
        assert_eq!(t, 0.5);
        let mut temp = vec![f64::NAN; n];
        assert_eq!(
            dpl_transient_copy_field(h, DplField::Temperature, temp.as_mut_ptr(), n),
            DplStatus::Ok
        );
        assert_eq!(temp[0], 0.0);
        assert!(temp.iter().all(|v| v.is_finite()));
        assert!(temp[32] > 0.0 && temp[32] < 1.0);
        let mut short = vec![0.0; 3];
        assert_eq!(
            dpl_transient_copy_field(h, DplField::Flux, short.as_mut_ptr(), 3),
            DplStatus::BufferTooSmall
        );
        dpl_transient_free(h);
        dpl_transient_free(ptr::null_mut());
    }
}

#[test]
fn malformed_config_is_a_config_error() {
    let cfg = CString::new(ROD.replace("[delays]", "[delay]")).unwrap();
    let mut h: *mut DplTransient = ptr::null_mut();
    unsafe {
        assert_eq!(dpl_transient_new(cfg.as_ptr(), &mut h), DplStatus::Config);
    }
    assert!(h.is_null());
    assert!(last_error().contains("delay"));
}

#[test]
fn steady_handle_round_trip() {
    let pi = std::f64::consts::PI;
    let (nx1, nx3) = (17, 65);
    let mut h: *mut DplSteady = ptr::null_mut();
    unsafe {
        assert_eq!(
            dpl_steady_solve(pi, 2.0 * pi, nx1, nx3, 1.0, 1.0, 1.0, 0.5, 0.5, 1.0, &mut h),
            DplStatus::Ok
        );
        let mut m = vec![0.0; nx3];
        assert_eq!(
            dpl_steady_decay_measure(h, m.as_mut_ptr(), nx3),
            DplStatus::Ok
        );
        assert!(m[0] > 0.0 && m[nx3 / 2] < m[0]);
        let (mut re, mut im) = (vec![0.0; nx1 * nx3], vec![0.0; nx1 * nx3]);
        assert_eq!(
            dpl_steady_copy_amplitude(h, re.as_mut_ptr(), im.as_mut_ptr(), nx1 * nx3),
            DplStatus::Ok
        );
        assert!((re[nx1 / 2] - 1.0).abs() < 1e-12 && im[nx1 / 2] == 0.0);
        let (mut ok, mut margin) = (false, f64::NAN);
        assert_eq!(
            dpl_steady_certify(h, 0.05, &mut ok, &mut margin),
            DplStatus::Ok
        );
        assert!(ok && margin >= 0.0);
        dpl_steady_free(h);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/dpl.h");
    let Ok(status) = Command::new("cc")
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-x",
            "c",
            header,
        ])
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping header check");
        return;
    };
    assert!(status.success());
}
