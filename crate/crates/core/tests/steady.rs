use std::f64::consts::PI;

use dpl_core::error::DplError;
use dpl_core::model::{DelayPair, Profile};
use dpl_core::steady::{
    assemble_and_solve, base_profile, decay_certificate, decay_measure, identity_residual,
    operator_coefficients, separable_solution, solve_with_coefficients, StripGeometry,
    StripMaterial,
};

fn strip(nx1: usize, nx3: usize) -> (StripGeometry, StripMaterial) {
    let g = StripGeometry::new(PI, 4.0 * PI, nx1, nx3).unwrap();
    let m = StripMaterial::uniform(&g, 1.0, 1.0).unwrap();
    (g, m)
}

fn sine() -> Profile {
    Profile::Sine {
        width: PI,
        amp: 1.0,
    }
}

#[test]
fn conjugate_coefficients_give_the_conjugate_field() {
    let (g, m) = strip(17, 65);
    let d = DelayPair::new(1.0, 0.5).unwrap();
    let (alpha, beta) = operator_coefficients(d, 0.6);
    let h = base_profile(&g, &sine()).unwrap();
    let (theta, _, _) = solve_with_coefficients(&g, &m, alpha, beta, &h).unwrap();
    let (conj, _, _) = solve_with_coefficients(&g, &m, alpha.conj(), beta.conj(), &h).unwrap();
    let worst = theta
        .iter()
        .zip(&conj)
        .map(|(a, b)| (a.conj() - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn fourier_limit_matches_the_separable_solution() {
    let (g, m) = strip(65, 257);
    let d = DelayPair::new(0.0, 0.0).unwrap();
    for omega in [0.25, 1.0] {
        let sol = assemble_and_solve(&g, &m, d, omega, &sine()).unwrap();
        let exact = separable_solution(&g, 1.0, 1.0, d, omega, 1.0);
        let (j1, j3) = (32, 128);
        let e = exact.eval(g.x1(j1), g.x3(j3));
        let err = (sol.theta_at(j1, j3) - e).norm() / e.norm();
        assert!(err < 2e-3, "omega {omega}: {err:e}");
    }
}

#[test]
fn above_critical_frequency_solves_but_does_not_certify() {
    let (g, m) = strip(17, 65);
    let d = DelayPair::new(1.0, 0.5).unwrap();
    let sol = assemble_and_solve(&g, &m, d, 1.3, &sine()).unwrap();
    assert!(decay_measure(&sol, &m).iter().all(|v| v.is_finite()));
    assert!(matches!(
        decay_certificate(&sol, &m, 0.05),
        Err(DplError::AboveCriticalFrequency { .. })
    ));
}

#[test]
fn identity_residual_converges_at_second_order() {
    let d = DelayPair::new(1.0, 0.5).unwrap();
    let res: Vec<f64> = [(17, 65), (33, 129), (65, 257)]
        .into_iter()
        .map(|(a, b)| {
            let (g, m) = strip(a, b);
            let sol = assemble_and_solve(&g, &m, d, 0.5, &sine()).unwrap();
            identity_residual(&sol, &m).max_abs_residual
        })
        .collect();
    assert!(res[0] / res[1] > 2.5 && res[1] / res[2] > 3.0, "{res:?}");
}

#[test]
fn decay_is_certified_near_the_critical_frequency() {
    let (g, m) = strip(33, 129);
    let d = DelayPair::new(1.0, 0.5).unwrap();
    let near = assemble_and_solve(&g, &m, d, 0.99, &sine()).unwrap();
    let mid = assemble_and_solve(&g, &m, d, 0.5, &sine()).unwrap();
    let vn = decay_certificate(&near, &m, 0.05).unwrap();
    let vm = decay_certificate(&mid, &m, 0.05).unwrap();
    assert!(vn.certified && vm.certified);
    assert!(vn.nu > vm.nu);
    assert!(vn.upper_margin >= 0.0 && vn.lower_margin >= 0.0);
}

#[test]
fn incompatible_base_profile_is_rejected() {
    let (g, m) = strip(17, 65);
    let d = DelayPair::new(1.0, 0.5).unwrap();
    let r = assemble_and_solve(&g, &m, d, 0.5, &Profile::Constant(1.0));
    assert!(r.is_err());
}
