mod common;

use dpl_core::analysis::{hat_flux_mismatch, tilde_temperature, HatData};
use dpl_core::error::DplError;
use dpl_core::experiment::{convergence_study, preset, zero_data_study, ExperimentConfig};
use dpl_core::model::{DelayPair, Problem};
use dpl_core::transient::{run, step, RunOptions, StepControl, TransientState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn preset_config(name: &str) -> ExperimentConfig {
    ExperimentConfig::parse(preset(name).unwrap(), name).unwrap()
}

fn control(cfg: &ExperimentConfig, p: &Problem) -> StepControl {
    StepControl::new(
        p,
        cfg.experiment.cfl_safety,
        cfg.experiment.relax_safety,
        cfg.t_end(),
    )
    .unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let s = zero_data_study(&preset_config("uniqueness")).unwrap();
    assert!(s.max_abs_temp <= 1e-12 && s.max_abs_flux <= 1e-12 && s.max_abs_rate <= 1e-12);
    assert!(s.steps > 0);
}

#[test]
fn nonzero_data_is_rejected_by_the_zero_data_study() {
    let cfg = preset_config("conservation-stable");
    assert!(matches!(zero_data_study(&cfg), Err(DplError::Config(_))));
}

#[test]
fn self_convergence_is_second_order_in_both_regimes() {
    for name in ["convergence-stable", "convergence-growth"] {
        let s = convergence_study(&preset_config(name)).unwrap();
        for r in &s.difference_reduction {
            assert!((3.0..=5.0).contains(r), "{name}: {r}");
        }
    }
}

#[test]
fn constitutive_residual_shrinks_under_refinement() {
    let s = convergence_study(&preset_config("convergence-stable")).unwrap();
    assert!(s
        .levels
        .windows(2)
        .all(|w| w[1].constitutive_residual < w[0].constitutive_residual));
    assert!(s.residual_reduction.iter().all(|r| *r > 3.0));
}

#[test]
fn superposition_holds_for_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in [
        "conservation-stable",
        "conservation-growth",
        "influence-boundary",
    ] {
        let cfg = preset_config(name);
        let base = cfg.problem().unwrap();
        let mut p1 = base.clone();
        p1.data = common::random_data(&base, &mut rng);
        let mut p2 = base.clone();
        p2.data = common::random_data(&base, &mut rng);
        let mut p12 = base.clone();
        p12.data = p1.data.superpose(&p2.data).unwrap();
        let ctl = StepControl::new(&base, 0.5, 0.5, 0.5).unwrap();
        let defect = common::superposition_defect(&p1, &p2, &p12, &ctl).unwrap();
        assert!(defect <= 1e-10, "{name}: {defect:e}");
    }
}

#[test]
fn oversized_step_diverges_with_advice() {
    let cfg = preset_config("conservation-stable");
    let p = cfg.problem().unwrap();
    let safe = control(&cfg, &p);
    let dt = 16.0 * safe.dt;
    let ctl = StepControl::with_dt(dt, 2000.0 * dt);
    let Err(err) = run(&p, &ctl, &RunOptions::default(), &mut []) else {
        panic!("run with an oversized step completed");
    };
    assert!(matches!(err, DplError::Divergence { .. }), "{err}");
    assert!(err.to_string().contains("cfl_safety"));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn zero_thermalization_delay_is_rejected() {
    let cfg = preset_config("conservation-stable");
    let mut p = cfg.problem().unwrap();
    p.delays = DelayPair::new(1.0, 0.0).unwrap();
    assert!(StepControl::new(&p, 0.5, 0.5, 1.0).is_err());
}

#[test]
fn integrated_fields_start_from_the_data() {
    let cfg = preset_config("conservation-boundary");
    let p = cfg.problem().unwrap();
    let s = TransientState::initial(&p);
    let tilde = tilde_temperature(&s, p.delays).unwrap();
    for (a, b) in tilde.iter().zip(&s.temp) {
        assert!((a - p.delays.tau_t() * b).abs() <= 1e-15);
    }
}

#[test]
fn hat_constitutive_mismatch_shrinks_under_refinement() {
    let cfg = preset_config("conservation-stable");
    let p0 = cfg.problem().unwrap();
    let ctl0 = StepControl::new(&p0, 0.5, 0.5, 0.5).unwrap();
    let mut mismatch = Vec::new();
    for f in [1usize, 2, 4] {
        let p = cfg.problem_on(p0.geometry.refined(f)).unwrap();
        let ctl = ctl0.refined(f);
        let hat = HatData::new(&p);
        let mut s = TransientState::initial(&p);
        let mut worst = 0.0f64;
        for _ in 0..ctl.n_steps() {
            step(&mut s, &p, &ctl).unwrap();
            worst = worst.max(hat_flux_mismatch(&s, &p, &hat).unwrap());
        }
        mismatch.push(worst);
    }
    assert!(mismatch[0] < 1e-3, "{mismatch:?}");
    assert!(
        mismatch[0] / mismatch[1] > 3.0 && mismatch[1] / mismatch[2] > 3.0,
        "{mismatch:?}"
    );
}
