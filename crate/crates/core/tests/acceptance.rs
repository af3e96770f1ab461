//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use dpl_core::experiment::{
    bound_study, conservation_study, influence_study, preset, steady_study, zero_data_study,
    ExperimentConfig, PRESETS,
};
use dpl_core::influence::speed_bound;
use dpl_core::model::{DelayPair, Geometry1D, MaterialField, Regime};
use dpl_core::steady::{critical_frequency, StripMaterial};
use dpl_core::transient::{characteristic_speed, StepControl};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(name: &str) -> ExperimentConfig {
    ExperimentConfig::parse(preset(name).expect("preset"), name).expect("preset parses")
}

type Verdict = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Verdict);

fn zero_data() -> Verdict {
    let clock = Instant::now();
    let s = zero_data_study(&config("uniqueness")).map_err(|e| e.to_string())?;
    let secs = clock.elapsed().as_secs_f64();
    let p = config("uniqueness").problem().map_err(|e| e.to_string())?;
    let ok = p.geometry.n_nodes() == 512
        && s.max_abs_temp <= 1e-12
        && s.max_abs_flux <= 1e-12
        && secs < 10.0;
    Ok((
        ok,
        format!(
            "512 nodes to t=5: max|T|={:e} max|q|={:e} (<= 1e-12), {} steps, {secs:.2} s (< 10 s)",
            s.max_abs_temp, s.max_abs_flux, s.steps
        ),
    ))
}

fn conservation() -> Verdict {
    let clock = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["conservation-stable", "conservation-growth"] {
        let s = conservation_study(&config(name)).map_err(|e| e.to_string())?;
        let base = &s.levels[0];
        let orders: Vec<String> = s
            .reduction
            .iter()
            .map(|r| format!("{:.2}", r.log2()))
            .collect();
        ok &= base.n_cells + 1 == 256
            && base.max_relative_residual <= 1e-3
            && s.reduction.len() == 2
            && s.reduction.iter().all(|r| (3.0..=5.0).contains(r));
        parts.push(format!(
            "{}: residual {:.2e} (<= 1e-3), factors {:.3}/{:.3} in [3,5], order {}",
            s.regime,
            base.max_relative_residual,
            s.reduction[0],
            s.reduction[1],
            orders.join("/")
        ));
    }
    let secs = clock.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    Ok((ok, format!("{}; {secs:.2} s (< 120 s)", parts.join("; "))))
}

fn bounds() -> Verdict {
    let stable = bound_study(&config("dependence-stable")).map_err(|e| e.to_string())?;
    let growth = bound_study(&config("dependence-growth")).map_err(|e| e.to_string())?;
    let sigma_sq = DelayPair::new(0.5, 0.1)
        .map_err(|e| e.to_string())?
        .sigma_sq()
        .unwrap_or(f64::NAN);
    let ok = stable.regime == Regime::Stable
        && growth.regime == Regime::Growth
        && stable.report.bound_stable.is_some()
        && growth.report.bound_growth.is_some()
        && stable.min_relative_margin >= -1e-8
        && growth.min_relative_margin >= -1e-8
        && sigma_sq == 6.0;
    Ok((
        ok,
        format!(
            "sqrt(E) vs stable bound margin {:.3e}, sqrt(F) vs growth bound margin {:.3e} (>= -1e-8); sigma^2(0.5, 0.1) = {sigma_sq}",
            stable.min_relative_margin, growth.min_relative_margin
        ),
    ))
}

fn influence() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["influence-stable", "influence-growth"] {
        let s = influence_study(&config(name)).map_err(|e| e.to_string())?;
        let c_emp = s.c_empirical.unwrap_or(f64::INFINITY);
        ok &= s.max_beyond_bound <= 1e-8 && c_emp <= 1.1 * s.c_char && 1.1 * s.c_char <= s.c_bound;
        parts.push(format!(
            "{}: beyond c t {:.1e} (<= 1e-8), c_emp {c_emp:.4} <= 1.1 c_char {:.4} <= c {:.4}",
            s.regime,
            s.max_beyond_bound,
            1.1 * s.c_char,
            s.c_bound
        ));
    }
    let g = Geometry1D::new(1.0, 1.0, 32).map_err(|e| e.to_string())?;
    let m = MaterialField::uniform(&g, 1.0, 1.0).map_err(|e| e.to_string())?;
    let d = DelayPair::new(1.0, 1.0).map_err(|e| e.to_string())?;
    let c0 = speed_bound(&m, d).map_err(|e| e.to_string())?;
    let cc = characteristic_speed(&m, d).map_err(|e| e.to_string())?;
    let (e0, ec) = ((c0 - 2.5f64.sqrt()).abs(), (cc - 2f64.sqrt()).abs());
    ok &= e0 <= 1e-12 && ec <= 1e-12;
    parts.push(format!(
        "c0 = {c0:.12} (err {e0:.0e}), c_char = {cc:.12} (err {ec:.0e})"
    ));
    Ok((ok, parts.join("; ")))
}

fn steady_decay() -> Verdict {
    let cfg = config("steady-decay");
    let g = cfg.strip().map_err(|e| e.to_string())?;
    let m = StripMaterial::uniform(&g, 1.0, 1.0).map_err(|e| e.to_string())?;
    let omega_c = critical_frequency(&g, &m, cfg.delays);
    let clock = Instant::now();
    let studies = steady_study(&cfg).map_err(|e| e.to_string())?;
    let per_freq = clock.elapsed().as_secs_f64() / studies.len() as f64;
    let mut ok = g.nx1() == 129 && g.nx3() == 513 && (omega_c - 1.0).abs() < 1e-15;
    let mut parts = Vec::new();
    for s in &studies {
        let Some(v) = &s.verdict else {
            return Ok((false, format!("omega {} not certified", s.omega)));
        };
        let orders: Vec<String> = s
            .identity_reduction
            .iter()
            .map(|r| format!("{:.2}", r.log2()))
            .collect();
        ok &= v.certified
            && v.lower_margin >= -1e-12
            && v.sign_margin >= -1e-12
            && v.upper_margin >= -1e-12
            && s.identity_reduction.len() == 2
            && s.identity_reduction.iter().all(|r| *r >= 3.0);
        parts.push(format!(
            "w={}: margins upper {:.1e} lower {:.1e} sign {:.1e}, identity factors {}/{} order {}",
            s.omega,
            v.upper_margin,
            v.lower_margin,
            v.sign_margin,
            format_args!("{:.2}", s.identity_reduction[0]),
            format_args!("{:.2}", s.identity_reduction[1]),
            orders.join("/")
        ));
    }
    ok &= studies.len() == 3 && per_freq < 60.0;
    Ok((
        ok,
        format!(
            "{}; {per_freq:.1} s per frequency (< 60 s)",
            parts.join("; ")
        ),
    ))
}

fn fourier_oracle() -> Verdict {
    let cfg = config("steady-fourier");
    let g = cfg.strip().map_err(|e| e.to_string())?;
    let studies = steady_study(&cfg).map_err(|e| e.to_string())?;
    let worst = studies
        .iter()
        .map(|s| s.oracle_error.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let ok =
        cfg.delays.tau_q() == 0.0 && cfg.delays.tau_t() == 0.0 && g.width() == PI && worst <= 1e-3;
    Ok((
        ok,
        format!(
            "{}x{} strip, omegas {:?}: worst mid-strip relative error {worst:.3e} (<= 1e-3)",
            g.nx1(),
            g.nx3(),
            studies.iter().map(|s| s.omega).collect::<Vec<_>>()
        ),
    ))
}

fn superposition() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let transient: Vec<&str> = PRESETS
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| !n.starts_with("steady") && *n != "uniqueness")
        .collect();
    let mut picked: Vec<&str> = transient.choose_multiple(&mut rng, 2).copied().collect();
    picked.sort();
    let mut worst = 0.0f64;
    for name in &picked {
        let cfg = config(name);
        let base = cfg.problem().map_err(|e| e.to_string())?;
        let mut p1 = base.clone();
        p1.data = common::random_data(&base, &mut rng);
        let mut p2 = base.clone();
        p2.data = base.data.clone();
        let mut p12 = base.clone();
        p12.data = p1.data.superpose(&p2.data).map_err(|e| e.to_string())?;
        let ctl =
            StepControl::new(&base, 0.5, 0.5, cfg.t_end().min(1.0)).map_err(|e| e.to_string())?;
        worst = worst
            .max(common::superposition_defect(&p1, &p2, &p12, &ctl).map_err(|e| e.to_string())?);
    }
    Ok((
        worst <= 1e-10,
        format!(
            "presets {picked:?} plus seeded random data: relative defect {worst:.2e} (<= 1e-10)"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("zero-data uniqueness", zero_data),
        ("conservation law", conservation),
        ("continuous-dependence bounds", bounds),
        ("domain of influence", influence),
        ("steady-state spatial decay", steady_decay),
        ("Fourier-limit oracle", fourier_oracle),
        ("superposition", superposition),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} {}. {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
