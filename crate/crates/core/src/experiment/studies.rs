//! Computations behind each experiment kind, free of file output.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{EnergyObserver, EnergyReport};
use crate::error::{DplError, Result};
use crate::experiment::ExperimentConfig;
use crate::influence::{track_front, FrontRecord};
use crate::model::{Profile, Regime};
use crate::steady::{
    assemble_and_solve, critical_frequency, decay_certificate, decay_measure, identity_residual,
    separable_solution, DecayVerdict, SteadyAmplitude, StripGeometry, StripMaterial,
};
use crate::transient::{
    run, ConstitutiveObserver, MaxNormObserver, Observer, RunOptions, StepControl, TrajectoryRecord,
};

fn run_options(cfg: &ExperimentConfig) -> RunOptions {
    RunOptions {
        stride: cfg.experiment.stride,
        snapshot_times: cfg.experiment.snapshot_times.clone(),
    }
}

fn base_control(cfg: &ExperimentConfig, p: &crate::model::Problem) -> Result<StepControl> {
    StepControl::new(
        p,
        cfg.experiment.cfl_safety,
        cfg.experiment.relax_safety,
        cfg.t_end(),
    )
}

/// Observed reduction factors `e[i] / e[i+1]`.
pub fn reduction_factors(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroDataStudy {
    pub max_abs_temp: f64,
    pub max_abs_flux: f64,
    pub max_abs_rate: f64,
    pub steps: usize,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub record: TrajectoryRecord,
}

pub fn zero_data_study(cfg: &ExperimentConfig) -> Result<ZeroDataStudy> {
    let p = cfg.problem()?;
    let zero_ends = p.data.has_zero_boundary_data();
    if !(p.is_zero_data() && zero_ends) {
        return Err(DplError::Config(
            "uniqueness-zero-data needs zero initial, boundary and supply data".into(),
        ));
    }
    let ctl = base_control(cfg, &p)?;
    let mut norms = MaxNormObserver::default();
    let record = run(&p, &ctl, &run_options(cfg), &mut [&mut norms])?;
    Ok(ZeroDataStudy {
        max_abs_temp: norms.temp,
        max_abs_flux: norms.flux,
        max_abs_rate: norms.rate,
        steps: record.steps,
        wall_time_s: record.wall_time_s,
        record,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyLevel {
    pub n_cells: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub max_relative_residual: f64,
    pub max_abs_residual: f64,
    pub min_relative_margin: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservationStudy {
    pub regime: Regime,
    pub levels: Vec<EnergyLevel>,
    pub reduction: Vec<f64>,
    /// Report of the coarsest level.
    #[serde(skip)]
    pub report: EnergyReport,
}

fn energy_run(
    cfg: &ExperimentConfig,
    refine: usize,
) -> Result<(EnergyLevel, EnergyReport, TrajectoryRecord)> {
    let p0 = cfg.problem()?;
    let ctl0 = base_control(cfg, &p0)?;
    let p = if refine == 1 {
        p0
    } else {
        cfg.problem_on(p0.geometry.refined(refine))?
    };
    let ctl = ctl0.refined(refine);
    let mut obs = EnergyObserver::new(p.delays, cfg.t_end());
    let clock = Instant::now();
    let rec = run(
        &p,
        &ctl,
        &run_options(cfg),
        &mut [&mut obs as &mut dyn Observer],
    )?;
    let report = obs.into_report();
    Ok((
        EnergyLevel {
            n_cells: p.geometry.n_cells(),
            dx: p.geometry.dx(),
            dt: ctl.dt,
            steps: rec.steps,
            max_relative_residual: report.max_relative_residual(),
            max_abs_residual: report.max_abs_residual(),
            min_relative_margin: report.min_relative_margin(),
            wall_time_s: clock.elapsed().as_secs_f64(),
        },
        report,
        rec,
    ))
}

/// Conservation-law residual on `levels` grids, each halving `Δx` and `Δt`.
pub fn conservation_study(cfg: &ExperimentConfig) -> Result<ConservationStudy> {
    let mut levels = Vec::new();
    let mut first = None;
    for l in 0..cfg.experiment.levels {
        let (level, report, _) = energy_run(cfg, 1 << l)?;
        levels.push(level);
        first.get_or_insert(report);
    }
    let rel: Vec<f64> = levels.iter().map(|l| l.max_relative_residual).collect();
    Ok(ConservationStudy {
        regime: cfg.delays.regime(),
        reduction: reduction_factors(&rel),
        levels,
        report: first.expect("at least one level"),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundStudy {
    pub regime: Regime,
    pub level: EnergyLevel,
    pub min_relative_margin: f64,
    pub energy_ordered: bool,
    #[serde(skip)]
    pub report: EnergyReport,
    #[serde(skip)]
    pub record: TrajectoryRecord,
}

/// One run with the energy observer; compares the functional with its bound.
pub fn bound_study(cfg: &ExperimentConfig) -> Result<BoundStudy> {
    let regime = cfg.delays.regime();
    if regime == Regime::DegenerateZeroTauT {
        return Err(DplError::Regime {
            operation: "continuous-dependence",
            expected: "0 <= tau_q <= 2 tau_T or 0 < 2 tau_T < tau_q",
            actual: regime,
        });
    }
    let (level, report, record) = energy_run(cfg, 1)?;
    let energy_ordered = report
        .energy
        .iter()
        .zip(&report.energy_f)
        .all(|(e, f)| *e >= 0.0 && f >= e);
    Ok(BoundStudy {
        regime,
        min_relative_margin: level.min_relative_margin,
        level,
        energy_ordered,
        report,
        record,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdOutcome {
    pub threshold: f64,
    pub c_empirical: Option<f64>,
    pub max_beyond_bound: f64,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfluenceStudy {
    pub regime: Regime,
    pub c_bound: f64,
    pub c_char: f64,
    pub c_empirical: Option<f64>,
    pub max_beyond_bound: f64,
    pub right_end: f64,
    pub required_length: f64,
    pub thresholds: Vec<ThresholdOutcome>,
    #[serde(skip)]
    pub front: FrontRecord,
    #[serde(skip)]
    pub record: TrajectoryRecord,
}

pub fn influence_study(cfg: &ExperimentConfig) -> Result<InfluenceStudy> {
    let p = cfg.problem()?;
    let ctl = base_control(cfg, &p)?;
    let record = run(&p, &ctl, &run_options(cfg), &mut [])?;
    let right_end = p.geometry.length();
    let main = cfg.experiment.threshold;
    let mut all = vec![main];
    all.extend(
        cfg.experiment
            .robustness_thresholds
            .iter()
            .copied()
            .filter(|t| *t != main),
    );
    let mut thresholds = Vec::new();
    let mut front = None;
    for thr in all {
        let rec = track_front(&record.samples, &p.geometry, &p.material, p.delays, thr)?;
        thresholds.push(ThresholdOutcome {
            threshold: thr,
            c_empirical: rec.empirical_speed(right_end),
            max_beyond_bound: rec.max_beyond_bound(),
            truncated: rec.truncated(),
        });
        front.get_or_insert(rec);
    }
    let front = front.expect("main threshold tracked");
    Ok(InfluenceStudy {
        regime: front.regime,
        c_bound: front.c_bound(),
        c_char: front.c_char,
        c_empirical: thresholds[0].c_empirical,
        max_beyond_bound: front.max_beyond_bound(),
        right_end,
        required_length: 1.5 * front.c_bound() * cfg.t_end(),
        thresholds,
        front,
        record,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceLevel {
    pub n_cells: usize,
    pub dt: f64,
    pub steps: usize,
    pub constitutive_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub levels: Vec<ConvergenceLevel>,
    /// `max |f_l − f_{l+1}|` over T and q at the coarse nodes.
    pub differences: Vec<f64>,
    pub difference_reduction: Vec<f64>,
    pub residual_reduction: Vec<f64>,
}

/// Self-convergence of the marched fields and of the constitutive residual.
pub fn convergence_study(cfg: &ExperimentConfig) -> Result<ConvergenceStudy> {
    let p0 = cfg.problem()?;
    let ctl0 = base_control(cfg, &p0)?;
    let mut finals = Vec::new();
    let mut levels = Vec::new();
    for l in 0..cfg.experiment.levels {
        let f = 1usize << l;
        let p = cfg.problem_on(p0.geometry.refined(f))?;
        let ctl = ctl0.refined(f);
        let mut cons = ConstitutiveObserver::default();
        let rec = run(
            &p,
            &ctl,
            &RunOptions {
                stride: usize::MAX,
                ..Default::default()
            },
            &mut [&mut cons],
        )?;
        levels.push(ConvergenceLevel {
            n_cells: p.geometry.n_cells(),
            dt: ctl.dt,
            steps: rec.steps,
            constitutive_residual: cons.max_residual(),
        });
        finals.push(rec.final_state);
    }
    let differences: Vec<f64> = finals
        .windows(2)
        .map(|w| {
            let (c, f) = (&w[0], &w[1]);
            (0..c.n_nodes())
                .map(|j| {
                    (c.temp[j] - f.temp[2 * j])
                        .abs()
                        .max((c.flux[j] - f.flux[2 * j]).abs())
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let res: Vec<f64> = levels.iter().map(|l| l.constitutive_residual).collect();
    Ok(ConvergenceStudy {
        difference_reduction: reduction_factors(&differences),
        residual_reduction: reduction_factors(&res),
        differences,
        levels,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyStudy {
    pub omega: f64,
    pub omega_c: f64,
    pub relative_residual: f64,
    /// `None` at or above the critical frequency.
    pub verdict: Option<DecayVerdict>,
    /// Identity residual on the coarsest to the finest grid.
    pub identity_residuals: Vec<f64>,
    pub identity_reduction: Vec<f64>,
    /// Relative mid-strip error against the separable closed form.
    pub oracle_error: Option<f64>,
    #[serde(skip)]
    pub x3: Vec<f64>,
    #[serde(skip)]
    pub measure: Vec<f64>,
    #[serde(skip)]
    pub solution: SteadyAmplitude,
}

fn coarsened(g: &StripGeometry, levels: u32) -> Result<StripGeometry> {
    let f = 1usize << levels;
    if !(g.nx1() - 1).is_multiple_of(f) || !(g.nx3() - 1).is_multiple_of(f) {
        return Err(DplError::Config(format!(
            "strip grid {}x{} cannot be coarsened {levels} times (node counts minus one must divide by {f})",
            g.nx1(),
            g.nx3()
        )));
    }
    StripGeometry::new(
        g.width(),
        g.length(),
        (g.nx1() - 1) / f + 1,
        (g.nx3() - 1) / f + 1,
    )
}

pub fn steady_study(cfg: &ExperimentConfig) -> Result<Vec<FrequencyStudy>> {
    let s = cfg
        .steady
        .as_ref()
        .ok_or_else(|| DplError::Config("missing [steady]".into()))?;
    let g = cfg.strip()?;
    let (a, k) = cfg.strip_coefficients()?;
    let base = s.base.unwrap_or(Profile::Sine {
        width: g.width(),
        amp: 1.0,
    });
    let grids: Vec<StripGeometry> = (0..=s.coarsenings)
        .rev()
        .map(|l| coarsened(&g, l))
        .collect::<Result<_>>()?;
    let d = cfg.delays;
    s.omegas
        .par_iter()
        .map(|&omega| {
            let m = StripMaterial::uniform(&g, a, k)?;
            let omega_c = critical_frequency(&g, &m, d);
            let mut identity_residuals = Vec::new();
            for cg in &grids[..grids.len() - 1] {
                let cm = StripMaterial::uniform(cg, a, k)?;
                let sol = assemble_and_solve(cg, &cm, d, omega, &base)?;
                identity_residuals.push(identity_residual(&sol, &cm).max_abs_residual);
            }
            let sol = assemble_and_solve(&g, &m, d, omega, &base)?;
            identity_residuals.push(identity_residual(&sol, &m).max_abs_residual);
            let verdict = if omega < omega_c {
                Some(decay_certificate(&sol, &m, s.tol)?)
            } else {
                None
            };
            let oracle_error = match base {
                Profile::Sine { width, amp } if width == g.width() => {
                    let exact = separable_solution(&g, a, k, d, omega, amp);
                    let (j1, j3) = ((g.nx1() - 1) / 2, (g.nx3() - 1) / 2);
                    let e: Complex64 = exact.eval(g.x1(j1), g.x3(j3));
                    Some((sol.theta_at(j1, j3) - e).norm() / e.norm())
                }
                _ => None,
            };
            Ok(FrequencyStudy {
                omega,
                omega_c,
                relative_residual: sol.relative_residual,
                verdict,
                identity_reduction: reduction_factors(&identity_residuals),
                identity_residuals,
                oracle_error,
                x3: (0..g.nx3()).map(|j| g.x3(j)).collect(),
                measure: decay_measure(&sol, &m),
                solution: sol,
            })
        })
        .collect()
}
