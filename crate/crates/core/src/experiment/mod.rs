//! Config-driven experiments: each kind runs a study, writes CSV/JSON
//! artifacts and reports a list of pass/fail checks.

mod config;
mod output;
mod plots;
mod presets;
mod studies;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{
    BoundarySection, ExperimentConfig, ExperimentKind, ExperimentSection, GeometrySection,
    InitialSection, MaterialSection, SteadySection, SupplySection,
};
pub use output::{write_amplitude, write_decay, write_energy, write_front, write_snapshots};
pub use plots::emit_plots;
pub use presets::{preset, PRESETS};
pub use studies::{
    bound_study, conservation_study, convergence_study, influence_study, reduction_factors,
    steady_study, zero_data_study, BoundStudy, ConservationStudy, ConvergenceLevel,
    ConvergenceStudy, EnergyLevel, FrequencyStudy, InfluenceStudy, ThresholdOutcome, ZeroDataStudy,
};

use crate::error::{DplError, Result};
use crate::model::Regime;
use output::{num, summary_text, write_csv, write_json};

/// Largest field magnitude accepted for the zero-data run.
pub const ZERO_DATA_TOL: f64 = 1e-12;
/// Largest relative conservation-law residual on the base grid.
pub const CONSERVATION_TOL: f64 = 1e-3;
/// Accepted reduction window for one halving of `Δx` and `Δt` at second order.
pub const SECOND_ORDER_WINDOW: (f64, f64) = (3.0, 5.0);
/// Smallest reduction accepted for the steady identity residual per halving.
pub const IDENTITY_MIN_REDUCTION: f64 = 3.0;
/// Relative slack for the continuous-dependence bound.
pub const BOUND_SLACK: f64 = 1e-8;
/// Fields ahead of `c t` must stay below this fraction of the initial peak.
pub const CONFINEMENT_TOL: f64 = 1e-8;
/// Empirical front speed may exceed the characteristic speed by this factor.
pub const SPEED_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub claim: String,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
}

impl Check {
    pub fn at_most(claim: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            claim: claim.into(),
            value,
            limit: format!("<= {limit:e}"),
            passed: value <= limit,
        }
    }

    pub fn at_least(claim: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            claim: claim.into(),
            value,
            limit: format!(">= {limit:e}"),
            passed: value >= limit,
        }
    }

    pub fn within(claim: impl Into<String>, value: f64, (lo, hi): (f64, f64)) -> Self {
        Self {
            claim: claim.into(),
            value,
            limit: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&value),
        }
    }

    pub fn holds(claim: impl Into<String>, ok: bool) -> Self {
        Self {
            claim: claim.into(),
            value: if ok { 1.0 } else { 0.0 },
            limit: "true".into(),
            passed: ok,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.claim,
            num(self.value),
            self.limit
        )
    }
}

/// A named experiment and where its artifacts go.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    pub config: ExperimentConfig,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    /// `source` is a config path, `preset:NAME`, or a bare preset name or
    /// experiment kind when no such file exists; artifacts land in
    /// `out_root/<name>`.
    pub fn from_source(source: &str, out_root: &Path) -> Result<Self> {
        let named = source.strip_prefix("preset:").or_else(|| {
            (!Path::new(source).exists())
                .then(|| default_preset(source))
                .flatten()
        });
        let (config, fallback) = match named {
            Some(name) => {
                let text = preset(name).ok_or_else(|| {
                    let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
                    DplError::Config(format!(
                        "unknown preset `{name}` (known: {})",
                        known.join(", ")
                    ))
                })?;
                (ExperimentConfig::parse(text, name)?, name.to_string())
            }
            None => {
                let path = Path::new(source);
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("experiment")
                    .to_string();
                (ExperimentConfig::load(path)?, stem)
            }
        };
        let name = config.experiment.name.clone().unwrap_or(fallback);
        Ok(Self {
            output_dir: out_root.join(&name),
            name,
            config,
        })
    }
}

/// Preset for a bare name: the preset itself or the stable-regime preset of
/// an experiment kind.
fn default_preset(name: &str) -> Option<&str> {
    if preset(name).is_some() {
        return Some(name);
    }
    Some(match name {
        "uniqueness-zero-data" => "uniqueness",
        "conservation-law" => "conservation-stable",
        "continuous-dependence" => "dependence-stable",
        "influence-domain" => "influence-stable",
        "steady-decay" => "steady-decay",
        "convergence-study" => "convergence-stable",
        _ => return None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutcome {
    pub name: String,
    pub kind: ExperimentKind,
    pub regime: Option<Regime>,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
    pub details: serde_json::Value,
}

impl ExperimentOutcome {
    fn new(spec: &ExperimentSpec, regime: Option<Regime>) -> Self {
        Self {
            name: spec.name.clone(),
            kind: spec.config.experiment.kind,
            regime,
            passed: true,
            checks: Vec::new(),
            notes: Vec::new(),
            files: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    fn details<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.details = serde_json::to_value(value)?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut lines: Vec<String> = vec![format!("kind: {}", self.kind)];
        if let Some(r) = self.regime {
            lines.push(format!("regime: {r}"));
        }
        lines.extend(self.checks.iter().map(Check::line));
        lines.extend(self.notes.iter().map(|n| format!("note: {n}")));
        lines.push(format!(
            "verdict: {}",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        summary_text(&self.name, &lines)
    }
}

/// Run one experiment and write its artifacts, `summary.txt` and `verdict.json`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    let cfg = &spec.config;
    let kind = cfg.experiment.kind;
    let regime = (kind != ExperimentKind::SteadyDecay).then(|| cfg.delays.regime());
    let mut out = ExperimentOutcome::new(spec, regime);
    fs::create_dir_all(&spec.output_dir)?;
    let dir = spec.output_dir.as_path();
    match kind {
        ExperimentKind::UniquenessZeroData => zero_data(cfg, dir, &mut out)?,
        ExperimentKind::ConservationLaw => conservation(cfg, dir, &mut out)?,
        ExperimentKind::ContinuousDependence => dependence(cfg, dir, &mut out)?,
        ExperimentKind::InfluenceDomain => influence(cfg, dir, &mut out)?,
        ExperimentKind::SteadyDecay => steady(cfg, dir, &mut out)?,
        ExperimentKind::ConvergenceStudy => convergence(cfg, dir, &mut out)?,
    }
    let summary = dir.join("summary.txt");
    fs::write(&summary, out.summary())?;
    out.files.push(summary);
    let verdict = dir.join("verdict.json");
    out.files.push(verdict.clone());
    write_json(&verdict, &out)?;
    Ok(out)
}

fn zero_data(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let s = zero_data_study(cfg)?;
    out.check(Check::at_most(
        "max |T| over the run",
        s.max_abs_temp,
        ZERO_DATA_TOL,
    ));
    out.check(Check::at_most(
        "max |q| over the run",
        s.max_abs_flux,
        ZERO_DATA_TOL,
    ));
    let p = cfg.problem()?;
    let mut snaps = s.record.snapshots.clone();
    if let Some(last) = s.record.samples.last() {
        if snaps.last().is_none_or(|l| l.t < last.t) {
            snaps.push(last.clone());
        }
    }
    out.files.push(write_snapshots(
        &dir.join("snapshots.csv"),
        &p.geometry,
        &snaps,
    )?);
    out.files
        .push(write_json(&dir.join("summary.json"), &s.record.summary())?);
    out.details(&s)
}

fn conservation(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let s = conservation_study(cfg)?;
    out.check(Check::at_most(
        "relative conservation residual, base grid",
        s.levels[0].max_relative_residual,
        CONSERVATION_TOL,
    ));
    for (i, r) in s.reduction.iter().enumerate() {
        let c = Check::within(
            format!("residual reduction, level {i} to {}", i + 1),
            *r,
            SECOND_ORDER_WINDOW,
        );
        // growing modes may delay the asymptotic range; flagged, not failed
        if s.regime == Regime::Growth && !c.passed {
            out.notes.push(format!("FLAG {}", c.line()));
        } else {
            out.check(c);
        }
    }
    out.files
        .push(write_energy(&dir.join("energy.csv"), &s.report)?);
    out.files.push(write_csv(
        &dir.join("convergence.csv"),
        "n_cells,dx,dt,max_relative_residual,max_abs_residual",
        s.levels.iter().map(|l| {
            vec![
                l.n_cells as f64,
                l.dx,
                l.dt,
                l.max_relative_residual,
                l.max_abs_residual,
            ]
        }),
    )?);
    out.details(&s)
}

fn dependence(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let s = bound_study(cfg)?;
    out.check(Check::at_least(
        "min relative margin of the continuous-dependence bound",
        s.min_relative_margin,
        -BOUND_SLACK,
    ));
    out.check(Check::holds("0 <= E <= F at every step", s.energy_ordered));
    out.files
        .push(write_energy(&dir.join("energy.csv"), &s.report)?);
    out.details(&s)
}

fn influence(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let s = influence_study(cfg)?;
    out.check(Check::at_most(
        "max field beyond x = c t, relative to the initial peak",
        s.max_beyond_bound,
        CONFINEMENT_TOL,
    ));
    out.check(Check::at_most(
        "1.1 c_char against the speed bound",
        SPEED_FACTOR * s.c_char,
        s.c_bound,
    ));
    for t in &s.thresholds {
        let claim = format!("empirical front speed at threshold {:e}", t.threshold);
        match t.c_empirical {
            Some(c) => out.check(Check::at_most(claim, c, SPEED_FACTOR * s.c_char)),
            None => {
                out.check(Check::holds(format!("{claim} is measurable"), false));
            }
        }
        out.check(Check::holds(
            format!("front stays inside the rod at threshold {:e}", t.threshold),
            !t.truncated,
        ));
    }
    out.check(Check::at_least(
        "rod length against 1.5 c t_end",
        s.right_end,
        s.required_length,
    ));
    out.notes.extend(s.front.warnings.iter().cloned());
    let p = cfg.problem()?;
    out.files
        .push(write_front(&dir.join("front.csv"), &s.front)?);
    if !s.record.snapshots.is_empty() {
        out.files.push(write_snapshots(
            &dir.join("snapshots.csv"),
            &p.geometry,
            &s.record.snapshots,
        )?);
    }
    let confined = s.max_beyond_bound <= CONFINEMENT_TOL;
    out.details(&serde_json::json!({
        "regime": s.regime,
        "c_bound": s.c_bound,
        "c_char": s.c_char,
        "c_empirical": s.c_empirical,
        "confined": confined,
        "study": s,
    }))
}

fn steady(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let studies = steady_study(cfg)?;
    let oracle_tol = cfg.steady.as_ref().and_then(|s| s.oracle_tol);
    for s in &studies {
        let w = s.omega;
        match &s.verdict {
            Some(v) => out.check(Check::at_least(
                format!("decay certificate margin at omega = {w}"),
                v.min_margin,
                -1e-12,
            )),
            None => out.notes.push(format!(
                "omega = {w} is at or above omega_c = {}: solved, no decay claim",
                s.omega_c
            )),
        }
        for (i, r) in s.identity_reduction.iter().enumerate() {
            out.check(Check::at_least(
                format!(
                    "identity residual reduction at omega = {w}, grid {i} to {}",
                    i + 1
                ),
                *r,
                IDENTITY_MIN_REDUCTION,
            ));
        }
        if let (Some(tol), Some(err)) = (oracle_tol, s.oracle_error) {
            out.check(Check::at_most(
                format!("mid-strip error against the closed form at omega = {w}"),
                err,
                tol,
            ));
        } else if oracle_tol.is_some() {
            out.notes.push(format!(
                "omega = {w}: no closed form for this base profile, oracle skipped"
            ));
        }
        out.files.push(write_decay(
            &dir.join(format!("decay_w{w}.csv")),
            &s.x3,
            &s.measure,
            s.verdict.as_ref(),
        )?);
        out.files.push(write_amplitude(
            &dir.join(format!("amplitude_w{w}.csv")),
            &s.solution,
        )?);
        out.files
            .push(write_json(&dir.join(format!("decay_w{w}.json")), s)?);
    }
    out.details(&studies)
}

fn convergence(cfg: &ExperimentConfig, dir: &Path, out: &mut ExperimentOutcome) -> Result<()> {
    let s = convergence_study(cfg)?;
    for (i, r) in s.difference_reduction.iter().enumerate() {
        out.check(Check::within(
            format!(
                "self-convergence factor, levels {i}-{} to {}-{}",
                i + 1,
                i + 1,
                i + 2
            ),
            *r,
            SECOND_ORDER_WINDOW,
        ));
    }
    for (i, r) in s.residual_reduction.iter().enumerate() {
        out.check(Check::within(
            format!("constitutive residual reduction, level {i} to {}", i + 1),
            *r,
            SECOND_ORDER_WINDOW,
        ));
    }
    out.files.push(write_csv(
        &dir.join("convergence.csv"),
        "n_cells,dt,steps,constitutive_residual",
        s.levels.iter().map(|l| {
            vec![
                l.n_cells as f64,
                l.dt,
                l.steps as f64,
                l.constitutive_residual,
            ]
        }),
    )?);
    out.details(&s)
}
