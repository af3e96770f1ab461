use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DplError, Result};
use crate::model::{
    DelayPair, EndCondition, Geometry1D, MaterialField, Problem, ProblemData, Profile,
};
use crate::steady::StripGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    UniquenessZeroData,
    ConservationLaw,
    ContinuousDependence,
    InfluenceDomain,
    SteadyDecay,
    ConvergenceStudy,
}

impl ExperimentKind {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::UniquenessZeroData => "uniqueness-zero-data",
            ExperimentKind::ConservationLaw => "conservation-law",
            ExperimentKind::ContinuousDependence => "continuous-dependence",
            ExperimentKind::InfluenceDomain => "influence-domain",
            ExperimentKind::SteadyDecay => "steady-decay",
            ExperimentKind::ConvergenceStudy => "convergence-study",
        }
    }

    fn is_transient(self) -> bool {
        !matches!(self, ExperimentKind::SteadyDecay)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// `[experiment]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub name: Option<String>,
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default = "default_safety")]
    pub cfl_safety: f64,
    #[serde(default = "default_safety")]
    pub relax_safety: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    /// Number of grid levels for refinement studies.
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Front threshold relative to the initial peak.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Extra thresholds for the robustness check of front tracking.
    #[serde(default)]
    pub robustness_thresholds: Vec<f64>,
}

fn default_safety() -> f64 {
    0.5
}
fn default_stride() -> usize {
    1
}
fn default_levels() -> usize {
    3
}
fn default_threshold() -> f64 {
    1e-8
}

/// `[geometry]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub h: f64,
    pub length: f64,
    pub n_cells: usize,
}

/// `[material]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub a: Profile,
    pub k: Profile,
}

/// `[initial]`
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(default)]
    pub temperature: Profile,
    #[serde(default)]
    pub flux: Profile,
    #[serde(default)]
    pub flux_rate: Profile,
}

/// `[boundary]`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub left: EndCondition,
    pub right: EndCondition,
}

/// `[supply]`
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplySection {
    #[serde(default)]
    pub rho_r: Profile,
}

/// `[steady]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadySection {
    pub width: f64,
    pub length: f64,
    pub nx1: usize,
    pub nx3: usize,
    pub omegas: Vec<f64>,
    /// Base profile `h(x₁)`; defaults to `sine(width, 1)`.
    #[serde(default)]
    pub base: Option<Profile>,
    #[serde(default = "default_decay_tol")]
    pub tol: f64,
    /// Coarser grids used for the identity convergence check.
    #[serde(default = "default_coarsenings")]
    pub coarsenings: u32,
    /// When set, compare against the separable closed form at mid-strip.
    #[serde(default)]
    pub oracle_tol: Option<f64>,
}

fn default_decay_tol() -> f64 {
    0.05
}
fn default_coarsenings() -> u32 {
    2
}

/// Raw contents of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub delays: DelayPair,
    pub material: MaterialSection,
    pub geometry: Option<GeometrySection>,
    pub initial: Option<InitialSection>,
    pub boundary: Option<BoundarySection>,
    #[serde(default)]
    pub supply: SupplySection,
    pub steady: Option<SteadySection>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ExperimentConfig {
    /// Parse config text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => DplError::Config(format!(
                    "{origin}: line {}: {msg}",
                    line_of(text, span.start)
                )),
                None => DplError::Config(format!("{origin}: {msg}")),
            }
        })?;
        cfg.check_sections().map_err(|e| match e {
            DplError::Config(m) => DplError::Config(format!("{origin}: {m}")),
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DplError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn check_sections(&self) -> Result<()> {
        let kind = self.experiment.kind;
        let need = |present: bool, section: &str| {
            if present {
                Ok(())
            } else {
                Err(DplError::Config(format!(
                    "{kind} needs a [{section}] section"
                )))
            }
        };
        if kind.is_transient() {
            need(self.geometry.is_some(), "geometry")?;
            need(self.initial.is_some(), "initial")?;
            need(self.boundary.is_some(), "boundary")?;
            match self.experiment.t_end {
                Some(t) if t.is_finite() && t >= 0.0 => {}
                Some(t) => {
                    return Err(DplError::Config(format!("t_end must be >= 0, got {t}")));
                }
                None => return Err(DplError::Config(format!("{kind} needs [experiment] t_end"))),
            }
        } else {
            need(self.steady.is_some(), "steady")?;
            let s = self.steady.as_ref().expect("checked");
            if s.omegas.is_empty() {
                return Err(DplError::Config("[steady] omegas must not be empty".into()));
            }
        }
        if self.experiment.levels < 1 {
            return Err(DplError::Config("[experiment] levels must be >= 1".into()));
        }
        let needs_levels = matches!(
            kind,
            ExperimentKind::ConservationLaw | ExperimentKind::ConvergenceStudy
        );
        if needs_levels && self.experiment.levels < 3 {
            return Err(DplError::Config(format!(
                "{kind} needs at least 3 refinement levels, got {}",
                self.experiment.levels
            )));
        }
        Ok(())
    }

    /// The transient problem described by the config.
    pub fn problem(&self) -> Result<Problem> {
        let gs = self
            .geometry
            .as_ref()
            .ok_or_else(|| DplError::Config("missing [geometry]".into()))?;
        let geometry = Geometry1D::new(gs.h, gs.length, gs.n_cells)?;
        self.problem_on(geometry)
    }

    /// The same problem sampled on another grid of the rod.
    pub fn problem_on(&self, geometry: Geometry1D) -> Result<Problem> {
        let init = self
            .initial
            .as_ref()
            .ok_or_else(|| DplError::Config("missing [initial]".into()))?;
        let bc = self
            .boundary
            .ok_or_else(|| DplError::Config("missing [boundary]".into()))?;
        let material = MaterialField::from_profiles(
            &geometry,
            &self.material.a,
            &self.material.k,
            &self.supply.rho_r,
        )?;
        let xs = geometry.nodes();
        let mut data = ProblemData::zero(geometry.n_nodes(), bc.left, bc.right);
        data.temp0 = init.temperature.sample(&xs);
        data.flux0 = init.flux.sample(&xs);
        data.flux_rate0 = init.flux_rate.sample(&xs);
        Problem::new(geometry, material, self.delays, data)
    }

    pub fn strip(&self) -> Result<StripGeometry> {
        let s = self
            .steady
            .as_ref()
            .ok_or_else(|| DplError::Config("missing [steady]".into()))?;
        StripGeometry::new(s.width, s.length, s.nx1, s.nx3)
    }

    /// Uniform strip coefficients; the steady solver takes constants from `[material]`.
    pub fn strip_coefficients(&self) -> Result<(f64, f64)> {
        match (self.material.a, self.material.k) {
            (Profile::Constant(a), Profile::Constant(k)) => Ok((a, k)),
            _ => Err(DplError::UnsupportedSetting(
                "steady-decay takes constant a and k in [material]".into(),
            )),
        }
    }

    pub fn t_end(&self) -> f64 {
        self.experiment.t_end.unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[experiment]
kind = "conservation-law"
t_end = 1.0

[geometry]
h = 1.0
length = 1.0
n_cells = 64

[material]
a = 1.0
k = 1

[delays]
tau_q = 1.0
tau_T = 0.5

[initial]
temperature = "gaussian(0, 0.2, 1)"

[boundary]
left = { kind = "temperature", value = 0.0 }
right = { kind = "flux", value = 0.0 }
"#;

    #[test]
    fn parses_minimal_transient_config() {
        let cfg = ExperimentConfig::parse(MINIMAL, "test").unwrap();
        assert_eq!(cfg.experiment.kind, ExperimentKind::ConservationLaw);
        assert_eq!(cfg.experiment.cfl_safety, 0.5);
        let p = cfg.problem().unwrap();
        assert_eq!(p.geometry.n_nodes(), 65);
        assert!((p.data.temp0[32] - 1.0).abs() < 1e-15);
        assert_eq!(p.data.right, EndCondition::Flux(0.0));
    }

    #[test]
    fn missing_delays_is_a_config_error() {
        let text = MINIMAL.replace("[delays]\ntau_q = 1.0\ntau_T = 0.5\n", "");
        let err = ExperimentConfig::parse(&text, "cfg").unwrap_err();
        assert!(
            matches!(err, DplError::Config(ref m) if m.contains("delays")),
            "{err}"
        );
    }

    #[test]
    fn reports_line_numbers() {
        let text = MINIMAL.replace("n_cells = 64", "n_cells = \"many\"");
        let err = ExperimentConfig::parse(&text, "cfg")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 9"), "{err}");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_profiles() {
        let text = MINIMAL.replace("k = 1", "k = 1\nfoo = 2");
        assert!(ExperimentConfig::parse(&text, "cfg").is_err());
        let text = MINIMAL.replace("gaussian(0, 0.2, 1)", "gaussian(0, 0.2)");
        assert!(ExperimentConfig::parse(&text, "cfg").is_err());
    }

    #[test]
    fn rejects_negative_delay() {
        let text = MINIMAL.replace("tau_T = 0.5", "tau_T = -0.5");
        assert!(ExperimentConfig::parse(&text, "cfg").is_err());
    }
}
