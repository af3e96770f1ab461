use serde::{Deserialize, Serialize};

use crate::error::{DplError, Result};
use crate::model::{DelayPair, Geometry1D, MaterialField};

/// Which rod end a boundary condition applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Left,
    Right,
}

impl End {
    /// Outward unit normal along the rod axis.
    pub fn normal(self) -> f64 {
        match self {
            End::Left => -1.0,
            End::Right => 1.0,
        }
    }
}

/// Condition held at one end for all time.
///
/// `Temperature` ends make up the Dirichlet part of the boundary, `Flux`
/// ends (prescribed `q * n`) the flux part.  Each end carries exactly one
/// condition, so the two parts are disjoint and cover the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum EndCondition {
    Temperature(f64),
    Flux(f64),
}

impl EndCondition {
    pub fn value(&self) -> f64 {
        match *self {
            EndCondition::Temperature(v) | EndCondition::Flux(v) => v,
        }
    }

    pub fn is_temperature(&self) -> bool {
        matches!(self, EndCondition::Temperature(_))
    }

    fn plus(&self, other: &EndCondition) -> Option<EndCondition> {
        match (self, other) {
            (EndCondition::Temperature(a), EndCondition::Temperature(b)) => {
                Some(EndCondition::Temperature(a + b))
            }
            (EndCondition::Flux(a), EndCondition::Flux(b)) => Some(EndCondition::Flux(a + b)),
            _ => None,
        }
    }
}

/// Initial fields and end conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub temp0: Vec<f64>,
    pub flux0: Vec<f64>,
    pub flux_rate0: Vec<f64>,
    pub left: EndCondition,
    pub right: EndCondition,
}

/// Absolute mismatch tolerated between initial and boundary data at a corner.
const CORNER_TOL: f64 = 1e-8;

impl ProblemData {
    pub fn zero(n_nodes: usize, left: EndCondition, right: EndCondition) -> Self {
        Self {
            temp0: vec![0.0; n_nodes],
            flux0: vec![0.0; n_nodes],
            flux_rate0: vec![0.0; n_nodes],
            left,
            right,
        }
    }

    pub fn end(&self, end: End) -> EndCondition {
        match end {
            End::Left => self.left,
            End::Right => self.right,
        }
    }

    /// Ends with a prescribed temperature.
    pub fn dirichlet_ends(&self) -> Vec<End> {
        [End::Left, End::Right]
            .into_iter()
            .filter(|&e| self.end(e).is_temperature())
            .collect()
    }

    pub fn has_zero_boundary_data(&self) -> bool {
        self.left.value() == 0.0 && self.right.value() == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.has_zero_boundary_data()
            && [&self.temp0, &self.flux0, &self.flux_rate0]
                .iter()
                .all(|f| f.iter().all(|&v| v == 0.0))
    }

    /// Checks sizes and that initial data agree with the boundary data at `t = 0`.
    pub fn validate(&self, n_nodes: usize) -> Result<()> {
        for (name, f) in [
            ("T0", &self.temp0),
            ("q0", &self.flux0),
            ("q0_dot", &self.flux_rate0),
        ] {
            if f.len() != n_nodes {
                return Err(DplError::invalid(format!(
                    "{name} has {} values, grid has {n_nodes} nodes",
                    f.len()
                )));
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Err(DplError::invalid(format!("{name} must be finite")));
            }
        }
        for end in [End::Left, End::Right] {
            let j = if end == End::Left { 0 } else { n_nodes - 1 };
            let (field, expected, what) = match self.end(end) {
                EndCondition::Temperature(v) => (self.temp0[j], v, "T0"),
                EndCondition::Flux(v) => (self.flux0[j], v * end.normal(), "q0"),
            };
            if (field - expected).abs() > CORNER_TOL * expected.abs().max(1.0) {
                return Err(DplError::invalid(format!(
                    "initial {what} = {field} at the {end:?} end is incompatible with its boundary value {expected}"
                )));
            }
            if !self.end(end).is_temperature() && self.flux_rate0[j].abs() > CORNER_TOL {
                return Err(DplError::invalid(format!(
                    "q0_dot must vanish at the {end:?} flux end (time-independent flux data)"
                )));
            }
        }
        Ok(())
    }

    /// Data of the sum problem; both operands must share end-condition kinds.
    pub fn superpose(&self, other: &ProblemData) -> Result<ProblemData> {
        let add =
            |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        if self.temp0.len() != other.temp0.len() {
            return Err(DplError::invalid("superposed data differ in size"));
        }
        let mismatch = || DplError::invalid("superposed data have different end-condition kinds");
        Ok(ProblemData {
            temp0: add(&self.temp0, &other.temp0),
            flux0: add(&self.flux0, &other.flux0),
            flux_rate0: add(&self.flux_rate0, &other.flux_rate0),
            left: self.left.plus(&other.left).ok_or_else(mismatch)?,
            right: self.right.plus(&other.right).ok_or_else(mismatch)?,
        })
    }
}

/// A complete transient problem on the rod.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub geometry: Geometry1D,
    pub material: MaterialField,
    pub delays: DelayPair,
    pub data: ProblemData,
}

impl Problem {
    pub fn new(
        geometry: Geometry1D,
        material: MaterialField,
        delays: DelayPair,
        data: ProblemData,
    ) -> Result<Self> {
        let n = geometry.n_nodes();
        if material.len() != n {
            return Err(DplError::invalid(format!(
                "material has {} nodes, grid has {n}",
                material.len()
            )));
        }
        data.validate(n)?;
        Ok(Self {
            geometry,
            material,
            delays,
            data,
        })
    }

    /// Problem with the same geometry, material and delays but zero data.
    pub fn zeroed(&self) -> Self {
        let zero_end = |c: EndCondition| match c {
            EndCondition::Temperature(_) => EndCondition::Temperature(0.0),
            EndCondition::Flux(_) => EndCondition::Flux(0.0),
        };
        let mut p = self.clone();
        p.data = ProblemData::zero(
            self.geometry.n_nodes(),
            zero_end(self.data.left),
            zero_end(self.data.right),
        );
        p.material = MaterialField::new(
            self.material.a().to_vec(),
            self.material.k().to_vec(),
            vec![0.0; self.geometry.n_nodes()],
        )
        .expect("material already validated");
        p
    }

    pub fn is_zero_data(&self) -> bool {
        self.data.is_zero() && !self.material.has_supply()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize) -> ProblemData {
        ProblemData::zero(n, EndCondition::Temperature(0.0), EndCondition::Flux(0.0))
    }

    #[test]
    fn validates_sizes() {
        assert!(data(17).validate(17).is_ok());
        assert!(data(16).validate(17).is_err());
    }

    #[test]
    fn corner_compatibility() {
        let mut d = data(17);
        d.temp0[0] = 1.0;
        assert!(d.validate(17).is_err());
        let mut d = data(17);
        d.right = EndCondition::Flux(2.0);
        d.flux0[16] = 2.0;
        assert!(d.validate(17).is_ok());
        d.left = EndCondition::Flux(2.0);
        assert!(d.validate(17).is_err(), "left normal points outward (-x)");
        d.flux0[0] = -2.0;
        assert!(d.validate(17).is_ok());
        d.flux_rate0[0] = 1.0;
        assert!(d.validate(17).is_err());
    }

    #[test]
    fn superposition_requires_matching_kinds() {
        let a = data(17);
        let mut b = data(17);
        b.temp0[3] = 2.0;
        let s = a.superpose(&b).unwrap();
        assert_eq!(s.temp0[3], 2.0);
        let c = ProblemData::zero(17, EndCondition::Flux(0.0), EndCondition::Flux(0.0));
        assert!(a.superpose(&c).is_err());
    }

    #[test]
    fn serde_end_condition() {
        let c: EndCondition = toml::from_str::<toml::Table>("x = { kind = \"flux\", value = 1.5 }")
            .unwrap()["x"]
            .clone()
            .try_into()
            .unwrap();
        assert_eq!(c, EndCondition::Flux(1.5));
    }
}
