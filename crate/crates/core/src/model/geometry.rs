use serde::{Deserialize, Serialize};

use crate::error::{DplError, Result};

pub const MIN_CELLS: usize = 16;

/// A rod occupying `[-h, L]`, uniformly divided into `n_cells` cells.
///
/// The loaded extension `[-h, 0]` carries the data of influence-domain
/// experiments; `[0, L]` is the free region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry")]
pub struct Geometry1D {
    h: f64,
    length: f64,
    n_cells: usize,
}

#[derive(Deserialize)]
struct RawGeometry {
    h: f64,
    length: f64,
    n_cells: usize,
}

impl TryFrom<RawGeometry> for Geometry1D {
    type Error = DplError;
    fn try_from(r: RawGeometry) -> Result<Self> {
        Geometry1D::new(r.h, r.length, r.n_cells)
    }
}

impl Geometry1D {
    pub fn new(h: f64, length: f64, n_cells: usize) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) || !(length.is_finite() && length > 0.0) {
            return Err(DplError::invalid(format!(
                "rod extents must be positive (h={h}, L={length})"
            )));
        }
        if n_cells < MIN_CELLS {
            return Err(DplError::invalid(format!(
                "n_cells must be at least {MIN_CELLS}, got {n_cells}"
            )));
        }
        Ok(Self { h, length, n_cells })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        (self.h + self.length) / self.n_cells as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.h + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|j| self.x(j)).collect()
    }

    /// Same rod with `factor` times as many cells; every coarse node is a fine node.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_cells: self.n_cells * factor,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_nodes() {
        let g = Geometry1D::new(1.0, 3.0, 16).unwrap();
        assert_eq!(g.n_nodes(), 17);
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(16), 3.0);
        assert_eq!(g.refined(2).dx(), 0.125);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(Geometry1D::new(0.0, 1.0, 32).is_err());
        assert!(Geometry1D::new(1.0, -1.0, 32).is_err());
        assert!(Geometry1D::new(1.0, 1.0, 8).is_err());
    }
}
