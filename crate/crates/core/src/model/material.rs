use crate::error::{DplError, Result};
use crate::model::{Geometry1D, Profile};

/// Nodal material coefficients on the rod plus the heat supply `rho * r`.
///
/// Conductivity is scalar (isotropic) per node, so the eigenvalue bounds of
/// the conductivity tensor reduce to pointwise values and their extrema.
/// The supply is constant in time.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialField {
    a: Vec<f64>,
    k: Vec<f64>,
    inv_k: Vec<f64>,
    rho_r: Vec<f64>,
    a_min: f64,
    a_max: f64,
    k_min: f64,
    k_max: f64,
}

impl MaterialField {
    pub fn new(a: Vec<f64>, k: Vec<f64>, rho_r: Vec<f64>) -> Result<Self> {
        if a.len() != k.len() || a.len() != rho_r.len() {
            return Err(DplError::invalid(format!(
                "material arrays differ in length (a={}, k={}, rho_r={})",
                a.len(),
                k.len(),
                rho_r.len()
            )));
        }
        if a.is_empty() {
            return Err(DplError::invalid("empty material field"));
        }
        if let Some(i) = a.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(DplError::invalid(format!(
                "heat capacity a must be positive, got {} at node {i}",
                a[i]
            )));
        }
        if let Some(i) = k.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(DplError::invalid(format!(
                "conductivity k must be positive, got {} at node {i}",
                k[i]
            )));
        }
        if rho_r.iter().any(|v| !v.is_finite()) {
            return Err(DplError::invalid("supply must be finite"));
        }
        let inv_k = k.iter().map(|v| 1.0 / v).collect();
        let (a_min, a_max) = min_max(&a);
        let (k_min, k_max) = min_max(&k);
        Ok(Self {
            a,
            k,
            inv_k,
            rho_r,
            a_min,
            a_max,
            k_min,
            k_max,
        })
    }

    pub fn uniform(geom: &Geometry1D, a: f64, k: f64) -> Result<Self> {
        let n = geom.n_nodes();
        Self::new(vec![a; n], vec![k; n], vec![0.0; n])
    }

    pub fn from_profiles(
        geom: &Geometry1D,
        a: &Profile,
        k: &Profile,
        rho_r: &Profile,
    ) -> Result<Self> {
        let xs = geom.nodes();
        Self::new(a.sample(&xs), k.sample(&xs), rho_r.sample(&xs))
    }

    pub fn with_supply(mut self, rho_r: Vec<f64>) -> Result<Self> {
        if rho_r.len() != self.a.len() {
            return Err(DplError::invalid("supply length mismatch"));
        }
        self.rho_r = rho_r;
        Self::new(self.a, self.k, self.rho_r)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    /// Inverse conductivity `K = 1/k`.
    pub fn inv_k(&self) -> &[f64] {
        &self.inv_k
    }

    pub fn rho_r(&self) -> &[f64] {
        &self.rho_r
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn kappa_min(&self) -> f64 {
        self.k_min
    }

    pub fn kappa_max(&self) -> f64 {
        self.k_max
    }

    pub fn has_supply(&self) -> bool {
        self.rho_r.iter().any(|&v| v != 0.0)
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_inverse() {
        let m = MaterialField::new(vec![1.0, 2.0, 3.0], vec![4.0, 0.5, 2.0], vec![0.0; 3]).unwrap();
        assert_eq!((m.a_min(), m.a_max()), (1.0, 3.0));
        assert_eq!((m.kappa_min(), m.kappa_max()), (0.5, 4.0));
        assert_eq!(m.inv_k(), &[0.25, 2.0, 0.5]);
        assert!(!m.has_supply());
    }

    #[test]
    fn rejects_nonpositive_coefficients() {
        assert!(MaterialField::new(vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0; 2]).is_err());
        assert!(MaterialField::new(vec![1.0, 1.0], vec![1.0, -1.0], vec![0.0; 2]).is_err());
        assert!(MaterialField::new(vec![1.0], vec![1.0, 1.0], vec![0.0; 2]).is_err());
    }
}
