//! Harmonic vibrations `{T, q} = {θ, Q} e^{iωt}` on a strip
//! `0 ≤ x₁ ≤ W`, `0 ≤ x₃ ≤ L` and the spatial decay of their amplitude.
//!
//! Eliminating `Q` leaves
//!
//! ```text
//! (1 + iωτ_T) ∇·(k ∇θ) = iω a (1 + iωτ_q − ½τ_q²ω²) θ
//! ```
//!
//! with `θ = 0` on the lateral sides and at `x₃ = L`, and `θ = h(x₁)` at
//! `x₃ = 0`. The five-point discretization is solved by a banded LU.

mod banded;
mod decay;
mod solve;

pub use banded::{BandLu, BandMatrix};
pub use decay::{
    certify_decay, decay_certificate, decay_measure, energy_density, identity_residual,
    lower_measure, membrane_ratio, DecayVerdict, IdentityCheck,
};
pub use solve::{
    assemble_and_solve, separable_solution, solve_with_coefficients, SeparableSolution,
    SteadyAmplitude,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DplError, Result};
use crate::model::{DelayPair, Profile};

/// Uniform node grid on `[0, W] × [0, L]`; `x₁` varies fastest in storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStrip")]
pub struct StripGeometry {
    width: f64,
    length: f64,
    nx1: usize,
    nx3: usize,
}

#[derive(Deserialize)]
struct RawStrip {
    width: f64,
    length: f64,
    nx1: usize,
    nx3: usize,
}

impl TryFrom<RawStrip> for StripGeometry {
    type Error = DplError;
    fn try_from(r: RawStrip) -> Result<Self> {
        Self::new(r.width, r.length, r.nx1, r.nx3)
    }
}

impl StripGeometry {
    pub fn new(width: f64, length: f64, nx1: usize, nx3: usize) -> Result<Self> {
        if !(width.is_finite() && width > 0.0 && length.is_finite() && length > 0.0) {
            return Err(DplError::invalid(format!(
                "strip width and length must be positive, got W={width}, L={length}"
            )));
        }
        if nx1 < 5 || nx3 < 5 {
            return Err(DplError::invalid(format!(
                "strip needs at least 5 nodes per direction, got {nx1}x{nx3}"
            )));
        }
        Ok(Self {
            width,
            length,
            nx1,
            nx3,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nx1(&self) -> usize {
        self.nx1
    }

    pub fn nx3(&self) -> usize {
        self.nx3
    }

    pub fn dx1(&self) -> f64 {
        self.width / (self.nx1 - 1) as f64
    }

    pub fn dx3(&self) -> f64 {
        self.length / (self.nx3 - 1) as f64
    }

    pub fn x1(&self, j: usize) -> f64 {
        j as f64 * self.dx1()
    }

    pub fn x3(&self, j: usize) -> f64 {
        j as f64 * self.dx3()
    }

    pub fn index(&self, j1: usize, j3: usize) -> usize {
        j3 * self.nx1 + j1
    }

    pub fn len(&self) -> usize {
        self.nx1 * self.nx3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lowest clamped-membrane eigenvalue `(π/W)²` of the cross-section.
    pub fn membrane_eigenvalue(&self) -> f64 {
        (std::f64::consts::PI / self.width).powi(2)
    }

    /// The same eigenvalue for the three-point Dirichlet Laplacian.
    pub fn discrete_membrane_eigenvalue(&self) -> f64 {
        let d = self.dx1();
        2.0 / (d * d) * (1.0 - (std::f64::consts::PI * d / self.width).cos())
    }

    /// Grid with every spacing halved `levels` times.
    pub fn refined(&self, levels: u32) -> Self {
        let f = 1usize << levels;
        Self {
            nx1: (self.nx1 - 1) * f + 1,
            nx3: (self.nx3 - 1) * f + 1,
            ..*self
        }
    }
}

/// Nodal heat capacity `a` and conductivity `k` on the strip.
#[derive(Debug, Clone, PartialEq)]
pub struct StripMaterial {
    a: Vec<f64>,
    k: Vec<f64>,
}

impl StripMaterial {
    pub fn new(geom: &StripGeometry, a: Vec<f64>, k: Vec<f64>) -> Result<Self> {
        if a.len() != geom.len() || k.len() != geom.len() {
            return Err(DplError::invalid(
                "strip material size does not match the grid",
            ));
        }
        if let Some(v) = a.iter().chain(&k).find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(DplError::invalid(format!(
                "strip coefficients must be positive and finite, found {v}"
            )));
        }
        Ok(Self { a, k })
    }

    pub fn uniform(geom: &StripGeometry, a: f64, k: f64) -> Result<Self> {
        Self::new(geom, vec![a; geom.len()], vec![k; geom.len()])
    }

    /// Coefficients from functions of `(x₁, x₃)`.
    pub fn from_fn(
        geom: &StripGeometry,
        a: impl Fn(f64, f64) -> f64,
        k: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut av = Vec::with_capacity(geom.len());
        let mut kv = Vec::with_capacity(geom.len());
        for j3 in 0..geom.nx3() {
            for j1 in 0..geom.nx1() {
                let (x1, x3) = (geom.x1(j1), geom.x3(j3));
                av.push(a(x1, x3));
                kv.push(k(x1, x3));
            }
        }
        Self::new(geom, av, kv)
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn a_max(&self) -> f64 {
        self.a.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn kappa_min(&self) -> f64 {
        self.k.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self) -> f64 {
        self.k.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `ω_c = sqrt(λ κ_m / (τ_q a_M))`; `+∞` when `τ_q = 0`.
pub fn critical_frequency(geom: &StripGeometry, m: &StripMaterial, d: DelayPair) -> f64 {
    if d.tau_q() == 0.0 {
        return f64::INFINITY;
    }
    (geom.membrane_eigenvalue() * m.kappa_min() / (d.tau_q() * m.a_max())).sqrt()
}

/// Certified decay length
/// `ν = sqrt(λ) sqrt(1 + τ_T²ω²) κ_M / (2 (λ κ_m − τ_q a_M ω²))`.
pub fn decay_rate(
    geom: &StripGeometry,
    m: &StripMaterial,
    d: DelayPair,
    omega: f64,
) -> Result<f64> {
    let omega_c = critical_frequency(geom, m, d);
    if omega.is_nan() || omega <= 0.0 || omega >= omega_c {
        return Err(DplError::AboveCriticalFrequency { omega, omega_c });
    }
    let lambda = geom.membrane_eigenvalue();
    let tt = d.tau_t();
    Ok(
        lambda.sqrt() * (1.0 + tt * tt * omega * omega).sqrt() * m.kappa_max()
            / (2.0 * (lambda * m.kappa_min() - d.tau_q() * m.a_max() * omega * omega)),
    )
}

/// Coefficients `(α, β)` of `α K_h θ + β a θ = 0`, where `K_h = −∇·k∇`.
pub fn operator_coefficients(d: DelayPair, omega: f64) -> (Complex64, Complex64) {
    let (tq, tt) = (d.tau_q(), d.tau_t());
    let alpha = Complex64::new(1.0, omega * tt);
    let beta = Complex64::new(0.0, omega)
        * Complex64::new(1.0 - 0.5 * tq * tq * omega * omega, omega * tq);
    (alpha, beta)
}

/// Sample the base profile `h(x₁)`, check it vanishes at both sides and
/// pin the two corner values to zero.
pub fn base_profile(geom: &StripGeometry, h: &Profile) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = (0..geom.nx1()).map(|j| h.eval(geom.x1(j))).collect();
    let ends = [v[0], v[geom.nx1() - 1]];
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    if ends.iter().any(|e| e.abs() > 1e-8 * scale) {
        return Err(DplError::invalid(format!(
            "base profile must vanish at x1 = 0 and x1 = W, got {} and {}",
            ends[0], ends[1]
        )));
    }
    let last = v.len() - 1;
    v[0] = 0.0;
    v[last] = 0.0;
    Ok(v)
}
