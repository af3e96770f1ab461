//! Explicit time marching of the dual-phase-lag rod.
//!
//! The constitutive law and the energy balance are advanced as a first-order
//! system in the nodal fields `T`, `q` and `v = ∂q/∂t`:
//!
//! ```text
//! ∂T/∂t = (ρr − ∂q/∂x) / a
//! ∂q/∂t = v
//! ∂v/∂t = (2/τ_q²) [ −q − τ_q v − k ∂T/∂x − τ_T k ∂x(∂T/∂t) ]
//! ```
//!
//! Spatial derivatives are second-order central differences with second-order
//! one-sided closures at the rod ends; time stepping is classical RK4.

mod rates;
mod residual;
mod run;
mod state;

pub use rates::{rhs, Rates};
pub use residual::{ConstitutiveObserver, MaxNormObserver};
pub use run::{run, NullObserver, Observer, RunOptions, RunSummary, Snapshot, TrajectoryRecord};
pub use state::{step, StepControl, TransientState};

use crate::error::{DplError, Result};
use crate::model::{DelayPair, MaterialField};

/// Largest characteristic speed of the principal part `½τ_q² a T_ttt = τ_T k T_xxt`.
pub fn characteristic_speed(m: &MaterialField, d: DelayPair) -> Result<f64> {
    if d.tau_q() <= 0.0 || d.tau_t() <= 0.0 {
        return Err(DplError::DegenerateModel(format!(
            "characteristic speed needs tau_q > 0 and tau_T > 0 (tau_q={}, tau_T={})",
            d.tau_q(),
            d.tau_t()
        )));
    }
    Ok((2.0 * d.tau_t() * m.kappa_max() / m.a_min()).sqrt() / d.tau_q())
}

/// First derivative on a uniform grid: central inside, one-sided second order at the ends.
pub(crate) fn gradient_into(f: &[f64], dx: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 3 && out.len() == n);
    let inv2 = 0.5 / dx;
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    for j in 1..n - 1 {
        out[j] = (f[j + 1] - f[j - 1]) * inv2;
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
}

pub fn gradient(f: &[f64], dx: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    gradient_into(f, dx, &mut out);
    out
}
