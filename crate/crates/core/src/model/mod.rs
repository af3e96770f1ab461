//! Problem definition for the dual-phase-lag rod: geometry, material,
//! delay times, initial and boundary data, and the iterated time-integral
//! operators used by the energy analysis.

mod accumulator;
mod delays;
mod geometry;
mod material;
mod problem;
mod profile;

pub use accumulator::{hat_transform, tilde_transform, IntegralAccumulator};
pub use delays::{classify_regime, DelayPair, Regime};
pub use geometry::{Geometry1D, MIN_CELLS};
pub use material::MaterialField;
pub use problem::{End, EndCondition, Problem, ProblemData};
pub use profile::Profile;

/// Composite trapezoid rule over uniformly spaced nodal samples.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dx * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// Trapezoid integral of a nodal product `Σ w_j f(j)`.
pub fn trapezoid_by(n: usize, dx: f64, f: impl Fn(usize) -> f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut s = 0.5 * (f(0) + f(n - 1));
    for j in 1..n - 1 {
        s += f(j);
    }
    s * dx
}
