//! Numerical laboratory for the time-differential dual-phase-lag model of
//! heat conduction.
//!
//! * [`model`]: delay times, rod geometry, material, data and the iterated
//!   time-integral operators.
//! * [`transient`]: RK4 time marching of the temperature / heat-flux system.
//! * [`analysis`]: energy functionals, the conservation-law residual and the
//!   continuous-dependence bounds, computed online during a run.
//! * [`influence`]: explicit signal-speed bounds and front tracking.
//! * [`steady`]: harmonic vibrations on a strip and their spatial decay.
//! * [`experiment`]: config loading, presets and the experiment runners
//!   behind the `dpl` binary.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod influence;
pub mod model;
pub mod steady;
pub mod transient;

pub use error::{DplError, Result};
