//! Energy functionals of the once-integrated problem, the conservation law
//! they satisfy and the continuous-dependence estimates built from it.

mod data;
mod energy;

pub use data::{hat_flux_mismatch, tilde_temperature, HatData, TildeData};
pub use energy::{EnergyObserver, EnergyReport};
