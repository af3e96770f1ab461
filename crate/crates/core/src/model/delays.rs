use serde::{Deserialize, Serialize};

use crate::error::{DplError, Result};

/// Delay-time regime of the dual-phase-lag law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `tau_q <= 2 tau_T`: the thermodynamically compatible, stable range.
    Stable,
    /// `0 < 2 tau_T < tau_q`: solutions may grow exponentially in time.
    Growth,
    /// `tau_T = 0 < tau_q`: no uniqueness or stability statement is available.
    DegenerateZeroTauT,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Stable => "stable",
            Regime::Growth => "growth",
            Regime::DegenerateZeroTauT => "degenerate-zero-tau-t",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The two phase lags: `tau_q` on the heat flux, `tau_t` on the temperature gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDelays")]
pub struct DelayPair {
    #[serde(rename = "tau_q")]
    tau_q: f64,
    #[serde(rename = "tau_T")]
    tau_t: f64,
}

#[derive(Deserialize)]
struct RawDelays {
    tau_q: f64,
    #[serde(rename = "tau_T")]
    tau_t: f64,
}

impl TryFrom<RawDelays> for DelayPair {
    type Error = DplError;

    fn try_from(raw: RawDelays) -> Result<Self> {
        DelayPair::new(raw.tau_q, raw.tau_t)
    }
}

impl DelayPair {
    pub fn new(tau_q: f64, tau_t: f64) -> Result<Self> {
        if !tau_q.is_finite() || !tau_t.is_finite() || tau_q < 0.0 || tau_t < 0.0 {
            return Err(DplError::invalid(format!(
                "delay times must be finite and nonnegative (tau_q={tau_q}, tau_T={tau_t})"
            )));
        }
        Ok(Self { tau_q, tau_t })
    }

    pub fn tau_q(&self) -> f64 {
        self.tau_q
    }

    pub fn tau_t(&self) -> f64 {
        self.tau_t
    }

    pub fn regime(&self) -> Regime {
        classify_regime(*self)
    }

    /// `1/tau_T - 2/tau_q`, defined only when both delays are positive.
    pub fn sigma_sq(&self) -> Option<f64> {
        (self.tau_t > 0.0 && self.tau_q > 0.0).then(|| 1.0 / self.tau_t - 2.0 / self.tau_q)
    }

    /// `tau_q * (tau_T - tau_q / 2)`: sign flips between the two regimes.
    pub fn cross_coefficient(&self) -> f64 {
        self.tau_q * (self.tau_t - 0.5 * self.tau_q)
    }
}

pub fn classify_regime(d: DelayPair) -> Regime {
    if d.tau_q <= 2.0 * d.tau_t {
        Regime::Stable
    } else if d.tau_t == 0.0 {
        Regime::DegenerateZeroTauT
    } else {
        Regime::Growth
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn regime_examples() {
        assert_eq!(DelayPair::new(0.2, 0.1).unwrap().regime(), Regime::Stable);
        assert_eq!(DelayPair::new(0.5, 0.1).unwrap().regime(), Regime::Growth);
        assert_eq!(
            DelayPair::new(0.3, 0.0).unwrap().regime(),
            Regime::DegenerateZeroTauT
        );
        assert_eq!(DelayPair::new(0.0, 0.0).unwrap().regime(), Regime::Stable);
    }

    #[test]
    fn sigma_sq_growth_example_is_exact() {
        let d = DelayPair::new(0.5, 0.1).unwrap();
        assert_eq!(d.sigma_sq(), Some(6.0));
        assert_eq!(DelayPair::new(0.5, 0.0).unwrap().sigma_sq(), None);
        assert_eq!(DelayPair::new(0.0, 0.5).unwrap().sigma_sq(), None);
    }

    #[test]
    fn rejects_negative_and_nonfinite() {
        assert!(DelayPair::new(-1.0, 0.1).is_err());
        assert!(DelayPair::new(0.1, f64::NAN).is_err());
        assert!(DelayPair::new(f64::INFINITY, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn trichotomy(tq in 0.0f64..10.0, tt in 0.0f64..10.0) {
            let d = DelayPair::new(tq, tt).unwrap();
            let stable = tq <= 2.0 * tt;
            let growth = 0.0 < 2.0 * tt && 2.0 * tt < tq;
            let degenerate = tt == 0.0 && 0.0 < tq;
            prop_assert_eq!(stable as u8 + growth as u8 + degenerate as u8, 1);
            let expect = if stable { Regime::Stable } else if growth { Regime::Growth } else { Regime::DegenerateZeroTauT };
            prop_assert_eq!(d.regime(), expect);
            if d.regime() == Regime::Growth {
                prop_assert!(d.sigma_sq().unwrap() > 0.0);
            }
        }

        #[test]
        fn equality_boundary_is_stable(tt in 1e-6f64..10.0) {
            prop_assert_eq!(DelayPair::new(2.0 * tt, tt).unwrap().regime(), Regime::Stable);
        }
    }
}
