//! Finite signal speed: explicit speed bounds and front tracking on a
//! marched trajectory.
//!
//! With data supported in `[−h, 0]` the pair `(T, q)` vanishes for
//! `x > c t`. The bound `c` is [`speed_bound_stable`] when
//! `0 < τ_q ≤ 2τ_T` and [`speed_bound_growth`] when `0 < 2τ_T < τ_q`.

use serde::Serialize;

use crate::error::{DplError, Result};
use crate::model::{DelayPair, Geometry1D, MaterialField, Regime};
use crate::transient::{characteristic_speed, Snapshot};

/// `c₀ = sqrt(κ_M/a_m) · sqrt(2τ_T/τ_q² + 1/(τ_T+τ_q))`.
pub fn speed_bound_stable(m: &MaterialField, d: DelayPair) -> Result<f64> {
    let (tq, tt) = (d.tau_q(), d.tau_t());
    if !(tq > 0.0 && tq <= 2.0 * tt) {
        return Err(DplError::Regime {
            operation: "speed_bound_stable",
            expected: "0 < tau_q <= 2 tau_T",
            actual: d.regime(),
        });
    }
    Ok((m.kappa_max() / m.a_min()).sqrt() * (2.0 * tt / (tq * tq) + 1.0 / (tt + tq)).sqrt())
}

/// `c₁ = (1/τ_q) sqrt(τ_T κ_M/a_m) sqrt((5τ_q² + 2τ_T² − 6τ_qτ_T)/(τ_T² + 2τ_q² − 3τ_Tτ_q))`.
pub fn speed_bound_growth(m: &MaterialField, d: DelayPair) -> Result<f64> {
    let (tq, tt) = (d.tau_q(), d.tau_t());
    if d.regime() != Regime::Growth {
        return Err(DplError::Regime {
            operation: "speed_bound_growth",
            expected: "0 < 2 tau_T < tau_q",
            actual: d.regime(),
        });
    }
    let num = 5.0 * tq * tq + 2.0 * tt * tt - 6.0 * tq * tt;
    let den = tt * tt + 2.0 * tq * tq - 3.0 * tt * tq;
    if !(den > 0.0 && num > 0.0) {
        return Err(DplError::Domain(format!(
            "speed bound ratio {num}/{den} is not positive for tau_q={tq}, tau_T={tt}"
        )));
    }
    Ok((tt * m.kappa_max() / m.a_min()).sqrt() * (num / den).sqrt() / tq)
}

/// The bound for whichever regime the delays fall in.
pub fn speed_bound(m: &MaterialField, d: DelayPair) -> Result<f64> {
    match d.regime() {
        Regime::Growth => speed_bound_growth(m, d),
        _ => speed_bound_stable(m, d),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontRecord {
    pub regime: Regime,
    pub times: Vec<f64>,
    pub front_position: Vec<f64>,
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub c_char: f64,
    /// Relative to `peak0`.
    pub threshold: f64,
    pub peak0: f64,
    /// Largest `max(|T|, |q|) / peak0` found beyond `x = c t`, per sample.
    pub beyond_bound: Vec<f64>,
    pub warnings: Vec<String>,
}

impl FrontRecord {
    pub fn c_bound(&self) -> f64 {
        self.c0.or(self.c1).expect("one bound is always set")
    }

    pub fn max_beyond_bound(&self) -> f64 {
        self.beyond_bound.iter().copied().fold(0.0, f64::max)
    }

    pub fn confined(&self, tol: f64) -> bool {
        self.max_beyond_bound() <= tol
    }

    pub fn truncated(&self) -> bool {
        !self.warnings.is_empty()
    }

    /// Least-squares slope of the front position over samples where the
    /// front has left its initial position and not reached the right end.
    pub fn empirical_speed(&self, right_end: f64) -> Option<f64> {
        let x0 = *self.front_position.first()?;
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.front_position)
            .filter(|(_, &x)| x > x0 && x < right_end)
            .map(|(&t, &x)| (t, x))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mt, mx) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (t, x)| (a + t / n, b + x / n));
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (t, x)| {
            (a + (t - mt) * (x - mx), b + (t - mt) * (t - mt))
        });
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Follow the largest `x` where `max(|T|, |q|)` exceeds `threshold · peak₀`.
///
/// `samples` must start with the initial state. The initial data must lie
/// below the threshold on `x > 0`.
pub fn track_front(
    samples: &[Snapshot],
    geometry: &Geometry1D,
    material: &MaterialField,
    delays: DelayPair,
    threshold: f64,
) -> Result<FrontRecord> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(DplError::invalid(format!(
            "front threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let first = samples
        .first()
        .ok_or_else(|| DplError::invalid("front tracking needs at least one sample"))?;
    let level = |s: &Snapshot, j: usize| s.temp[j].abs().max(s.flux[j].abs());
    let xs = geometry.nodes();
    let peak0 = (0..xs.len()).map(|j| level(first, j)).fold(0.0, f64::max);
    if peak0 > 0.0 {
        if let Some(j) = (0..xs.len()).find(|&j| xs[j] > 0.0 && level(first, j) > threshold * peak0)
        {
            return Err(DplError::invalid(format!(
                "initial data not supported in [-h, 0]: |field| = {:e} at x = {}",
                level(first, j),
                xs[j]
            )));
        }
    }
    let regime = delays.regime();
    let (c0, c1) = match regime {
        Regime::Growth => (None, Some(speed_bound_growth(material, delays)?)),
        _ => (Some(speed_bound_stable(material, delays)?), None),
    };
    let c = c0.or(c1).expect("set above");
    let c_char = characteristic_speed(material, delays)?;

    let right = geometry.x(xs.len() - 1);
    let mut rec = FrontRecord {
        regime,
        times: Vec::with_capacity(samples.len()),
        front_position: Vec::with_capacity(samples.len()),
        c0,
        c1,
        c_char,
        threshold,
        peak0,
        beyond_bound: Vec::with_capacity(samples.len()),
        warnings: Vec::new(),
    };
    for s in samples {
        let cutoff = threshold * peak0;
        let front = (0..xs.len())
            .rev()
            .find(|&j| peak0 > 0.0 && level(s, j) > cutoff)
            .map_or(-geometry.h(), |j| xs[j]);
        let beyond = if peak0 > 0.0 {
            (0..xs.len())
                .filter(|&j| xs[j] > c * s.t)
                .map(|j| level(s, j) / peak0)
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        if front >= right && rec.warnings.is_empty() {
            rec.warnings.push(format!(
                "front reached the right end at t = {}; shrink t_end or grow L",
                s.t
            ));
        }
        rec.times.push(s.t);
        rec.front_position.push(front);
        rec.beyond_bound.push(beyond);
    }
    Ok(rec)
}
