use crate::error::Result;
use crate::model::{tilde_transform, DelayPair, Problem};
use crate::transient::{gradient, TransientState};

/// Source terms and initial values of the once-integrated (tilde) problem.
///
/// With a time-independent supply `ρr`, `ρr̃(t) = ρr (t + τ_T)` and
/// `R*(x, t) = ρr (t + τ_T) + a T⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeData {
    a_temp0: Vec<f64>,
    supply: Vec<f64>,
    tau_t: f64,
    pub phi: Vec<f64>,
    pub tilde_temp0: Vec<f64>,
    pub tilde_flux0: Vec<f64>,
    pub tilde_flux_rate0: Vec<f64>,
}

impl TildeData {
    pub fn new(p: &Problem) -> Self {
        let d = p.delays;
        let (tq, tt) = (d.tau_q(), d.tau_t());
        let m = &p.material;
        let data = &p.data;
        let grad_t0 = gradient(&data.temp0, p.geometry.dx());
        let phi = (0..grad_t0.len())
            .map(|j| {
                tt * grad_t0[j]
                    + m.inv_k()[j] * (tq * data.flux0[j] + 0.5 * tq * tq * data.flux_rate0[j])
            })
            .collect();
        Self {
            a_temp0: m.a().iter().zip(&data.temp0).map(|(a, t)| a * t).collect(),
            supply: m.rho_r().to_vec(),
            tau_t: tt,
            phi,
            tilde_temp0: data.temp0.iter().map(|v| tt * v).collect(),
            tilde_flux0: data.flux0.iter().map(|v| tt * v).collect(),
            tilde_flux_rate0: data
                .flux0
                .iter()
                .zip(&data.flux_rate0)
                .map(|(q, qd)| q + tt * qd)
                .collect(),
        }
    }

    pub fn r_star(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.supply.len()];
        self.r_star_into(t, &mut out);
        out
    }

    pub(crate) fn r_star_into(&self, t: f64, out: &mut [f64]) {
        let w = t + self.tau_t;
        for ((o, s), at0) in out.iter_mut().zip(&self.supply).zip(&self.a_temp0) {
            *o = s * w + at0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a_temp0
            .iter()
            .chain(&self.supply)
            .chain(&self.phi)
            .chain(&self.tilde_flux_rate0)
            .all(|&v| v == 0.0)
    }
}

/// Source and flux-shift terms of the twice-integrated (hat) problem.
#[derive(Debug, Clone, PartialEq)]
pub struct HatData {
    temp0: Vec<f64>,
    a: Vec<f64>,
    supply: Vec<f64>,
    vartheta_slope: Vec<f64>,
    vartheta_offset: Vec<f64>,
    tau_q: f64,
}

impl HatData {
    pub fn new(p: &Problem) -> Self {
        let (tq, tt) = (p.delays.tau_q(), p.delays.tau_t());
        let data = &p.data;
        let grad_t0 = gradient(&data.temp0, p.geometry.dx());
        let k = p.material.k();
        Self {
            temp0: data.temp0.clone(),
            a: p.material.a().to_vec(),
            supply: p.material.rho_r().to_vec(),
            vartheta_slope: (0..k.len())
                .map(|j| {
                    tt * k[j] * grad_t0[j] + tq * data.flux0[j] + 0.5 * tq * tq * data.flux_rate0[j]
                })
                .collect(),
            vartheta_offset: data.flux0.iter().map(|q| 0.5 * tq * tq * q).collect(),
            tau_q: tq,
        }
    }

    /// `R = ρr̂ + a (t + τ_q) T⁰` for a time-independent supply.
    pub fn r(&self, t: f64) -> Vec<f64> {
        let tq = self.tau_q;
        let w = 0.5 * t * t + tq * t + 0.5 * tq * tq;
        (0..self.a.len())
            .map(|j| self.supply[j] * w + self.a[j] * (t + tq) * self.temp0[j])
            .collect()
    }

    /// Flux shift `ϑ(x, t)`, linear in time.
    pub fn vartheta(&self, t: f64) -> Vec<f64> {
        self.vartheta_slope
            .iter()
            .zip(&self.vartheta_offset)
            .map(|(s, o)| s * t + o)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.temp0
            .iter()
            .chain(&self.supply)
            .chain(&self.vartheta_slope)
            .chain(&self.vartheta_offset)
            .all(|&v| v == 0.0)
    }
}

/// `T̃ = T' + τ_T T` from the state's accumulators.
pub fn tilde_temperature(s: &TransientState, d: DelayPair) -> Result<Vec<f64>> {
    tilde_transform(&s.acc_temp, &s.temp, d, s.t)
}

/// Max-norm mismatch of the hat constitutive relation
/// `q̂ = −k (T''_x + τ_T T'_x) + ϑ` on the marched state.
pub fn hat_flux_mismatch(s: &TransientState, p: &Problem, hat: &HatData) -> Result<f64> {
    let q_hat = crate::model::hat_transform(&s.acc_flux, &s.flux, p.delays, s.t)?;
    let dx = p.geometry.dx();
    let g2 = gradient(s.acc_temp.level2(), dx);
    let g1 = gradient(s.acc_temp.level1(), dx);
    let th = hat.vartheta(s.t);
    let k = p.material.k();
    let tt = p.delays.tau_t();
    Ok((0..q_hat.len())
        .map(|j| (q_hat[j] - (-k[j] * (g2[j] + tt * g1[j]) + th[j])).abs())
        .fold(0.0, f64::max))
}
