use crate::error::Result;
use crate::model::Problem;
use crate::transient::{gradient, Observer, TransientState};

/// Tracks the largest `|T|`, `|q|` and `|v|` seen at any step.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxNormObserver {
    pub temp: f64,
    pub flux: f64,
    pub rate: f64,
}

impl MaxNormObserver {
    fn take(&mut self, s: &TransientState) {
        let (t, q, v) = s.max_abs();
        self.temp = self.temp.max(t);
        self.flux = self.flux.max(q);
        self.rate = self.rate.max(v);
    }
}

impl Observer for MaxNormObserver {
    fn start(&mut self, s: &TransientState, _: &Problem) -> Result<()> {
        self.take(s);
        Ok(())
    }

    fn after_step(&mut self, s: &TransientState, _: &Problem, _: bool) -> Result<()> {
        self.take(s);
        Ok(())
    }
}

/// `(t, T, q, v)` at one time level.
type Level = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

/// Residual of the constitutive law
/// `q + τ_q v + ½τ_q² v_t + k (T_x + τ_T ∂x T_t)` on the marched state.
///
/// Time derivatives are central differences over three consecutive time
/// levels, space derivatives the solver's stencil, so the residual measures
/// discretization error only. Reports the max over interior nodes at the
/// middle level of every window.
#[derive(Debug, Clone, Default)]
pub struct ConstitutiveObserver {
    window: Vec<Level>,
    pub times: Vec<f64>,
    pub residual: Vec<f64>,
}

impl ConstitutiveObserver {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }

    fn push(&mut self, s: &TransientState, p: &Problem) {
        self.window
            .push((s.t, s.temp.clone(), s.flux.clone(), s.rate.clone()));
        if self.window.len() < 3 {
            return;
        }
        if self.window.len() > 3 {
            self.window.remove(0);
        }
        let [(t0, temp0, _, rate0), (t1, temp1, flux1, rate1), (t2, temp2, _, rate2)] =
            [&self.window[0], &self.window[1], &self.window[2]];
        let (ha, hb) = (t1 - t0, t2 - t1);
        // second-order derivative on a possibly uneven three-point stencil
        let ddt = |f0: f64, f1: f64, f2: f64| {
            (-hb / (ha * (ha + hb))) * f0
                + ((hb - ha) / (ha * hb)) * f1
                + (ha / (hb * (ha + hb))) * f2
        };
        let n = temp1.len();
        let temp_t: Vec<f64> = (0..n).map(|j| ddt(temp0[j], temp1[j], temp2[j])).collect();
        let dx = p.geometry.dx();
        let gt = gradient(temp1, dx);
        let gtt = gradient(&temp_t, dx);
        let (tq, tt) = (p.delays.tau_q(), p.delays.tau_t());
        let k = p.material.k();
        let r = (1..n - 1)
            .map(|j| {
                let vt = ddt(rate0[j], rate1[j], rate2[j]);
                (flux1[j] + tq * rate1[j] + 0.5 * tq * tq * vt + k[j] * (gt[j] + tt * gtt[j])).abs()
            })
            .fold(0.0, f64::max);
        self.times.push(*t1);
        self.residual.push(r);
    }
}

impl Observer for ConstitutiveObserver {
    fn start(&mut self, s: &TransientState, p: &Problem) -> Result<()> {
        self.window.clear();
        self.times.clear();
        self.residual.clear();
        self.push(s, p);
        Ok(())
    }

    fn after_step(&mut self, s: &TransientState, p: &Problem, _: bool) -> Result<()> {
        self.push(s, p);
        Ok(())
    }
}
