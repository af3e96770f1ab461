use serde::Serialize;

use crate::error::{DplError, Result};
use crate::model::{EndCondition, IntegralAccumulator, Problem};
use crate::transient::characteristic_speed;
use crate::transient::rates::{rhs_into, Rates, Workspace};

/// Time step selection for the explicit scheme.
///
/// `dt <= cfl_safety * dx / c_char` and `dt <= relax_safety * tau_q`, and
/// `dt` divides `t_end` into a whole number of steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    pub dt: f64,
    pub cfl_safety: f64,
    pub t_end: f64,
    pub relax_safety: f64,
}

impl StepControl {
    pub fn new(p: &Problem, cfl_safety: f64, relax_safety: f64, t_end: f64) -> Result<Self> {
        for (name, v) in [("cfl_safety", cfl_safety), ("relax_safety", relax_safety)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(DplError::StepControl(format!(
                    "{name} must lie in (0, 1], got {v}"
                )));
            }
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(DplError::StepControl(format!(
                "t_end must be >= 0, got {t_end}"
            )));
        }
        let c = characteristic_speed(&p.material, p.delays)?;
        let dt_max = (cfl_safety * p.geometry.dx() / c).min(relax_safety * p.delays.tau_q());
        let dt = if t_end == 0.0 {
            dt_max
        } else {
            t_end / (t_end / dt_max).ceil()
        };
        Ok(Self {
            dt,
            cfl_safety,
            t_end,
            relax_safety,
        })
    }

    /// A control with an arbitrary step, bypassing the stability bounds.
    pub fn with_dt(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            cfl_safety: f64::NAN,
            t_end,
            relax_safety: f64::NAN,
        }
    }

    /// The same control with the step divided exactly by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            dt: self.dt / factor as f64,
            ..*self
        }
    }

    pub fn n_steps(&self) -> usize {
        if self.t_end == 0.0 {
            0
        } else {
            (self.t_end / self.dt).round() as usize
        }
    }

    /// Time after `n` steps; the last step lands exactly on `t_end`.
    pub fn time_at(&self, n: usize) -> f64 {
        if n == self.n_steps() {
            self.t_end
        } else {
            n as f64 * self.dt
        }
    }
}

/// Nodal fields at one time level plus running time integrals of `T` and `q`.
#[derive(Debug, Clone)]
pub struct TransientState {
    pub t: f64,
    pub step_index: usize,
    pub temp: Vec<f64>,
    pub flux: Vec<f64>,
    pub rate: Vec<f64>,
    /// ∫T, ∫∫T, ∫∫∫T per node.
    pub acc_temp: IntegralAccumulator,
    /// ∫q, ∫∫q, ∫∫∫q per node.
    pub acc_flux: IntegralAccumulator,
    scratch: Scratch,
}

#[derive(Debug, Clone)]
struct Scratch {
    ws: Workspace,
    k: [Rates; 4],
    stage: [Vec<f64>; 3],
}

impl TransientState {
    pub fn initial(p: &Problem) -> Self {
        let n = p.geometry.n_nodes();
        let mut s = Self {
            t: 0.0,
            step_index: 0,
            temp: p.data.temp0.clone(),
            flux: p.data.flux0.clone(),
            rate: p.data.flux_rate0.clone(),
            acc_temp: IntegralAccumulator::new(&p.data.temp0, 0.0),
            acc_flux: IntegralAccumulator::new(&p.data.flux0, 0.0),
            scratch: Scratch {
                ws: Workspace::new(n),
                k: std::array::from_fn(|_| Rates::zeros(n)),
                stage: std::array::from_fn(|_| vec![0.0; n]),
            },
        };
        impose_boundary(&mut s.temp, &mut s.flux, &mut s.rate, p);
        s
    }

    pub fn n_nodes(&self) -> usize {
        self.temp.len()
    }

    pub fn max_abs(&self) -> (f64, f64, f64) {
        let m = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        (m(&self.temp), m(&self.flux), m(&self.rate))
    }

    /// Rates at the current state.
    pub fn rates(&self, p: &Problem) -> Result<Rates> {
        crate::transient::rhs(&self.temp, &self.flux, &self.rate, p)
    }
}

fn impose_boundary(temp: &mut [f64], flux: &mut [f64], rate: &mut [f64], p: &Problem) {
    let n = temp.len();
    for (j, cond, normal) in [(0, p.data.left, -1.0), (n - 1, p.data.right, 1.0)] {
        match cond {
            EndCondition::Temperature(v) => temp[j] = v,
            EndCondition::Flux(v) => {
                flux[j] = v * normal;
                rate[j] = 0.0;
            }
        }
    }
}

fn fill_stage(stage: &mut [Vec<f64>; 3], base: [&[f64]; 3], k: &Rates, h: f64) {
    for j in 0..stage[0].len() {
        stage[0][j] = base[0][j] + h * k.temp[j];
        stage[1][j] = base[1][j] + h * k.flux[j];
        stage[2][j] = base[2][j] + h * k.rate[j];
    }
}

/// One classical RK4 step; accumulators advance with trapezoid samples at both ends.
pub fn step(s: &mut TransientState, p: &Problem, ctl: &StepControl) -> Result<()> {
    let n = s.n_nodes();
    let next_index = s.step_index + 1;
    let t_new = if next_index == ctl.n_steps() {
        ctl.t_end
    } else {
        s.t + ctl.dt
    };
    let dt = t_new - s.t;
    let Scratch { ws, k, stage } = &mut s.scratch;
    let [k1, k2, k3, k4] = k;

    rhs_into(&s.temp, &s.flux, &s.rate, p, ws, k1)?;
    fill_stage(stage, [&s.temp, &s.flux, &s.rate], k1, 0.5 * dt);
    rhs_into(&stage[0], &stage[1], &stage[2], p, ws, k2)?;
    fill_stage(stage, [&s.temp, &s.flux, &s.rate], k2, 0.5 * dt);
    rhs_into(&stage[0], &stage[1], &stage[2], p, ws, k3)?;
    fill_stage(stage, [&s.temp, &s.flux, &s.rate], k3, dt);
    rhs_into(&stage[0], &stage[1], &stage[2], p, ws, k4)?;

    let w = dt / 6.0;
    for j in 0..n {
        s.temp[j] += w * (k1.temp[j] + 2.0 * k2.temp[j] + 2.0 * k3.temp[j] + k4.temp[j]);
        s.flux[j] += w * (k1.flux[j] + 2.0 * k2.flux[j] + 2.0 * k3.flux[j] + k4.flux[j]);
        s.rate[j] += w * (k1.rate[j] + 2.0 * k2.rate[j] + 2.0 * k3.rate[j] + k4.rate[j]);
    }
    impose_boundary(&mut s.temp, &mut s.flux, &mut s.rate, p);

    let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
    if !(finite(&s.temp) && finite(&s.flux) && finite(&s.rate)) {
        return Err(DplError::Divergence {
            step: next_index,
            t: t_new,
        });
    }
    s.acc_temp.advance(&s.temp, t_new);
    s.acc_flux.advance(&s.flux, t_new);
    s.t = t_new;
    s.step_index = next_index;
    Ok(())
}
