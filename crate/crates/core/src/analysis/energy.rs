use serde::Serialize;

use crate::analysis::TildeData;
use crate::error::{DplError, Result};
use crate::model::{trapezoid_by, DelayPair, IntegralAccumulator, Problem, Regime};
use crate::transient::{Observer, TransientState};

/// Time series produced by [`EnergyObserver`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct EnergyReport {
    pub regime: Option<Regime>,
    pub horizon: f64,
    pub times: Vec<f64>,
    #[serde(rename = "E")]
    pub energy: Vec<f64>,
    #[serde(rename = "F")]
    pub energy_f: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub conservation_residual: Vec<f64>,
    pub bound_stable: Option<Vec<f64>>,
    pub bound_growth: Option<Vec<f64>>,
    pub g_cum: Vec<f64>,
}

impl EnergyReport {
    /// Largest `|LHS − RHS| / max(|LHS|, |RHS|)` over samples with a nonzero side.
    pub fn max_relative_residual(&self) -> f64 {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .filter_map(|(l, r)| {
                let scale = l.abs().max(r.abs());
                (scale > 0.0).then(|| (l - r).abs() / scale)
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.conservation_residual
            .iter()
            .fold(0.0, |m, r| f64::max(m, r.abs()))
    }

    /// The regime's bound paired with the quantity it controls:
    /// `(sqrt(E), RHS)` when stable, `(sqrt(F), RHS)` under growth.
    pub fn bound_pairs(&self) -> Option<Vec<(f64, f64)>> {
        if let Some(b) = &self.bound_stable {
            Some(
                self.energy
                    .iter()
                    .map(|e| e.max(0.0).sqrt())
                    .zip(b.iter().copied())
                    .collect(),
            )
        } else {
            self.bound_growth.as_ref().map(|b| {
                self.energy_f
                    .iter()
                    .map(|f| f.max(0.0).sqrt())
                    .zip(b.iter().copied())
                    .collect()
            })
        }
    }

    /// Smallest `(RHS − sqrt(·)) / RHS`; `+inf` when there is no bound or every RHS is zero.
    pub fn min_relative_margin(&self) -> f64 {
        self.bound_pairs()
            .unwrap_or_default()
            .into_iter()
            .map(|(lhs, rhs)| {
                if rhs > 0.0 {
                    (rhs - lhs) / rhs
                } else if lhs > 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Online evaluation of the energy functionals and the conservation law
/// of the once-integrated problem.
///
/// Every space integral is a nodal trapezoid sum, every time integral a
/// trapezoid accumulator advanced once per step. Requires zero boundary data.
pub struct EnergyObserver {
    delays: DelayPair,
    horizon: f64,
    tilde: Option<TildeData>,
    // integrands: a T̃², K q'², K q², R* T̃, φ q', R*²/a
    acc: Option<[IntegralAccumulator; 6]>,
    g_cum: IntegralAccumulator,
    g_weighted: IntegralAccumulator,
    initial_bracket: f64,
    initial_energy_rhs: f64,
    last: Integrands,
    report: EnergyReport,
    scratch: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Integrands {
    a_tt: f64,
    k_q1q1: f64,
    k_qq: f64,
    r_t: f64,
    phi_q1: f64,
    rr: f64,
}

impl Integrands {
    fn as_array(self) -> [f64; 6] {
        [
            self.a_tt,
            self.k_q1q1,
            self.k_qq,
            self.r_t,
            self.phi_q1,
            self.rr,
        ]
    }
}

impl EnergyObserver {
    /// `horizon` is the length `S` of the time interval on which the bounds are stated.
    pub fn new(delays: DelayPair, horizon: f64) -> Self {
        Self {
            delays,
            horizon,
            tilde: None,
            acc: None,
            g_cum: IntegralAccumulator::scalar(0.0, 0.0),
            g_weighted: IntegralAccumulator::scalar(0.0, 0.0),
            initial_bracket: 0.0,
            initial_energy_rhs: 0.0,
            last: Integrands::default(),
            report: EnergyReport {
                regime: Some(delays.regime()),
                horizon,
                ..Default::default()
            },
            scratch: Vec::new(),
        }
    }

    pub fn report(&self) -> &EnergyReport {
        &self.report
    }

    pub fn into_report(self) -> EnergyReport {
        self.report
    }

    fn integrands(&mut self, s: &TransientState, p: &Problem) -> Integrands {
        let tilde = self.tilde.as_ref().expect("observer started");
        let tt = self.delays.tau_t();
        let (a, kinv) = (p.material.a(), p.material.inv_k());
        let t1 = s.acc_temp.level1();
        let q1 = s.acc_flux.level1();
        let n = s.n_nodes();
        let dx = p.geometry.dx();
        self.scratch.resize(n, 0.0);
        tilde.r_star_into(s.t, &mut self.scratch);
        let rs = &self.scratch;
        let tt_at = |j: usize| t1[j] + tt * s.temp[j];
        Integrands {
            a_tt: trapezoid_by(n, dx, |j| a[j] * tt_at(j) * tt_at(j)),
            k_q1q1: trapezoid_by(n, dx, |j| kinv[j] * q1[j] * q1[j]),
            k_qq: trapezoid_by(n, dx, |j| kinv[j] * s.flux[j] * s.flux[j]),
            r_t: trapezoid_by(n, dx, |j| rs[j] * tt_at(j)),
            phi_q1: trapezoid_by(n, dx, |j| tilde.phi[j] * q1[j]),
            rr: trapezoid_by(n, dx, |j| rs[j] * rs[j] / a[j]),
        }
    }

    fn acc(&self) -> &[IntegralAccumulator; 6] {
        self.acc.as_ref().expect("observer started")
    }

    /// `E(t) = ½∫₀ᵗ∫ a T̃² + ½∫₀ᵗ∫₀ˢ∫ K q'q'`.
    pub fn energy_e(&self) -> f64 {
        let acc = self.acc();
        0.5 * acc[0].value1() + 0.5 * acc[1].value2()
    }

    /// `F(t) = E(t) + ¼ τ_T τ_q² ∫₀ᵗ∫ K q q`.
    pub fn energy_f(&self) -> f64 {
        let (tq, tt) = (self.delays.tau_q(), self.delays.tau_t());
        self.energy_e() + 0.25 * tt * tq * tq * self.acc()[2].value1()
    }

    /// Left and right sides of the conservation law at the current time.
    pub fn conservation_sides(&self) -> (f64, f64) {
        let acc = self.acc();
        let (tq, tt) = (self.delays.tau_q(), self.delays.tau_t());
        let t = acc[0].t();
        let lhs = self.energy_e()
            + 0.5 * (tt + tq) * acc[1].value1()
            + 0.25 * tt * tq * tq * acc[2].value1()
            + 0.25 * tq * tq * self.last.k_q1q1
            + 0.5 * acc[1].value2()
            + self.delays.cross_coefficient() * acc[2].value2();
        let rhs = 0.5 * t * self.initial_energy_rhs
            + acc[3].value2()
            + acc[4].value2()
            + tt * acc[4].value1();
        (lhs, rhs)
    }

    pub fn conservation_residual(&self) -> f64 {
        let (l, r) = self.conservation_sides();
        l - r
    }

    /// `g(t) = (∫₀ᵗ∫ R*²/a)^½`.
    pub fn g(&self) -> f64 {
        self.acc()[5].value1().max(0.0).sqrt()
    }

    /// Right side of the stable-regime estimate for `sqrt(E)`.
    pub fn bound_stable(&self) -> Result<f64> {
        self.require(Regime::Stable, "bound_stable", "0 <= tau_q <= 2 tau_T")?;
        Ok(self.g_cum.value1() / std::f64::consts::SQRT_2 + self.initial_bracket.sqrt())
    }

    /// Right side of the growth-regime estimate for `sqrt(F)`.
    pub fn bound_growth(&self) -> Result<f64> {
        self.require(Regime::Growth, "bound_growth", "0 < 2 tau_T < tau_q")?;
        let sigma_sq = self
            .delays
            .sigma_sq()
            .expect("growth regime has both delays positive");
        let growth = (sigma_sq * self.g_weighted.t()).exp();
        Ok(growth * self.g_weighted.value1() / std::f64::consts::SQRT_2
            + growth * self.initial_bracket.sqrt())
    }

    fn require(&self, regime: Regime, op: &'static str, expected: &'static str) -> Result<()> {
        let actual = self.delays.regime();
        if actual != regime {
            return Err(DplError::Regime {
                operation: op,
                expected,
                actual,
            });
        }
        Ok(())
    }

    fn record(&mut self) {
        let t = self.acc()[0].t();
        let (lhs, rhs) = self.conservation_sides();
        let e = self.energy_e();
        let f = self.energy_f();
        let g_cum = self.g_cum.value1();
        let stable = self.bound_stable().ok();
        let growth = self.bound_growth().ok();
        let r = &mut self.report;
        r.times.push(t);
        r.energy.push(e);
        r.energy_f.push(f);
        r.lhs.push(lhs);
        r.rhs.push(rhs);
        r.conservation_residual.push(lhs - rhs);
        r.g_cum.push(g_cum);
        if let Some(b) = stable {
            r.bound_stable.get_or_insert_with(Vec::new).push(b);
        }
        if let Some(b) = growth {
            r.bound_growth.get_or_insert_with(Vec::new).push(b);
        }
    }
}

impl Observer for EnergyObserver {
    fn start(&mut self, s: &TransientState, p: &Problem) -> Result<()> {
        if !p.data.has_zero_boundary_data() {
            return Err(DplError::UnsupportedSetting(
                "energy analysis needs zero boundary data (temperature and flux ends set to 0)"
                    .into(),
            ));
        }
        if s.t != 0.0 {
            return Err(DplError::invalid("energy observer must start at t = 0"));
        }
        let tilde = TildeData::new(p);
        let (tq, tt) = (self.delays.tau_q(), self.delays.tau_t());
        let (a, kinv) = (p.material.a(), p.material.inv_k());
        let n = s.n_nodes();
        let dx = p.geometry.dx();
        let t0 = &p.data.temp0;
        let q0 = &p.data.flux0;
        let a_tt0 = trapezoid_by(n, dx, |j| a[j] * tt * tt * t0[j] * t0[j]);
        let k_q0q0 = trapezoid_by(n, dx, |j| kinv[j] * q0[j] * q0[j]);
        // scalar conductivity: the smallest eigenvalue of K at a node is 1/k there
        let phi_sq_over_km = trapezoid_by(n, dx, |j| tilde.phi[j] * tilde.phi[j] / kinv[j]);
        let big_s = self.horizon;
        self.initial_energy_rhs = a_tt0 + 0.5 * tt * tq * tq * k_q0q0;
        self.initial_bracket = 0.5 * big_s * (self.initial_energy_rhs + tt * phi_sq_over_km)
            + 0.25 * big_s * big_s * phi_sq_over_km;
        self.tilde = Some(tilde);

        self.acc = Some(std::array::from_fn(|_| {
            IntegralAccumulator::scalar(0.0, 0.0)
        }));
        let first = self.integrands(s, p);
        self.acc = Some(
            first
                .as_array()
                .map(|v| IntegralAccumulator::scalar(v, 0.0)),
        );
        self.last = first;
        self.g_cum = IntegralAccumulator::scalar(0.0, 0.0);
        self.g_weighted = IntegralAccumulator::scalar(0.0, 0.0);
        self.report = EnergyReport {
            regime: Some(self.delays.regime()),
            horizon: self.horizon,
            ..Default::default()
        };
        self.record();
        Ok(())
    }

    fn after_step(&mut self, s: &TransientState, p: &Problem, sample: bool) -> Result<()> {
        let cur = self.integrands(s, p);
        let acc = self.acc.as_mut().expect("observer started");
        for (a, v) in acc.iter_mut().zip(cur.as_array()) {
            a.advance_scalar(v, s.t);
        }
        self.last = cur;
        let g = self.g();
        self.g_cum.advance_scalar(g, s.t);
        let weight = self.delays.sigma_sq().map_or(1.0, |sg| (-sg * s.t).exp());
        self.g_weighted.advance_scalar(weight * g, s.t);
        if sample {
            self.record();
        }
        Ok(())
    }
}
