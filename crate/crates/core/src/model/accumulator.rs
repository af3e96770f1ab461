use crate::error::{DplError, Result};
use crate::model::DelayPair;

/// Running iterated time integrals of a nodal field (or of a scalar, as a
/// length-one field), advanced with the composite trapezoid rule.
///
/// `level1 = ∫₀ᵗ f`, `level2 = ∫₀ᵗ∫₀ˢ f`, `level3` one more fold. Each level
/// integrates the previous one, so all three are second order in the step.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralAccumulator {
    level1: Vec<f64>,
    level2: Vec<f64>,
    level3: Vec<f64>,
    last_sample: Vec<f64>,
    t: f64,
}

impl IntegralAccumulator {
    pub fn new(initial_sample: &[f64], t0: f64) -> Self {
        let n = initial_sample.len();
        Self {
            level1: vec![0.0; n],
            level2: vec![0.0; n],
            level3: vec![0.0; n],
            last_sample: initial_sample.to_vec(),
            t: t0,
        }
    }

    pub fn scalar(initial: f64, t0: f64) -> Self {
        Self::new(&[initial], t0)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.last_sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.last_sample.is_empty()
    }

    pub fn level1(&self) -> &[f64] {
        &self.level1
    }

    pub fn level2(&self) -> &[f64] {
        &self.level2
    }

    pub fn level3(&self) -> &[f64] {
        &self.level3
    }

    pub fn last_sample(&self) -> &[f64] {
        &self.last_sample
    }

    /// Scalar views for length-one accumulators.
    pub fn value1(&self) -> f64 {
        self.level1[0]
    }

    pub fn value2(&self) -> f64 {
        self.level2[0]
    }

    pub fn value3(&self) -> f64 {
        self.level3[0]
    }

    /// Advance to `t_new` given the integrand sampled there.
    #[allow(clippy::needless_range_loop)]
    pub fn advance(&mut self, sample: &[f64], t_new: f64) {
        assert_eq!(sample.len(), self.len(), "accumulator sample length");
        let half = 0.5 * (t_new - self.t);
        for i in 0..sample.len() {
            let l1 = self.level1[i] + half * (self.last_sample[i] + sample[i]);
            let l2 = self.level2[i] + half * (self.level1[i] + l1);
            let l3 = self.level3[i] + half * (self.level2[i] + l2);
            self.level1[i] = l1;
            self.level2[i] = l2;
            self.level3[i] = l3;
        }
        self.last_sample.copy_from_slice(sample);
        self.t = t_new;
    }

    pub fn advance_scalar(&mut self, sample: f64, t_new: f64) {
        self.advance(&[sample], t_new);
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        let tol = 1e-12 * self.t.abs().max(t.abs()).max(1.0);
        if (self.t - t).abs() > tol {
            return Err(DplError::Synchronization {
                accumulator_t: self.t,
                requested_t: t,
            });
        }
        Ok(())
    }
}

/// `g'' + tau_q g' + tau_q^2 g / 2`, elementwise.
pub fn hat_transform(
    acc: &IntegralAccumulator,
    g_now: &[f64],
    d: DelayPair,
    t: f64,
) -> Result<Vec<f64>> {
    acc.check_time(t)?;
    if g_now.len() != acc.len() {
        return Err(DplError::invalid("hat_transform: field length mismatch"));
    }
    let tq = d.tau_q();
    Ok(g_now
        .iter()
        .zip(acc.level1().iter().zip(acc.level2()))
        .map(|(&g, (&g1, &g2))| g2 + tq * g1 + 0.5 * tq * tq * g)
        .collect())
}

/// `h' + tau_T h`, elementwise.
pub fn tilde_transform(
    acc: &IntegralAccumulator,
    h_now: &[f64],
    d: DelayPair,
    t: f64,
) -> Result<Vec<f64>> {
    acc.check_time(t)?;
    if h_now.len() != acc.len() {
        return Err(DplError::invalid("tilde_transform: field length mismatch"));
    }
    let tt = d.tau_t();
    Ok(h_now
        .iter()
        .zip(acc.level1())
        .map(|(&h, &h1)| h1 + tt * h)
        .collect())
}
