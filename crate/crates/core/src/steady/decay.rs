use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DplError, Result};
use crate::steady::solve::gradients;
use crate::steady::{critical_frequency, decay_rate, SteadyAmplitude, StripMaterial};

/// Absolute slack, as a fraction of `M(0)`, granted to round-off.
const ROUNDOFF_SLACK: f64 = 1e-12;

fn trapezoid_row(n: usize, dx: f64, f: impl Fn(usize) -> f64) -> f64 {
    crate::model::trapezoid_by(n, dx, f)
}

/// `M(x₃) = −2 Re[(1 + iωτ_T) ∫ k θ_{,3} θ̄ dx₁]` at every cross-section.
pub fn decay_measure(sol: &SteadyAmplitude, m: &StripMaterial) -> Vec<f64> {
    let g = &sol.geometry;
    let (_, d3) = gradients(g, &sol.theta);
    let alpha = Complex64::new(1.0, sol.omega * sol.delays.tau_t());
    let k = m.k();
    (0..g.nx3())
        .map(|j3| {
            let re = trapezoid_row(g.nx1(), g.dx1(), |j1| {
                let i = g.index(j1, j3);
                (alpha * k[i] * d3[i] * sol.theta[i].conj()).re
            });
            -2.0 * re
        })
        .collect()
}

/// Per cross-section `(∫ k |∇θ|² dx₁, ∫ a |θ|² dx₁)`.
pub fn energy_density(sol: &SteadyAmplitude, m: &StripMaterial) -> (Vec<f64>, Vec<f64>) {
    let g = &sol.geometry;
    let (d1, d3) = gradients(g, &sol.theta);
    let (a, k) = (m.a(), m.k());
    (0..g.nx3())
        .map(|j3| {
            let grad = trapezoid_row(g.nx1(), g.dx1(), |j1| {
                let i = g.index(j1, j3);
                k[i] * (d1[i].norm_sqr() + d3[i].norm_sqr())
            });
            let mass = trapezoid_row(g.nx1(), g.dx1(), |j1| {
                let i = g.index(j1, j3);
                a[i] * sol.theta[i].norm_sqr()
            });
            (grad, mass)
        })
        .unzip()
}

/// Lower measure `M*(x₃) = 2 (1 − ω²/ω_c²) ∫_{x₃}^{L} ∫ k |∇θ|²`.
///
/// Only meaningful below the critical frequency.
pub fn lower_measure(sol: &SteadyAmplitude, m: &StripMaterial) -> Vec<f64> {
    let g = &sol.geometry;
    let omega_c = critical_frequency(g, m, sol.delays);
    let factor = 2.0 * (1.0 - (sol.omega / omega_c).powi(2));
    let (grad, _) = energy_density(sol, m);
    let n = grad.len();
    let h = 0.5 * g.dx3();
    let mut tail = vec![0.0; n];
    for j in (0..n - 1).rev() {
        tail[j] = tail[j + 1] + h * (grad[j] + grad[j + 1]);
    }
    tail.iter().map(|v| factor * v).collect()
}

/// Per cross-section `∫|θ_{,1}|² / ∫|θ|²` with forward differences, the
/// Rayleigh quotient bounded below by the discrete membrane eigenvalue.
/// `None` where `θ` vanishes on the section.
pub fn membrane_ratio(sol: &SteadyAmplitude) -> Vec<Option<f64>> {
    let g = &sol.geometry;
    let h = g.dx1();
    (0..g.nx3())
        .map(|j3| {
            let row = &sol.theta[g.index(0, j3)..g.index(0, j3) + g.nx1()];
            let num: f64 = row.windows(2).map(|w| ((w[1] - w[0]) / h).norm_sqr()).sum();
            let den: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            (den > 0.0).then(|| num / den)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub x3: Vec<f64>,
    /// `−dM/dx₃` from interior sections only.
    pub lhs: Vec<f64>,
    /// `2∫k|∇θ|² − 2τ_qω²∫a|θ|²`.
    pub rhs: Vec<f64>,
    pub max_abs_residual: f64,
}

/// Compare `−dM/dx₃` with `2∫k|∇θ|² − 2τ_qω²∫a|θ|²` at interior sections.
///
/// `M` on the end sections uses one-sided `θ_{,3}` whose error does not match
/// the interior one, so `dM/dx₃` is differenced over interior sections only:
/// central inside, second-order one-sided next to the ends.
pub fn identity_residual(sol: &SteadyAmplitude, m: &StripMaterial) -> IdentityCheck {
    let g = &sol.geometry;
    let mm = decay_measure(sol, m);
    let (grad, mass) = energy_density(sol, m);
    let w2 = sol.omega * sol.omega * sol.delays.tau_q();
    let h = g.dx3();
    let mut out = IdentityCheck {
        x3: Vec::new(),
        lhs: Vec::new(),
        rhs: Vec::new(),
        max_abs_residual: 0.0,
    };
    let n = g.nx3();
    for j in 1..n - 1 {
        let lhs = if n < 5 {
            (mm[j - 1] - mm[j + 1]) / (2.0 * h)
        } else if j == 1 {
            (3.0 * mm[1] - 4.0 * mm[2] + mm[3]) / (2.0 * h)
        } else if j == n - 2 {
            (-3.0 * mm[j] + 4.0 * mm[j - 1] - mm[j - 2]) / (2.0 * h)
        } else {
            (mm[j - 1] - mm[j + 1]) / (2.0 * h)
        };
        let rhs = 2.0 * grad[j] - 2.0 * w2 * mass[j];
        out.max_abs_residual = out.max_abs_residual.max((lhs - rhs).abs());
        out.x3.push(g.x3(j));
        out.lhs.push(lhs);
        out.rhs.push(rhs);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayVerdict {
    pub omega: f64,
    pub omega_c: f64,
    pub nu: f64,
    pub tol: f64,
    pub certified: bool,
    /// Smallest normalized margin with slack applied, over all sections but
    /// the closed end `x₃ = L` where `M` vanishes identically. Negative means
    /// violated.
    pub min_margin: f64,
    /// `min (M(0) e^{−x₃/ν} (1 + tol) − M) / M(0)`.
    pub upper_margin: f64,
    /// `min (M − M*) / M(0)`, without slack.
    pub lower_margin: f64,
    /// `min M / M(0)`.
    pub sign_margin: f64,
    pub worst_x3: f64,
    #[serde(skip)]
    pub x3: Vec<f64>,
    #[serde(skip)]
    pub measure: Vec<f64>,
    #[serde(skip)]
    pub envelope: Vec<f64>,
    #[serde(skip)]
    pub lower: Vec<f64>,
}

/// Check `0 ≤ M ≤ M(0) e^{−x₃/ν} (1 + tol)` and `M ≥ M* (1 − tol)` at every
/// section. At `τ_q = 0` the lower bound is an equality, hence the slack.
pub fn decay_certificate(
    sol: &SteadyAmplitude,
    m: &StripMaterial,
    tol: f64,
) -> Result<DecayVerdict> {
    let g = &sol.geometry;
    let omega_c = critical_frequency(g, m, sol.delays);
    let nu = decay_rate(g, m, sol.delays, sol.omega)?;
    let measure = decay_measure(sol, m);
    let lower = lower_measure(sol, m);
    let m0 = measure[0];
    let x3: Vec<f64> = (0..g.nx3()).map(|j| g.x3(j)).collect();
    let envelope: Vec<f64> = x3.iter().map(|x| m0 * (-x / nu).exp()).collect();

    let (mut upper_margin, mut lower_margin, mut sign_margin) =
        (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let (mut worst, mut worst_x3) = (f64::INFINITY, 0.0);
    if m0 > 0.0 {
        for j in 0..g.nx3() - 1 {
            let up = (envelope[j] * (1.0 + tol) - measure[j]) / m0;
            let lo = (measure[j] - lower[j]) / m0;
            let lo_slack = (measure[j] - lower[j] * (1.0 - tol)) / m0;
            let sg = measure[j] / m0;
            upper_margin = upper_margin.min(up);
            lower_margin = lower_margin.min(lo);
            sign_margin = sign_margin.min(sg);
            let here = up.min(lo_slack).min(sg);
            if here < worst {
                worst = here;
                worst_x3 = x3[j];
            }
        }
    } else if measure.iter().chain(&lower).any(|v| v.abs() > 0.0) {
        // a vanishing M(0) with a nonzero field contradicts the estimate
        worst = f64::NEG_INFINITY;
    }
    Ok(DecayVerdict {
        omega: sol.omega,
        omega_c,
        nu,
        tol,
        certified: worst >= -ROUNDOFF_SLACK,
        min_margin: worst,
        upper_margin,
        lower_margin,
        sign_margin,
        worst_x3,
        x3,
        measure,
        envelope,
        lower,
    })
}

/// Like [`decay_certificate`] but a violation is an error.
pub fn certify_decay(sol: &SteadyAmplitude, m: &StripMaterial, tol: f64) -> Result<DecayVerdict> {
    let v = decay_certificate(sol, m, tol)?;
    if v.certified {
        Ok(v)
    } else {
        Err(DplError::Certification {
            worst_x3: v.worst_x3,
            reason: format!(
                "margin {:e} (upper {:e}, lower {:e}, sign {:e})",
                v.min_margin, v.upper_margin, v.lower_margin, v.sign_margin
            ),
        })
    }
}
