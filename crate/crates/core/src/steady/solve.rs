use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DplError, Result};
use crate::model::{DelayPair, Profile};
use crate::steady::{
    base_profile, operator_coefficients, BandMatrix, StripGeometry, StripMaterial,
};

/// Pivots smaller than this fraction of their row are treated as singular.
const PIVOT_TOL: f64 = 1e-13;
/// Normwise relative residual the solution must reach.
const RESIDUAL_TOL: f64 = 1e-10;

/// Solved amplitude `θ` on the full strip grid, boundary nodes included.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyAmplitude {
    #[serde(skip)]
    pub geometry: StripGeometry,
    pub omega: f64,
    #[serde(skip)]
    pub delays: DelayPair,
    #[serde(skip)]
    pub theta: Vec<Complex64>,
    #[serde(skip)]
    pub h_profile: Vec<f64>,
    pub relative_residual: f64,
    pub min_pivot_ratio: f64,
}

impl SteadyAmplitude {
    pub fn theta_at(&self, j1: usize, j3: usize) -> Complex64 {
        self.theta[self.geometry.index(j1, j3)]
    }

    /// Flux amplitude `Q = −(1 + iωτ_T) k ∇θ / (1 + iωτ_q − ½τ_q²ω²)`,
    /// returned as the `(Q₁, Q₃)` components.
    pub fn flux(&self, m: &StripMaterial) -> (Vec<Complex64>, Vec<Complex64>) {
        let g = &self.geometry;
        let (tq, tt, w) = (self.delays.tau_q(), self.delays.tau_t(), self.omega);
        let factor =
            -Complex64::new(1.0, w * tt) / Complex64::new(1.0 - 0.5 * tq * tq * w * w, w * tq);
        let (d1, d3) = gradients(g, &self.theta);
        let q1 = d1.iter().zip(m.k()).map(|(d, k)| factor * k * d).collect();
        let q3 = d3.iter().zip(m.k()).map(|(d, k)| factor * k * d).collect();
        (q1, q3)
    }
}

/// Derivatives along `x₁` and `x₃`: central inside, third-order one-sided
/// at the edges so that differencing a measure built from them keeps
/// second order next to the edges.
pub(crate) fn gradients(g: &StripGeometry, f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let (n1, n3) = (g.nx1(), g.nx3());
    let mut d1 = vec![Complex64::new(0.0, 0.0); f.len()];
    let mut d3 = d1.clone();
    let mut line = Vec::new();
    let mut out = Vec::new();
    for j3 in 0..n3 {
        line.clear();
        line.extend((0..n1).map(|j1| f[g.index(j1, j3)]));
        derivative(&line, g.dx1(), &mut out);
        for j1 in 0..n1 {
            d1[g.index(j1, j3)] = out[j1];
        }
    }
    for j1 in 0..n1 {
        line.clear();
        line.extend((0..n3).map(|j3| f[g.index(j1, j3)]));
        derivative(&line, g.dx3(), &mut out);
        for j3 in 0..n3 {
            d3[g.index(j1, j3)] = out[j3];
        }
    }
    (d1, d3)
}

fn derivative(f: &[Complex64], h: f64, out: &mut Vec<Complex64>) {
    let n = f.len();
    out.clear();
    out.resize(n, Complex64::new(0.0, 0.0));
    let (c, e) = (0.5 / h, 1.0 / (6.0 * h));
    out[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) * e;
    for j in 1..n - 1 {
        out[j] = (f[j + 1] - f[j - 1]) * c;
    }
    out[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) * e;
}

/// Five-point operator `α K_h + β a` with `K_h = −∇·k∇`, face conductivities
/// by arithmetic mean.
struct Stencil<'a> {
    g: &'a StripGeometry,
    m: &'a StripMaterial,
    alpha: Complex64,
    beta: Complex64,
}

impl Stencil<'_> {
    /// Weights of (centre, west, east, south, north) at an interior node.
    fn weights(&self, j1: usize, j3: usize) -> [Complex64; 5] {
        let g = self.g;
        let k = self.m.k();
        let idx = |a: usize, b: usize| g.index(a, b);
        let kc = k[idx(j1, j3)];
        let face = |n: usize| 0.5 * (kc + k[n]);
        let (h1, h3) = (g.dx1() * g.dx1(), g.dx3() * g.dx3());
        let kw = face(idx(j1 - 1, j3)) / h1;
        let ke = face(idx(j1 + 1, j3)) / h1;
        let ks = face(idx(j1, j3 - 1)) / h3;
        let kn = face(idx(j1, j3 + 1)) / h3;
        let a = self.alpha;
        [
            a * (kw + ke + ks + kn) + self.beta * self.m.a()[idx(j1, j3)],
            -a * kw,
            -a * ke,
            -a * ks,
            -a * kn,
        ]
    }

    /// `(α K_h + β a) θ` at every interior node, using boundary values of `θ`.
    fn residual(&self, theta: &[Complex64]) -> Vec<Complex64> {
        let g = self.g;
        let mut out = Vec::with_capacity((g.nx1() - 2) * (g.nx3() - 2));
        for j3 in 1..g.nx3() - 1 {
            for j1 in 1..g.nx1() - 1 {
                let w = self.weights(j1, j3);
                let t = |a: usize, b: usize| theta[g.index(a, b)];
                out.push(
                    w[0] * t(j1, j3)
                        + w[1] * t(j1 - 1, j3)
                        + w[2] * t(j1 + 1, j3)
                        + w[3] * t(j1, j3 - 1)
                        + w[4] * t(j1, j3 + 1),
                );
            }
        }
        out
    }
}

/// Solve `α K_h θ + β a θ = 0` with `θ = h` on `x₃ = 0` and `θ = 0` on
/// the other three sides.
///
/// Returns the full-grid field, the normwise relative residual and the
/// smallest pivot ratio met during factorization.
#[allow(clippy::needless_range_loop)]
pub fn solve_with_coefficients(
    g: &StripGeometry,
    m: &StripMaterial,
    alpha: Complex64,
    beta: Complex64,
    h: &[f64],
) -> Result<(Vec<Complex64>, f64, f64)> {
    if h.len() != g.nx1() {
        return Err(DplError::invalid("base profile length does not match nx1"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (n1, n3) = (g.nx1(), g.nx3());
    let p = n1 - 2;
    let n = p * (n3 - 2);
    let unknown = |j1: usize, j3: usize| (j3 - 1) * p + (j1 - 1);
    let st = Stencil { g, m, alpha, beta };

    let mut a = BandMatrix::zeros(n, p);
    let mut b = vec![zero; n];
    let mut a_norm = 0.0f64;
    for j3 in 1..n3 - 1 {
        for j1 in 1..n1 - 1 {
            let row = unknown(j1, j3);
            let w = st.weights(j1, j3);
            a_norm = a_norm.max(w.iter().map(|z| z.norm()).sum());
            a.set(row, row, w[0]);
            if j1 > 1 {
                a.set(row, unknown(j1 - 1, j3), w[1]);
            }
            if j1 < n1 - 2 {
                a.set(row, unknown(j1 + 1, j3), w[2]);
            }
            if j3 > 1 {
                a.set(row, unknown(j1, j3 - 1), w[3]);
            } else {
                b[row] -= w[3] * h[j1];
            }
            if j3 < n3 - 2 {
                a.set(row, unknown(j1, j3 + 1), w[4]);
            }
        }
    }
    let b_norm = b.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let lu = a.factor(PIVOT_TOL)?;

    let mut theta = vec![zero; g.len()];
    for (j1, hv) in h.iter().enumerate() {
        theta[g.index(j1, 0)] = Complex64::new(*hv, 0.0);
    }
    let scatter = |theta: &mut [Complex64], x: &[Complex64], add: bool| {
        for j3 in 1..n3 - 1 {
            for j1 in 1..n1 - 1 {
                let v = x[unknown(j1, j3)];
                let t = &mut theta[g.index(j1, j3)];
                if add {
                    *t += v;
                } else {
                    *t = v;
                }
            }
        }
    };
    let x = lu.solve(&b);
    scatter(&mut theta, &x, false);

    let rel = |r: &[Complex64], theta: &[Complex64]| {
        let rn = r.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let tn = theta.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let scale = a_norm * tn + b_norm;
        if scale > 0.0 {
            rn / scale
        } else {
            rn
        }
    };
    // one step of iterative refinement
    let r = st.residual(&theta);
    let neg: Vec<Complex64> = r.iter().map(|z| -z).collect();
    let dx = lu.solve(&neg);
    scatter(&mut theta, &dx, true);
    let relative = rel(&st.residual(&theta), &theta);
    if relative.is_nan() || relative > RESIDUAL_TOL {
        return Err(DplError::Solver(format!(
            "relative residual {relative:e} exceeds {RESIDUAL_TOL:e}; smallest pivot ratio {:e}",
            lu.min_pivot_ratio
        )));
    }
    Ok((theta, relative, lu.min_pivot_ratio))
}

/// Assemble and solve the amplitude problem at frequency `omega > 0`.
pub fn assemble_and_solve(
    g: &StripGeometry,
    m: &StripMaterial,
    d: DelayPair,
    omega: f64,
    h: &Profile,
) -> Result<SteadyAmplitude> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(DplError::invalid(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    let h_profile = base_profile(g, h)?;
    let (alpha, beta) = operator_coefficients(d, omega);
    let (theta, relative_residual, min_pivot_ratio) =
        solve_with_coefficients(g, m, alpha, beta, &h_profile)?;
    Ok(SteadyAmplitude {
        geometry: *g,
        omega,
        delays: d,
        theta,
        h_profile,
        relative_residual,
        min_pivot_ratio,
    })
}

/// Closed-form amplitude for uniform `a`, `k` and `h = amp·sin(πx₁/W)`:
/// `θ = amp · sin(πx₁/W) · sinh(μ(L − x₃)) / sinh(μL)`,
/// `μ² = (π/W)² + β a / (α k)`.
#[derive(Debug, Clone, Copy)]
pub struct SeparableSolution {
    pub mu: Complex64,
    amp: f64,
    width: f64,
    length: f64,
}

impl SeparableSolution {
    pub fn eval(&self, x1: f64, x3: f64) -> Complex64 {
        let (mu, l) = (self.mu, self.length);
        // sinh(μ(L−x₃))/sinh(μL) written with decaying exponentials only
        let ratio =
            (-mu * x3).exp() * (1.0 - (-2.0 * mu * (l - x3)).exp()) / (1.0 - (-2.0 * mu * l).exp());
        self.amp * (std::f64::consts::PI * x1 / self.width).sin() * ratio
    }
}

pub fn separable_solution(
    g: &StripGeometry,
    a: f64,
    k: f64,
    d: DelayPair,
    omega: f64,
    amp: f64,
) -> SeparableSolution {
    let (alpha, beta) = operator_coefficients(d, omega);
    SeparableSolution {
        mu: (Complex64::new(g.membrane_eigenvalue(), 0.0) + beta * a / (alpha * k)).sqrt(),
        amp,
        width: g.width(),
        length: g.length(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_base_gives_zero_field() {
        let g = StripGeometry::new(PI, 4.0, 9, 17).unwrap();
        let m = StripMaterial::uniform(&g, 1.0, 1.0).unwrap();
        let d = DelayPair::new(1.0, 0.5).unwrap();
        let s = assemble_and_solve(&g, &m, d, 0.5, &Profile::Zero).unwrap();
        assert!(s.theta.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn solution_meets_boundary_conditions() {
        let g = StripGeometry::new(PI, 4.0, 17, 33).unwrap();
        let m = StripMaterial::uniform(&g, 1.0, 1.0).unwrap();
        let d = DelayPair::new(1.0, 0.5).unwrap();
        let h = Profile::Sine {
            width: PI,
            amp: 1.0,
        };
        let s = assemble_and_solve(&g, &m, d, 0.5, &h).unwrap();
        for j1 in 0..g.nx1() {
            assert_eq!(s.theta_at(j1, 0).re, s.h_profile[j1]);
            assert!((s.h_profile[j1] - h.eval(g.x1(j1))).abs() < 1e-15);
            assert_eq!(s.theta_at(j1, g.nx3() - 1).norm(), 0.0);
        }
        for j3 in 0..g.nx3() {
            assert_eq!(s.theta_at(0, j3).norm(), 0.0);
            assert_eq!(s.theta_at(g.nx1() - 1, j3).norm(), 0.0);
        }
        assert!(s.relative_residual <= 1e-10);
    }

    #[test]
    fn flux_relation_holds() {
        let g = StripGeometry::new(PI, 3.0, 17, 25).unwrap();
        let m = StripMaterial::uniform(&g, 1.0, 2.0).unwrap();
        let d = DelayPair::new(0.7, 0.2).unwrap();
        let s = assemble_and_solve(
            &g,
            &m,
            d,
            0.4,
            &Profile::Sine {
                width: PI,
                amp: 1.0,
            },
        )
        .unwrap();
        let (q1, q3) = s.flux(&m);
        let (d1, d3) = gradients(&g, &s.theta);
        let lhs = Complex64::new(1.0 - 0.5 * 0.49 * 0.16, 0.4 * 0.7);
        let rhs = -Complex64::new(1.0, 0.4 * 0.2) * 2.0;
        for i in 0..g.len() {
            assert!((lhs * q1[i] - rhs * d1[i]).norm() < 1e-12);
            assert!((lhs * q3[i] - rhs * d3[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        let g = StripGeometry::new(PI, 4.0, 9, 9).unwrap();
        let m = StripMaterial::uniform(&g, 1.0, 1.0).unwrap();
        let d = DelayPair::new(1.0, 0.5).unwrap();
        assert!(assemble_and_solve(&g, &m, d, 0.0, &Profile::Zero).is_err());
    }
}
