use crate::error::{DplError, Result};
use crate::model::{EndCondition, Problem};
use crate::transient::gradient_into;

/// Time derivatives of the three marched fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates {
    pub temp: Vec<f64>,
    pub flux: Vec<f64>,
    pub rate: Vec<f64>,
}

impl Rates {
    pub fn zeros(n: usize) -> Self {
        Self {
            temp: vec![0.0; n],
            flux: vec![0.0; n],
            rate: vec![0.0; n],
        }
    }
}

/// Scratch buffers reused across stage evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    grad: Vec<f64>,
    grad_rate: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            grad: vec![0.0; n],
            grad_rate: vec![0.0; n],
        }
    }
}

/// Rates for the fields `(temp, flux, rate)`; boundary values must already be imposed.
pub fn rhs(temp: &[f64], flux: &[f64], rate: &[f64], p: &Problem) -> Result<Rates> {
    let n = p.geometry.n_nodes();
    let mut out = Rates::zeros(n);
    let mut ws = Workspace::new(n);
    rhs_into(temp, flux, rate, p, &mut ws, &mut out)?;
    Ok(out)
}

pub(crate) fn rhs_into(
    temp: &[f64],
    flux: &[f64],
    rate: &[f64],
    p: &Problem,
    ws: &mut Workspace,
    out: &mut Rates,
) -> Result<()> {
    let tq = p.delays.tau_q();
    if tq <= 0.0 {
        return Err(DplError::DegenerateModel(
            "the transient solver requires tau_q > 0".into(),
        ));
    }
    let tt = p.delays.tau_t();
    let n = temp.len();
    let dx = p.geometry.dx();
    let (a, k, src) = (p.material.a(), p.material.k(), p.material.rho_r());

    gradient_into(flux, dx, &mut ws.grad);
    for j in 0..n {
        out.temp[j] = (src[j] - ws.grad[j]) / a[j];
    }
    // time-independent Dirichlet data
    if p.data.left.is_temperature() {
        out.temp[0] = 0.0;
    }
    if p.data.right.is_temperature() {
        out.temp[n - 1] = 0.0;
    }

    gradient_into(temp, dx, &mut ws.grad);
    gradient_into(&out.temp, dx, &mut ws.grad_rate);
    let c = 2.0 / (tq * tq);
    for j in 0..n {
        out.flux[j] = rate[j];
        out.rate[j] = c * (-flux[j] - tq * rate[j] - k[j] * (ws.grad[j] + tt * ws.grad_rate[j]));
    }
    if let EndCondition::Flux(_) = p.data.left {
        out.flux[0] = 0.0;
        out.rate[0] = 0.0;
    }
    if let EndCondition::Flux(_) = p.data.right {
        out.flux[n - 1] = 0.0;
        out.rate[n - 1] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DelayPair, Geometry1D, MaterialField, ProblemData};
    use std::f64::consts::PI;

    fn problem(n_cells: usize, left: EndCondition, right: EndCondition, tq: f64) -> Problem {
        let g = Geometry1D::new(1.0, 1.0, n_cells).unwrap();
        let m = MaterialField::uniform(&g, 1.0, 1.0).unwrap();
        let d = DelayPair::new(tq, 0.5).unwrap();
        let data = ProblemData::zero(g.n_nodes(), left, right);
        Problem::new(g, m, d, data).unwrap()
    }

    #[test]
    fn zero_state_has_zero_rates() {
        let p = problem(
            32,
            EndCondition::Temperature(0.0),
            EndCondition::Flux(0.0),
            1.0,
        );
        let z = vec![0.0; 33];
        let r = rhs(&z, &z, &z, &p).unwrap();
        assert_eq!(r, Rates::zeros(33));
    }

    #[test]
    fn uniform_temperature_is_equilibrium() {
        let p = problem(32, EndCondition::Flux(0.0), EndCondition::Flux(0.0), 0.7);
        let t = vec![3.25; 33];
        let z = vec![0.0; 33];
        let r = rhs(&t, &z, &z, &p).unwrap();
        assert!(r
            .temp
            .iter()
            .chain(&r.flux)
            .chain(&r.rate)
            .all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn rate_of_flux_rate_for_sine_profile() {
        // T = sin(pi (x+h) / (h+L)) on [-1,1]: dv/dt = -(2/tq^2) k T_x inside
        let tq = 0.8;
        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&nc| {
                let p = problem(
                    nc,
                    EndCondition::Temperature(0.0),
                    EndCondition::Temperature(0.0),
                    tq,
                );
                let xs = p.geometry.nodes();
                let w = PI / 2.0;
                let t: Vec<f64> = xs.iter().map(|x| (w * (x + 1.0)).sin()).collect();
                let z = vec![0.0; xs.len()];
                let r = rhs(&t, &z, &z, &p).unwrap();
                (1..xs.len() - 1)
                    .map(|j| {
                        let exact = -(2.0 / (tq * tq)) * w * (w * (xs[j] + 1.0)).cos();
                        (r.rate[j] - exact).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] < 1e-2);
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn rejects_zero_tau_q() {
        let p = problem(
            32,
            EndCondition::Temperature(0.0),
            EndCondition::Flux(0.0),
            0.0,
        );
        let z = vec![0.0; 33];
        assert!(matches!(
            rhs(&z, &z, &z, &p),
            Err(DplError::DegenerateModel(_))
        ));
    }

    #[test]
    fn boundary_rates_are_pinned() {
        let g = Geometry1D::new(1.0, 1.0, 32).unwrap();
        let mut data =
            ProblemData::zero(33, EndCondition::Temperature(1.0), EndCondition::Flux(0.0));
        data.temp0[0] = 1.0;
        let p = Problem::new(
            g,
            MaterialField::uniform(&g, 1.0, 1.0).unwrap(),
            DelayPair::new(1.0, 0.5).unwrap(),
            data,
        )
        .unwrap();
        let xs = p.geometry.nodes();
        let t: Vec<f64> = xs.iter().map(|x| 1.0 - (x + 1.0) * 0.1).collect();
        let q: Vec<f64> = xs.iter().map(|x| (x - 1.0) * x).collect();
        let z = vec![0.0; 33];
        let r = rhs(&t, &q, &z, &p).unwrap();
        assert_eq!(r.temp[0], 0.0);
        assert_eq!((r.flux[32], r.rate[32]), (0.0, 0.0));
        assert!(r.rate[0] != 0.0);
    }
}
