#![allow(dead_code)]

use dpl_core::error::Result;
use dpl_core::model::{End, EndCondition, Problem, ProblemData, Profile};
use dpl_core::transient::{run, RunOptions, StepControl, TransientState};
use rand::Rng;

/// Smooth random data on `p`'s grid with the same end-condition kinds and
/// end values matching the initial fields.
pub fn random_data(p: &Problem, rng: &mut impl Rng) -> ProblemData {
    let xs = p.geometry.nodes();
    let (h, l) = (p.geometry.h(), p.geometry.length());
    let mut bump = |scale: f64| Profile::Gaussian {
        center: rng.gen_range(-h..l),
        width: rng.gen_range(0.1..0.3) * (h + l),
        amp: rng.gen_range(-scale..scale),
    };
    let temp0 = bump(1.0).sample(&xs);
    let flux0 = bump(0.5).sample(&xs);
    let mut flux_rate0 = bump(0.2).sample(&xs);
    let n = xs.len();
    let mut end = |c: EndCondition, e: End, j: usize| match c {
        EndCondition::Temperature(_) => EndCondition::Temperature(temp0[j]),
        EndCondition::Flux(_) => {
            flux_rate0[j] = 0.0;
            EndCondition::Flux(flux0[j] * e.normal())
        }
    };
    let left = end(p.data.left, End::Left, 0);
    let right = end(p.data.right, End::Right, n - 1);
    ProblemData {
        temp0,
        flux0,
        flux_rate0,
        left,
        right,
    }
}

pub fn final_state(p: &Problem, ctl: &StepControl) -> Result<TransientState> {
    let opts = RunOptions {
        stride: usize::MAX,
        ..Default::default()
    };
    Ok(run(p, ctl, &opts, &mut [])?.final_state)
}

/// `max |u₁₂ − (u₁ + u₂)| / max |u₁₂|` over T, q and v at the final time.
pub fn superposition_defect(
    p1: &Problem,
    p2: &Problem,
    p12: &Problem,
    ctl: &StepControl,
) -> Result<f64> {
    let (a, b, c) = (
        final_state(p1, ctl)?,
        final_state(p2, ctl)?,
        final_state(p12, ctl)?,
    );
    let mut defect = 0.0f64;
    let mut scale = 0.0f64;
    for (f12, f1, f2) in [
        (&c.temp, &a.temp, &b.temp),
        (&c.flux, &a.flux, &b.flux),
        (&c.rate, &a.rate, &b.rate),
    ] {
        for j in 0..f12.len() {
            defect = defect.max((f12[j] - f1[j] - f2[j]).abs());
            scale = scale.max(f12[j].abs());
        }
    }
    Ok(defect / scale)
}
