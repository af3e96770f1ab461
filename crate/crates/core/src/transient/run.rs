use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::model::Problem;
use crate::transient::{step, StepControl, TransientState};

/// Hook invoked on the initial state and after every accepted step.
///
/// `sample` is true on the configured stride (and always for the final
/// step); observers that integrate in time must still update every step.
pub trait Observer {
    fn start(&mut self, state: &TransientState, problem: &Problem) -> Result<()>;
    fn after_step(&mut self, state: &TransientState, problem: &Problem, sample: bool)
        -> Result<()>;
}

pub struct NullObserver;

impl Observer for NullObserver {
    fn start(&mut self, _: &TransientState, _: &Problem) -> Result<()> {
        Ok(())
    }
    fn after_step(&mut self, _: &TransientState, _: &Problem, _: bool) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Record a sample every `stride` steps (initial and final always recorded).
    pub stride: usize,
    /// Extra snapshot times; each is captured at the first step reaching it.
    pub snapshot_times: Vec<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            stride: 1,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub temp: Vec<f64>,
    pub flux: Vec<f64>,
    pub rate: Vec<f64>,
}

impl Snapshot {
    fn of(s: &TransientState) -> Self {
        Self {
            t: s.t,
            temp: s.temp.clone(),
            flux: s.flux.clone(),
            rate: s.rate.clone(),
        }
    }

    pub fn max_abs(&self) -> (f64, f64, f64) {
        let m = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        (m(&self.temp), m(&self.flux), m(&self.rate))
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub samples: Vec<Snapshot>,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    pub dt: f64,
    pub wall_time_s: f64,
    pub final_state: TransientState,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub t_end: f64,
    pub steps: usize,
    pub dt: f64,
    pub wall_time_s: f64,
    pub final_max_abs_temp: f64,
    pub final_max_abs_flux: f64,
    pub final_max_abs_rate: f64,
    pub max_abs_temp_over_run: f64,
    pub max_abs_flux_over_run: f64,
}

impl TrajectoryRecord {
    pub fn summary(&self) -> RunSummary {
        let (t, q, v) = self.final_state.max_abs();
        let (mut mt, mut mq) = (0.0f64, 0.0f64);
        for s in &self.samples {
            let (a, b, _) = s.max_abs();
            mt = mt.max(a);
            mq = mq.max(b);
        }
        RunSummary {
            t_end: self.final_state.t,
            steps: self.steps,
            dt: self.dt,
            wall_time_s: self.wall_time_s,
            final_max_abs_temp: t,
            final_max_abs_flux: q,
            final_max_abs_rate: v,
            max_abs_temp_over_run: mt,
            max_abs_flux_over_run: mq,
        }
    }
}

pub fn run(
    problem: &Problem,
    ctl: &StepControl,
    opts: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> Result<TrajectoryRecord> {
    let clock = Instant::now();
    let stride = opts.stride.max(1);
    let mut state = TransientState::initial(problem);
    for obs in observers.iter_mut() {
        obs.start(&state, problem)?;
    }
    let mut samples = vec![Snapshot::of(&state)];
    let mut pending: Vec<f64> = opts.snapshot_times.clone();
    pending.sort_by(f64::total_cmp);
    pending.reverse();
    let mut snapshots = Vec::new();
    let take_snapshots =
        |state: &TransientState, pending: &mut Vec<f64>, out: &mut Vec<Snapshot>| {
            while pending
                .last()
                .is_some_and(|&t| t <= state.t + 1e-12 * state.t.max(1.0))
            {
                pending.pop();
                out.push(Snapshot::of(state));
            }
        };
    take_snapshots(&state, &mut pending, &mut snapshots);

    let n_steps = ctl.n_steps();
    for n in 1..=n_steps {
        step(&mut state, problem, ctl)?;
        let sample = n % stride == 0 || n == n_steps;
        for obs in observers.iter_mut() {
            obs.after_step(&state, problem, sample)?;
        }
        if sample {
            samples.push(Snapshot::of(&state));
        }
        take_snapshots(&state, &mut pending, &mut snapshots);
    }
    Ok(TrajectoryRecord {
        samples,
        snapshots,
        steps: n_steps,
        dt: ctl.dt,
        wall_time_s: clock.elapsed().as_secs_f64(),
        final_state: state,
    })
}
