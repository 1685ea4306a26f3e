//! Time loop: splitting steps up to a final time with snapshots.

use crate::error::{Error, Result};

use super::field::FieldState;
use super::grid::Boundary;
use super::params::HydroParams;
use super::step::{cfl_dt, conservative_step, relaxation_step};

/// Largest density accepted before a run is declared unstable.
pub const BLOWUP_DENSITY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub params: HydroParams,
    pub t_final: f64,
    pub dt: TimeStep,
    /// Times at which snapshots are recorded; steps are shortened to hit them.
    pub snapshot_times: Vec<f64>,
    /// Relaxation time; zero means exact normalization.
    pub eta: f64,
    pub default_axis: [f64; 2],
}

impl RunSpec {
    pub fn new(params: HydroParams, t_final: f64, dt: TimeStep) -> Self {
        Self {
            params,
            t_final,
            dt,
            snapshot_times: Vec::new(),
            eta: 0.0,
            default_axis: [1.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("final time must be non-negative, got {}", self.t_final)));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.eta >= 0.0) {
            return Err(Error::Config(format!("eta must be non-negative, got {}", self.eta)));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && **t <= self.t_final)) {
            return Err(Error::Config(format!(
                "snapshot time {t} outside [0, {}]",
                self.t_final
            )));
        }
        let n = self.default_axis[0].hypot(self.default_axis[1]);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Config("default axis must be a unit vector".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub fallbacks: usize,
    pub complex_spectra: usize,
    pub zero_momentum: usize,
    pub lambda_max: f64,
    pub dt_min: f64,
    pub dt_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub snapshots: Vec<FieldState>,
    pub final_state: FieldState,
    pub stats: RunStats,
}

fn check_stability(s: &FieldState) -> Result<()> {
    for (k, (r, m)) in s.rho.iter().zip(&s.mom).enumerate() {
        let bad = if !r.is_finite() || !m[0].is_finite() || !m[1].is_finite() {
            Some("non-finite value")
        } else if r.abs() > BLOWUP_DENSITY {
            Some("density blow-up")
        } else {
            None
        };
        if let Some(reason) = bad {
            return Err(Error::Unstable {
                time: s.time,
                reason: format!(
                    "{reason} at cell ({}, {}): rho = {r:e}",
                    k % s.grid.nx,
                    k / s.grid.nx
                ),
            });
        }
    }
    Ok(())
}

pub fn run(initial: &FieldState, spec: &RunSpec) -> Result<RunOutput> {
    run_with(initial, spec, |_, _| Ok(()))
}

/// Like [`run`], calling `observe(state, &stats)` after every full step.
pub fn run_with(
    initial: &FieldState,
    spec: &RunSpec,
    mut observe: impl FnMut(&FieldState, &RunStats) -> Result<()>,
) -> Result<RunOutput> {
    spec.validate()?;
    check_stability(initial)?;
    let frame = (initial.grid.bc == Boundary::FixedDirichlet).then_some(initial);
    let mut events: Vec<f64> = spec.snapshot_times.clone();
    events.sort_by(f64::total_cmp);
    events.dedup();

    let mut stats = RunStats {
        dt_min: f64::INFINITY,
        ..RunStats::default()
    };
    let mut snapshots = Vec::with_capacity(events.len());
    let mut state = initial.clone();
    let t0 = initial.time;
    let mut pending = events.iter().map(|t| t0 + t).peekable();
    while pending.peek().is_some_and(|t| *t <= t0) {
        snapshots.push(state.clone());
        pending.next();
    }
    let end = t0 + spec.t_final;

    while state.time < end {
        let target = pending.peek().copied().unwrap_or(end).min(end);
        let nominal = match spec.dt {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Adaptive => cfl_dt(&state, &spec.params)?,
        };
        let remaining = target - state.time;
        let (dt, lands) = if remaining <= nominal * (1.0 + 1e-6) {
            (remaining, true)
        } else {
            (nominal, false)
        };
        let (star, rep) = conservative_step(&state, dt, &spec.params, frame)?;
        let (mut next, relax) = relaxation_step(&star, spec.eta, dt, spec.default_axis);
        next.time = if lands { target } else { state.time + dt };
        check_stability(&next)?;

        stats.steps += 1;
        stats.fallbacks += rep.fallbacks;
        stats.complex_spectra += rep.complex_spectra;
        stats.zero_momentum += relax.zero_momentum;
        stats.lambda_max = stats.lambda_max.max(rep.lambda_max);
        stats.dt_min = stats.dt_min.min(dt);
        stats.dt_max = stats.dt_max.max(dt);
        state = next;
        observe(&state, &stats)?;

        while pending.peek().is_some_and(|t| *t <= state.time) {
            snapshots.push(state.clone());
            pending.next();
        }
    }
    if stats.steps == 0 {
        stats.dt_min = 0.0;
    }
    Ok(RunOutput {
        snapshots,
        final_state: state,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sohr::grid::GridSpec;

    #[test]
    fn snapshots_land_on_requested_times() {
        let p = HydroParams::reference().unwrap();
        let g = GridSpec::new(8, 8, 2.0, 2.0, Boundary::Periodic).unwrap();
        let s = FieldState::from_angle_fn(g, |x, _| (1.0 + 0.1 * x.sin(), 0.3));
        let mut spec = RunSpec::new(p, 0.05, TimeStep::Fixed(0.01));
        spec.snapshot_times = vec![0.0, 0.025, 0.05];
        let out = run(&s, &spec).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 0.025, 0.05]);
        assert_eq!(out.final_state.time, 0.05);
        assert_eq!(out.stats.steps, 6);
    }

    #[test]
    fn blow_up_is_detected() {
        let g = GridSpec::new(4, 4, 1.0, 1.0, Boundary::Periodic).unwrap();
        let mut s = FieldState::from_angle_fn(g, |_, _| (1.0, 0.0));
        s.rho[2] = f64::NAN;
        assert!(matches!(check_stability(&s), Err(Error::Unstable { .. })));
        s.rho[2] = 2e6;
        assert!(matches!(check_stability(&s), Err(Error::Unstable { .. })));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let p = HydroParams::reference().unwrap();
        let mut spec = RunSpec::new(p, 1.0, TimeStep::Fixed(0.0));
        assert!(spec.validate().is_err());
        spec.dt = TimeStep::Adaptive;
        spec.snapshot_times = vec![2.0];
        assert!(spec.validate().is_err());
    }
}
