//! Fixed-step integration of conditionally linear systems.

mod method;
mod trajectory;

use std::cmp::Ordering;

pub use method::{
    euler_type_step, exp_midpoint_step, hybrid_step, nonsym_composition_step,
    sym_composition_step, Method, Scheme,
};
pub use trajectory::Trajectory;

use crate::error::{IntegrateError, StepError};
use crate::system::{CondLinSystem, State};

/// Default divergence bound on `|xᵢ|`.
pub const DEFAULT_GUARD: f64 = 1e6;

/// Options for [`integrate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    /// A step whose output has any `|xᵢ| > guard` (or a non-finite entry)
    /// ends the run and sets [`Trajectory::diverged_at`].
    pub guard: f64,
    /// Keep every `stride`-th state. The final state is always among the
    /// recorded ones only when `stride` divides the step count.
    pub stride: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            guard: DEFAULT_GUARD,
            stride: 1,
        }
    }
}

/// Number of steps of size `h` that fit in `[t0, t_end]`, rounded to the
/// nearest integer.
pub fn step_count(t0: f64, t_end: f64, h: f64) -> usize {
    ((t_end - t0) / h).round() as usize
}

/// Integrates `s0` to `t_end` with fixed step `h`, recording every state.
pub fn integrate<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s0: &State,
    t_end: f64,
    h: f64,
    guard: f64,
) -> Result<Trajectory, IntegrateError> {
    integrate_with(
        sys,
        m,
        s0,
        t_end,
        h,
        IntegrateOptions { guard, stride: 1 },
    )
}

/// Generic fixed-step driver around an in-place stepper.
///
/// `step(t, x, h)` advances `x` from time `t`. Times are recomputed as
/// `t0 + n h` at every step rather than accumulated.
pub fn drive<F>(
    dim: usize,
    s0: &State,
    t_end: f64,
    h: f64,
    opts: IntegrateOptions,
    mut step: F,
) -> Result<Trajectory, IntegrateError>
where
    F: FnMut(f64, &mut [f64], f64) -> Result<(), StepError>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(IntegrateError::InvalidStep(h));
    }
    if t_end.partial_cmp(&s0.t) != Some(Ordering::Greater) {
        return Err(IntegrateError::InvalidHorizon { t0: s0.t, t_end });
    }
    if opts.stride == 0 {
        return Err(IntegrateError::InvalidStride);
    }
    if s0.x.len() != dim {
        return Err(IntegrateError::DimensionMismatch {
            expected: dim,
            got: s0.x.len(),
        });
    }
    let n_steps = step_count(s0.t, t_end, h);
    let mut traj = Trajectory::with_capacity(s0.t, h, opts.stride, dim, n_steps / opts.stride + 1);
    let mut x = s0.x.clone();
    traj.push(&x);
    for n in 0..n_steps {
        let t = s0.t + n as f64 * h;
        let ok = step(t, &mut x, h).is_ok()
            && x.iter().all(|v| v.is_finite() && v.abs() <= opts.guard);
        if !ok {
            traj.diverged_at = Some(n + 1);
            break;
        }
        if (n + 1) % opts.stride == 0 {
            traj.push(&x);
        }
    }
    traj.n_steps = n_steps;
    Ok(traj)
}

/// [`integrate`] with explicit options.
pub fn integrate_with<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s0: &State,
    t_end: f64,
    h: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory, IntegrateError> {
    m.validate(sys)?;
    let mut scratch = Vec::with_capacity(sys.dim());
    let mut traj = drive(sys.dim(), s0, t_end, h, opts, |t, x, h| {
        m.step_in_place(sys, t, x, h, &mut scratch)
    })?;
    traj.method_id = m.id().to_owned();
    traj.model_id = sys.model_id();
    traj.labels = sys.labels().iter().map(|l| l.name.clone()).collect();
    Ok(traj)
}

/// The largest step not exceeding `h_max` that divides `t_end - t0` into a
/// whole number of steps.
pub fn grid_step(t0: f64, t_end: f64, h_max: f64) -> f64 {
    let span = t_end - t0;
    span / (span / h_max).ceil()
}

/// Strang splitting at the system's reference step size, adjusted down so
/// the grid lands on `t_end`.
pub fn reference_integrate<S: CondLinSystem + ?Sized>(
    sys: &S,
    s0: &State,
    t_end: f64,
) -> Result<Trajectory, IntegrateError> {
    reference_integrate_with(sys, s0, t_end, sys.reference_step(), IntegrateOptions::default())
}

/// [`reference_integrate`] with an explicit maximal step and options.
pub fn reference_integrate_with<S: CondLinSystem + ?Sized>(
    sys: &S,
    s0: &State,
    t_end: f64,
    h_ref: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory, IntegrateError> {
    if !(h_ref > 0.0 && h_ref.is_finite()) {
        return Err(IntegrateError::InvalidStep(h_ref));
    }
    if t_end.partial_cmp(&s0.t) != Some(Ordering::Greater) {
        return Err(IntegrateError::InvalidHorizon { t0: s0.t, t_end });
    }
    let h = grid_step(s0.t, t_end, h_ref);
    let m = Method::strang(sys).with_id("reference");
    integrate_with(sys, &m, s0, t_end, h, opts)
}
