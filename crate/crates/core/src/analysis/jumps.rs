use crate::error::AnalysisError;
use crate::integrators::Trajectory;
use crate::models::lienard;

/// Leading share of the samples ignored by [`jump_returns`].
pub const JUMP_DISCARD_FRACTION: f64 = 0.2;

/// Points where a stiff Van der Pol trajectory lands back on the cubic
/// nullcline after a fast jump, in Liénard coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpReturns {
    /// `(|y₁|, |y₂|)` per event.
    pub events: Vec<(f64, f64)>,
    pub times: Vec<f64>,
    pub mean_abs_y1: f64,
    pub mean_abs_y2: f64,
}

impl JumpReturns {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Finds jump landings as strict local maxima of `|y₁|` above 1, after
/// discarding the first 20% of the samples.
pub fn jump_returns(traj: &Trajectory, epsilon: f64) -> Result<JumpReturns, AnalysisError> {
    if let Some(at) = traj.diverged_at {
        return Err(AnalysisError::Diverged(at));
    }
    let y: Vec<(f64, f64)> = traj
        .samples()
        .map(|x| lienard(x, epsilon).map_err(|_| AnalysisError::NoEvents))
        .collect::<Result<_, _>>()?;
    let start = ((JUMP_DISCARD_FRACTION * y.len() as f64).floor() as usize).max(1);
    let mut events = Vec::new();
    let mut times = Vec::new();
    for k in start..y.len().saturating_sub(1) {
        let here = y[k].0.abs();
        if here > 1.0 && here > y[k - 1].0.abs() && here > y[k + 1].0.abs() {
            events.push((here, y[k].1.abs()));
            times.push(traj.time(k));
        }
    }
    if events.is_empty() {
        return Err(AnalysisError::NoEvents);
    }
    let n = events.len() as f64;
    let mean_abs_y1 = events.iter().map(|e| e.0).sum::<f64>() / n;
    let mean_abs_y2 = events.iter().map(|e| e.1).sum::<f64>() / n;
    Ok(JumpReturns {
        events,
        times,
        mean_abs_y1,
        mean_abs_y2,
    })
}
