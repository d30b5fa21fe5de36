use crate::error::AnalysisError;
use crate::integrators::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeOptions {
    pub component: usize,
    /// mV. The default of −20 mV sits below the blunted peaks produced at
    /// coarse step sizes and well above the resting potential.
    pub threshold: f64,
    /// ms between successive upward crossings; closer crossings are merged
    /// into the earlier spike.
    pub min_separation: f64,
}

impl Default for SpikeOptions {
    fn default() -> Self {
        Self {
            component: 0,
            threshold: -20.0,
            min_separation: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpikeTrain {
    /// Upward threshold crossing times, linearly interpolated.
    pub spike_times: Vec<f64>,
    /// Peak value between the upward and downward crossings.
    pub amplitudes: Vec<f64>,
}

impl SpikeTrain {
    pub fn count(&self) -> usize {
        self.spike_times.len()
    }

    pub fn mean_amplitude(&self) -> Option<f64> {
        if self.amplitudes.is_empty() {
            None
        } else {
            Some(self.amplitudes.iter().sum::<f64>() / self.amplitudes.len() as f64)
        }
    }
}

/// Counts threshold excursions that go up and come back down.
///
/// A diverged trajectory yields [`AnalysisError::Diverged`] rather than a
/// count.
pub fn count_spikes(traj: &Trajectory, opts: &SpikeOptions) -> Result<SpikeTrain, AnalysisError> {
    if let Some(at) = traj.diverged_at {
        return Err(AnalysisError::Diverged(at));
    }
    if opts.component >= traj.dim {
        return Err(AnalysisError::BadComponent {
            component: opts.component,
            dim: traj.dim,
        });
    }
    let thr = opts.threshold;
    let mut train = SpikeTrain::default();
    // (crossing time, running peak) of the excursion in progress.
    let mut open: Option<(f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for (t, x) in traj.iter() {
        let v = x[opts.component];
        if let Some((tp, vp)) = prev {
            match open.as_mut() {
                None if vp <= thr && v > thr => {
                    let t_cross = tp + (t - tp) * (thr - vp) / (v - vp);
                    open = Some((t_cross, v));
                }
                Some((_, peak)) if v > thr => *peak = peak.max(v),
                Some(&mut (t_up, peak)) => {
                    let merge = train
                        .spike_times
                        .last()
                        .is_some_and(|&last| t_up - last < opts.min_separation);
                    if merge {
                        let amp = train.amplitudes.last_mut().unwrap();
                        *amp = amp.max(peak);
                    } else {
                        train.spike_times.push(t_up);
                        train.amplitudes.push(peak);
                    }
                    open = None;
                }
                None => {}
            }
        }
        prev = Some((t, v));
    }
    Ok(train)
}
