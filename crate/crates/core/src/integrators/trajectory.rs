use crate::system::State;

/// States on a uniform time grid.
///
/// Sample `k` sits at `t0 + k * stride * step`. If the run diverged,
/// `diverged_at` holds the index of the first bad step and the recorded
/// samples stop before it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    /// Integration step size.
    pub step: f64,
    /// Steps between recorded samples.
    pub stride: usize,
    pub dim: usize,
    /// Steps requested (not necessarily completed).
    pub n_steps: usize,
    pub diverged_at: Option<usize>,
    pub method_id: String,
    pub model_id: String,
    pub labels: Vec<String>,
    data: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn with_capacity(t0: f64, step: f64, stride: usize, dim: usize, n: usize) -> Self {
        Self {
            t0,
            step,
            stride,
            dim,
            n_steps: 0,
            diverged_at: None,
            method_id: String::new(),
            model_id: String::new(),
            labels: Vec::new(),
            data: Vec::with_capacity(n.saturating_mul(dim)),
        }
    }

    /// Builds a trajectory from explicit samples spaced `spacing` apart.
    pub fn from_samples(t0: f64, spacing: f64, samples: &[Vec<f64>]) -> Self {
        let dim = samples.first().map_or(0, Vec::len);
        let mut traj = Self::with_capacity(t0, spacing, 1, dim, samples.len());
        for s in samples {
            traj.push(s);
        }
        traj.n_steps = samples.len().saturating_sub(1);
        traj
    }

    pub(crate) fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.dim);
        self.data.extend_from_slice(x);
    }

    /// Time between recorded samples.
    pub fn spacing(&self) -> f64 {
        self.step * self.stride as f64
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + (k * self.stride) as f64 * self.step
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn state(&self, k: usize) -> State {
        State::new(self.time(k), self.sample(k).to_vec())
    }

    pub fn last(&self) -> Option<State> {
        self.len().checked_sub(1).map(|k| self.state(k))
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    /// `(t, x)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.samples().enumerate().map(|(k, x)| (self.time(k), x))
    }

    pub fn component(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.samples().map(move |x| x[i])
    }
}
