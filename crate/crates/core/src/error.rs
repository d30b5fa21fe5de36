use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("backward Euler stability function evaluated at its pole z = {z}")]
    Pole { z: f64 },
}

/// Failure of a single step.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("component {component}: {source}")]
    Flow {
        component: usize,
        #[source]
        source: FlowError,
    },
    #[error("component {component} became non-finite")]
    NonFinite { component: usize },
    #[error("group {group} does not exist (system has {groups} groups)")]
    UnknownGroup { group: usize, groups: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MethodError {
    #[error("expected {expected} flow kinds, got {got}")]
    KindCount { expected: usize, got: usize },
    #[error("group order must be a permutation of 0..{groups}")]
    NotAPermutation { groups: usize },
    #[error("partition blocks must be disjoint and cover every group")]
    BadPartition,
    #[error("method {0} needs a conditionally linear system")]
    NeedsConditionalLinearity(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("end time {t_end} must lie after start time {t0}")]
    InvalidHorizon { t0: f64, t_end: f64 },
    #[error("sampling stride must be at least 1")]
    InvalidStride,
    #[error("initial state has {got} components, system has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Method(#[from] MethodError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("Liénard transform needs a nonzero epsilon")]
    ZeroEpsilon,
    #[error("reduced model state must have 3 components (V, n, h), got {0}")]
    ReducedDimension(usize),
    #[error("current protocol needs t_on < t_off (got {t_on} >= {t_off})")]
    EmptyProtocol { t_on: f64, t_off: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("trajectory diverged at step {0}")]
    Diverged(usize),
    #[error("discard fraction must be in [0, 1), got {0}")]
    BadDiscard(f64),
    #[error("no samples left after discarding the transient")]
    NoSamples,
    #[error("no jump events detected")]
    NoEvents,
    #[error("slope fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("slope fit needs positive step sizes and errors, got ({h}, {err})")]
    NonPositive { h: f64, err: f64 },
    #[error("component {component} out of range for dimension {dim}")]
    BadComponent { component: usize, dim: usize },
}

/// Failure of an experiment run. Divergence is not an error; it is reported
/// in the output tables.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("method {method} cannot be used with experiment {experiment}")]
    Incompatible { method: String, experiment: String },
    #[error("invalid experiment settings: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Method(#[from] MethodError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{} experiment(s) failed: {}", .0.len(), .0.join("; "))]
    Failed(Vec<String>),
}
