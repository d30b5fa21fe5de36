//! Observables extracted from trajectories: limit-cycle radius, jump-return
//! points of the stiff Van der Pol oscillator, spike trains, and log-log
//! convergence slopes.

mod fit;
mod jumps;
mod radius;
mod spikes;

pub use fit::fit_loglog_slope;
pub use jumps::{jump_returns, JumpReturns, JUMP_DISCARD_FRACTION};
pub use radius::{
    average_radius, radius_error_curve, RadiusCurveConfig, RadiusErrorPoint, RadiusStats,
    EXACT_RADIUS,
};
pub use spikes::{count_spikes, SpikeOptions, SpikeTrain};
