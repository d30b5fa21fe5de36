//! Numerical integrators for conditionally linear ODE systems
//!
//! A system is conditionally linear when every component obeys
//! `ẋᵢ = aᵢ(x) xᵢ + bᵢ(x)` with `aᵢ`, `bᵢ` independent of `xᵢ`. Freezing the
//! other components turns each equation into a scalar linear ODE that can be
//! solved exactly, and the integrators here compose those component flows
//! (Euler-type, exponential midpoint, Lie–Trotter, Strang, symplectic Euler,
//! Störmer–Verlet and hybrids).
//!
//! ```
//! use condlin::integrators::{integrate, Method};
//! use condlin::models::{vdp_system, VdpParams};
//! use condlin::system::State;
//!
//! let sys = vdp_system(VdpParams::new(0.05));
//! let traj = integrate(&sys, &Method::strang(&sys), &State::new(0.0, vec![1.0, 0.0]), 10.0, 0.01, 1e6).unwrap();
//! assert!(!traj.is_diverged());
//! ```

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod integrators;
pub mod models;
pub mod system;

pub use error::{
    AnalysisError, ExperimentError, FlowError, IntegrateError, MethodError, ModelError, StepError,
};
pub use flow::{exprel, FlowKind};
pub use integrators::{integrate, Method, Trajectory};
pub use system::{CondLinSystem, FnSystem, State};
