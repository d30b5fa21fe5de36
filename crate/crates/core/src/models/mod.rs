//! Built-in models.

mod hh;
mod reduced;
mod vdp;

pub use hh::{
    hh_rates, hh_rest_state, hh_system, steady_state, voltage_envelope, CurrentProtocol, GateRates, HhParams,
    HodgkinHuxley,
};
pub use reduced::{
    reduced_hh_step, reduced_integrate, reduced_rest_state, FrozenSodium, ReducedVariant,
};
pub use vdp::{action_angle, lienard, vdp_system, ActionAngle, VanDerPol, VdpParams};
