//! Hodgkin–Huxley with instantaneous sodium activation, `m = m∞(V)`.
//!
//! `m∞(V)` enters the voltage equation, so this model is not conditionally
//! linear and composition methods do not apply. Euler-type and exponential
//! midpoint steps still work by freezing `m` at the start of each stage.

use std::str::FromStr;

use crate::error::{IntegrateError, MethodError, StepError};
use crate::flow::FlowKind;
use crate::integrators::{drive, IntegrateOptions, Trajectory};
use crate::system::{advance_members, CondLinSystem, Coeffs, Label, State};

use super::hh::{hh_rates, CurrentProtocol, HhParams, HodgkinHuxley};

const ALL: [usize; 3] = [0, 1, 2];

/// The 3-component `(V, n, h)` system obtained by freezing `m`.
#[derive(Debug, Clone)]
pub struct FrozenSodium {
    pub params: HhParams,
    pub protocol: CurrentProtocol,
    pub m: f64,
    groups: Vec<Vec<usize>>,
    labels: Vec<Label>,
}

impl FrozenSodium {
    pub fn new(params: HhParams, protocol: CurrentProtocol, m: f64) -> Self {
        Self {
            params,
            protocol,
            m,
            groups: vec![vec![0], vec![1, 2]],
            labels: vec![Label::new("V", "mV"), Label::new("n", ""), Label::new("h", "")],
        }
    }

    /// Freezes `m` at `m∞(v)`.
    pub fn at_voltage(params: HhParams, protocol: CurrentProtocol, v: f64) -> Self {
        Self::new(params, protocol, hh_rates(v).m_inf())
    }
}

impl CondLinSystem for FrozenSodium {
    fn dim(&self) -> usize {
        3
    }

    fn coeffs(&self, t: f64, x: &[f64], i: usize) -> Coeffs {
        match i {
            0 => HodgkinHuxley::voltage_coeffs(
                &self.params,
                self.protocol.current(t),
                x[1],
                self.m,
                x[2],
            ),
            1 => {
                let r = hh_rates(x[0]);
                Coeffs::new(-(r.alpha_n + r.beta_n), r.alpha_n)
            }
            2 => {
                let r = hh_rates(x[0]);
                Coeffs::new(-(r.alpha_h + r.beta_h), r.alpha_h)
            }
            _ => panic!("reduced model has 3 components, asked for {i}"),
        }
    }

    fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn model_id(&self) -> String {
        "hh-reduced".into()
    }
}

/// Integrators usable on the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedVariant {
    ExpEuler,
    SiEuler,
    ExpMidpoint,
}

impl ReducedVariant {
    pub fn id(self) -> &'static str {
        match self {
            ReducedVariant::ExpEuler => "exp-euler",
            ReducedVariant::SiEuler => "si-euler",
            ReducedVariant::ExpMidpoint => "exp-midpoint",
        }
    }
}

impl FromStr for ReducedVariant {
    type Err = MethodError;

    /// Accepts the method ids `exp-euler`, `si-euler`, `exp-midpoint`; any
    /// other id (splittings in particular) is rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exp-euler" => Ok(ReducedVariant::ExpEuler),
            "si-euler" => Ok(ReducedVariant::SiEuler),
            "exp-midpoint" => Ok(ReducedVariant::ExpMidpoint),
            other => Err(MethodError::NeedsConditionalLinearity(other.to_owned())),
        }
    }
}

fn step_in_place(
    params: &HhParams,
    proto: &CurrentProtocol,
    t: f64,
    x: &mut [f64],
    h: f64,
    variant: ReducedVariant,
    scratch: &mut [f64; 3],
) -> Result<(), StepError> {
    let frozen = FrozenSodium::at_voltage(*params, *proto, x[0]);
    match variant {
        ReducedVariant::ExpEuler => advance_members(&frozen, &ALL, t, x, h, |_| &FlowKind::Exact),
        ReducedVariant::SiEuler => {
            advance_members(&frozen, &ALL, t, x, h, |_| &FlowKind::BackwardEuler)
        }
        ReducedVariant::ExpMidpoint => {
            scratch.copy_from_slice(x);
            advance_members(&frozen, &ALL, t, scratch, 0.5 * h, |_| &FlowKind::Exact)?;
            let mid = FrozenSodium::at_voltage(*params, *proto, scratch[0]);
            for i in ALL {
                let c = mid.coeffs(t + 0.5 * h, &scratch[..], i);
                let next = FlowKind::Exact
                    .apply(x[i], c.a, c.b, h)
                    .map_err(|source| StepError::Flow {
                        component: i,
                        source,
                    })?;
                if !next.is_finite() {
                    return Err(StepError::NonFinite { component: i });
                }
                x[i] = next;
            }
            Ok(())
        }
    }
}

/// One step of the reduced model from the 3-component state `s = (V, n, h)`.
///
/// # Panics
///
/// If `s` does not have 3 components.
pub fn reduced_hh_step(
    p: &HhParams,
    proto: &CurrentProtocol,
    s: &State,
    h: f64,
    variant: ReducedVariant,
) -> Result<State, StepError> {
    assert_eq!(s.dim(), 3, "reduced state is (V, n, h)");
    let mut x = s.x.clone();
    step_in_place(p, proto, s.t, &mut x, h, variant, &mut [0.0; 3])?;
    Ok(State::new(s.t + h, x))
}

/// Fixed-step run of the reduced model.
pub fn reduced_integrate(
    p: &HhParams,
    proto: &CurrentProtocol,
    s0: &State,
    t_end: f64,
    h: f64,
    variant: ReducedVariant,
    opts: IntegrateOptions,
) -> Result<Trajectory, IntegrateError> {
    let mut scratch = [0.0; 3];
    let mut traj = drive(3, s0, t_end, h, opts, |t, x, h| {
        step_in_place(p, proto, t, x, h, variant, &mut scratch)
    })?;
    traj.method_id = variant.id().to_owned();
    traj.model_id = "hh-reduced".into();
    traj.labels = vec!["V".into(), "n".into(), "h".into()];
    Ok(traj)
}

/// `(−65, n∞(−65), h∞(−65))` at `t = 0`.
pub fn reduced_rest_state() -> State {
    let r = hh_rates(-65.0);
    State::new(0.0, vec![-65.0, r.n_inf(), r.h_inf()])
}
