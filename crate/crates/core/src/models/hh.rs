//! Single-compartment Hodgkin–Huxley neuron in mV / ms units with rate
//! functions shifted to a −65 mV resting potential.
//!
//! Written in conditionally linear form, with components `(V, n, m, h)`:
//!
//! ```text
//! a_V = −(gK n⁴ + gNa m³h + gL) / C
//! b_V = (I(t) + gK n⁴ EK + gNa m³h ENa + gL EL) / C
//! a_g = −(α_g(V) + β_g(V)),  b_g = α_g(V)      for g ∈ {n, m, h}
//! ```
//!
//! The gates only see `V`, so `{n, m, h}` form one commuting group.

use crate::error::ModelError;
use crate::flow::exprel;
use crate::system::{CondLinSystem, Coeffs, Label, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhParams {
    /// Membrane capacitance.
    pub c: f64,
    pub g_k: f64,
    pub g_na: f64,
    pub g_l: f64,
    pub e_k: f64,
    pub e_na: f64,
    pub e_l: f64,
}

impl Default for HhParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            g_k: 36.0,
            g_na: 120.0,
            g_l: 0.3,
            e_k: -77.0,
            e_na: 55.0,
            e_l: -61.0,
        }
    }
}

/// A current step: `i_on` on `[t_on, t_off)`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentProtocol {
    pub i_on: f64,
    pub t_on: f64,
    pub t_off: f64,
}

impl CurrentProtocol {
    pub fn new(i_on: f64, t_on: f64, t_off: f64) -> Result<Self, ModelError> {
        if t_on.partial_cmp(&t_off) != Some(std::cmp::Ordering::Less) {
            return Err(ModelError::EmptyProtocol { t_on, t_off });
        }
        Ok(Self { i_on, t_on, t_off })
    }

    /// `i_on` on `[50, 150)` ms.
    pub fn standard(i_on: f64) -> Self {
        Self {
            i_on,
            t_on: 50.0,
            t_off: 150.0,
        }
    }

    /// No input at any time.
    pub fn silent() -> Self {
        Self {
            i_on: 0.0,
            t_on: 0.0,
            t_off: f64::INFINITY,
        }
    }

    pub fn current(&self, t: f64) -> f64 {
        if t >= self.t_on && t < self.t_off {
            self.i_on
        } else {
            0.0
        }
    }
}

impl Default for CurrentProtocol {
    fn default() -> Self {
        Self::standard(10.0)
    }
}

/// Opening and closing rates of the three gates, per ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateRates {
    pub alpha_n: f64,
    pub beta_n: f64,
    pub alpha_m: f64,
    pub beta_m: f64,
    pub alpha_h: f64,
    pub beta_h: f64,
}

/// Rate functions at membrane potential `v` (mV).
///
/// The two quotients `c·u / (exp(u/10) − 1)` are evaluated as
/// `10c / exprel(u/10)`, which stays finite at their removable
/// singularities (`V = −55` for αn, `V = −40` for αm).
pub fn hh_rates(v: f64) -> GateRates {
    let un = (10.0 - 65.0 - v) / 10.0;
    let um = (25.0 - 65.0 - v) / 10.0;
    GateRates {
        alpha_n: 0.1 / exprel(un),
        beta_n: 0.125 * ((-65.0 - v) / 80.0).exp(),
        alpha_m: 1.0 / exprel(um),
        beta_m: 4.0 * ((-65.0 - v) / 18.0).exp(),
        alpha_h: 0.07 * ((-65.0 - v) / 20.0).exp(),
        beta_h: 1.0 / (((30.0 - 65.0 - v) / 10.0).exp() + 1.0),
    }
}

/// `α / (α + β)`.
pub fn steady_state(alpha: f64, beta: f64) -> f64 {
    alpha / (alpha + beta)
}

impl GateRates {
    pub fn n_inf(&self) -> f64 {
        steady_state(self.alpha_n, self.beta_n)
    }
    pub fn m_inf(&self) -> f64 {
        steady_state(self.alpha_m, self.beta_m)
    }
    pub fn h_inf(&self) -> f64 {
        steady_state(self.alpha_h, self.beta_h)
    }
}

#[derive(Debug, Clone)]
pub struct HodgkinHuxley {
    pub params: HhParams,
    pub protocol: CurrentProtocol,
    groups: Vec<Vec<usize>>,
    labels: Vec<Label>,
}

pub const V: usize = 0;
pub const N: usize = 1;
pub const M: usize = 2;
pub const H: usize = 3;

impl HodgkinHuxley {
    pub fn new(params: HhParams, protocol: CurrentProtocol) -> Self {
        Self {
            params,
            protocol,
            groups: vec![vec![V], vec![N, M, H]],
            labels: vec![
                Label::new("V", "mV"),
                Label::new("n", ""),
                Label::new("m", ""),
                Label::new("h", ""),
            ],
        }
    }

    /// Voltage coefficients for given gate values and injected current.
    pub(crate) fn voltage_coeffs(p: &HhParams, i_inj: f64, n: f64, m: f64, h: f64) -> Coeffs {
        let gk = p.g_k * n.powi(4);
        let gna = p.g_na * m.powi(3) * h;
        Coeffs::new(
            -(gk + gna + p.g_l) / p.c,
            (i_inj + gk * p.e_k + gna * p.e_na + p.g_l * p.e_l) / p.c,
        )
    }
}

/// Interval the exact voltage cannot leave when it starts at `v0`.
///
/// `V` relaxes towards `b_V / −a_V`, a conductance-weighted mean of the
/// reversal potentials plus `I / g_total`, and `g_total ≥ gL`. Numerical
/// solutions outside this interval are artefacts of the integrator.
pub fn voltage_envelope(p: &HhParams, proto: &CurrentProtocol, v0: f64) -> (f64, f64) {
    let e_lo = p.e_k.min(p.e_na).min(p.e_l);
    let e_hi = p.e_k.max(p.e_na).max(p.e_l);
    let lo = e_lo + proto.i_on.min(0.0) / p.g_l;
    let hi = e_hi + proto.i_on.max(0.0) / p.g_l;
    (lo.min(v0), hi.max(v0))
}

pub fn hh_system(p: HhParams, proto: CurrentProtocol) -> HodgkinHuxley {
    HodgkinHuxley::new(p, proto)
}

fn gate_coeffs(rates: &GateRates, gate: usize) -> Coeffs {
    let (alpha, beta) = match gate {
        N => (rates.alpha_n, rates.beta_n),
        M => (rates.alpha_m, rates.beta_m),
        H => (rates.alpha_h, rates.beta_h),
        _ => unreachable!(),
    };
    Coeffs::new(-(alpha + beta), alpha)
}

impl CondLinSystem for HodgkinHuxley {
    fn dim(&self) -> usize {
        4
    }

    fn coeffs(&self, t: f64, x: &[f64], i: usize) -> Coeffs {
        match i {
            V => Self::voltage_coeffs(&self.params, self.protocol.current(t), x[N], x[M], x[H]),
            N | M | H => gate_coeffs(&hh_rates(x[V]), i),
            _ => panic!("Hodgkin-Huxley has 4 components, asked for {i}"),
        }
    }

    fn coeffs_many(&self, t: f64, x: &[f64], members: &[usize], out: &mut [Coeffs]) {
        let mut rates = None;
        for (slot, &i) in out.iter_mut().zip(members) {
            *slot = if i == V {
                self.coeffs(t, x, V)
            } else {
                gate_coeffs(rates.get_or_insert_with(|| hh_rates(x[V])), i)
            };
        }
    }

    fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn model_id(&self) -> String {
        "hh".into()
    }
}

/// `V = −65` mV with every gate at its steady state there, at `t = 0`.
pub fn hh_rest_state(_p: &HhParams) -> State {
    let r = hh_rates(-65.0);
    State::new(0.0, vec![-65.0, r.n_inf(), r.m_inf(), r.h_inf()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowKind;
    use crate::system::{check_conditional_linearity, check_group_commutation, group_flow};

    // Independent evaluation of the quotient forms away from their
    // singularities.
    fn alpha_n_naive(v: f64) -> f64 {
        let u = 10.0 - 65.0 - v;
        0.01 * u / ((u / 10.0).exp() - 1.0)
    }

    fn alpha_m_naive(v: f64) -> f64 {
        let u = 25.0 - 65.0 - v;
        0.1 * u / ((u / 10.0).exp() - 1.0)
    }

    #[test]
    fn removable_singularities() {
        assert!((hh_rates(-55.0).alpha_n - 0.1).abs() < 1e-15);
        assert!((hh_rates(-40.0).alpha_m - 1.0).abs() < 1e-15);
        assert!((hh_rates(-35.0).beta_h - 0.5).abs() < 1e-15);
        // Continuity through the singular points.
        let near = hh_rates(-55.0 + 1e-7).alpha_n;
        assert!((near - 0.1).abs() < 1e-8);
    }

    #[test]
    fn rates_match_quotient_forms() {
        for &v in &[-90.0, -65.0, -50.0, -20.0, 0.0, 30.0] {
            let r = hh_rates(v);
            assert!((r.alpha_n - alpha_n_naive(v)).abs() < 1e-13 * alpha_n_naive(v).abs());
            assert!((r.alpha_m - alpha_m_naive(v)).abs() < 1e-13 * alpha_m_naive(v).abs());
        }
    }

    #[test]
    fn rest_state_gates() {
        let s = hh_rest_state(&HhParams::default());
        assert_eq!(s.x[V], -65.0);
        assert!((s.x[N] - 0.3177).abs() < 5e-5, "n = {}", s.x[N]);
        assert!((s.x[M] - 0.0529).abs() < 5e-5, "m = {}", s.x[M]);
        assert!((s.x[H] - 0.5961).abs() < 5e-5, "h = {}", s.x[H]);
    }

    #[test]
    fn voltage_is_dissipative_at_rest() {
        let sys = hh_system(HhParams::default(), CurrentProtocol::silent());
        let s = hh_rest_state(&sys.params);
        assert!(sys.coeffs(0.0, &s.x, V).a < 0.0);
    }

    #[test]
    fn protocol_window() {
        let p = CurrentProtocol::standard(10.0);
        assert_eq!(p.current(49.999), 0.0);
        assert_eq!(p.current(50.0), 10.0);
        assert_eq!(p.current(149.999), 10.0);
        assert_eq!(p.current(150.0), 0.0);
        assert!(CurrentProtocol::new(1.0, 5.0, 5.0).is_err());
    }

    #[test]
    fn gate_flow_relaxes_to_steady_state() {
        let sys = hh_system(HhParams::default(), CurrentProtocol::silent());
        let v = -50.0;
        let s = State::new(0.0, vec![v, 0.0, 0.0, 0.0]);
        let out = group_flow(&sys, 1, &s, 1e4, &[FlowKind::Exact, FlowKind::Exact, FlowKind::Exact])
            .unwrap();
        let r = hh_rates(v);
        assert!((out.x[N] - r.n_inf()).abs() < 1e-14);
        assert!((out.x[M] - r.m_inf()).abs() < 1e-14);
        assert!((out.x[H] - r.h_inf()).abs() < 1e-14);
    }

    #[test]
    fn structure_checks() {
        let sys = hh_system(HhParams::default(), CurrentProtocol::standard(10.0));
        let samples: Vec<State> = (0..40)
            .map(|k| {
                let k = k as f64;
                State::new(
                    2.5 * k,
                    vec![
                        -80.0 + 3.0 * k,
                        0.5 + 0.4 * (k * 0.7).sin(),
                        0.5 + 0.4 * (k * 1.1).cos(),
                        0.5 + 0.4 * (k * 0.3).sin(),
                    ],
                )
            })
            .collect();
        assert!(check_conditional_linearity(&sys, &samples, 0.0));
        assert!(check_group_commutation(&sys, &samples, &[0.01, 0.5, 3.0], 0.0));
    }

    #[test]
    fn envelope_separates_stable_from_unstable_runs() {
        use crate::integrators::{integrate, Method};
        let p = HhParams::default();
        let proto = CurrentProtocol::standard(10.0);
        let (lo, hi) = voltage_envelope(&p, &proto, -65.0);
        assert_eq!((lo, hi), (-77.0, 55.0 + 10.0 / 0.3));
        let sys = hh_system(p, proto);
        let s0 = hh_rest_state(&p);
        let inside = |m: &Method| {
            let t = integrate(&sys, m, &s0, 200.0, 0.4, 1e6).unwrap();
            let ok = t.component(V).all(|v| (lo..=hi).contains(&v));
            ok
        };
        assert!(inside(&Method::exp_euler(&sys)));
        assert!(inside(&Method::strang(&sys)));
        assert!(!inside(&Method::symplectic_euler(&sys)));
    }
}
