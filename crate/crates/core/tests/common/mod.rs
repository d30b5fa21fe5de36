// Checks shared by the property tests and the acceptance report. Each
// returns `Err` with a description of the first violation.
#![allow(dead_code)]

use condlin::analysis::fit_loglog_slope;
use condlin::experiment::MethodId;
use condlin::integrators::{integrate, reference_integrate, Method, DEFAULT_GUARD};
use condlin::models::{
    hh_rates, hh_rest_state, hh_system, vdp_system, CurrentProtocol, HhParams, VdpParams,
};
use condlin::system::{check_conditional_linearity, group_flow, Coeffs};
use condlin::{FlowKind, FnSystem, State};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub type Check = Result<String, String>;

pub fn flow_kinds() -> Vec<FlowKind> {
    vec![
        FlowKind::Exact,
        FlowKind::ForwardEuler,
        FlowKind::BackwardEuler,
        FlowKind::custom("pade11", |z| (1.0 + 0.5 * z) / (1.0 - 0.5 * z)),
    ]
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

/// `r*(z) r(−z) = 1` to 4 ulps.
pub fn adjoint_identity() -> Check {
    for kind in flow_kinds() {
        let adj = kind.adjoint();
        run(2000, -30.0..30.0f64, |z| {
            let (Ok(a), Ok(r)) = (adj.stability(z), kind.stability(-z)) else {
                return Ok(());
            };
            if a.is_finite() && r != 0.0 {
                let p = a * r;
                prop_assert!((p - 1.0).abs() <= 4.0 * f64::EPSILON, "{kind:?} z={z}: {p}");
            }
            Ok(())
        })?;
    }
    Ok("exact, forward/backward Euler, Padé".into())
}

/// `1 + z phi1(z) = r(z)` away from the origin and `phi1(0) = 1`.
pub fn phi1_consistency() -> Check {
    for kind in flow_kinds() {
        let phi0 = kind.phi1(0.0).map_err(|e| e.to_string())?;
        if (phi0 - 1.0).abs() > 1e-6 {
            return Err(format!("{kind:?}: phi1(0) = {phi0}"));
        }
        run(2000, -10.0..0.9f64, |z| {
            prop_assume!(z.abs() > 1e-3);
            let r = kind.stability(z).unwrap();
            let lhs = 1.0 + z * kind.phi1(z).unwrap();
            prop_assert!((lhs - r).abs() <= 1e-12 * r.abs().max(1.0), "{kind:?} z={z}");
            Ok(())
        })?;
    }
    Ok("all flow kinds".into())
}

fn vdp_states() -> Vec<State> {
    [[1.0, 0.0], [0.3, -1.7], [-2.1, 0.4], [1e-3, 5.0]]
        .iter()
        .map(|x| State::new(0.0, x.to_vec()))
        .collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// A symmetric method stepped by `h` then `−h` lands back on its start.
pub fn time_symmetry() -> Check {
    let mut worst = 0.0f64;
    for eps in [0.05, 1.0, 10.0] {
        let sys = vdp_system(VdpParams::new(eps));
        for m in [Method::strang(&sys), Method::stormer_verlet(&sys)] {
            for s in vdp_states() {
                for h in [1e-3, 0.01, 0.1] {
                    let fwd = m.step(&sys, &s, h).map_err(|e| e.to_string())?;
                    let back = m.step(&sys, &fwd, -h).map_err(|e| e.to_string())?;
                    let d = max_diff(&back.x, &s.x);
                    if d > 1e-10 {
                        return Err(format!("{} eps={eps} h={h}: off by {d:e}", m.id()));
                    }
                    worst = worst.max(d);
                }
            }
        }
    }
    Ok(format!("max round-trip error {worst:.1e}"))
}

/// With constant coefficients every composition equals exponential Euler.
pub fn commuting_reduction() -> Check {
    const AB: [(f64, f64); 4] = [(-1.3, 0.4), (0.7, -2.0), (0.0, 1.5), (-25.0, 3.0)];
    let sys = FnSystem::new("const", 4, |_, _, i| Coeffs::new(AB[i].0, AB[i].1))
        .with_groups(vec![vec![2], vec![0, 3], vec![1]]);
    let base_m = Method::exp_euler(&sys);
    let others = [
        Method::lie_trotter(&sys),
        Method::strang(&sys),
        Method::exp_midpoint(&sys),
        Method::lie_trotter(&sys).adjoint_composition().unwrap(),
    ];
    let s = State::new(0.3, vec![1.0, -0.5, 2.0, 0.25]);
    let mut worst = 0.0f64;
    for h in [1e-3, 0.05, 0.4, 2.0] {
        let base = base_m.step(&sys, &s, h).unwrap();
        for m in &others {
            let out = m.step(&sys, &s, h).unwrap();
            for (a, b) in out.x.iter().zip(&base.x) {
                let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
                if rel > 1e-15 {
                    return Err(format!("{} h={h}: relative gap {rel:e}", m.id()));
                }
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("max relative gap {worst:.1e}"))
}

/// Exact gate flows keep `n, m, h` in `[0, 1]` for any voltage and step.
pub fn gates_confined(draws: u32) -> Check {
    let p = HhParams::default();
    let sys = hh_system(p, CurrentProtocol::silent());
    let kinds = vec![FlowKind::Exact; 3];
    let gate = 0.0..=1.0f64;
    run(
        draws,
        (-150.0..100.0f64, 1e-4..50.0f64, gate.clone(), gate.clone(), gate),
        |(v, h, n, m, hg)| {
            let s = State::new(0.0, vec![v, n, m, hg]);
            let out = group_flow(&sys, 1, &s, h, &kinds).unwrap();
            for g in &out.x[1..] {
                prop_assert!((0.0..=1.0).contains(g), "V={v} h={h}: gate {g}");
            }
            Ok(())
        },
    )?;
    Ok(format!("{draws} random (V, h, gates) draws"))
}

/// Coefficients of both built-in models ignore their own component.
pub fn conditional_linearity() -> Check {
    let vdp = vdp_system(VdpParams::new(3.0));
    if !check_conditional_linearity(&vdp, &vdp_states(), 0.0) {
        return Err("Van der Pol".into());
    }
    let p = HhParams::default();
    let hh = hh_system(p, CurrentProtocol::standard(10.0));
    let rest = hh_rest_state(&p);
    let mut samples = vec![rest.clone()];
    for v in [-80.0, -40.0, 0.0, 30.0] {
        let r = hh_rates(v);
        samples.push(State::new(100.0, vec![v, r.n_inf(), r.m_inf(), r.h_inf()]));
    }
    if !check_conditional_linearity(&hh, &samples, 0.0) {
        return Err("Hodgkin-Huxley".into());
    }
    Ok("Van der Pol and Hodgkin-Huxley".into())
}

pub fn nominal_order(m: MethodId) -> f64 {
    match m {
        MethodId::ExpMidpoint | MethodId::Strang | MethodId::StormerVerlet => 2.0,
        _ => 1.0,
    }
}

/// Fitted global-error order at `t = 2` on Van der Pol with ε = 0.05.
pub fn endpoint_orders() -> Result<Vec<(MethodId, f64)>, String> {
    let sys = vdp_system(VdpParams::new(0.05));
    let s0 = State::new(0.0, vec![1.0, 0.0]);
    let t_end = 2.0;
    let exact = reference_integrate(&sys, &s0, t_end)
        .map_err(|e| e.to_string())?
        .last()
        .unwrap();
    MethodId::COMPARED
        .iter()
        .map(|&m| {
            let method = m.build(&sys).unwrap();
            let points: Vec<(f64, f64)> = [0.04, 0.02, 0.01, 0.005]
                .iter()
                .map(|&h| {
                    let end = integrate(&sys, &method, &s0, t_end, h, DEFAULT_GUARD)
                        .unwrap()
                        .last()
                        .unwrap();
                    (h, max_diff(&end.x, &exact.x))
                })
                .collect();
            let (slope, _) = fit_loglog_slope(&points).map_err(|e| e.to_string())?;
            Ok((m, slope))
        })
        .collect()
}

pub fn endpoint_order_check() -> Check {
    let orders = endpoint_orders()?;
    let text: Vec<String> = orders.iter().map(|(m, s)| format!("{m} {s:.2}")).collect();
    match orders.iter().find(|(m, s)| (s - nominal_order(*m)).abs() > 0.25) {
        Some((m, s)) => Err(format!("{m} order {s:.3}, expected {}", nominal_order(*m))),
        None => Ok(text.join(", ")),
    }
}
