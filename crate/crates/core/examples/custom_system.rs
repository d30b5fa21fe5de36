// A user-defined system: the Lotka-Volterra predator-prey model, integrated
// with Strang splitting and with a custom (1,1) Padé approximant of the
// exponential as the component flow.

use condlin::integrators::{integrate, Method, DEFAULT_GUARD};
use condlin::system::{check_conditional_linearity, Coeffs};
use condlin::{FlowKind, FnSystem, State};

fn main() {
    // ẋ = (1 − y) x,  ẏ = (x − 1) y
    let sys = FnSystem::new("lotka-volterra", 2, |_, x, i| match i {
        0 => Coeffs::new(1.0 - x[1], 0.0),
        _ => Coeffs::new(x[0] - 1.0, 0.0),
    });
    let probes = [State::new(0.0, vec![0.4, 0.6]), State::new(0.0, vec![2.0, 3.0])];
    assert!(check_conditional_linearity(&sys, &probes, 1e-12));

    let pade = FlowKind::custom("pade11", |z| (1.0 + 0.5 * z) / (1.0 - 0.5 * z));
    let methods = [
        Method::exp_euler(&sys),
        Method::strang(&sys),
        Method::euler_type(&sys, vec![pade.clone(), pade]).unwrap(),
    ];
    let s0 = State::new(0.0, vec![2.0, 0.5]);
    // x − ln x + y − ln y is conserved by the exact flow.
    let invariant = |x: &[f64]| x[0] - x[0].ln() + x[1] - x[1].ln();
    for m in &methods {
        let traj = integrate(&sys, m, &s0, 50.0, 0.05, DEFAULT_GUARD).unwrap();
        let drift = traj
            .samples()
            .map(|x| (invariant(x) - invariant(&s0.x)).abs())
            .fold(0.0, f64::max);
        println!("{:<14} max invariant drift {drift:.2e}", m.id());
    }
}
