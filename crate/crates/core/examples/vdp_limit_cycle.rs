// Weakly nonlinear Van der Pol: every method settles on a cycle, but the
// explicit ones inflate it as the step grows.

use condlin::analysis::average_radius;
use condlin::experiment::MethodId;
use condlin::integrators::{integrate, DEFAULT_GUARD};
use condlin::models::{vdp_system, VdpParams};
use condlin::State;

fn main() {
    let sys = vdp_system(VdpParams::new(0.05));
    let s0 = State::new(0.0, vec![1.0, 0.0]);
    println!("{:<18}{:>8}{:>14}", "method", "h", "mean radius");
    for h in [0.05, 0.2] {
        for m in MethodId::COMPARED {
            let method = m.build(&sys).unwrap();
            let traj = integrate(&sys, &method, &s0, 400.0, h, DEFAULT_GUARD).unwrap();
            match average_radius(&traj, 0.5) {
                Ok(stats) => println!("{:<18}{:>8}{:>14.5}", m, h, stats.mean_radius),
                Err(e) => println!("{:<18}{:>8}{:>14}", m, h, e),
            }
        }
    }
}
