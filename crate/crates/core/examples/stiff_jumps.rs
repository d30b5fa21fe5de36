// Relaxation oscillations at ε = 50. Every jump of the Liénard coordinate y₁
// should land near |y₁| = 2 with y₂ close to 2/3.

use condlin::analysis::jump_returns;
use condlin::experiment::MethodId;
use condlin::integrators::{integrate_with, reference_integrate, IntegrateOptions};
use condlin::models::{vdp_system, VdpParams};
use condlin::State;

const EPS: f64 = 50.0;
const T_END: f64 = 320.0;

fn main() {
    let sys = vdp_system(VdpParams::new(EPS));
    let s0 = State::new(0.0, vec![1.0, 0.0]);

    let reference = reference_integrate(&sys, &s0, T_END).unwrap();
    let r = jump_returns(&reference, EPS).unwrap();
    println!("reference: {} jumps, |y1| {:.3}, |y2| {:.3}", r.len(), r.mean_abs_y1, r.mean_abs_y2);

    let h = 0.01;
    for m in MethodId::COMPARED {
        let method = m.build(&sys).unwrap();
        let traj = integrate_with(&sys, &method, &s0, T_END, h, IntegrateOptions::default()).unwrap();
        match jump_returns(&traj, EPS) {
            Ok(r) => println!(
                "{m:<18} {:>3} jumps, |y1| {:.3}, |y2| {:.3}",
                r.len(),
                r.mean_abs_y1,
                r.mean_abs_y2
            ),
            Err(e) => println!("{m:<18} {e}"),
        }
    }
}
