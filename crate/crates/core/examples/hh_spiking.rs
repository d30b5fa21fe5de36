// Hodgkin-Huxley neuron driven by 10 µA/cm² between 50 and 150 ms.
// Coarse steps cost spikes for some methods and blow up others.

use condlin::analysis::{count_spikes, SpikeOptions};
use condlin::experiment::MethodId;
use condlin::integrators::{integrate, reference_integrate, DEFAULT_GUARD};
use condlin::models::{hh_rest_state, hh_system, voltage_envelope, CurrentProtocol, HhParams};

fn main() {
    let p = HhParams::default();
    let proto = CurrentProtocol::standard(10.0);
    let sys = hh_system(p, proto);
    let s0 = hh_rest_state(&p);
    let (lo, hi) = voltage_envelope(&p, &proto, s0.x[0]);
    let opts = SpikeOptions::default();

    let reference = reference_integrate(&sys, &s0, 200.0).unwrap();
    println!("reference: {} spikes", count_spikes(&reference, &opts).unwrap().count());

    for h in [0.1, 0.4, 0.8] {
        for m in MethodId::COMPARED {
            let method = m.build(&sys).unwrap();
            let traj = integrate(&sys, &method, &s0, 200.0, h, DEFAULT_GUARD).unwrap();
            let Ok(train) = count_spikes(&traj, &opts) else {
                println!("h={h:<4} {m:<18} diverged");
                continue;
            };
            let bounded = traj.component(0).all(|v| (lo..=hi).contains(&v));
            println!(
                "h={h:<4} {m:<18} {:>2} spikes{}",
                train.count(),
                if bounded { "" } else { "  (voltage left the physical range)" }
            );
        }
    }
}
