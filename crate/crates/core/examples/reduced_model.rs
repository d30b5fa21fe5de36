// Freezing the fast sodium gate at m∞(V) keeps the neuron firing at currents
// where the full model only spikes once.

use condlin::analysis::{count_spikes, SpikeOptions};
use condlin::integrators::{reference_integrate, IntegrateOptions};
use condlin::models::{
    hh_rest_state, hh_system, reduced_integrate, reduced_rest_state, CurrentProtocol, HhParams,
    ReducedVariant,
};

fn main() {
    let p = HhParams::default();
    let opts = SpikeOptions::default();
    println!("{:>6}{:>8}{:>10}", "I", "full", "reduced");
    for i_on in [10.0, 6.0, 5.0] {
        let proto = CurrentProtocol::standard(i_on);
        let full = reference_integrate(&hh_system(p, proto), &hh_rest_state(&p), 200.0).unwrap();
        let reduced = reduced_integrate(
            &p,
            &proto,
            &reduced_rest_state(),
            200.0,
            0.01,
            ReducedVariant::ExpEuler,
            IntegrateOptions::default(),
        )
        .unwrap();
        println!(
            "{:>6}{:>8}{:>10}",
            i_on,
            count_spikes(&full, &opts).unwrap().count(),
            count_spikes(&reduced, &opts).unwrap().count()
        );
    }
}
