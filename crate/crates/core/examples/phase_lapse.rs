//! Transmission phase along the flux axis and the lapses it contains.
//!
//! Below the critical gain the phase jumps by about pi at two fluxes. A
//! sign change of xi- shows up as a transmission node instead. Samples where
//! the shared denominator underflows are reported as gaps; for the
//! Hermitian ring this happens around quarter flux.

use std::f64::consts::FRAC_PI_2;

use abring::scattering::phase_profile;

fn main() -> abring::Result<()> {
    let k = FRAC_PI_2 + 1e-5;
    for gamma in [0.0, 0.707, 1.2] {
        let prof = phase_profile(k, gamma, (0.0, FRAC_PI_2), 4001)?;
        println!("gamma = {gamma}: {} gaps", prof.gaps());
        for e in &prof.lapse_events {
            println!("  lapse at phi = {:.5}, jump {:+.4}", e.phi, e.jump);
        }
        for e in &prof.node_events {
            println!("  node  at phi = {:.5}", e.phi);
        }
    }
    Ok(())
}
