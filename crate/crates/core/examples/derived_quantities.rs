//! Spinor rotation data and singularity classification for a few points.
//!
//! Run with `cargo run --example derived_quantities`.

use std::f64::consts::FRAC_PI_2;

use abring::params::{classify, derived_quantities, singularity_locus, ModelParams};

fn main() -> abring::Result<()> {
    for (gamma, phi, k) in [(0.0, 0.3, 1.0), (0.5, 0.3, 1.2), (1.0, 0.2, FRAC_PI_2 + 0.01)] {
        let p = ModelParams::new(gamma, phi, k)?;
        let d = derived_quantities(&p);
        let c = classify(&p, 1e-9);
        println!("gamma={gamma} phi={phi} k={k:.4}");
        println!("  eta = {:.6}, xi+ = {:.6}, xi- = {:.6}", d.eta, d.xi_plus, d.xi_minus);
        println!("  |chi| = {:.3e}, theta = {:?}", d.chi_abs, d.theta);
        println!("  {:?}, distance to locus {:.3e}", c.kind, c.distance);
    }

    let phi_c = singularity_locus(0.707)?;
    println!("critical fluxes at gamma = 0.707: {phi_c:?}");
    let on = ModelParams::new(0.707, phi_c[0], FRAC_PI_2)?;
    println!("  classified as {:?}", classify(&on, 1e-9).kind);
    Ok(())
}
