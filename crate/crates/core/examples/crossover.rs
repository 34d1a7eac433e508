//! Maximal phase shift as the gain crosses the critical value.
//!
//! The shift drops from about pi, through pi/2 at gamma = 1, towards zero.

use std::f64::consts::FRAC_PI_2;

use abring::scattering::max_phase_shift;

fn main() -> abring::Result<()> {
    let k = FRAC_PI_2 + 1e-5;
    for i in 0..=10 {
        let gamma = 0.8 + 0.05 * i as f64;
        let d = max_phase_shift(k, gamma)?;
        println!("gamma = {gamma:.2}  dOmega = {d:.5}  ({:.3} pi)", d / std::f64::consts::PI);
    }
    Ok(())
}
