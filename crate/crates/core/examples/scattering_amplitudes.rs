//! Closed-form amplitudes against a direct lattice solve, plus the transfer matrix.

use std::f64::consts::FRAC_PI_2;

use abring::params::ModelParams;
use abring::scattering::{det_transfer, oracle_amplitudes, scattering_amplitudes, transfer_matrix};

fn main() -> abring::Result<()> {
    let p = ModelParams::new(0.4, 0.35, 1.1)?;
    let a = scattering_amplitudes(&p)?;
    let o = oracle_amplitudes(&p)?;
    println!("t_L = {:.8}  r_L = {:.8}", a.t_left, a.r_left);
    println!("t_R = {:.8}  r_R = {:.8}", a.t_right, a.r_right);
    println!("|r|^2 + |t|^2 = {:.6} (gain makes this differ from 1)", a.left_flux());
    println!("closed form vs lattice solve: {:.2e}", a.max_abs_diff(&o));

    let m = transfer_matrix(&p)?;
    println!("M = {:.6?}", m.entries());
    println!("det M = {:.8}", det_transfer(&p)?);

    // at the band centre the determinant is -1 for any flux and gain
    let centre = ModelParams::new(0.4, 0.35, FRAC_PI_2)?;
    println!("det M at k = pi/2: {:.3e}", det_transfer(&centre)?);
    Ok(())
}
