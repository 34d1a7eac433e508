//! Linearised transmission close to a critical point.

use std::f64::consts::FRAC_PI_2;

use abring::params::ModelParams;
use abring::scattering::{approx_amplitude, scattering_amplitudes, CriticalPoint};

fn main() -> abring::Result<()> {
    let cp = CriticalPoint::on_locus(0.707, 0)?;
    println!("critical point: {cp:?}");
    for eps in [1e-2, 1e-3, 1e-4] {
        let p = ModelParams::new(cp.gamma_c, cp.phi_c + eps, FRAC_PI_2 + eps)?;
        let exact = scattering_amplitudes(&p)?.t_left;
        let approx = approx_amplitude(&p, &cp)?;
        let rel = (approx.t_approx - exact).norm() / exact.norm();
        println!("offset {eps:.0e}: |t| = {:.4e}, relative error {rel:.2e}, omega = {:.4}", exact.norm(), approx.omega);
    }
    Ok(())
}
