//! Purely outgoing states at the spectral singularity.
//!
//! At the critical point the two Bethe states collapse onto one and the
//! biorthogonal overlap with its partner vanishes.

use abring::eigensystem::{residual, singular_state, SingularSign};
use abring::lattice::build_hamiltonian;
use abring::scattering::CriticalPoint;

fn main() -> abring::Result<()> {
    let n = 100;
    let cp = CriticalPoint::on_locus(0.707, 0)?;
    let h = build_hamiltonian(n, cp.gamma_c, cp.phi_c, false)?;
    let h_dag = build_hamiltonian(n, cp.gamma_c, cp.phi_c, true)?;
    let energy = 2.0 * cp.k_c.cos();
    for sign in [SingularSign::Plus, SingularSign::Minus] {
        let s = singular_state(&cp, sign, false, n)?;
        let bar = singular_state(&cp, sign, true, n)?;
        println!("{sign:?}");
        println!("  residual {:.2e}, partner residual {:.2e}", residual(&h, &s, energy)?, residual(&h_dag, &bar, energy)?);
        println!("  <bar|psi> on the leads = {:.2e}", bar.lead_inner(&s).norm());
    }
    Ok(())
}
