//! Plane-wave eigenstates and their biorthogonal partners on a finite window.

use abring::eigensystem::{bethe_state, biorthogonality_report, eigen_pair_coefficients, residual, Branch};
use abring::lattice::build_hamiltonian;
use abring::params::ModelParams;
use num_complex::Complex64;

fn main() -> abring::Result<()> {
    let n = 200;
    let (gamma, phi, k) = (0.5, 0.3, 1.2);
    let p = ModelParams::with_sites(gamma, phi, k, n)?;
    let theta = 0.4_f64;
    let coeffs = eigen_pair_coefficients(&p, Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), 0.7))?;
    println!("beta1 = ({:.6}, {:.6})", coeffs.beta1_minus, coeffs.beta1_plus);
    println!("C1 = {:.6}, C2 = {:.6}", coeffs.c1, coeffs.c2);

    let h = build_hamiltonian(n, gamma, phi, false)?;
    let h_dag = build_hamiltonian(n, gamma, phi, true)?;
    let energy = 2.0 * k.cos();
    for (branch, m) in [(Branch::Psi1, &h), (Branch::Psi2, &h), (Branch::Bar1, &h_dag), (Branch::Bar2, &h_dag)] {
        let s = bethe_state(&p, &coeffs, branch)?;
        println!("{branch:?}: residual {:.2e}", residual(m, &s, energy)?);
    }

    let r = biorthogonality_report(&p, &coeffs, n)?;
    println!("spinor identity error {:.2e}", r.spinor_identity_error);
    println!("<bar1|psi2> = {:.3e}", r.offdiag);
    println!("<bar1|psi1> = {:.5}, expected {:.5}", r.diag.0, r.expected_diag.0);
    Ok(())
}
