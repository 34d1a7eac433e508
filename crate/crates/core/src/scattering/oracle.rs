//! Amplitudes from a direct solve of the lattice equations.
//!
//! Independent of the closed forms: plane-wave ansatz on the leads, the four
//! Schrodinger equations at sites `-1, +1, +, -` as a dense 4x4 system in
//! `(r, t, psi(+), psi(-))`, solved by LU with partial pivoting.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scattering::ScatteringAmplitudes;

const RANK_TOL: f64 = 1e-14;

/// Lead amplitude affine in the unknowns: `psi(j) = c + r * a + t * b`.
#[derive(Clone, Copy)]
struct Affine {
    c: Complex64,
    a: Complex64,
    b: Complex64,
}

fn solve(gamma: f64, phi: f64, k: f64, from_left: bool) -> Result<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let energy = Complex64::from(2.0 * k.cos());
    let i = Complex64::new(0.0, 1.0);

    let lead = |j: i32| -> Affine {
        let jf = f64::from(j);
        match (from_left, j < 0) {
            // e^{ikj} + r e^{-ikj} | t e^{ikj}
            (true, true) => Affine { c: e(k * jf), a: e(-k * jf), b: zero },
            (true, false) => Affine { c: zero, a: zero, b: e(k * jf) },
            // t e^{-ikj} | e^{-ikj} + r e^{ikj}
            (false, true) => Affine { c: zero, a: zero, b: e(-k * jf) },
            (false, false) => Affine { c: e(-k * jf), a: e(k * jf), b: zero },
        }
    };
    let (m2, m1, p1, p2) = (lead(-2), lead(-1), lead(1), lead(2));
    let h = FRAC_1_SQRT_2;
    let (ep, em) = (e(phi) * h, e(-phi) * h);

    let mut mat = Matrix4::<Complex64>::zeros();
    let mut rhs = Vector4::<Complex64>::zeros();

    // site -1: psi(-2) + (e^{-i phi} psi+ + e^{i phi} psi-)/sqrt2 = E psi(-1)
    mat[(0, 0)] = m2.a - energy * m1.a;
    mat[(0, 1)] = m2.b - energy * m1.b;
    mat[(0, 2)] = em;
    mat[(0, 3)] = ep;
    rhs[0] = -(m2.c - energy * m1.c);
    // site 1: psi(2) + (e^{i phi} psi+ + e^{-i phi} psi-)/sqrt2 = E psi(1)
    mat[(1, 0)] = p2.a - energy * p1.a;
    mat[(1, 1)] = p2.b - energy * p1.b;
    mat[(1, 2)] = ep;
    mat[(1, 3)] = em;
    rhs[1] = -(p2.c - energy * p1.c);
    // site +: (e^{i phi} psi(-1) + e^{-i phi} psi(1))/sqrt2 + i gamma psi+ = E psi+
    mat[(2, 0)] = ep * m1.a + em * p1.a;
    mat[(2, 1)] = ep * m1.b + em * p1.b;
    mat[(2, 2)] = i * gamma - energy;
    rhs[2] = -(ep * m1.c + em * p1.c);
    // site -: (e^{-i phi} psi(-1) + e^{i phi} psi(1))/sqrt2 - i gamma psi- = E psi-
    mat[(3, 0)] = em * m1.a + ep * p1.a;
    mat[(3, 1)] = em * m1.b + ep * p1.b;
    mat[(3, 3)] = -i * gamma - energy;
    rhs[3] = -(em * m1.c + ep * p1.c);

    let lu = mat.lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..4).map(|d| u[(d, d)].norm()).collect();
    let largest = pivots.iter().cloned().fold(0.0, f64::max);
    let smallest = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    if largest == 0.0 || smallest <= RANK_TOL * largest {
        return Err(Error::SingularSystem);
    }
    let x = lu.solve(&rhs).ok_or(Error::SingularSystem)?;
    Ok((x[0], x[1]))
}

pub fn oracle_amplitudes(p: &ModelParams) -> Result<ScatteringAmplitudes> {
    let (r_left, t_left) = solve(p.gamma(), p.phi(), p.k(), true)?;
    let (r_right, t_right) = solve(p.gamma(), p.phi(), p.k(), false)?;
    Ok(ScatteringAmplitudes { r_left, t_left, r_right, t_right })
}
