use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{classify, derived_quantities, ModelParams, SingularityKind, DEFAULT_TOL};

/// Below this `|(eta - eta*) xi+ chi|` the generic formula is not trusted.
pub const DEGENERATE_THRESHOLD: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Maps left-lead amplitudes `(A-, B-)` to right-lead amplitudes `(B+, A+)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
    pub det: Complex64,
}

impl TransferMatrix {
    pub fn from_entries(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22, det: m11 * m22 - m12 * m21 }
    }

    /// Builds `M` from both-sided amplitudes: `t_L = det M * t_R`,
    /// `M22 = 1/t_R`, `M12 = r_R/t_R`, `M21 = -r_L/t_R`.
    pub fn from_amplitudes(r_left: Complex64, t_left: Complex64, r_right: Complex64, t_right: Complex64) -> Self {
        Self::from_entries(
            (t_left * t_right - r_left * r_right) / t_right,
            r_right / t_right,
            -r_left / t_right,
            t_right.inv(),
        )
    }

    pub fn apply(&self, a_minus: Complex64, b_minus: Complex64) -> (Complex64, Complex64) {
        (self.m11 * a_minus + self.m12 * b_minus, self.m21 * a_minus + self.m22 * b_minus)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn transfer_matrix(p: &ModelParams) -> Result<TransferMatrix> {
    if classify(p, DEFAULT_TOL).kind == SingularityKind::Singular {
        // Limit on the locus; the k = -pi/2 branch is the mirror image.
        let s = p.k().sin().signum();
        return Ok(TransferMatrix::from_entries(
            Complex64::new(0.0, 0.0),
            -I * s,
            I * s,
            Complex64::new(0.0, 0.0),
        ));
    }

    let d = derived_quantities(p);
    let q = d.rotation_diagonal();
    let chi = d.chi;
    let prefactor = I * d.twice_im_eta() * d.xi_plus * chi;
    if prefactor.norm() < DEGENERATE_THRESHOLD {
        return Err(Error::DegenerateDivision(prefactor.norm()));
    }
    // (eta - eta*) xi+ chi M = M~
    let m11 = Complex64::from(-d.chi_abs * d.chi_abs);
    let m12 = chi * q;
    let m21 = -chi * q;
    let m22 = chi * chi;
    Ok(TransferMatrix::from_entries(
        m11 / prefactor,
        m12 / prefactor,
        m21 / prefactor,
        m22 / prefactor,
    ))
}

/// `det M = xi- / xi+`.
pub fn det_transfer(p: &ModelParams) -> Result<Complex64> {
    let d = derived_quantities(p);
    if d.xi_plus == 0.0 {
        return Err(Error::DivisionByZero("xi+ vanishes"));
    }
    Ok(Complex64::from(d.xi_minus / d.xi_plus))
}
