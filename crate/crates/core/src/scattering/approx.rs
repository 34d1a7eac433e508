//! Leading-order transmission near a spectral singularity.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{singularity_locus, ModelParams, DEFAULT_TOL};
use crate::scattering::wrap_phase;

/// A point `(k_c, phi_c, gamma_c)` with `k_c = pi/2`, `sin^2 2phi_c = gamma_c^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub k_c: f64,
    pub phi_c: f64,
    pub gamma_c: f64,
}

impl CriticalPoint {
    /// Critical point on the `branch`-th locus solution (0: `phi_c <= pi/4`).
    pub fn on_locus(gamma_c: f64, branch: usize) -> Result<Self> {
        let locus = singularity_locus(gamma_c)?;
        let phi_c = *locus
            .get(branch)
            .ok_or_else(|| Error::InvalidParams(format!("locus branch {branch} does not exist for gamma {gamma_c}")))?;
        Ok(Self { k_c: FRAC_PI_2, phi_c, gamma_c })
    }

    /// Largest violation of the critical-point conditions.
    pub fn residual(&self) -> f64 {
        let s = (2.0 * self.phi_c).sin();
        let locus = (s * s - self.gamma_c * self.gamma_c).abs();
        locus.max((self.k_c - FRAC_PI_2).abs())
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let res = self.residual();
        if !(res <= tol) || !(self.gamma_c > 0.0) {
            return Err(Error::InvalidCriticalPoint(res));
        }
        Ok(())
    }
}

/// Box around the critical point inside which the expansion is trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrustRegion {
    pub phi: f64,
    pub gamma: f64,
    pub k: f64,
}

impl Default for TrustRegion {
    fn default() -> Self {
        Self { phi: 0.1, gamma: 0.1, k: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxAmplitude {
    pub rho: Complex64,
    /// `Arg(rho) - pi/2` in `(-pi, pi]`.
    pub omega: f64,
    pub t_approx: Complex64,
    pub critical_point: CriticalPoint,
    /// Set when the parameters fall outside the default trust region.
    pub extrapolated: bool,
}

pub fn approx_amplitude(p: &ModelParams, cp: &CriticalPoint) -> Result<ApproxAmplitude> {
    cp.validate(DEFAULT_TOL)?;
    let d_phi = p.phi() - cp.phi_c;
    let d_gamma = p.gamma() - cp.gamma_c;
    let d_k = p.k() - cp.k_c;
    let g2 = cp.gamma_c * cp.gamma_c;

    // (sin^2 2phi - gamma^2)/2 to second order in phi, first in gamma.
    let re = (4.0 * cp.phi_c).sin() * d_phi + 2.0 * (4.0 * cp.phi_c).cos() * d_phi * d_phi
        - cp.gamma_c * d_gamma;
    let rho = Complex64::new(re, (2.0 - g2) * d_k);
    let omega = wrap_phase(rho.arg() - FRAC_PI_2);

    let s = cp.gamma_c * (2.0 * cp.phi_c).sin();
    assert!(s != 0.0, "sin(2 phi_c) cannot vanish on the locus with gamma_c > 0");
    let t_approx = Complex64::from_polar(g2 / rho.norm() * s.signum(), omega);

    let tr = TrustRegion::default();
    let extrapolated = d_phi.abs() > tr.phi || d_gamma.abs() > tr.gamma || d_k.abs() > tr.k;
    Ok(ApproxAmplitude { rho, omega, t_approx, critical_point: *cp, extrapolated })
}
