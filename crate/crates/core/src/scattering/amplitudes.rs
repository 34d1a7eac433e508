use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Below this `|D|` the scattering state is treated as a lasing pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringAmplitudes {
    pub r_left: Complex64,
    pub t_left: Complex64,
    pub r_right: Complex64,
    pub t_right: Complex64,
}

impl ScatteringAmplitudes {
    pub fn transmission(&self) -> f64 {
        self.t_left.norm()
    }

    pub fn reflection(&self) -> f64 {
        self.r_left.norm()
    }

    /// Principal transmission phase `Arg(t_L)` in `(-pi, pi]`.
    pub fn transmission_phase(&self) -> f64 {
        self.t_left.arg()
    }

    pub fn reflection_phase(&self) -> f64 {
        self.r_left.arg()
    }

    /// `|r_L|^2 + |t_L|^2`; one for a Hermitian centre.
    pub fn left_flux(&self) -> f64 {
        self.r_left.norm_sqr() + self.t_left.norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.r_left - other.r_left,
            self.t_left - other.t_left,
            self.r_right - other.r_right,
            self.t_right - other.t_right,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

struct Pieces {
    mod_sq: f64,
    bracket: f64,
    denom: Complex64,
    twice_im_eta: Complex64,
    xi_minus: f64,
}

fn pieces(gamma: f64, phi: f64, k: f64) -> Pieces {
    let (s2, c2) = (2.0 * phi).sin_cos();
    let ck = k.cos();
    let g2 = gamma * gamma;
    let e_2ik = Complex64::from_polar(1.0, 2.0 * k);
    let e_ik = Complex64::from_polar(1.0, k);

    let bracket = 4.0 * ck * ck * c2 * c2 - g2 * s2 * s2;
    let back = e_2ik.conj() + 1.0 + g2;
    let denom = e_2ik * bracket - back * back;
    let fwd = e_ik * (e_2ik + 1.0 + g2);
    Pieces {
        mod_sq: (e_2ik + 1.0 + g2).norm_sqr(),
        bracket,
        denom,
        twice_im_eta: fwd - fwd.conj(),
        xi_minus: 2.0 * ck * c2 - gamma * s2,
    }
}

/// Denominator shared by `r_L` and `t_L`; vanishes on the singular locus.
pub fn shared_denominator(p: &ModelParams) -> Complex64 {
    pieces(p.gamma(), p.phi(), p.k()).denom
}

fn left_amplitudes(gamma: f64, phi: f64, k: f64, pole_tol: f64) -> Result<(Complex64, Complex64)> {
    let pc = pieces(gamma, phi, k);
    let dn = pc.denom.norm();
    if dn < pole_tol {
        return Err(Error::SingularTransmission(dn));
    }
    let r = (pc.mod_sq - pc.bracket) / pc.denom;
    let t = pc.twice_im_eta * pc.xi_minus / pc.denom;
    Ok((r, t))
}

pub fn scattering_amplitudes(p: &ModelParams) -> Result<ScatteringAmplitudes> {
    scattering_amplitudes_with(p, POLE_THRESHOLD)
}

/// Closed-form amplitudes; right incidence is left incidence at reversed flux.
pub fn scattering_amplitudes_with(p: &ModelParams, pole_tol: f64) -> Result<ScatteringAmplitudes> {
    let (r_left, t_left) = left_amplitudes(p.gamma(), p.phi(), p.k(), pole_tol)?;
    let (r_right, t_right) = left_amplitudes(p.gamma(), -p.phi(), p.k(), pole_tol)?;
    Ok(ScatteringAmplitudes { r_left, t_left, r_right, t_right })
}

/// Transmission phase with the real node factor `-xi^-` divided out.
///
/// Equals `Arg(t_L)` wherever `xi^- < 0`, and stays continuous through
/// transmission zeros where `Arg(t_L)` jumps by `pi`.
pub fn reduced_transmission_phase(p: &ModelParams) -> Result<f64> {
    let pc = pieces(p.gamma(), p.phi(), p.k());
    let dn = pc.denom.norm();
    if dn < POLE_THRESHOLD {
        return Err(Error::SingularTransmission(dn));
    }
    Ok((-pc.twice_im_eta / pc.denom).arg())
}
