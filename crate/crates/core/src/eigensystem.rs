//! Exact plane-wave eigenstates on a truncated lattice.
//!
//! Every scattering energy `2 cos k` is doubly degenerate. Given an incoming
//! spinor `alpha = (alpha-, alpha+)` the two states of `H` use incoming
//! amplitudes `alpha` and `(-alpha+*, alpha-*)`; their biorthogonal partners
//! are eigenstates of `H^dag = H(-gamma)` obtained at reversed flux.
//! Lead amplitudes follow
//!
//! ```text
//! psi(j) = A- e^{ikj}  + B- e^{-ikj}   j <= -1
//! psi(j) = A+ e^{-ikj} + B+ e^{ikj}    j >=  1
//! ```
//!
//! and the two centre amplitudes are recovered from the centre-site
//! equations.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{site_at, site_index, HamiltonianMatrix, Site};
use crate::params::{derived_quantities, ModelParams, DEFAULT_TOL};
use crate::scattering::CriticalPoint;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Psi1,
    Psi2,
    Bar1,
    Bar2,
    SingularPlus,
    SingularMinus,
    BarSingularPlus,
    BarSingularMinus,
}

impl Branch {
    pub fn is_barred(self) -> bool {
        matches!(self, Branch::Bar1 | Branch::Bar2 | Branch::BarSingularPlus | Branch::BarSingularMinus)
    }

    pub fn is_singular(self) -> bool {
        matches!(
            self,
            Branch::SingularPlus | Branch::SingularMinus | Branch::BarSingularPlus | Branch::BarSingularMinus
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinorRole {
    Incoming,
    Outgoing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinorPair {
    pub minus: Complex64,
    pub plus: Complex64,
    pub role: SpinorRole,
}

impl SpinorPair {
    pub fn new(minus: Complex64, plus: Complex64, role: SpinorRole) -> Self {
        assert!(minus.is_finite() && plus.is_finite(), "spinor entries must be finite");
        Self { minus, plus, role }
    }

    /// `self^dag other`.
    pub fn dot(&self, other: &SpinorPair) -> Complex64 {
        self.minus.conj() * other.minus + self.plus.conj() * other.plus
    }

    pub fn norm_sqr(&self) -> f64 {
        self.minus.norm_sqr() + self.plus.norm_sqr()
    }
}

/// Outgoing amplitudes and normalisations for one incoming spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenPairCoefficients {
    pub alpha_minus: Complex64,
    pub alpha_plus: Complex64,
    pub beta1_minus: Complex64,
    pub beta1_plus: Complex64,
    pub beta2_minus: Complex64,
    pub beta2_plus: Complex64,
    /// Same four amplitudes at reversed flux.
    pub beta1_minus_bar: Complex64,
    pub beta1_plus_bar: Complex64,
    pub beta2_minus_bar: Complex64,
    pub beta2_plus_bar: Complex64,
    pub c1: f64,
    pub c2: f64,
    pub c1_bar: f64,
    pub c2_bar: f64,
}

impl EigenPairCoefficients {
    /// Incoming spinor of state `lambda` (1 or 2); identical for barred partners.
    pub fn incoming(&self, lambda: u8) -> SpinorPair {
        match lambda {
            1 => SpinorPair::new(self.alpha_minus, self.alpha_plus, SpinorRole::Incoming),
            2 => SpinorPair::new(-self.alpha_plus.conj(), self.alpha_minus.conj(), SpinorRole::Incoming),
            _ => panic!("state label must be 1 or 2, got {lambda}"),
        }
    }

    pub fn outgoing(&self, lambda: u8, barred: bool) -> SpinorPair {
        let (m, p) = match (lambda, barred) {
            (1, false) => (self.beta1_minus, self.beta1_plus),
            (2, false) => (self.beta2_minus, self.beta2_plus),
            (1, true) => (self.beta1_minus_bar, self.beta1_plus_bar),
            (2, true) => (self.beta2_minus_bar, self.beta2_plus_bar),
            _ => panic!("state label must be 1 or 2, got {lambda}"),
        };
        SpinorPair::new(m, p, SpinorRole::Outgoing)
    }

    pub fn normalization(&self, lambda: u8, barred: bool) -> f64 {
        match (lambda, barred) {
            (1, false) => self.c1,
            (2, false) => self.c2,
            (1, true) => self.c1_bar,
            (2, true) => self.c2_bar,
            _ => panic!("state label must be 1 or 2, got {lambda}"),
        }
    }
}

fn outgoing_amplitudes(
    gamma: f64,
    phi: f64,
    k: f64,
    am: Complex64,
    ap: Complex64,
) -> Result<[Complex64; 4]> {
    let d = derived_quantities(&ModelParams::new(gamma, phi, k)?);
    if d.chi_abs < DEFAULT_TOL {
        return Err(Error::SingularConstruction(d.chi_abs));
    }
    let q = d.rotation_diagonal();
    let s = I * d.twice_im_eta();
    let (xp, xm) = (d.xi_plus, d.xi_minus);
    Ok([
        (am * q + s * xp * ap) / d.chi,
        (ap * q + s * xm * am) / d.chi,
        (-ap.conj() * q + s * xp * am.conj()) / d.chi,
        (am.conj() * q - s * xm * ap.conj()) / d.chi,
    ])
}

/// Outgoing amplitudes for incoming spinor `(alpha_minus, alpha_plus)`.
///
/// `alpha` must be normalised to 1e-12. Each `C` makes the lead part of its
/// state carry unit norm per site pair.
pub fn eigen_pair_coefficients(
    p: &ModelParams,
    alpha_minus: Complex64,
    alpha_plus: Complex64,
) -> Result<EigenPairCoefficients> {
    let norm = alpha_minus.norm_sqr() + alpha_plus.norm_sqr();
    if !((norm - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidParams(format!("|alpha-|^2 + |alpha+|^2 = {norm}, expected 1")));
    }
    let [b1m, b1p, b2m, b2p] = outgoing_amplitudes(p.gamma(), p.phi(), p.k(), alpha_minus, alpha_plus)?;
    let [c1m, c1p, c2m, c2p] = outgoing_amplitudes(p.gamma(), -p.phi(), p.k(), alpha_minus, alpha_plus)?;
    let c = |m: Complex64, q: Complex64| 1.0 / (1.0 + m.norm_sqr() + q.norm_sqr()).sqrt();
    Ok(EigenPairCoefficients {
        alpha_minus,
        alpha_plus,
        beta1_minus: b1m,
        beta1_plus: b1p,
        beta2_minus: b2m,
        beta2_plus: b2p,
        beta1_minus_bar: c1m,
        beta1_plus_bar: c1p,
        beta2_minus_bar: c2m,
        beta2_plus_bar: c2p,
        c1: c(b1m, b1p),
        c2: c(b2m, b2p),
        c1_bar: c(c1m, c1p),
        c2_bar: c(c2m, c2p),
    })
}

/// `|chi| / sqrt(2|chi|^2 + Lambda)` with the closed-form `Lambda`.
///
/// Reproduces `C_lambda` from the direct normalisation; kept as an
/// independent check.
pub fn lambda_normalization(p: &ModelParams, alpha_minus: Complex64, alpha_plus: Complex64, lambda: u8) -> f64 {
    let d = derived_quantities(p);
    let im = d.eta.im;
    let q = d.rotation_diagonal();
    let sigma = match lambda {
        1 => 1.0,
        2 => -1.0,
        _ => panic!("state label must be 1 or 2, got {lambda}"),
    };
    let (same, other) = if sigma > 0.0 { (alpha_plus, alpha_minus) } else { (alpha_minus, alpha_plus) };
    let cross = (alpha_minus * alpha_plus.conj()).im;
    let big_lambda = 4.0
        * im
        * (d.xi_plus - d.xi_minus)
        * (im * (d.xi_plus * same.norm_sqr() - d.xi_minus * other.norm_sqr()) + sigma * q * cross);
    d.chi_abs / (2.0 * d.chi_abs * d.chi_abs + big_lambda).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeState {
    /// Amplitudes in lattice storage order (see [`crate::lattice`]).
    pub amplitudes: Vec<Complex64>,
    /// Sites per lead.
    pub n: usize,
    pub wavenumber: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteAmplitude {
    pub site: Site,
    pub re: f64,
    pub im: f64,
}

impl LatticeState {
    pub fn amplitude(&self, site: Site) -> Complex64 {
        self.amplitudes[site_index(self.n, site)]
    }

    /// `<self|other>` over the whole window.
    pub fn inner(&self, other: &LatticeState) -> Complex64 {
        assert_eq!(self.n, other.n, "states live on different windows");
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `<self|other>` over the lead sites only.
    pub fn lead_inner(&self, other: &LatticeState) -> Complex64 {
        assert_eq!(self.n, other.n, "states live on different windows");
        let (plus, minus) = (site_index(self.n, Site::Plus), site_index(self.n, Site::Minus));
        self.inner(other) - self.amplitudes[plus].conj() * other.amplitudes[plus]
            - self.amplitudes[minus].conj() * other.amplitudes[minus]
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub fn site_amplitudes(&self) -> Vec<SiteAmplitude> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| SiteAmplitude { site: site_at(self.n, i), re: z.re, im: z.im })
            .collect()
    }

    /// Writes `[{site, re, im}, ...]` as JSON.
    pub fn dump_json(&self, path: &Path) -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &self.site_amplitudes())?;
        w.write_all(b"\n")?;
        w.flush()
    }
}

/// Fills lead sites from the plane-wave form and solves the centre equations.
fn assemble(
    n: usize,
    k: f64,
    energy: f64,
    gamma: f64,
    phi: f64,
    incoming: SpinorPair,
    outgoing: SpinorPair,
    scale: f64,
    branch: Branch,
) -> Result<LatticeState> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n + 2];
    for j in 1..=n as i64 {
        let jf = j as f64;
        let fwd = Complex64::from_polar(scale, k * jf);
        let back = Complex64::from_polar(scale, -k * jf);
        // e^{ik(-j)} = back, e^{-ik(-j)} = fwd
        amps[site_index(n, Site::Lead(-j))] = incoming.minus * back + outgoing.minus * fwd;
        amps[site_index(n, Site::Lead(j))] = incoming.plus * back + outgoing.plus * fwd;
    }
    let left = amps[site_index(n, Site::Lead(-1))];
    let right = amps[site_index(n, Site::Lead(1))];
    let (ep, em) = (Complex64::from_polar(FRAC_1_SQRT_2, phi), Complex64::from_polar(FRAC_1_SQRT_2, -phi));
    let den_plus = energy - I * gamma;
    let den_minus = energy + I * gamma;
    if den_plus.norm() == 0.0 || den_minus.norm() == 0.0 {
        return Err(Error::DivisionByZero("centre site decoupled: energy equals the on-site potential"));
    }
    amps[site_index(n, Site::Plus)] = (ep * left + em * right) / den_plus;
    amps[site_index(n, Site::Minus)] = (em * left + ep * right) / den_minus;
    Ok(LatticeState { amplitudes: amps, n, wavenumber: k, branch })
}

/// One of the four regular eigenstates, on `p.n_sites()` sites per lead.
///
/// Barred branches are eigenstates of `H^dag`. States carry the `C / sqrt N`
/// normalisation.
pub fn bethe_state(p: &ModelParams, coeffs: &EigenPairCoefficients, branch: Branch) -> Result<LatticeState> {
    let (lambda, barred) = match branch {
        Branch::Psi1 => (1, false),
        Branch::Psi2 => (2, false),
        Branch::Bar1 => (1, true),
        Branch::Bar2 => (2, true),
        _ => return Err(Error::InvalidParams(format!("{branch:?} is not a regular branch; use singular_state"))),
    };
    let d = derived_quantities(p);
    if d.chi_abs < DEFAULT_TOL {
        return Err(Error::SingularConstruction(d.chi_abs));
    }
    let n = p.n_sites();
    let gamma = if barred { -p.gamma() } else { p.gamma() };
    let scale = coeffs.normalization(lambda, barred) / (n as f64).sqrt();
    assemble(
        n,
        p.k(),
        d.energy,
        gamma,
        p.phi(),
        coeffs.incoming(lambda),
        coeffs.outgoing(lambda, barred),
        scale,
        branch,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularSign {
    /// `k = +pi/2`: purely incoming, reflectionless absorption.
    Plus,
    /// `k = -pi/2`: purely outgoing, self-sustained emission.
    Minus,
}

/// `(A, B)` spinors of the singular state of `H`; the `H^dag` partner flips
/// the right-lead entries.
pub fn singular_spinors(sign: SingularSign, barred: bool) -> (SpinorPair, SpinorPair) {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let flip = if barred { -1.0 } else { 1.0 };
    match sign {
        SingularSign::Plus => (
            SpinorPair::new(one, I * flip, SpinorRole::Incoming),
            SpinorPair::new(zero, zero, SpinorRole::Outgoing),
        ),
        SingularSign::Minus => (
            SpinorPair::new(zero, zero, SpinorRole::Incoming),
            SpinorPair::new(one, -I * flip, SpinorRole::Outgoing),
        ),
    }
}

/// Zero-energy state at a spectral singularity, normalised by `1/sqrt(2N)`.
///
/// The centre amplitudes depend on where on the locus the state sits, so the
/// critical point is required.
pub fn singular_state(cp: &CriticalPoint, sign: SingularSign, barred: bool, n: usize) -> Result<LatticeState> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 sites per lead, got {n}")));
    }
    cp.validate(DEFAULT_TOL)?;
    let (incoming, outgoing) = singular_spinors(sign, barred);
    let branch = match (sign, barred) {
        (SingularSign::Plus, false) => Branch::SingularPlus,
        (SingularSign::Minus, false) => Branch::SingularMinus,
        (SingularSign::Plus, true) => Branch::BarSingularPlus,
        (SingularSign::Minus, true) => Branch::BarSingularMinus,
    };
    let gamma = if barred { -cp.gamma_c } else { cp.gamma_c };
    // the lead form is written with k = pi/2; the sign lives in the spinors
    assemble(n, FRAC_PI_2, 0.0, gamma, cp.phi_c, incoming, outgoing, 1.0 / (2.0 * n as f64).sqrt(), branch)
}

/// `max |(H psi - E psi)_j|` over all sites except the two lead ends.
pub fn residual(h: &HamiltonianMatrix, state: &LatticeState, energy: f64) -> Result<f64> {
    residual_on(h, state, energy, false)
}

/// As [`residual`], optionally including the truncated lead ends.
pub fn residual_on(h: &HamiltonianMatrix, state: &LatticeState, energy: f64, include_ends: bool) -> Result<f64> {
    let dim = h.dimension();
    if state.amplitudes.len() != dim {
        return Err(Error::DimensionMismatch { matrix: dim, state: state.amplitudes.len() });
    }
    let v = state.to_vector();
    let r = &h.entries * &v - v * Complex64::from(energy);
    let last = dim - 1;
    Ok(r.iter()
        .enumerate()
        .filter(|&(i, _)| include_ends || (i != 0 && i != last))
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiorthogonalityReport {
    /// Largest `||chi|^2 (Bbar^dag B - Abar^dag A)|` over all state pairs.
    pub spinor_identity_error: f64,
    /// `|<psibar1|psi2>|` over the window.
    pub offdiag: f64,
    /// `<psibar1|psi1>`, `<psibar2|psi2>`.
    pub diag: (Complex64, Complex64),
    /// `2 Cbar C` for both states, the infinite-window limit of `diag`.
    pub expected_diag: (f64, f64),
}

pub fn biorthogonality_report(p: &ModelParams, coeffs: &EigenPairCoefficients, n: usize) -> Result<BiorthogonalityReport> {
    let d = derived_quantities(p);
    if d.chi_abs < DEFAULT_TOL {
        return Err(Error::SingularConstruction(d.chi_abs));
    }
    let chi2 = d.chi_abs * d.chi_abs;
    let mut spinor_identity_error: f64 = 0.0;
    for l in [1, 2] {
        for m in [1, 2] {
            let b = coeffs.outgoing(l, true).dot(&coeffs.outgoing(m, false));
            let a = coeffs.incoming(l).dot(&coeffs.incoming(m));
            spinor_identity_error = spinor_identity_error.max((chi2 * (b - a)).norm());
        }
    }

    let pw = ModelParams::with_sites(p.gamma(), p.phi(), p.k(), n)?;
    let psi1 = bethe_state(&pw, coeffs, Branch::Psi1)?;
    let psi2 = bethe_state(&pw, coeffs, Branch::Psi2)?;
    let bar1 = bethe_state(&pw, coeffs, Branch::Bar1)?;
    let bar2 = bethe_state(&pw, coeffs, Branch::Bar2)?;
    Ok(BiorthogonalityReport {
        spinor_identity_error,
        offdiag: bar1.inner(&psi2).norm(),
        diag: (bar1.inner(&psi1), bar2.inner(&psi2)),
        expected_diag: (2.0 * coeffs.c1_bar * coeffs.c1, 2.0 * coeffs.c2_bar * coeffs.c2),
    })
}
