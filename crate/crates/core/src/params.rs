//! Model configuration and the derived scalars of the interferometer.
//!
//! Everything downstream is a function of the triple `(gamma, phi, k)`:
//! gain/loss strength, quarter flux (total flux is `4 phi`) and lead
//! wavenumber, with unit hopping on the leads.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classification tolerance used when callers do not supply one.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Lead length used by [`ModelParams::new`] when no truncation is given.
pub const DEFAULT_SITES: usize = 60;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    gamma: f64,
    phi: f64,
    k: f64,
    n_sites: usize,
}

impl ModelParams {
    pub fn new(gamma: f64, phi: f64, k: f64) -> Result<Self> {
        Self::with_sites(gamma, phi, k, DEFAULT_SITES)
    }

    pub fn with_sites(gamma: f64, phi: f64, k: f64, n_sites: usize) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma must be finite, got {gamma}")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParams(format!("phi must be finite, got {phi}")));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParams(format!("k must be finite, got {k}")));
        }
        if n_sites < 2 {
            return Err(Error::InvalidParams(format!("need at least 2 lead sites, got {n_sites}")));
        }
        Ok(Self { gamma, phi, k: reduce_wavenumber(k), n_sites })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Wavenumber in `(-pi, pi]`.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Total Aharonov-Bohm flux `4 phi`.
    pub fn flux(&self) -> f64 {
        4.0 * self.phi
    }

    /// Same configuration with the flux reversed.
    pub fn flipped_flux(&self) -> Self {
        Self { phi: -self.phi, ..*self }
    }
}

/// Maps `k` into `(-pi, pi]`, leaving in-range values bit-identical.
pub fn reduce_wavenumber(k: f64) -> f64 {
    if k > -PI && k <= PI {
        return k;
    }
    let r = k.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Lead dispersion `2 cos k`.
pub fn dispersion(k: f64) -> f64 {
    2.0 * k.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub eta: Complex64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub chi: Complex64,
    pub chi_abs: f64,
    /// Complex rotation angle; `None` when `chi == 0`.
    pub theta: Option<Complex64>,
    /// Rotation axis components; `None` when `xi_plus * xi_minus == 0`.
    pub n_x: Option<Complex64>,
    pub n_y: Option<Complex64>,
    pub energy: f64,
}

impl DerivedQuantities {
    /// `|eta|^2 - xi+ xi-`, the diagonal of the spinor rotation.
    pub fn rotation_diagonal(&self) -> f64 {
        self.eta.norm_sqr() - self.xi_plus * self.xi_minus
    }

    /// `2 Im(eta)`; `eta - eta* = i * twice_im_eta`.
    pub fn twice_im_eta(&self) -> f64 {
        2.0 * self.eta.im
    }

    /// `|chi| e^{i theta n.sigma}` as a 2x2 matrix acting on `(A-, A+)`.
    ///
    /// Rows/columns are ordered `(-, +)`. Built from the scalar definitions
    /// directly, so it exists even where `theta` or `n` are undefined.
    pub fn rotation_matrix(&self) -> [[Complex64; 2]; 2] {
        let q = Complex64::from(self.rotation_diagonal());
        let s = I * self.twice_im_eta();
        [[q, s * self.xi_plus], [s * self.xi_minus, q]]
    }
}

pub fn derived_quantities(p: &ModelParams) -> DerivedQuantities {
    let (gamma, k) = (p.gamma, p.k);
    let (s2, c2) = (2.0 * p.phi).sin_cos();
    let ck = k.cos();
    let e_ik = Complex64::from_polar(1.0, k);
    let e_2ik = e_ik * e_ik;

    let eta = (e_2ik + 1.0 + gamma * gamma) * e_ik;
    let xi_plus = 2.0 * ck * c2 + gamma * s2;
    let xi_minus = 2.0 * ck * c2 - gamma * s2;
    let prod = xi_plus * xi_minus;
    let eta_c = eta.conj();
    let chi = (prod - eta_c * eta_c) * e_2ik;
    let chi_abs = chi.norm();

    // Principal branch: +i sqrt|P| for P < 0.
    let sqrt_prod = Complex64::from(prod).sqrt();
    let (n_x, n_y) = if prod != 0.0 {
        let two_root = 2.0 * sqrt_prod;
        (Some((xi_plus + xi_minus) / two_root), Some(I * (xi_plus - xi_minus) / two_root))
    } else {
        (None, None)
    };

    let theta = if chi_abs > 0.0 {
        let q = eta.norm_sqr() - prod;
        let phase = (q + I * 2.0 * eta.im * sqrt_prod) / chi_abs;
        Some(-I * phase.ln())
    } else {
        None
    };

    DerivedQuantities {
        eta,
        xi_plus,
        xi_minus,
        chi,
        chi_abs,
        theta,
        n_x,
        n_y,
        energy: dispersion(k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    Hermitian,
    Regular,
    QuasiSingular,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityClass {
    pub kind: SingularityKind,
    /// `sqrt(cos^2 k + (sin^2 2phi - gamma^2)^2)`, zero exactly on the locus.
    pub distance: f64,
}

/// Distance of a parameter point from the spectral-singularity locus.
pub fn singularity_distance(p: &ModelParams) -> f64 {
    let ck = p.k.cos();
    let s = (2.0 * p.phi).sin();
    let dev = s * s - p.gamma * p.gamma;
    ck.hypot(dev)
}

pub fn classify(p: &ModelParams, tol: f64) -> SingularityClass {
    assert!(tol > 0.0, "classification tolerance must be positive");
    let distance = singularity_distance(p);
    let s = (2.0 * p.phi).sin();
    let on_k = p.k.cos().abs() <= tol;
    let on_locus = (s * s - p.gamma * p.gamma).abs() <= tol;
    let kind = if on_k && on_locus && p.gamma > tol {
        SingularityKind::Singular
    } else if p.gamma <= tol {
        SingularityKind::Hermitian
    } else if distance <= 100.0 * tol {
        SingularityKind::QuasiSingular
    } else {
        SingularityKind::Regular
    };
    SingularityClass { kind, distance }
}

/// Critical fluxes `phi_c` in `[0, pi/2)` with `sin^2(2 phi_c) = gamma^2`.
pub fn singularity_locus(gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::NoLocus(gamma));
    }
    let half = gamma.asin() / 2.0;
    let mirror = FRAC_PI_2 - half;
    if (mirror - half).abs() <= f64::EPSILON {
        Ok(vec![half])
    } else {
        Ok(vec![half, mirror])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(f64::NAN, 0.0, 1.0).is_err());
        assert!(ModelParams::new(f64::INFINITY, 0.0, 1.0).is_err());
        assert!(ModelParams::with_sites(0.5, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn wavenumber_reduction() {
        assert_eq!(reduce_wavenumber(1.0), 1.0);
        assert_eq!(reduce_wavenumber(PI), PI);
        assert!((reduce_wavenumber(-PI) - PI).abs() < 1e-15);
        assert!((reduce_wavenumber(2.0 * PI + 0.5) - 0.5).abs() < 1e-14);
        assert!((reduce_wavenumber(-2.0 * PI - 0.5) + 0.5).abs() < 1e-14);
        let p = ModelParams::new(0.1, 0.0, 7.0).unwrap();
        assert!(p.k() > -PI && p.k() <= PI);
    }

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(0.0), 2.0);
        assert!(dispersion(FRAC_PI_2).abs() < 1e-15);
        assert!((dispersion(1.0) - 1.080_604_611_736_279_4).abs() < 1e-15);
    }

    #[test]
    fn singular_point_quantities() {
        let d = derived_quantities(&ModelParams::new(1.0, FRAC_PI_4, FRAC_PI_2).unwrap());
        assert!(close(d.eta, I, 1e-15));
        assert!((d.xi_plus - 1.0).abs() < 1e-15);
        assert!((d.xi_minus + 1.0).abs() < 1e-15);
        assert!(d.chi_abs < 1e-15);
    }

    #[test]
    fn hermitian_band_centre_vanishes() {
        let d = derived_quantities(&ModelParams::new(0.0, 0.0, FRAC_PI_2).unwrap());
        assert!(d.eta.norm() < 1e-15);
        assert!(d.xi_plus.abs() < 1e-15 && d.xi_minus.abs() < 1e-15);
        assert!(d.chi_abs < 1e-15);
    }

    // Golden values from a 40-digit evaluation of the defining formulas.
    #[test]
    fn generic_point_matches_high_precision() {
        let d = derived_quantities(&ModelParams::new(0.5, 0.3, 1.0).unwrap());
        assert!(close(d.eta, Complex64::new(-0.314_614_614_265_270_81, 1.192_958_739_069_737_9), 1e-14));
        assert!((d.xi_plus - 1.174_182_708_399_114_0).abs() < 1e-14);
        assert!((d.xi_minus - 0.609_540_235_004_078_70).abs() < 1e-14);
        assert!(close(d.chi, Complex64::new(-0.166_330_407_659_589_25, 2.167_235_791_636_689_1), 1e-14));
        assert!((d.chi_abs - 2.173_609_160_144_323_6).abs() < 1e-14);
        assert!(close(d.theta.unwrap(), Complex64::new(1.190_704_588_841_702_7, 0.0), 1e-13));
        assert!(close(d.n_x.unwrap(), Complex64::new(1.054_213_014_960_178_8, 0.0), 1e-14));
        assert!(close(d.n_y.unwrap(), Complex64::new(0.0, 0.333_714_070_592_521_20), 1e-14));
        assert!((d.energy - 1.080_604_611_736_279_4).abs() < 1e-15);
    }

    #[test]
    fn rotation_reproduces_theta_and_axis() {
        // |chi| (cos theta I + i sin theta n.sigma) == rotation_matrix
        for &(g, phi, k) in &[(0.5, 0.3, 1.0), (1.3, 1.1, 2.4), (0.2, 0.7, 0.4)] {
            let d = derived_quantities(&ModelParams::new(g, phi, k).unwrap());
            let th = d.theta.unwrap();
            let (nx, ny) = (d.n_x.unwrap(), d.n_y.unwrap());
            let r = d.rotation_matrix();
            let a = d.chi_abs;
            assert!(close(r[0][0], a * th.cos(), 1e-12));
            assert!(close(r[0][1], a * I * th.sin() * (nx - I * ny), 1e-12));
            assert!(close(r[1][0], a * I * th.sin() * (nx + I * ny), 1e-12));
        }
    }

    #[test]
    fn axis_components() {
        // xi+ xi- > 0: n_x real, n_y imaginary. gamma = 0: both real.
        let d = derived_quantities(&ModelParams::new(0.5, 0.3, 1.0).unwrap());
        assert!(d.xi_plus * d.xi_minus > 0.0);
        assert!(d.n_x.unwrap().im.abs() < 1e-15);
        assert!(d.n_y.unwrap().re.abs() < 1e-15);
        let h = derived_quantities(&ModelParams::new(0.0, 0.3, 1.0).unwrap());
        assert!(close(h.n_x.unwrap(), Complex64::new(1.0, 0.0), 1e-15));
        assert!(h.n_y.unwrap().norm() < 1e-15);
        // xi+ xi- < 0: principal branch, complex axis.
        let c = derived_quantities(&ModelParams::new(0.9, 0.5, 1.5).unwrap());
        assert!(c.xi_plus * c.xi_minus < 0.0);
        let (nx, ny) = (c.n_x.unwrap(), c.n_y.unwrap());
        assert!(close(nx * nx + ny * ny, Complex64::new(1.0, 0.0), 1e-12));
        assert!(c.theta.unwrap().im.abs() > 1e-6);
    }

    #[test]
    fn classify_examples() {
        let sing = classify(&ModelParams::new(1.0, FRAC_PI_4, FRAC_PI_2).unwrap(), 1e-12);
        assert_eq!(sing.kind, SingularityKind::Singular);
        let herm = classify(&ModelParams::new(0.0, 0.0, FRAC_PI_2).unwrap(), 1e-12);
        assert_eq!(herm.kind, SingularityKind::Hermitian);
        assert!(herm.distance < 1e-15);
        // 0.707 only approximates sin(pi/4); the offset is 1.5e-4.
        let p = ModelParams::new(0.707, PI / 8.0, FRAC_PI_2).unwrap();
        let c = classify(&p, 1e-12);
        assert_eq!(c.kind, SingularityKind::Regular);
        assert!((c.distance - 1.51e-4).abs() < 1e-9);
        assert_eq!(classify(&p, 1e-3).kind, SingularityKind::Singular);
    }

    #[test]
    fn quasi_singular_band() {
        let phi_c = singularity_locus(0.6).unwrap()[0];
        let p = ModelParams::new(0.6, phi_c, FRAC_PI_2 + 5e-11).unwrap();
        assert_eq!(classify(&p, 1e-12).kind, SingularityKind::QuasiSingular);
        let far = ModelParams::new(0.6, phi_c, FRAC_PI_2 + 1e-6).unwrap();
        assert_eq!(classify(&far, 1e-12).kind, SingularityKind::Regular);
    }

    #[test]
    fn locus_examples() {
        assert_eq!(singularity_locus(1.0).unwrap(), vec![FRAC_PI_4]);
        let l = singularity_locus(0.707).unwrap();
        assert_eq!(l.len(), 2);
        assert!((l[0] - 0.392_623_581_697_576_5).abs() < 1e-15);
        assert!((l[0] + l[1] - FRAC_PI_2).abs() < 1e-15);
        let l = singularity_locus(0.2f64.sin()).unwrap();
        assert!((l[0] - 0.1).abs() < 1e-15 && (l[1] - (FRAC_PI_2 - 0.1)).abs() < 1e-15);
        assert!(singularity_locus(0.0).is_err());
        assert!(singularity_locus(1.0 + 1e-12).is_err());
        assert!(singularity_locus(-0.5).is_err());
    }
}
