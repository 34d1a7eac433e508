//! Basis changes at quarter flux `phi = pi/4`.
//!
//! The first map turns the interferometer into a dimer with imaginary
//! hopping `i gamma`; the second splits the dimer into two independent
//! chains ending in `+i gamma` and `-i gamma`.
//!
//! A [`BasisMap`] holds `U[new, old]`: column `c` is the old basis vector `c`
//! written in the new basis, and operators transform as `U H U^dag`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{bare_leads, build_hamiltonian, max_abs, site_index, sites, HamiltonianMatrix, Site};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct BasisMap {
    pub matrix: DMatrix<Complex64>,
    pub n: usize,
}

impl BasisMap {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// `U H U^dag`.
    pub fn conjugate(&self, h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.matrix * h * self.matrix.adjoint()
    }

    /// Largest entrywise deviation of `U U^dag` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dimension();
        max_abs(&(&self.matrix * self.matrix.adjoint() - DMatrix::identity(d, d)))
    }

    pub fn then(&self, next: &BasisMap) -> BasisMap {
        BasisMap { matrix: &next.matrix * &self.matrix, n: self.n }
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 sites per lead, got {n}")));
    }
    Ok(())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Centre rotation to the dimer basis; right lead picks up `-i`.
pub fn transform_u1(n: usize) -> Result<BasisMap> {
    check_sites(n)?;
    let mut u = DMatrix::zeros(2 * n + 2, 2 * n + 2);
    let (p, m) = (site_index(n, Site::Plus), site_index(n, Site::Minus));
    for site in sites(n) {
        let c = site_index(n, site);
        match site {
            Site::Lead(j) if j < 0 => u[(c, c)] = real(1.0),
            Site::Lead(_) => u[(c, c)] = -I,
            Site::Plus => {
                let w = Complex64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
                u[(p, c)] = w;
                u[(m, c)] = w;
            }
            Site::Minus => {
                let w = Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4);
                u[(p, c)] = w;
                u[(m, c)] = -w;
            }
        }
    }
    Ok(BasisMap { matrix: u, n })
}

/// Symmetric and antisymmetric lead combinations.
pub fn transform_u2(n: usize) -> Result<BasisMap> {
    check_sites(n)?;
    let h = FRAC_1_SQRT_2;
    let mut u = DMatrix::zeros(2 * n + 2, 2 * n + 2);
    let (p, m) = (site_index(n, Site::Plus), site_index(n, Site::Minus));
    for site in sites(n) {
        let c = site_index(n, site);
        match site {
            Site::Lead(j) => {
                let mirror = site_index(n, Site::Lead(-j));
                u[(c, c)] = real(h);
                u[(mirror, c)] = real(if j < 0 { -h } else { h });
            }
            Site::Plus => {
                u[(p, c)] = real(h);
                u[(m, c)] = real(-h);
            }
            Site::Minus => {
                u[(p, c)] = real(h);
                u[(m, c)] = real(h);
            }
        }
    }
    Ok(BasisMap { matrix: u, n })
}

fn centre_links(n: usize) -> DMatrix<Complex64> {
    let mut h = bare_leads(n);
    let (m1, p1) = (site_index(n, Site::Lead(-1)), site_index(n, Site::Lead(1)));
    let (p, m) = (site_index(n, Site::Plus), site_index(n, Site::Minus));
    for (a, b) in [(m1, p), (p1, m)] {
        h[(a, b)] = real(1.0);
        h[(b, a)] = real(1.0);
    }
    h
}

/// Leads attached to `+` (left) and `-` (right), linked by `i gamma`.
pub fn build_dimer(n: usize, gamma: f64) -> Result<HamiltonianMatrix> {
    check_sites(n)?;
    let mut h = centre_links(n);
    let (p, m) = (site_index(n, Site::Plus), site_index(n, Site::Minus));
    h[(p, m)] = I * gamma;
    h[(m, p)] = I * gamma;
    Ok(HamiltonianMatrix { entries: h, n, flux: std::f64::consts::PI, gamma })
}

/// Two disconnected chains: left lead ending in `+` with `+i gamma`, right
/// lead ending in `-` with `-i gamma`.
pub fn build_split(n: usize, gamma: f64) -> Result<HamiltonianMatrix> {
    check_sites(n)?;
    let mut h = centre_links(n);
    let (p, m) = (site_index(n, Site::Plus), site_index(n, Site::Minus));
    h[(p, p)] = I * gamma;
    h[(m, m)] = -I * gamma;
    Ok(HamiltonianMatrix { entries: h, n, flux: std::f64::consts::PI, gamma })
}

/// Size of the first block (`-N..-1, +`) of the split Hamiltonian.
pub fn split_block_size(n: usize) -> usize {
    n + 1
}

/// Largest entry coupling the two blocks of the split basis.
pub fn cross_block_norm(h: &DMatrix<Complex64>, n: usize) -> f64 {
    let b = split_block_size(n);
    let d = h.nrows();
    let upper = h.view((0, b), (b, d - b)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lower = h.view((b, 0), (d - b, b)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    upper.max(lower)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub gamma: f64,
    /// `max |U1 H(pi/4) U1^dag - H_dimer|`.
    pub norm1: f64,
    /// `max |U2 H_dimer U2^dag - H_split|`.
    pub norm2: f64,
    /// Largest off-block entry of `U2 U1 H(pi/4) U1^dag U2^dag`.
    pub cross_block: f64,
    pub unitarity_u1: f64,
    pub unitarity_u2: f64,
}

impl EquivalenceReport {
    pub fn passes(&self, tol: f64) -> bool {
        [self.norm1, self.norm2, self.cross_block, self.unitarity_u1, self.unitarity_u2]
            .iter()
            .all(|&x| x < tol)
    }
}

pub fn verify_equivalence(n: usize, gamma: f64) -> Result<EquivalenceReport> {
    let h = build_hamiltonian(n, gamma, FRAC_PI_4, false)?;
    let u1 = transform_u1(n)?;
    let u2 = transform_u2(n)?;
    let dimer = build_dimer(n, gamma)?;
    let split = build_split(n, gamma)?;
    let full = u1.then(&u2).conjugate(&h.entries);
    Ok(EquivalenceReport {
        n,
        gamma,
        norm1: dimer.max_abs_diff(&u1.conjugate(&h.entries)),
        norm2: split.max_abs_diff(&u2.conjugate(&dimer.entries)),
        cross_block: cross_block_norm(&full, n),
        unitarity_u1: u1.unitarity_error(),
        unitarity_u2: u2.unitarity_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensystem::{residual, singular_state, LatticeState, SingularSign};
    use crate::scattering::CriticalPoint;

    #[test]
    fn u1_columns() {
        let u = transform_u1(10).unwrap();
        let col = site_index(10, Site::Lead(-3));
        assert_eq!(u.matrix.column(col).iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(u.matrix[(col, col)], real(1.0));
        let p = site_index(10, Site::Plus);
        let w = Complex64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
        assert_eq!(u.matrix[(p, p)], w);
        assert_eq!(u.matrix[(p + 1, p)], w);
        assert!(u.unitarity_error() < 1e-14);
    }

    #[test]
    fn u2_mixes_mirror_sites() {
        let u = transform_u2(10).unwrap();
        let (j, mj) = (site_index(10, Site::Lead(4)), site_index(10, Site::Lead(-4)));
        assert_eq!(u.matrix[(j, j)], real(FRAC_1_SQRT_2));
        assert_eq!(u.matrix[(mj, j)], real(FRAC_1_SQRT_2));
        assert!(u.unitarity_error() < 1e-14);
    }

    #[test]
    fn dimer_and_split_entries() {
        let d = build_dimer(4, 0.0).unwrap();
        assert!(d.entries.iter().all(|z| z.im == 0.0));
        assert_eq!(d.get(Site::Plus, Site::Minus), real(0.0));
        let s = build_split(4, 0.6).unwrap();
        assert_eq!(s.get(Site::Plus, Site::Plus), Complex64::new(0.0, 0.6));
        assert_eq!(s.get(Site::Minus, Site::Minus), Complex64::new(0.0, -0.6));
        assert_eq!(cross_block_norm(&s.entries, 4), 0.0);
        assert_eq!(split_block_size(4), 5);
    }

    #[test]
    fn conjugation_identities() {
        for n in [5, 20, 50] {
            for g in [0.0, 0.3, 0.7, 1.0, 1.5] {
                let r = verify_equivalence(n, g).unwrap();
                assert!(r.passes(1e-12), "{r:?}");
            }
        }
    }

    #[test]
    fn singular_state_lives_on_the_split_chains() {
        let n = 40;
        let cp = CriticalPoint::on_locus(1.0, 0).unwrap();
        let u = transform_u1(n).unwrap().then(&transform_u2(n).unwrap());
        let split = build_split(n, 1.0).unwrap();
        for sign in [SingularSign::Plus, SingularSign::Minus] {
            let s = singular_state(&cp, sign, false, n).unwrap();
            let moved = &u.matrix * s.to_vector();
            let t = LatticeState { amplitudes: moved.iter().copied().collect(), ..s };
            assert!(residual(&split, &t, 0.0).unwrap() < 1e-10);
        }
    }
}
