//! Finite truncations of the interferometer lattice.
//!
//! Sites are stored in the order `-N, ..., -1, +, -, 1, ..., N`, so a matrix
//! has dimension `2N + 2`. Each lead is cut off after `N` sites.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    /// Lead site `j != 0`; negative on the left lead.
    Lead(i64),
    Plus,
    Minus,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Lead(j) => write!(f, "{j}"),
            Site::Plus => f.write_str("+"),
            Site::Minus => f.write_str("-"),
        }
    }
}

impl Serialize for Site {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Storage index of `site` on a lattice with `n` sites per lead.
pub fn site_index(n: usize, site: Site) -> usize {
    match site {
        Site::Lead(j) if j < 0 => {
            assert!(j.unsigned_abs() as usize <= n, "site {j} outside lead of length {n}");
            (n as i64 + j) as usize
        }
        Site::Lead(j) => {
            assert!(j > 0 && j as usize <= n, "site {j} outside lead of length {n}");
            n + 1 + j as usize
        }
        Site::Plus => n,
        Site::Minus => n + 1,
    }
}

/// Inverse of [`site_index`].
pub fn site_at(n: usize, index: usize) -> Site {
    assert!(index < 2 * n + 2, "index {index} outside lattice of dimension {}", 2 * n + 2);
    match index {
        i if i < n => Site::Lead(i as i64 - n as i64),
        i if i == n => Site::Plus,
        i if i == n + 1 => Site::Minus,
        i => Site::Lead((i - n - 1) as i64),
    }
}

pub fn sites(n: usize) -> impl Iterator<Item = Site> {
    (0..2 * n + 2).map(move |i| site_at(n, i))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub entries: DMatrix<Complex64>,
    /// Sites per lead.
    pub n: usize,
    pub flux: f64,
    pub gamma: f64,
}

impl HamiltonianMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: Site, col: Site) -> Complex64 {
        self.entries[(site_index(self.n, row), site_index(self.n, col))]
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DMatrix<Complex64>) -> f64 {
        max_abs(&(&self.entries - other))
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unit hopping along both leads, nothing else.
pub(crate) fn bare_leads(n: usize) -> DMatrix<Complex64> {
    let mut h = DMatrix::zeros(2 * n + 2, 2 * n + 2);
    let one = Complex64::new(1.0, 0.0);
    for j in 1..n as i64 {
        for (a, b) in [(j, j + 1), (-j, -j - 1)] {
            let (ia, ib) = (site_index(n, Site::Lead(a)), site_index(n, Site::Lead(b)));
            h[(ia, ib)] = one;
            h[(ib, ia)] = one;
        }
    }
    h
}

fn check_sites(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 sites per lead, got {n}")));
    }
    Ok(())
}

/// Tight-binding matrix of the interferometer, or its adjoint.
pub fn build_hamiltonian(n: usize, gamma: f64, phi: f64, dagger: bool) -> Result<HamiltonianMatrix> {
    check_sites(n)?;
    let mut h = bare_leads(n);
    let (m1, p1) = (site_index(n, Site::Lead(-1)), site_index(n, Site::Lead(1)));
    for (sigma, s) in [(1.0, Site::Plus), (-1.0, Site::Minus)] {
        let c = site_index(n, s);
        h[(m1, c)] = Complex64::from_polar(FRAC_1_SQRT_2, -sigma * phi);
        h[(p1, c)] = Complex64::from_polar(FRAC_1_SQRT_2, sigma * phi);
        h[(c, m1)] = h[(m1, c)].conj();
        h[(c, p1)] = h[(p1, c)].conj();
        h[(c, c)] = I * sigma * gamma;
    }
    if dagger {
        h = h.adjoint();
    }
    Ok(HamiltonianMatrix { entries: h, n, flux: 4.0 * phi, gamma })
}

/// Site reflection `j -> -j` with the two centre sites fixed.
pub fn parity(n: usize) -> DMatrix<Complex64> {
    let mut p = DMatrix::zeros(2 * n + 2, 2 * n + 2);
    for site in sites(n) {
        let image = match site {
            Site::Lead(j) => Site::Lead(-j),
            s => s,
        };
        p[(site_index(n, image), site_index(n, site))] = Complex64::new(1.0, 0.0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let n = 4;
        for i in 0..2 * n + 2 {
            assert_eq!(site_index(n, site_at(n, i)), i);
        }
        assert_eq!(site_at(n, 0), Site::Lead(-4));
        assert_eq!(site_at(n, 3), Site::Lead(-1));
        assert_eq!(site_at(n, 6), Site::Lead(1));
        assert_eq!(sites(n).last(), Some(Site::Lead(4)));
    }

    #[test]
    fn hermitian_limit_is_real_symmetric() {
        let h = build_hamiltonian(2, 0.0, 0.0, false).unwrap();
        assert_eq!(h.dimension(), 6);
        assert!(h.entries.iter().all(|z| z.im == 0.0));
        assert_eq!(h.entries, h.entries.transpose());
        for s in [Site::Plus, Site::Minus] {
            assert_eq!(h.get(Site::Lead(-1), s).re, FRAC_1_SQRT_2);
            assert_eq!(h.get(Site::Lead(1), s).re, FRAC_1_SQRT_2);
        }
    }

    #[test]
    fn centre_entries() {
        let h = build_hamiltonian(2, 0.5, 0.3, false).unwrap();
        assert!((h.get(Site::Lead(-1), Site::Plus) - Complex64::from_polar(FRAC_1_SQRT_2, -0.3)).norm() < 1e-16);
        assert_eq!(h.get(Site::Plus, Site::Plus), Complex64::new(0.0, 0.5));
        assert_eq!(h.get(Site::Minus, Site::Minus), Complex64::new(0.0, -0.5));
        assert_eq!(h.flux, 1.2);
    }

    #[test]
    fn dagger_is_adjoint_and_flips_gamma() {
        let h = build_hamiltonian(5, 0.7, 0.4, false).unwrap();
        let hd = build_hamiltonian(5, 0.7, 0.4, true).unwrap();
        assert_eq!(hd.entries, h.entries.adjoint());
        assert_eq!(hd.entries, build_hamiltonian(5, -0.7, 0.4, false).unwrap().entries);
    }

    #[test]
    fn parity_flux_symmetry() {
        let p = parity(6);
        for &(g, phi) in &[(0.0, 0.2), (0.5, 0.3), (1.3, 1.1)] {
            let h = build_hamiltonian(6, g, phi, false).unwrap();
            let flipped = build_hamiltonian(6, g, -phi, false).unwrap();
            assert!(flipped.max_abs_diff(&(&p * &h.entries * &p)) < 1e-14);
        }
    }

    #[test]
    fn too_few_sites() {
        assert!(build_hamiltonian(1, 0.0, 0.0, false).is_err());
    }
}
