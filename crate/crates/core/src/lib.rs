//! Scattering, spectral singularities and transmission phase lapses of a
//! two-arm Aharonov-Bohm interferometer with balanced gain and loss.

pub mod cli;
pub mod eigensystem;
pub mod equivalence;
pub mod error;
pub mod lattice;
pub mod params;
pub mod scattering;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use params::{
    classify, derived_quantities, dispersion, singularity_locus, DerivedQuantities, ModelParams,
    SingularityClass, SingularityKind,
};
