//! Homological linear algebra over Λ: hom spaces, maps factoring through
//! projectives, projective covers, syzygies, isomorphism tests, Ext¹ and
//! Ω-orbits.

pub mod cover;
pub mod hom;
pub mod iso;
pub mod orbit;

use crate::repbuild::{RepError, Representation};

pub use cover::{is_projective_free, projective_cover, strip_projectives, syzygy, ProjectiveCover};
pub use hom::{
    hom_space, hom_space_by_commutation, proj_factoring_subspace, stable_end_dim, stable_hom_dim, HomMap, HomSpace,
};
pub use iso::{iso_test, local_radical, IsoVerdict};
pub use orbit::{
    band_parameters, classify_component, omega_orbit, Classification, Classifier, ComponentLabel, OmegaOrbit,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `dim Ext¹(V, V)`, computed as the stable `Hom(ΩV, V)`.
pub fn ext1_dim(v: &Representation) -> Result<usize, HomError> {
    ext1_between(v, v)
}

/// `dim Ext¹(M, N) = dim Hom_stable(ΩM, N)`.
pub fn ext1_between(m: &Representation, n: &Representation) -> Result<usize, HomError> {
    stable_hom_dim(&syzygy(m), n)
}

#[cfg(test)]
mod tests;
