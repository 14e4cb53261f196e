//! Lifts of Λ-modules over finite local algebras: verification, tangent
//! spaces, level-by-level extension with obstruction certificates, the
//! explicit lift families, and deformation-ring evidence.

pub mod evidence;
pub mod families;
pub mod linear;
pub mod rrep;
pub mod serial;
pub mod trivial;

use crate::coeff::CoeffError;
use crate::homalg::HomError;
use crate::repbuild::RepError;

pub use evidence::{udr_evidence, LevelRecord, LevelStatus, ObstructionRecord, UdrEvidence, DEFAULT_MAX_LEVEL};
pub use families::{family_ring_spec, paper_lift_family, Family};
pub use linear::{
    check_obstruction, exhaustive_extension_count, extend_search, first_order_classes, first_order_exhaustive,
    linearize, ExtendOutcome, FirstOrder, Obstruction,
};
pub use rrep::{first_violation, verify_lift, Lift, LiftVerdict, RRepresentation, Violation};
pub use serial::LiftRecord;
pub use trivial::is_trivial_lift;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("bad family: {0}")]
    BadFamily(String),
    #[error("reduction is not the base module: {0}")]
    WrongReduction(String),
    #[error("too large for enumeration: {0}")]
    TooLarge(String),
    #[error("not a small extension: {0}")]
    NotSmallExtension(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("stable endomorphism ring has dimension {0}, not 1")]
    StableEndTooLarge(usize),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("lift serialization: {0}")]
    Serialization(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
