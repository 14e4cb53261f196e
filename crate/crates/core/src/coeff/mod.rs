//! Exact arithmetic over GF(p), finite local GF(p)-algebras and matrices.

pub mod field;
pub mod local;
pub mod matrix;
pub mod ringspec;
pub mod rmatrix;

pub use field::{FieldElement, Fp};
pub use local::{LocalAlgebra, RingElem, RingSurjection, DEFAULT_DEGREE_CAP};
pub use matrix::{solve_linear, Echelon, Matrix, Solution};
pub use ringspec::{parse_ring_spec, RingPresentation};
pub use rmatrix::RMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("{0} is not an odd prime below 46337")]
    BadPrime(u32),
    #[error("ring spec parse error at position {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error("ring {0} is not local with residue field GF(p)")]
    NonLocal(String),
    #[error("ring {spec} is not finite-dimensional within degree cap {cap}")]
    InfiniteWithinCap { spec: String, cap: u32 },
    #[error("{0}: generators do not span an ideal")]
    NotAnIdeal(String),
    #[error("not a surjective ring map: {0}")]
    NotARingMap(String),
}
