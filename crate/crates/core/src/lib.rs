//! Exact local commutative algebra for singularity invariants.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod field;
pub mod invariants;
pub mod jets;
pub mod monomial;
pub mod poly;

pub use engine::{
    mora_normal_form, EngineOptions, FreeModuleElement, IdealBasis, Length, MonomialStaircase, StandardBasis,
    SubmoduleBasis,
};
pub use error::{Error, Result};
pub use field::{Field, Scalar, DEFAULT_PRIME};
pub use monomial::{ExponentVector, LocalOrder};
pub use poly::{LocalPolynomial, RingContext};
