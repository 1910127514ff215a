//! Singularity invariants: Samuel functions, Jacobian minors, Tjurina and Milnor numbers.

mod minors;
mod report;
pub(crate) mod samuel;
mod singularity;

pub use minors::{combinations, minor_ideal, JacobianMatrix};
pub use report::{check_inequalities, inequality_verdicts, ErrorKind, InvariantReport, ReportError, Verdict};
pub use samuel::{
    alternating_bound, binomial, check_samuel_bounds, multiplicity, samuel_function, samuel_function_with, BoundCheck,
    MultiplicityOptions, MultiplicityResult, SamuelBoundsVerdict, SamuelTable,
};
pub use singularity::{
    CriticalMultiplicity, InvariantOptions, MilnorBound, SingularityInput, COEFF_RANGE, GENERIC_DRAWS,
    MAX_GENERICITY_RETRIES,
};
