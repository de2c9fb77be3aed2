//! Coefficients, graded spaces, sparse vectors and multilinear maps.

pub mod element;
pub mod linsolve;
pub mod multilinear;
pub mod scalar;
pub mod space;

pub use element::Element;
pub use linsolve::{solve_linear_system, LinearEquation, LinearSolution};
pub use multilinear::{MultilinearMap, Symmetry};
pub use scalar::{format_rational, parse_rational, rational, Scalar, TermRepr};
pub use space::{BasisVector, GradedSpace};
