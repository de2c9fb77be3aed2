//! Exact computations with differential graded Lie and Leibniz algebras
//! encoded as coderivations of symmetric and tensor coalgebras.
//!
//! Scalars live in `Q[t]/(t^K)`. Lie structures act on the symmetric
//! coalgebra `S+(g[-1])`, Leibniz structures on the tensor coalgebra.

pub mod error;
pub mod graded;
pub mod signs;
pub mod coalgebra;

pub use error::{Error, Result};
pub use graded::{Element, GradedSpace, MultilinearMap, Scalar};
pub mod report;
pub mod structures;
pub mod fixtures;
pub mod transfer;
