//! DGLAs and DGLeibAs as data, their coderivations, Maurer-Cartan elements,
//! derived brackets and L-infinity morphisms.

mod algebra;
mod morphism;

pub use algebra::{AlgebraStructure, Flavor, McReport, StructureReport};
pub use morphism::LinfMorphism;
