//! Explicit generator matrices for finite-dimensional irreducible
//! representations of the quantum algebras A1, A2, B2 = C2, D2 and G2.
//!
//! The construction runs entirely at a fixed deformation parameter t:
//! exact Weyl characters fix the level/class layout, and the lowering
//! blocks are then read off one landing weight at a time from chained
//! quadratic (Gram) systems. Everything is re-checked against the
//! defining relations after assembly.

pub mod algebra;
pub mod assembler;
pub mod characters;
pub mod cli;
pub mod error;
pub mod export;
pub mod rank_one;
pub mod solver;
pub mod spectra;
pub mod verify;

pub use algebra::AlgebraKind;
pub use assembler::{build, GeneratorSet};
pub use error::{QrepError, Result};
