//! Tridiagonal reproducing kernel Hilbert spaces and the dynamics of the
//! backward shift acting on them.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod matrixkernel;
pub mod operator;
pub mod provenance;
pub mod sequences;
pub mod space;
pub mod spectrum;
pub mod verify;

pub use error::{Result, SequenceError, TridiagError};
pub use sequences::{SequenceFamily, SequencePair, Tri};
pub use space::TridiagonalSpace;
