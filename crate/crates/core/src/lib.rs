//! Fusion rules for coefficient spaces of irreducible representations of the
//! Heisenberg groups and `SL_2(R)`, together with grid-based numerical checks
//! of the Schrödinger representation identities that underlie them.

pub mod cli;
pub mod config;
pub mod error;
pub mod fusion;
pub mod group;
pub mod labels;
pub mod numerics;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
