//! Finite-model-theory workbench: relational structures, homomorphisms,
//! Ehrenfeucht–Fraïssé and forth games, locality ranks and the
//! core-based homotopy quotient, all at desk scale with explicit bounds.

mod csp;
pub mod cli;
pub mod error;
pub mod games;
pub mod hom;
pub mod homotopy;
pub mod locality;
pub mod logic;
pub mod structures;

pub use error::{Error, Result};
