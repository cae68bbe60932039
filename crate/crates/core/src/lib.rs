//! Finite lattices, Banaschewski functions and traces, von Neumann regular
//! rings, and coordinatization of lattices by rings.
//!
//! The [`lattice`] module holds the finite-lattice toolkit every other module
//! builds on.

pub mod banaschewski;
pub mod coord;
pub mod error;
pub mod field;
pub mod io;
pub mod lattice;
mod linalg;
pub mod ring;
pub mod trace;

pub use error::{Error, ErrorClass, Result};
