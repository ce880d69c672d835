//! Bound states of the one-dimensional Dirac operator with an exponentially
//! screened point-nucleus potential.
//!
//! Energies are found by shooting on the compactified Prüfer flow and
//! counted against threshold sequences built from Whittaker-function zeros.

pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod par;
pub mod roots;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
