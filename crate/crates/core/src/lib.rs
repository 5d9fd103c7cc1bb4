//! Exact additive and infinitesimal dilogarithms over truncated polynomial rings.

pub mod additive;
pub mod bloch;
pub mod charp;
pub mod chow;
pub mod cycle;
pub mod error;
pub mod kernel;
pub mod sample;
pub mod sqzero;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{CoeffField, Differential, FieldElem, Poly, SeriesPoly, TruncSeries, Q};
