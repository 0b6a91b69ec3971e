//! Exact computations on uniform intersecting set families.
//!
//! The crate builds the cycle families `F(k,t)` and `G(k,t)` and a few
//! classical closed families, composes closed and maximal intersecting
//! families, and certifies maximality and closure by exhaustive search.
//! Every block is a bit mask over a universe of at most 128 labeled points.

pub mod block;
pub mod composers;
pub mod constructions;
pub mod error;
pub mod family;
pub mod io;
pub mod isomorphism;
pub mod properties;
pub mod transversal;

pub use block::{Block, PointId, MAX_POINTS};
pub use error::{Error, Result};
pub use family::{Label, SetFamily};
pub use properties::{Property, PropertyVerdict, Witness};
pub use transversal::TransversalReport;
