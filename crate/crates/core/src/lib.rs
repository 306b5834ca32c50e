//! Exact computation with the Fibonacci difference matrix and the spaces of
//! sequences whose transforms are null or convergent.
//!
//! Everything is exact rational arithmetic. Statements about infinite
//! objects (limits, suprema, series) are evaluated on finite prefixes and
//! corners and reported as evidence; only algebraic identities are decided
//! exactly.

pub mod bandops;
pub mod classify;
pub mod error;
pub mod evidence;
pub mod fibcore;
pub mod io;
pub mod rational;
pub mod spaces;

pub use bandops::{BandMatrixSpec, SeqPrefix, TruncatedMatrix};
pub use error::{Error, Result};
pub use rational::Rational;
pub use spaces::{NamedSequence, SpaceTag, Verdict};
