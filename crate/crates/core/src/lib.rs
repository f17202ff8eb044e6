//! Exact-rational toolkit for twisted operators on 3-Lie algebras.
//!
//! The crate represents finite-dimensional Lie and 3-Lie algebras, their
//! representations and 2-cocycles over arbitrary-precision rationals, and
//! builds everything twisted operators carry with them: semidirect products,
//! induced brackets, gauge transformations, the twisted cochain complex and
//! its cohomology, order-by-order deformation conditions, NS-type algebras,
//! and trace-map inductions from binary to ternary structures. All checks are
//! exact; a report either passes or pinpoints the first violating basis tuple.

pub mod cohomology;
pub mod deform;
pub mod error;
pub mod exactla;
pub mod induce;
pub mod multiindex;
pub mod nslie;
pub mod report;
pub mod structures;
pub mod twistop;

#[cfg(test)]
pub(crate) mod testfix;

pub use error::{Error, Result};
