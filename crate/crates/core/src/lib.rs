//! Numerical toolkit for q-analogue classes of k-uniformly starlike and
//! convex functions defined by a generalized q-integral operator.
//!
//! The pieces are q-calculus primitives ([`qcore`]), truncated power series
//! ([`series`]), the conic domains and their extremal maps ([`conic`]), the
//! operator multipliers ([`qoperator`]), class membership and member
//! generation ([`classes`]) and a harness that checks the coefficient
//! bounds ([`verify`]).

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod conic;
pub mod error;
pub mod qcore;
pub mod qoperator;
mod roots;
pub mod series;
pub mod tolerances;
pub mod verify;
pub mod winding;

pub use error::{Error, Result};
