//! Numerical geometry of quantum state spaces.
//!
//! The crate covers the Fubini–Study metric on projective Hilbert space, the
//! pointwise metric of wavefunctions over configuration space, curvature and
//! geodesics of metric fields, Schrödinger evolution and its Fubini–Study
//! speed, and a catalog of hydrogen-like families with closed-form metric
//! coefficients.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod geometry;
pub mod hilbert;
pub mod metrics;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
