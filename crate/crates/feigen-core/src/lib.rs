//! Numerical kernels for period-doubling analysis of one-dimensional maps:
//! an expression DSL with third-order Taylor jets, a family catalog and
//! transform combinators, orbit classification, bifurcation location, and
//! Schwarzian sign analysis.
//!
//! `no_std`-compatible (with `alloc`); the `std` feature (default) only
//! switches float math from `libm` to the platform intrinsics.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bifurcation;
pub mod catalog;
pub mod dd;
pub mod dynamics;
pub mod expr;
pub mod family;
pub mod jet;
pub mod real;
pub mod schwarzian;
pub mod transform;

pub use dd::Dd;
pub use real::Scalar;
