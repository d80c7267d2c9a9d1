//! Ground-truth engines used to cross-check the operator routes.
//!
//! This crate deliberately knows nothing about power series, kernels or
//! differential operators. It integrates plain callables numerically and
//! evaluates a handful of special functions directly, so that agreement
//! between an operator-route result and an oracle value is evidence rather
//! than a tautology.

pub mod accel;
pub mod quad;
pub mod special;

pub use quad::{quad_finite, quad_unbounded, Domain, QuadResult, UnboundedOptions};
pub use special::{special_eval, SpecialError, SpecialFn};
