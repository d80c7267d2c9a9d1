//! Integration by differentiation: integrals and integral transforms
//! evaluated by applying functions of the derivative operator to a small
//! class of elementary kernels.

// `!(x <= tol)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrate;
pub mod laplace;
pub mod numeric;
pub mod opcalc;
pub mod powerseries;
pub mod scalar;

pub use error::{Error, Result};
pub use powerseries::{series_known, PowerSeries, SeriesValue, DEFAULT_ORDER};
pub use scalar::{Scalar, C64};
