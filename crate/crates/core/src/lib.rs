//! Hypergeometric series, the Riemann function and the explicit solution of
//! the Cauchy problem for `x^n V_xx - (-y)^m V_yy + mu V = 0` (0 < m < 1,
//! 0 <= n < 1) with data on the degeneracy line `y = 0`.

// `!(x < y)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy;
pub mod cli;
pub mod config;
pub mod error;
pub mod identities;
pub mod quadrature;
pub mod riemann;
pub mod verification;
pub mod special_fn;

pub use error::{Error, Result};
