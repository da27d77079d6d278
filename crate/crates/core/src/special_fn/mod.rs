//! Convergence-controlled hypergeometric series.
//!
//! Families: Gauss `F`, `Xi2`, the triple series `Phi`, and the
//! parametrised families `Xi_pq` and `Psi_pq` (the latter with an inner Gauss
//! factor per term), plus term-wise derivatives of `Xi_pq`.

mod engine;
mod gamma;
mod gauss;
mod series;

pub use engine::CompensatedSum;
pub use gamma::{digamma, gamma_fn, ln_gamma, pochhammer};
pub use gauss::gauss_f;
pub use series::{phi, psi_pq, xi10_dsigma, xi10_rho_drho, xi2, xi_pq};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Order in which a multiple series is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ShellStrategy {
    /// Shells of constant total index.
    #[default]
    Diagonal,
    /// Index by index, innermost first.
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub rel_tol: f64,
    /// Budget per summation index (shells for the diagonal strategy).
    pub max_terms: usize,
    #[serde(default)]
    pub shell_strategy: ShellStrategy,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { rel_tol: 1e-12, max_terms: 500, shell_strategy: ShellStrategy::Diagonal }
    }
}

impl EvalConfig {
    pub fn with_tol(rel_tol: f64) -> Self {
        EvalConfig { rel_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rel_tol = {}", self.rel_tol)));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        Ok(())
    }
}

/// A summed series with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesValue {
    pub(crate) fn exact(value: f64, terms: usize) -> Self {
        SeriesValue { value, tail_estimate: 0.0, terms_used: terms, converged: true }
    }

    pub(crate) fn scaled(self, f: f64) -> Self {
        SeriesValue { value: self.value * f, tail_estimate: self.tail_estimate * f.abs(), ..self }
    }

    /// Combine diagnostics of two pieces of one value (values are added).
    pub(crate) fn merge(self, o: &SeriesValue) -> Self {
        SeriesValue {
            value: self.value + o.value,
            tail_estimate: self.tail_estimate + o.tail_estimate,
            terms_used: self.terms_used + o.terms_used,
            converged: self.converged && o.converged,
        }
    }

    /// The value, or a non-convergence error.
    pub fn require(&self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence { terms: self.terms_used, partial: self.value, tail: self.tail_estimate })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Xi2Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// Parameters of `Xi_pq`; `p`, `q` switch the primed Pochhammer factors on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiPQParams {
    pub a: f64,
    pub b: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    pub c: f64,
    pub c_prime: f64,
    pub d_prime: f64,
    pub p: u8,
    pub q: u8,
}

impl XiPQParams {
    /// `Xi_10[a, b; a' / c; c']`.
    pub fn xi10(a: f64, b: f64, a_prime: f64, c: f64, c_prime: f64) -> Self {
        XiPQParams { a, b, a_prime, b_prime: 1.0, c, c_prime, d_prime: 1.0, p: 1, q: 0 }
    }

    /// `Xi_00[a, b / c]`, i.e. `Xi2`.
    pub fn xi00(a: f64, b: f64, c: f64) -> Self {
        XiPQParams { a, b, a_prime: 1.0, b_prime: 1.0, c, c_prime: 1.0, d_prime: 1.0, p: 0, q: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiPQParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    pub c_prime: f64,
    pub d_prime: f64,
    pub p: u8,
    pub q: u8,
}

impl PsiPQParams {
    /// `Psi_00[a, b, c, d; e]`.
    pub fn psi00(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        PsiPQParams { a, b, c, d, e, a_prime: 1.0, b_prime: 1.0, c_prime: 1.0, d_prime: 1.0, p: 0, q: 0 }
    }
}

/// Arguments shared by the series families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct SeriesArgs {
    pub sigma: f64,
    pub omega: f64,
    pub rho: f64,
    pub theta: f64,
}

impl SeriesArgs {
    /// Arguments with theta derived from omega.
    pub fn from_omega(sigma: f64, omega: f64, rho: f64) -> Self {
        SeriesArgs { sigma, omega, rho, theta: omega / (omega - 1.0) }
    }
}
