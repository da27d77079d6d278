use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {what} = {value} is a non-positive integer")]
    Pole { what: &'static str, value: f64 },

    #[error("argument outside the convergence domain: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (partial value {partial}, tail {tail})")]
    NonConvergence { terms: usize, partial: f64, tail: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate denominator: {0}")]
    Degenerate(String),

    #[error("domain restriction violated: max sigma0 = {sigma0_max:.4} >= {limit}")]
    DomainRestriction { sigma0_max: f64, limit: f64 },

    #[error("quadrature did not reach tolerance {target:e} (last change {change:e})")]
    Quadrature { target: f64, change: f64 },

    #[error("extrapolation diverged: {0}")]
    Extrapolation(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("grid: {0}")]
    Grid(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// True when `x` is 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

pub(crate) fn check_lower(what: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("{what} = {value}")));
    }
    if is_nonpositive_integer(value) {
        return Err(Error::Pole { what, value });
    }
    Ok(())
}
