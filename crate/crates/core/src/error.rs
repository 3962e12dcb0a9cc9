use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the routine.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Series division with a vanishing divisor or a valuation mismatch.
    #[error("degenerate series division: {0}")]
    DegenerateDivision(&'static str),

    /// Composition requires an inner series with zero constant term.
    #[error("composition needs inner(0) = 0, got {0}")]
    NonzeroInnerConstant(f64),

    /// A series is required to be normalized (a0 = 0, a1 = 1).
    #[error("series is not normalized: a0 = {a0}, a1 = {a1}")]
    NotNormalized { a0: String, a1: String },

    /// An iterative procedure did not meet its tolerance.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Two independent accuracy estimates disagree.
    #[error("accuracy check failed for {what}: discrepancy {discrepancy:e} exceeds {tolerance:e}")]
    Accuracy {
        what: String,
        discrepancy: f64,
        tolerance: f64,
    },

    /// The quadrature path passes too close to a singularity of the integrand.
    #[error(
        "quadrature path to {endpoint} passes within {distance:e} of singularity {singularity}"
    )]
    SingularPath {
        endpoint: String,
        singularity: f64,
        distance: f64,
    },

    /// A quotient was evaluated where its denominator vanishes.
    #[error("zero denominator at z = {0}")]
    ZeroDenominator(String),

    /// The supplied map is not a Schwarz function.
    #[error("invalid Schwarz function: {0}")]
    InvalidSchwarz(String),

    /// A subordinate coefficient exceeds the Rogosinski bound.
    #[error("coefficient c_{n} has modulus {modulus} above the bound {bound}")]
    Rogosinski { n: usize, modulus: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
