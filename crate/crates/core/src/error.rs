use thiserror::Error;

/// Errors raised across the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `a12_L * a12_R <= 0`: the system has no crossing periodic orbits.
    #[error("no crossing dynamics: a12_L * a12_R = {0} is not positive")]
    NoCrossingDynamics(f64),

    #[error("orbit from y0 = {y0} does not return to the switching line ({reason})")]
    NoReturn { y0: f64, reason: &'static str },

    #[error("y0 = {y0} lies outside the half-map domain [{lo}, {hi}]")]
    DomainViolation { y0: f64, lo: f64, hi: f64 },

    #[error("singular derivative expression: {0}")]
    Singularity(&'static str),

    /// Internal consistency failure of the contact-polynomial construction.
    #[error("derivation mismatch: {0}")]
    DerivationMismatch(String),

    #[error("polynomial is not invariant under (y0, y1) -> (y1, y0)")]
    NotSymmetric,

    /// The two contact polynomials share a common component.
    #[error("degenerate polynomial system: {0}")]
    DegenerateSystem(&'static str),

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
