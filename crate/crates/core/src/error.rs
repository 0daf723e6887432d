use thiserror::Error;

/// Errors raised by the regime, spectral, modal and synthesis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of a formula (zero wavenumber, non-positive viscosity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Regime parameters are inconsistent with the selected case, or no critical wavenumber exists.
    #[error("regime error: {0}")]
    Regime(String),

    /// The root finder stopped without meeting its residual bound.
    #[error("root finder did not converge (best residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    /// Roots could not be matched to the dominant-balance predictions.
    #[error("root classification failed: {0}")]
    Classification(String),

    /// A boundary-layer eigenvector or pressure has a vanishing denominator.
    #[error("singular mode: {0}")]
    SingularMode(String),

    /// The boundary-lift system is numerically singular.
    #[error("near-singular amplitude system: |det| = {det:.3e} (relative {relative:.3e}) at eps = {eps:.3e}")]
    NearSingular { det: f64, relative: f64, eps: f64 },

    /// Quadrature refinement changed a probe value by more than the tolerance.
    #[error("quadrature under-resolved: relative change {change:.3e} exceeds {tolerance:.1e}")]
    Accuracy { change: f64, tolerance: f64 },

    /// The exponential tail beyond the truncated y-grid is not negligible.
    #[error("y-grid truncation: tail bound {tail:.3e} exceeds 1% of norm {norm:.3e}")]
    GridTruncation { tail: f64, norm: f64 },

    /// A caller broke an operation's contract (e.g. passed a non-decaying mode).
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
