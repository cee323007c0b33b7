use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum HelixError {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arc length {s} outside profile domain [{lo}, {hi}]")]
    OutOfDomain { s: f64, lo: f64, hi: f64 },

    #[error("degenerate curve: {reason} (max curvature estimate {kappa_max:.3e})")]
    DegenerateCurve { reason: String, kappa_max: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate axis: {0}")]
    DegenerateAxis(String),

    #[error("no precession axis: Darboux-field axis residual {residual:.3e} exceeds {limit:.3e}")]
    NoPrecessionAxis { residual: f64, limit: f64 },

    #[error("spherical curve is not unit-speed (worst deviation {worst:.3e}); reparameterize first")]
    ReparameterizeFirst { worst: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HelixError>;
