use thiserror::Error;

/// Errors raised by the geometric and algebraic operations.
///
/// The variants are grouped so that callers (the CLI in particular) can tell
/// usage mistakes apart from mathematical preconditions that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parameter {t} is outside the domain [{t0}, {t1}]")]
    Domain { t: f64, t0: f64, t1: f64 },

    #[error("singular point at {at}: {what}")]
    Singular { at: f64, what: String },

    #[error("flat point at t = {t} (|curvature| = {curvature:e})")]
    FlatPoint { t: f64, curvature: f64 },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("degenerate osculation at t = {t}: null space dimension {nullity}")]
    DegenerateOsculation { t: f64, nullity: usize },

    #[error("conics are proportional")]
    IdenticalConics,

    #[error("Moebius maps are projectively identical")]
    IdenticalMaps,

    #[error("contour touches the bounding box; enlarge it")]
    BboxTooSmall,

    #[error("invalid oval: {0}")]
    InvalidOval(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("verification of preset `{preset}` failed: {reason}")]
    PresetFailed { preset: String, reason: String },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// True for errors caused by bad input rather than by geometry.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Usage(_) | Error::Domain { .. } | Error::InvalidCurve(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
