use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The field of source `index` cannot be evaluated at `point` (on a wire or magnet edge).
    #[error("field of source #{index} is singular at ({:.6e}, {:.6e}, {:.6e})", point[0], point[1], point[2])]
    SingularField { index: usize, point: [f64; 3] },

    #[error("body overlaps source #{index}")]
    Overlap { index: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("step size underflow (stiff system) at t = {t:.9e}")]
    Stiffness { t: f64 },

    #[error("non-finite state encountered at t = {t:.9e}")]
    NonFinite { t: f64, last_state: Vec<f64> },

    #[error("Euler form is singular: |cos(beta_tilde)| = {cos_beta:.3e}")]
    GimbalProximity { cos_beta: f64 },

    #[error("out of range: {0}")]
    Range(String),

    #[error("no trap: {0}")]
    NoTrap(String),

    #[error("no oscillation above the noise floor")]
    NoOscillation,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {value}")))
    }
}
