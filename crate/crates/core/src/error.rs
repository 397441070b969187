use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// spectral pipeline, the data construction and the evolution layer.
#[derive(Error, Debug)]
pub enum Error {
    #[error("shell {shell} not resolvable on this grid (lattice spacing {delta_xi:.6e}, nyquist {nyquist:.6e})")]
    ShellNotResolvable {
        shell: i32,
        delta_xi: f64,
        nyquist: f64,
    },

    #[error("multiplier symbol is not Hermitian at mode {mode:?}: |s(-xi) - conj(s(xi))| = {defect:.3e}")]
    NonHermitianSymbol { mode: Vec<i64>, defect: f64 },

    #[error("spectral data is not Hermitian (real field expected): defect {defect:.3e} at mode {mode:?}")]
    NonHermitianSpectrum { mode: Vec<i64>, defect: f64 },

    #[error("negative time {0} passed to an evolution operator")]
    NegativeTime(f64),

    #[error("empty time trace passed to {0}")]
    EmptyTrace(&'static str),

    #[error("no admissible beta exists for the requested family: {0}")]
    BetaUnresolvable(String),

    #[error("construction constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("atom offsets collide: atoms {a} and {b} are {distance:.4} apart, minimum {minimum:.4}")]
    OffsetCollision {
        a: usize,
        b: usize,
        distance: f64,
        minimum: f64,
    },

    #[error("offset separation calibration missing or stale: {0}")]
    SeparationNotCalibrated(String),

    #[error("exponent constraint violated: {0}")]
    ExponentConstraintViolated(String),

    #[error("fixed point iteration did not contract: residual {residual:.3e} after {iterations} iterations (tolerance {tolerance:.1e})")]
    NonContraction {
        residual: f64,
        iterations: usize,
        tolerance: f64,
    },

    #[error("solution blow-up detected at t = {time:.6e}: max amplitude {amplitude:.3e} exceeds guard {guard:.1e}")]
    BlowupDetected {
        time: f64,
        amplitude: f64,
        guard: f64,
    },

    #[error("explicit step violates the advective stability bound: dt * scale = {product:.3e} > {limit:.3e}")]
    CflViolation { product: f64, limit: f64 },

    #[error("parse error in {context}: {message}")]
    ParseError { context: String, message: String },

    #[error("configuration invalid:\n{}", .0.join("\n"))]
    ValidationError(Vec<String>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand used by parsers and loaders.
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ParseError {
            context: context.into(),
            message: message.into(),
        }
    }
}
