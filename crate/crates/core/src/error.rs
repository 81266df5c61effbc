use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a function, e.g. `S(t)` at `t <= 0`.
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    /// `S^{-1}(y)` requested past the total mass of a finite measure.
    #[error("pseudo-inverse argument {value} exceeds total mass {total_mass}")]
    OutOfRange { value: f64, total_mass: f64 },

    /// The target level is not enclosed by the bracket; the caller may widen it and retry.
    #[error("level {level} not bracketed by [{lo}, {hi}] (S(lo) = {s_lo}, S(hi) = {s_hi}); expand the bracket")]
    Bracket {
        level: f64,
        lo: f64,
        hi: f64,
        s_lo: f64,
        s_hi: f64,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("numerical failure: {message} (residual estimate {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension {dim} exceeds the exact-enumeration limit of {max}; use the Monte Carlo estimator instead")]
    Capacity { dim: usize, max: usize },

    #[error("sampler exceeded the loop cap of {cap} iterations")]
    LoopCap { cap: usize },

    #[error("configuration error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("batch aborted after {completed} completed rows: {source}")]
    Partial {
        completed: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
