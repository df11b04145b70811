use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator mixes holomorphic and antiholomorphic terms")]
    MixedGenerator,

    #[error("generator is not holomorphic")]
    NotHolomorphic,

    #[error("generator is not antiholomorphic")]
    NotAntiholomorphic,

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },

    #[error("trajectory left the bounding box at t = {t}")]
    OutOfBounds { t: f64 },

    #[error("non-finite value in the right-hand side at t = {t}")]
    NonFinite { t: f64 },

    #[error("degenerate field: {0}")]
    Degenerate(String),

    #[error("curve is not closed")]
    NotClosed,

    #[error("curve has no tangents")]
    MissingTangents,

    #[error("curve is not Legendrian (contact defect {defect:e})")]
    NotLegendrian { defect: f64 },

    #[error("curve is undersampled: consecutive angle increment {increment} rad")]
    Undersampled { increment: f64 },

    #[error("curves too close: minimum distance {distance:e}")]
    CurvesTooClose { distance: f64 },

    #[error("linking integral {value} is not within 1e-3 of an integer")]
    NonIntegerLinking { value: f64 },

    #[error("{0}")]
    Convergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
