use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, InsarError>;

#[derive(Debug, Error)]
pub enum InsarError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("time {time} s is outside the trajectory span [{start}, {end}] s")]
    OutOfRangeTime { time: f64, start: f64, end: f64 },

    #[error("trajectory covers [{have_start}, {have_end}] s but [{need_start}, {need_end}] s is required")]
    TrajectoryTooShort {
        have_start: f64,
        have_end: f64,
        need_start: f64,
        need_end: f64,
    },

    #[error("capture contains no pulses")]
    EmptyCapture,

    #[error("capture has zero signal power; supply an absolute noise variance instead")]
    ZeroSignalPower,

    #[error("aperture selects no pulses for virtual element {vx}")]
    EmptyAperture { vx: usize },

    #[error("pulse {pulse} has {found} samples, expected {expected}")]
    MismatchedSamples {
        pulse: usize,
        found: usize,
        expected: usize,
    },

    #[error("zero signal: phase is undefined")]
    ZeroSignal,

    #[error("arcsine argument {0} is outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("baseline {baseline} m exceeds lambda/4 = {limit} m; fringe ambiguity resolution is not supported")]
    AmbiguousBaseline { baseline: f64, limit: f64 },

    #[error("array has no vertical baselines")]
    NoVerticalBaseline,

    #[error("vertical baselines have different lengths ({0} m vs {1} m)")]
    MixedBaselines(f64, f64),

    #[error("median magnitude is zero")]
    ZeroMedian,

    #[error("degenerate angle: sin(theta) = 0")]
    DegenerateAngle,

    #[error("corrupt {kind} file: {message}")]
    Format { kind: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl InsarError {
    pub(crate) fn format(kind: &'static str, message: impl Into<String>) -> Self {
        InsarError::Format {
            kind,
            message: message.into(),
        }
    }

    /// Process exit code: 2 config/parse, 3 data format, 4 numerical domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            InsarError::InvalidConfig(_)
            | InsarError::Parse { .. }
            | InsarError::TrajectoryTooShort { .. }
            | InsarError::OutOfRangeTime { .. } => 2,
            InsarError::Format { .. }
            | InsarError::Io(_)
            | InsarError::EmptyCapture
            | InsarError::MismatchedSamples { .. } => 3,
            InsarError::ZeroSignalPower
            | InsarError::EmptyAperture { .. }
            | InsarError::ZeroSignal
            | InsarError::OutOfDomain(_)
            | InsarError::AmbiguousBaseline { .. }
            | InsarError::NoVerticalBaseline
            | InsarError::MixedBaselines(..)
            | InsarError::ZeroMedian
            | InsarError::DegenerateAngle => 4,
        }
    }
}
