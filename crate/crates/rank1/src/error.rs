use thiserror::Error;

/// Errors raised by the word calculus, parameter handling, expansion, and
/// the pointed-configuration queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern must be nonempty")]
    EmptyPattern,
    #[error("words must have equal length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("word must be binary and start and end with 0")]
    NotInF,
    #[error("gap word must be nonempty")]
    EmptyGapWord,
    #[error("stage {stage} requested but only {available} stages are specified")]
    DepthLimited { stage: usize, available: usize },
    #[error("expansion needs {needed} letters, exceeding the cap of {cap}")]
    CapExceeded { needed: u128, cap: usize },
    #[error("stage {stage} is invalid: {violation}")]
    InvalidStage {
        stage: usize,
        violation: StageViolation,
    },
    #[error("parameter spec has no stages")]
    EmptySpec,
    #[error("modulus must be at least 2, got {d}")]
    InvalidModulus { d: u64 },
    #[error("cut points must start at 0 and be strictly increasing")]
    BadCutPoints,
    #[error("merged cutting value would overflow")]
    CutTooCoarse,
    #[error("expected incompatibility certificate failed at merged stage {stage}")]
    CertificateFailed { stage: usize },
    #[error("level {level} not materialized (expansion reaches level {max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("offset {offset} outside the window [1, {len}]")]
    OutOfWindow { offset: i64, len: usize },
    #[error("position 0 lies in a spacer at this level, not in an expected occurrence")]
    NotInExpectedOccurrence,
    #[error("invalid replacement scheme: {reason}")]
    SchemeInvalid { reason: String },
}

/// A single stage constraint violation, reported with its stage index by
/// [`crate::params::ParameterSpec::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StageViolation {
    #[error("cutting value must be at least 2, got {r}")]
    CuttingTooSmall { r: u32 },
    #[error("spacer word has length {len}, expected r - 1 = {expected}")]
    SpacerLength { len: usize, expected: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
