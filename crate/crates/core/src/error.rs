use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input quantity was zero, negative or non-finite.
    #[error("{field} must be strictly positive and finite, got {value}")]
    Domain {
        /// Name of the offending field.
        field: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A law coefficient violates its invariant.
    #[error("invalid coefficient {name} = {value}: {reason}")]
    InvalidParameter {
        /// Coefficient name.
        name: &'static str,
        /// The rejected value.
        value: f64,
        /// Which invariant failed.
        reason: &'static str,
    },
    /// The distilled law was evaluated without a teacher size.
    #[error("distilled law requires teacher size")]
    MissingTeacher,
    /// Two laws that must agree on metric or model-size unit do not.
    #[error("{what} mismatch between baseline and distilled laws")]
    LawMismatch {
        /// `"metric"` or `"model size unit"`.
        what: &'static str,
    },
    /// `alpha == alpha'`: the derivative of the differential error has no interior root.
    #[error("exponent gap is zero; F' has no interior root of this form")]
    DegenerateExponentGap,
    /// A configuration value is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    /// An observation row violates its invariant.
    #[error("row {row}: {reason}")]
    InvalidObservation {
        /// Zero-based row index.
        row: usize,
        /// Which invariant failed.
        reason: &'static str,
    },
    /// The observation grid has no rows.
    #[error("no data rows")]
    EmptyGrid,
    /// The grid mixes error-rate and loss observations.
    #[error("mixed metrics in one grid")]
    MixedMetrics,
    /// Not enough rows to pin the free parameters.
    #[error("grid has {rows} rows; at least {required} are needed")]
    TooFewRows {
        /// Rows present.
        rows: usize,
        /// Rows required.
        required: usize,
    },
    /// A distilled fit got a row without a teacher size.
    #[error("row {row} has no teacher size; distilled fitting needs one in every row")]
    MissingTeacherRow {
        /// Zero-based row index.
        row: usize,
    },
    /// Every multi-start began at a non-finite residual.
    #[error("all {starts} starts were abandoned (non-finite residuals)")]
    AllStartsAbandoned {
        /// Number of starts attempted.
        starts: usize,
    },
    /// The differential error evaluated to a non-finite value.
    #[error("differential error is not finite at d_p = {d_p}")]
    NonFinite {
        /// Where evaluation failed.
        d_p: f64,
    },
    /// A search interval is empty or not positive.
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidRange {
        /// Lower end.
        lo: f64,
        /// Upper end.
        hi: f64,
    },
    /// A sampling fraction produced zero examples for some class.
    #[error("fraction {fraction} yields zero examples per class")]
    EmptyFraction {
        /// The offending fraction.
        fraction: f64,
    },
    /// Logit vector too short or non-finite.
    #[error("invalid logits: {0}")]
    InvalidLogits(&'static str),
    /// Student and teacher logits have different lengths.
    #[error("logit length mismatch: student has {student}, teacher has {teacher}")]
    LengthMismatch {
        /// Student length.
        student: usize,
        /// Teacher length.
        teacher: usize,
    },
    /// Label index outside the class range.
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange {
        /// The label.
        label: usize,
        /// Number of classes.
        classes: usize,
    },
}
