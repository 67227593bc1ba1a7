use thiserror::Error;

/// Errors from parsing or compiling a rule file.
#[derive(Debug, Error)]
pub enum RuleError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("dangling identifier `{ident}` at line {line}")]
    Dangling { line: usize, ident: String },
    #[error("duplicate id `{ident}` at line {line}")]
    Duplicate { line: usize, ident: String },
    #[error("rule is structurally unusable: {0}")]
    Structure(String),
}

/// Errors from level construction and enumeration.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error("resource cap exceeded: level {level} needs {needed} cells, cap is {cap}")]
    CapExceeded { level: usize, needed: u128, cap: u64 },
    #[error("gluing inconsistency at level {level}: {msg}")]
    Gluing { level: usize, msg: String },
}

#[derive(Debug, Error)]
pub enum CodingError {
    #[error("inadmissible coding at position {pos}")]
    Inadmissible { pos: usize },
    #[error("point is not periodic under the requested period {period}")]
    NotPeriodic { period: usize },
    #[error("enumeration cap exceeded ({0})")]
    Cap(String),
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("separation level cap {cap} reached before the points separated")]
    SeparationCap { cap: usize },
    #[error("inadmissible branch data: {0}")]
    BadBranch(String),
    #[error("potential depth mismatch: expected {expected}, got {got}")]
    DepthMismatch { expected: usize, got: usize },
    #[error("missing potential value for word {0}")]
    MissingValue(String),
}

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error("shift is not topologically mixing; Perron data is degenerate")]
    NotMixing,
    #[error("power iteration did not converge within {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("eventual positivity could not be certified within {cap} steps")]
    NotEventuallyPositive { cap: usize },
    #[error("root bracketing failed: {0}")]
    Bracket(String),
}

#[derive(Debug, Error)]
pub enum CountError {
    #[error("T = {t} exceeds the completeness horizon {horizon}")]
    Horizon { t: f64, horizon: f64 },
    #[error("quadrature did not converge")]
    Quadrature,
    #[error("li(y) is undefined for y <= 1 in this artifact (y = {0})")]
    LiDomain(f64),
    #[error("ledger format version mismatch: {0}")]
    Version(String),
    #[error("malformed ledger row at line {line}: {msg}")]
    Row { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
