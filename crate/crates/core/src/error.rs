use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected one of [{}], found {found}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String>, found: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("function `{name}` at byte {offset} takes {expected} argument(s), got {found}")]
    Arity { name: String, offset: usize, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("coordinate `{0}` is not bound")]
    Unbound(String),
    #[error("duplicate coordinate `{0}` in binding")]
    DuplicateName(String),
    #[error("domain error in `{expr}` at value {value}: {reason}")]
    Domain { expr: String, value: f64, reason: &'static str },
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("temperature singularity: d U / d eps = {0} at the probe point")]
    TemperatureSingularity(f64),
    #[error("deformation gradient lost orientation: det F = {0}")]
    Orientation(f64),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
