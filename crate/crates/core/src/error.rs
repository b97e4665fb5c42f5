use num::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("exponent at byte {position} is not a non-negative integer")]
    NegativeExponent { position: usize },

    #[error("variable x{index} is out of range for {num_vars} variable(s)")]
    VarOutOfRange { index: usize, num_vars: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial is constant; a non-constant polynomial is required")]
    ConstantPolynomial,

    #[error("cubical decomposition of the origin is undefined")]
    ZeroPoint,

    #[error("top-degree part vanishes at face point {sigma:?}")]
    TopVanishes { sigma: Vec<f64> },

    #[error("Mahler's hypothesis fails{}: {reason}", factor_suffix(.factor))]
    MahlerViolation { factor: Option<usize>, reason: String },

    #[error("s = {0} is a pole candidate")]
    PoleAt(BigRational),

    #[error("s0 = {0} is not an admissible pole candidate")]
    NotACandidate(BigRational),

    #[error("shift-polynomial interpolation is ill-conditioned (residual {residual:e} > {threshold:e})")]
    InterpolationIllConditioned { residual: f64, threshold: f64 },

    #[error("series does not converge absolutely at s = {s}: need Re(s) > {bound}")]
    NotConvergent { s: String, bound: f64 },

    #[error("shift vector component {index} = {value} lies outside [0, 1]")]
    ShiftOutOfRange { index: usize, value: String },
}

fn factor_suffix(factor: &Option<usize>) -> String {
    match factor {
        Some(i) => format!(" for factor {i}"),
        None => String::new(),
    }
}

impl Error {
    /// Stable name used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::NegativeExponent { .. } => "NegativeExponent",
            Error::VarOutOfRange { .. } => "VarOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::ZeroPoint => "ZeroPoint",
            Error::TopVanishes { .. } => "TopVanishes",
            Error::MahlerViolation { .. } => "MahlerViolation",
            Error::PoleAt(_) => "PoleAt",
            Error::NotACandidate(_) => "NotACandidate",
            Error::InterpolationIllConditioned { .. } => "InterpolationIllConditioned",
            Error::NotConvergent { .. } => "NotConvergent",
            Error::ShiftOutOfRange { .. } => "ShiftOutOfRange",
        }
    }
}
