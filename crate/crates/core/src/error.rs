use thiserror::Error;

use crate::jet::Func;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("boost direction cosines do not satisfy cos²d1 + cos²d2 + cos²d3 = 1 (sum = {sum})")]
    DirectionCosines { sum: f64 },
    #[error("motion parameters must be finite")]
    NonFinite,
    #[error("expected 11 motion parameters, got {0}")]
    ParameterCount(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero constant term")]
    DivisionByZero,
    #[error("{func} is not differentiable at constant term {value}")]
    Domain { func: Func, value: f64 },
    #[error("pow with exponent {exponent} needs a positive base, got {value}")]
    PowDomain { exponent: f64, value: f64 },
    #[error("derivative order {0} exceeds jet order")]
    OrderOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("function `{name}` takes 1 argument, got {got} (offset {offset})")]
    Arity {
        name: String,
        got: usize,
        offset: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

/// Evaluation failure, located by the rendered subexpression that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("in `{at}`: {source}")]
    Jet {
        at: String,
        #[source]
        source: JetError,
    },
    #[error("parameter `{0}` has no value")]
    MissingParam(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: missing key `{key}` in [curve] block")]
    MissingKey { line: usize, key: String },
    #[error("line {line}: in `{key}`: {source}")]
    Expr {
        line: usize,
        key: String,
        #[source]
        source: ParseError,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("invalid domain: need lo < hi and at least 2 samples")]
    Domain,
    #[error("component {component}: {source}")]
    Eval {
        component: &'static str,
        #[source]
        source: EvalError,
    },
    #[error("{0}")]
    Family(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrenetError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("degenerate frame at s = {s} inside the difference stencil ({reason})")]
    DegenerateStencil { s: f64, reason: &'static str },
    #[error("degenerate frame at s = {s} ({reason})")]
    Degenerate { s: f64, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MannheimError {
    #[error("cannot fit gamma: every sample has tau = 0")]
    AllTauZero,
    #[error("curve is degenerate at every grid sample")]
    FullyDegenerate,
    #[error("generalized Mannheim condition fails (sup |kappa - gamma tau^2| = {residual})")]
    ConditionFails { residual: f64 },
    #[error(transparent)]
    Frenet(#[from] FrenetError),
}

impl From<CurveError> for MannheimError {
    fn from(e: CurveError) -> Self {
        MannheimError::Frenet(FrenetError::Curve(e))
    }
}
