use std::fmt;

use thiserror::Error;

/// Stage of the approximation pipeline in which a failure happened.
///
/// Failed runs are usually retried with different `(M, n_inf, A, B)`, so the
/// step tells the caller which part of the computation gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PipelineStep {
    Config,
    Taylor,
    Points,
    Laplace,
    Pade,
    PartialFractions,
    Transform,
    Metrics,
}

impl fmt::Display for PipelineStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PipelineStep::Config => "config",
            PipelineStep::Taylor => "taylor coefficients",
            PipelineStep::Points => "interpolation points",
            PipelineStep::Laplace => "laplace evaluation",
            PipelineStep::Pade => "pade solve",
            PipelineStep::PartialFractions => "partial fractions",
            PipelineStep::Transform => "post transform",
            PipelineStep::Metrics => "error metrics",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid precision: {digits} digits (need at least 32)")]
    Precision { digits: u32 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,

    #[error("rational function has numerator degree {num} > denominator degree {den}")]
    DivergentAtInfinity { num: isize, den: isize },

    #[error("poles {first} and {second} are not separated (min distance {distance:e})")]
    MultiplePole { first: usize, second: usize, distance: f64 },

    #[error("degenerate series at level {level}: leading coefficients vanish")]
    DegenerateSeries { level: usize },

    #[error("interpolant vanishes at point {index} during descent level {level}")]
    ZeroInterpolant { level: usize, index: usize },

    #[error("assembled rational function fails verification: {0}")]
    VerificationFailed(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),

    #[error("laplace evaluation failed at point {index}: {source}")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("argument outside the domain Re z >= 3/2: {0}")]
    DomainError(String),

    #[error("exponential sum has an imaginary part {residue:e} above threshold {threshold:e}")]
    ImaginaryLeak { residue: f64, threshold: f64 },

    #[error("some exponent has Re(lambda) <= 0: {min_re:e}")]
    UnstableTail { min_re: f64 },

    #[error("no grid point produced an approximation")]
    AllFailed,

    #[error("unknown target '{0}'")]
    UnknownTarget(String),

    #[error("{step} failed: {source}")]
    Step {
        step: PipelineStep,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(step: PipelineStep) -> impl FnOnce(Error) -> Error {
        move |e| Error::Step {
            step,
            source: Box::new(e),
        }
    }

    /// The pipeline step that failed, if the error was labeled with one.
    pub fn step(&self) -> Option<PipelineStep> {
        match self {
            Error::Step { step, .. } => Some(*step),
            _ => None,
        }
    }

    /// Strips any step label and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
