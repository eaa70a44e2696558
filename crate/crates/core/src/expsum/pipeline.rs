use rug::Complex;
use serde::{Deserialize, Serialize};

use super::metrics::{error_metrics, ErrorReport, DEFAULT_GRID};
use super::{derivative_expsum, from_rational, ExpSum};
use crate::error::{Error, PipelineStep, Result};
use crate::laplace::eval_many;
use crate::padecf::{build_points, solve_with_report, PadeProblem};
use crate::polyrat::{ApComplex, PrecisionContext, RationalFunction};
use crate::targets::{PostTransform, TargetSpec};

/// Parameters of one approximation run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    #[serde(rename = "M")]
    pub m: usize,
    pub n_inf: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(skip, default = "default_digits")]
    pub digits: u32,
}

fn default_digits() -> u32 {
    PrecisionContext::default().digits()
}

impl ApproxConfig {
    pub fn new(m: usize, n_inf: usize, a: f64, b: f64) -> Self {
        ApproxConfig {
            m,
            n_inf,
            a,
            b,
            digits: default_digits(),
        }
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    /// Number of interpolation points, `2M - n_inf`.
    pub fn p(&self) -> usize {
        (2 * self.m).saturating_sub(self.n_inf)
    }

    pub fn validate(&self) -> Result<PrecisionContext> {
        let ctx = PrecisionContext::new(self.digits)?;
        if self.n_inf < 1 {
            return Err(Error::Invalid("n_inf must be at least 1".into()));
        }
        if 2 * self.m < self.n_inf + 2 {
            return Err(Error::Invalid(format!(
                "p = 2M - n_inf = {} with M = {}, n_inf = {}; need p >= 2",
                2 * self.m as isize - self.n_inf as isize,
                self.m,
                self.n_inf
            )));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::Invalid(format!("A = {}, need A >= 0", self.a)));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Invalid(format!("B = {}, need B > 0", self.b)));
        }
        Ok(ctx)
    }
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct Approximation {
    /// The final approximant, after the post transform.
    pub sum: ExpSum,
    /// The approximant of `f` itself.
    pub raw: ExpSum,
    pub rational: RationalFunction<ApComplex>,
    pub report: ErrorReport,
}

/// Runs the whole pipeline and measures the error over the target's range.
pub fn approximate(t: &TargetSpec, cfg: &ApproxConfig) -> Result<(ExpSum, ErrorReport)> {
    approximate_detailed(t, cfg).map(|a| (a.sum, a.report))
}

pub fn approximate_detailed(t: &TargetSpec, cfg: &ApproxConfig) -> Result<Approximation> {
    let ctx = cfg.validate().map_err(Error::at(PipelineStep::Config))?;
    let p = cfg.p();

    let xi: Vec<ApComplex> = t
        .taylor_coeffs(cfg.n_inf, &ctx)
        .iter()
        .map(|x| Complex::with_val(ctx.bits(), x))
        .collect();
    if xi.len() != cfg.n_inf {
        return Err(Error::at(PipelineStep::Taylor)(Error::Invalid(format!(
            "target produced {} of {} coefficients",
            xi.len(),
            cfg.n_inf
        ))));
    }

    let points = build_points(p, cfg.a, cfg.b, &ctx).map_err(Error::at(PipelineStep::Points))?;
    let values = laplace_values(t, &points).map_err(Error::at(PipelineStep::Laplace))?;

    let problem = PadeProblem::new(points, values, xi).map_err(Error::at(PipelineStep::Pade))?;
    let solution = solve_with_report(&problem).map_err(Error::at(PipelineStep::Pade))?;

    let raw = from_rational(&solution.rational)
        .map_err(Error::at(PipelineStep::PartialFractions))?
        .with_config(*cfg);
    let sum = match t.post_transform {
        PostTransform::Identity => raw.clone(),
        PostTransform::NegateDerivative => derivative_expsum(&raw),
    };

    let mut report = error_metrics(t, &sum, t.range, DEFAULT_GRID).map_err(Error::at(PipelineStep::Metrics))?;
    report.interp_residual = solution.interp_residual;
    Ok(Approximation {
        sum,
        raw,
        rational: solution.rational,
        report,
    })
}

/// `F(z_j)` for conjugate-symmetric points: the upper half is computed and
/// mirrored, so that the data are exactly symmetric.
fn laplace_values(t: &TargetSpec, points: &[ApComplex]) -> Result<Vec<ApComplex>> {
    let p = points.len();
    let half = p.div_ceil(2);
    let upper = &points[p - half..];
    let computed = eval_many(&t.laplace, upper).map_err(|e| match e {
        Error::AtPoint { index, source } => Error::AtPoint {
            index: index + p - half,
            source,
        },
        e => e,
    })?;
    let mut values = Vec::with_capacity(p);
    for j in 0..p {
        let v = if j >= p - half {
            computed[j - (p - half)].clone()
        } else {
            crate::polyrat::Scalar::conj(&computed[p - 1 - j - (p - half)])
        };
        values.push(v);
    }
    if p % 2 == 1 {
        // The middle point is z = 0, where F is real.
        let mid = &mut values[p / 2];
        *mid = Complex::with_val(mid.prec(), mid.real());
    }
    Ok(values)
}
