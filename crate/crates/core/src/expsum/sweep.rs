use rayon::prelude::*;
use rug::{Complex, Float};

use super::{ApproxConfig, ErrorReport, ExpSum};
use crate::error::{Error, Result};
use crate::polyrat::ApComplex;
use crate::targets::TargetSpec;

/// What a sweep minimizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Objective {
    L1,
    Linf,
    /// `L¹` among runs with `max |c_j| < bound`.
    MaxCoef(f64),
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Objective::L1),
            "linf" => Ok(Objective::Linf),
            _ => match s.strip_prefix("maxc:").map(str::parse::<f64>) {
                Some(Ok(b)) if b > 0.0 => Ok(Objective::MaxCoef(b)),
                _ => Err(Error::Parse(format!(
                    "objective {s:?}: expected l1, linf or maxc:BOUND"
                ))),
            },
        }
    }
}

impl Objective {
    /// The value to minimize, or `None` if the run is not admissible.
    fn score(&self, r: &ErrorReport) -> Option<f64> {
        let v = match self {
            Objective::L1 => r.l1,
            Objective::Linf => r.linf,
            Objective::MaxCoef(bound) if r.max_abs_c < *bound => r.l1,
            Objective::MaxCoef(_) => return None,
        };
        v.is_finite().then_some(v)
    }
}

/// One grid point of a sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub outcome: std::result::Result<(ExpSum, ErrorReport), String>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// Rows in grid order, `A` outer and `B` inner.
    pub rows: Vec<SweepRow>,
    pub best: usize,
}

impl SweepOutcome {
    pub fn best_row(&self) -> &SweepRow {
        &self.rows[self.best]
    }

    pub fn best_config(&self) -> ApproxConfig {
        let (s, _) = self.best_run();
        *s.config().expect("pipeline output carries its config")
    }

    pub fn best_run(&self) -> (&ExpSum, &ErrorReport) {
        match &self.best_row().outcome {
            Ok((s, r)) => (s, r),
            Err(_) => unreachable!("the best row succeeded"),
        }
    }
}

/// Runs the pipeline at every `(A, B)` in parallel and picks the best run.
/// Failed runs are kept as rows with their error message; ties go to the
/// first row in grid order.
pub fn sweep(
    t: &TargetSpec,
    base: &ApproxConfig,
    a_grid: &[f64],
    b_grid: &[f64],
    objective: Objective,
) -> Result<SweepOutcome> {
    if a_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::Invalid("sweep grids must be nonempty".into()));
    }
    let grid: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| b_grid.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(a, b)| {
            let cfg = ApproxConfig { a, b, ..*base };
            let outcome = super::approximate(t, &cfg).map_err(|e| e.to_string());
            SweepRow { a, b, outcome }
        })
        .collect();
    let best = rows
        .iter()
        .enumerate()
        .filter_map(|(i, row)| match &row.outcome {
            Ok((_, r)) => objective.score(r).map(|v| (i, v)),
            Err(_) => None,
        })
        .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)))
        .map(|(i, _)| i)
        .ok_or(Error::AllFailed)?;
    Ok(SweepOutcome { rows, best })
}

/// `P(X <= u)` from an approximant of the unit step.
#[derive(Clone, Debug)]
pub struct CdfValue {
    /// Clamped to `[0, 1]`.
    pub value: Float,
    /// `Re Σ c_j F_X(λ_j / u)` as computed.
    pub raw: Float,
}

/// `Σ c_j F_X(λ_j / u)`, where `F_X` is the Laplace transform of the law of
/// `X` and `s` approximates the indicator of `x <= 1`.
pub fn cdf_from_laplace(s: &ExpSum, f_x: impl Fn(&ApComplex) -> Result<ApComplex>, u: f64) -> Result<CdfValue> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Invalid(format!("u = {u}, need u > 0")));
    }
    let bits = s.bits();
    let mut acc = Complex::new(bits);
    for t in s.terms() {
        let z = Complex::with_val(bits, &t.lambda / u);
        acc += f_x(&z)? * &t.c;
    }
    let raw = acc.real().clone();
    let value = raw.clone().clamp(&0, &1);
    Ok(CdfValue { value, raw })
}
