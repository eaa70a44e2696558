//! Multi-point Padé approximation by continued fractions.
//!
//! Finds the rational `R` of type `[M-1/M]` with `R(z_j) = a_j` at `p` finite
//! points and `R(z) = Σ_{j<n_inf} ξ_j z^{-j-1} + O(z^{-n_inf-1})` at infinity,
//! where `p + n_inf = 2M`. The points are peeled off one at a time, then the
//! remaining expansion is turned into a terminal fraction, and the whole
//! fraction is multiplied out.

mod cf;
mod descent;
mod points;

pub use cf::{assemble, assemble_terminal, terminal_cf, ContinuedFraction};
pub use descent::{series_descend_case1, series_descend_case2, value_descend, DescentState};
pub use points::{build_points, build_points_on};

use crate::error::{Error, Result};
use crate::polyrat::{RationalFunction, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct PadeProblem<T> {
    points: Vec<T>,
    values: Vec<T>,
    xi: Vec<T>,
}

impl<T: Scalar> PadeProblem<T> {
    pub fn new(points: Vec<T>, values: Vec<T>, xi: Vec<T>) -> Result<Self> {
        let p = points.len();
        let n_inf = xi.len();
        if values.len() != p {
            return Err(Error::Invalid(format!("{p} points but {} values", values.len())));
        }
        if p < 2 {
            return Err(Error::Invalid(format!("p = {p}, need p >= 2")));
        }
        if n_inf < 1 {
            return Err(Error::Invalid("n_inf = 0, need n_inf >= 1".into()));
        }
        if (p + n_inf) % 2 != 0 {
            return Err(Error::Invalid(format!("p + n_inf = {} is odd", p + n_inf)));
        }
        let tol = points[0].check_tolerance();
        for j in 0..p {
            let (z, a) = (&points[j], &values[j]);
            if z.re_f64() < -tol {
                return Err(Error::Invalid(format!("point {j} has Re z < 0")));
            }
            let mirror = p - 1 - j;
            if !close(&points[mirror], &z.conj(), z.magnitude(), tol)
                || !close(&values[mirror], &a.conj(), a.magnitude(), tol)
            {
                return Err(Error::Invalid(format!(
                    "data at {j} and {mirror} are not complex conjugates"
                )));
            }
        }
        Ok(PadeProblem { points, values, xi })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    pub fn p(&self) -> usize {
        self.points.len()
    }

    pub fn n_inf(&self) -> usize {
        self.xi.len()
    }

    #[allow(non_snake_case)]
    pub fn M(&self) -> usize {
        (self.p() + self.n_inf()) / 2
    }

    /// Length of the terminal fraction: `n_inf` for even `p`, else `n_inf - 1`.
    pub fn k(&self) -> usize {
        if self.p() % 2 == 0 {
            self.n_inf()
        } else {
            self.n_inf() - 1
        }
    }
}

/// `|diff| / (1 + scale) < tol`, or exact equality when `tol` is zero.
fn close<T: Scalar>(x: &T, y: &T, scale: f64, tol: f64) -> bool {
    let diff = x.minus(y);
    if tol == 0.0 {
        diff.is_zero()
    } else {
        diff.magnitude() / (1.0 + scale) < tol
    }
}

/// A verified solution and the checks it passed.
#[derive(Clone, Debug)]
pub struct PadeSolution<T> {
    pub rational: RationalFunction<T>,
    pub continued_fraction: ContinuedFraction<T>,
    /// `max_j |R(z_j) - a_j| / (1 + |a_j|)`.
    pub interp_residual: f64,
    /// Same measure on the expansion coefficients at infinity.
    pub series_residual: f64,
}

/// Every descent state from level 0 to level `p`.
pub fn descent_trace<T: Scalar>(problem: &PadeProblem<T>) -> Result<Vec<DescentState<T>>> {
    let mut state = DescentState::initial(&problem.points, &problem.values, &problem.xi);
    let mut trace = Vec::with_capacity(problem.p() + 1);
    for _ in 0..problem.p() {
        let (_, next) = state.step()?;
        trace.push(std::mem::replace(&mut state, next));
    }
    trace.push(state);
    Ok(trace)
}

/// Runs the descent and builds the continued fraction, without checks.
pub fn continued_fraction<T: Scalar>(problem: &PadeProblem<T>) -> Result<ContinuedFraction<T>> {
    let mut state = DescentState::initial(&problem.points, &problem.values, &problem.xi);
    let mut nodes = Vec::with_capacity(problem.p());
    for _ in 0..problem.p() {
        let (node, next) = state.step()?;
        nodes.push(node);
        state = next;
    }
    let (terminal_constant, terminal_d) = terminal_cf(&state.gamma, problem.k()).map_err(|e| match e {
        Error::DegenerateSeries { level } => Error::DegenerateSeries {
            level: problem.p() + level,
        },
        e => e,
    })?;
    Ok(ContinuedFraction {
        nodes,
        terminal_constant,
        terminal_d,
    })
}

pub fn solve<T: Scalar>(problem: &PadeProblem<T>) -> Result<RationalFunction<T>> {
    solve_with_report(problem).map(|s| s.rational)
}

/// Solves and verifies the degree, the interpolation conditions and the
/// expansion at infinity to `10^(-digits/2)` (exactly, for exact scalars).
pub fn solve_with_report<T: Scalar>(problem: &PadeProblem<T>) -> Result<PadeSolution<T>> {
    let cf = continued_fraction(problem)?;
    let rational = assemble(&cf);
    let m = problem.M() as isize;
    let (dn, dd) = rational.degrees();
    if dd != m || dn > m - 1 {
        return Err(Error::VerificationFailed(format!(
            "degree [{dn}/{dd}], expected [{}/{m}]",
            m - 1
        )));
    }
    let tol = problem.points[0].check_tolerance();

    let mut interp_residual = 0.0f64;
    for (j, (z, a)) in problem.points.iter().zip(&problem.values).enumerate() {
        let r = rational
            .eval(z)
            .map_err(|_| Error::VerificationFailed(format!("pole at interpolation point {j}")))?;
        if !close(&r, a, a.magnitude(), tol) {
            return Err(Error::VerificationFailed(format!(
                "interpolation condition {j} off by {:e}",
                r.minus(a).magnitude()
            )));
        }
        interp_residual = interp_residual.max(r.minus(a).magnitude() / (1.0 + a.magnitude()));
    }

    let series = rational.series_at_infinity(problem.n_inf() + 1)?;
    let mut series_residual = series[0].magnitude();
    if !series[0].is_zero() && (tol == 0.0 || series_residual >= tol) {
        return Err(Error::VerificationFailed(format!(
            "constant term at infinity is {series_residual:e}"
        )));
    }
    for (j, (s, x)) in series[1..].iter().zip(&problem.xi).enumerate() {
        if !close(s, x, x.magnitude(), tol) {
            return Err(Error::VerificationFailed(format!(
                "expansion coefficient {j} off by {:e}",
                s.minus(x).magnitude()
            )));
        }
        series_residual = series_residual.max(s.minus(x).magnitude() / (1.0 + x.magnitude()));
    }

    Ok(PadeSolution {
        rational,
        continued_fraction: cf,
        interp_residual,
        series_residual,
    })
}
