use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::{eval_expsum, ExpSum};
use crate::error::{Error, Result};
use crate::laplace::{auto_quadrature, Integrand};
use crate::polyrat::{PrecisionContext, Scalar};
use crate::targets::{ErrorRange, PostTransform, TargetSpec};

/// Default number of grid cells.
pub const DEFAULT_GRID: usize = 2000;

const CLUSTER_POINTS: usize = 200;
const PEAKS_REFINED: usize = 10;
const GOLDEN_REL_WIDTH: f64 = 1e-6;
const SIMPSON_DEPTH: u32 = 8;
const TAIL_DIGITS: u32 = 32;

/// Error of an approximant `φ` against its target.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ErrorReport {
    pub l1: f64,
    pub linf: f64,
    pub linf_location: f64,
    pub max_abs_c: f64,
    pub min_re_lambda: f64,
    /// Relative interpolation residual of the Padé solve; zero when unknown.
    pub interp_residual: f64,
    /// `(x, f(x) - φ(x))` on the measurement grid.
    #[serde(skip)]
    pub grid: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Measures `e = f - φ` over `range`, where `f` is the function the target
/// is compared against (the density for tail-integral targets).
///
/// The grid is uniform with `n_grid` cells, plus a log-spaced cluster near 0
/// for tail-integral targets, or log-spaced throughout for a `Log` range.
/// `L∞` is refined by golden-section search around the largest grid peaks.
/// `L¹` is adaptive Simpson over the grid cells plus bounds for the tails of
/// `φ` and `f` beyond the range.
pub fn error_metrics(t: &TargetSpec, s: &ExpSum, range: ErrorRange, n_grid: usize) -> Result<ErrorReport> {
    if n_grid < 100 {
        return Err(Error::Invalid(format!("n_grid = {n_grid}, need at least 100")));
    }
    let xs = build_grid(t, range, n_grid)?;
    let bits = s.bits();
    let err = |x: f64| -> Result<f64> {
        let xf = Float::with_val(bits, x);
        let phi = eval_expsum(s, &xf)?;
        Ok((t.eval_user(&xf) - phi).to_f64())
    };

    let es: Vec<f64> = xs.par_iter().map(|&x| err(x)).collect::<Result<_>>()?;
    let grid: Vec<(f64, f64)> = xs.iter().copied().zip(es.iter().copied()).collect();

    let (linf, linf_location) = refine_peaks(&grid, &err)?;
    let mut l1 = integrate_abs(&grid, &err)?;

    let mut warnings = Vec::new();
    let hi = *xs.last().expect("grid is nonempty");
    let min_re = s.min_re_lambda();
    if min_re <= 0.0 {
        warnings.push(Error::UnstableTail { min_re }.to_string());
    } else {
        l1 += s
            .terms()
            .iter()
            .map(|term| {
                let re = term.lambda.re_f64();
                term.c.magnitude() * (-re * hi).exp() / re
            })
            .sum::<f64>();
    }
    match target_tail(t, hi) {
        Ok(v) => l1 += v,
        Err(e) => warnings.push(format!("tail of the target beyond x = {hi} not integrated: {e}")),
    }

    Ok(ErrorReport {
        l1,
        linf,
        linf_location,
        max_abs_c: s.max_abs_c(),
        min_re_lambda: min_re,
        interp_residual: 0.0,
        grid,
        warnings,
    })
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..=n).map(move |i| (a + (b - a) * i as f64 / n as f64).exp())
}

fn build_grid(t: &TargetSpec, range: ErrorRange, n: usize) -> Result<Vec<f64>> {
    let (lo, hi, mut xs): (f64, f64, Vec<f64>) = match range {
        ErrorRange::Linear { x_max } => {
            if !(x_max > 0.0 && x_max.is_finite()) {
                return Err(Error::Invalid(format!("x_max = {x_max}, need x_max > 0")));
            }
            let mut xs: Vec<f64> = linspace(0.0, x_max, n).collect();
            if t.post_transform == PostTransform::NegateDerivative {
                let first = x_max / n as f64;
                xs.extend(logspace(first * 1e-8, first, CLUSTER_POINTS));
            }
            (0.0, x_max, xs)
        }
        ErrorRange::Log { lo, hi } => {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::Invalid(format!("log range [{lo}, {hi}] is empty")));
            }
            let xs = logspace(lo, hi, n).chain(linspace(lo, hi, n)).collect();
            (lo, hi, xs)
        }
    };
    xs.extend(t.breakpoints.iter().copied().filter(|b| *b > lo && *b < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    Ok(xs)
}

/// `(sup |g|, argmax)` over the sorted points `xs`, refined like `L∞`.
pub(crate) fn sup_abs(xs: &[f64], g: impl Fn(f64) -> Result<f64> + Sync) -> Result<(f64, f64)> {
    let vals: Vec<f64> = xs.par_iter().map(|&x| g(x)).collect::<Result<_>>()?;
    let grid: Vec<(f64, f64)> = xs.iter().copied().zip(vals).collect();
    refine_peaks(&grid, &g)
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64)
}

/// Largest `|e|`, refined around the biggest local maxima on the grid.
fn refine_peaks(grid: &[(f64, f64)], err: &(impl Fn(f64) -> Result<f64> + Sync)) -> Result<(f64, f64)> {
    let n = grid.len();
    let abs = |i: usize| grid[i].1.abs();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || abs(i) >= abs(i - 1)) && (i + 1 == n || abs(i) >= abs(i + 1)))
        .collect();
    peaks.sort_by(|&a, &b| abs(b).total_cmp(&abs(a)));
    peaks.truncate(PEAKS_REFINED);

    let mut best = (0.0, grid[0].0);
    for i in 0..n {
        if abs(i) > best.0 {
            best = (abs(i), grid[i].0);
        }
    }
    let refined: Vec<(f64, f64)> = peaks
        .par_iter()
        .map(|&i| {
            let a = grid[i.saturating_sub(1)].0;
            let b = grid[(i + 1).min(n - 1)].0;
            golden_max(a, b, |x| err(x).map(f64::abs))
        })
        .collect::<Result<_>>()?;
    for r in refined {
        if r.0 > best.0 {
            best = r;
        }
    }
    Ok(best)
}

/// `(max g, argmax g)` on `[a, b]`, assuming `g` is unimodal there.
fn golden_max(mut a: f64, mut b: f64, g: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    let mut best = if gc > gd { (gc, c) } else { (gd, d) };
    for _ in 0..200 {
        if b - a <= GOLDEN_REL_WIDTH * (a.abs() + b.abs()) / 2.0 {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d)?;
        }
        for cand in [(gc, c), (gd, d)] {
            if cand.0 > best.0 {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// `∫ |e|` over the grid span by adaptive Simpson on each cell.
fn integrate_abs(grid: &[(f64, f64)], err: &(impl Fn(f64) -> Result<f64> + Sync)) -> Result<f64> {
    let cells: Vec<(f64, f64, f64, f64, f64, f64)> = grid
        .par_windows(2)
        .map(|w| {
            let (a, fa) = w[0];
            let (b, fb) = w[1];
            let m = (a + b) / 2.0;
            Ok((a, fa.abs(), m, err(m)?.abs(), b, fb.abs()))
        })
        .collect::<Result<_>>()?;
    let coarse: f64 = cells
        .iter()
        .map(|&(a, fa, _, fm, b, fb)| (b - a) / 6.0 * (fa + 4.0 * fm + fb))
        .sum();
    let floor = 1e-6 * coarse / cells.len().max(1) as f64;
    let parts: Vec<f64> = cells
        .par_iter()
        .map(|&(a, fa, m, fm, b, fb)| {
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let tol = 1e-3 * whole + floor;
            simpson(err, (a, fa), (m, fm), (b, fb), whole, tol, SIMPSON_DEPTH)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

fn simpson(
    err: &impl Fn(f64) -> Result<f64>,
    (a, fa): (f64, f64),
    (m, fm): (f64, f64),
    (b, fb): (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    if depth == 0 {
        return Ok(whole);
    }
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (err(lm)?.abs(), err(rm)?.abs());
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(err, (a, fa), (lm, flm), (m, fm), left, tol / 2.0, depth - 1)?
        + simpson(err, (m, fm), (rm, frm), (b, fb), right, tol / 2.0, depth - 1)?)
}

/// `∫_{x_max}^∞ |f|` by quadrature at modest precision.
fn target_tail(t: &TargetSpec, x_max: f64) -> Result<f64> {
    let ctx = PrecisionContext::new(TAIL_DIGITS)?;
    let user = t.clone();
    let bits = ctx.bits();
    let breaks = t.breakpoints.iter().map(|b| b - x_max).filter(|b| *b > 0.0).collect();
    let shifted = Integrand::new(move |y: &Float| {
        let x = Float::with_val(bits, y + x_max);
        user.eval_user(&x).abs()
    })
    .with_breakpoints(breaks);
    let v = auto_quadrature(&shifted, &ctx.zero(), TAIL_DIGITS)?;
    Ok(v.real().to_f64())
}
