//! Laplace transforms `F(z) = ∫_0^∞ f(x) e^{-zx} dx`.
//!
//! Numerically the half line is mapped by `x = exp(t - e^{-t})` and summed
//! with the trapezoidal rule in `t`. For an integrand with kinks or jumps
//! the range is cut at the listed breakpoints: finite pieces use the
//! `tanh(π/2 sinh t)` map, and the last piece is a shifted half line.

use std::sync::Arc;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::polyrat::PrecisionContext;

pub type RealFn = Arc<dyn Fn(&Float) -> Float + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(&Complex) -> Result<Complex> + Send + Sync>;

const GUARD_BITS: u32 = 32;
/// Consecutive negligible terms needed to stop a sweep.
const QUIET_TERMS: usize = 3;
const MAX_HALVINGS: usize = 12;

/// A real integrand on `(0, ∞)` and the points where it is not smooth.
#[derive(Clone)]
pub struct Integrand {
    f: RealFn,
    breakpoints: Vec<f64>,
}

impl Integrand {
    pub fn new(f: impl Fn(&Float) -> Float + Send + Sync + 'static) -> Self {
        Integrand {
            f: Arc::new(f),
            breakpoints: Vec::new(),
        }
    }

    /// Cut points, which must be positive; they are sorted and deduplicated.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|&b| b > 0.0 && b.is_finite());
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    pub fn eval(&self, x: &Float) -> Float {
        (self.f)(x)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureParams {
    pub h: f64,
    /// Terms below `10^term_floor · |sum|` count as negligible.
    pub term_floor: f64,
    /// Cap on terms per direction of one sweep.
    pub max_terms: usize,
}

impl QuadratureParams {
    pub fn for_digits(digits: u32, h: f64) -> Self {
        QuadratureParams {
            h,
            term_floor: -(f64::from(digits) + 10.0),
            max_terms: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    /// `[a, b]` through `x = c + r tanh(π/2 sinh t)`.
    Finite { a: f64, b: f64 },
    /// `[a, ∞)` through `x = a + exp(t - e^{-t})`.
    Tail { a: f64 },
}

fn pieces(breakpoints: &[f64]) -> Vec<Piece> {
    let mut out = Vec::with_capacity(breakpoints.len() + 1);
    let mut a = 0.0;
    for &b in breakpoints {
        out.push(Piece::Finite { a, b });
        a = b;
    }
    out.push(Piece::Tail { a });
    out
}

struct Sweeper<'a> {
    f: &'a Integrand,
    /// `-z` at working precision, `None` for `z = 0`.
    minus_z: Option<Complex>,
    prec: u32,
    floor_sq: Float,
    max_terms: usize,
}

impl Sweeper<'_> {
    fn new<'a>(f: &'a Integrand, z: &Complex, term_floor: f64, max_terms: usize) -> Sweeper<'a> {
        let prec = z.prec().0.max(z.prec().1) + GUARD_BITS;
        let minus_z = (!z.is_zero()).then(|| Complex::with_val(prec, -z));
        let floor_sq = Float::with_val(prec, 10).pow(2.0 * term_floor);
        Sweeper {
            f,
            minus_z,
            prec,
            floor_sq,
            max_terms,
        }
    }

    /// Transformed integrand `f(x(t)) e^{-z x(t)} x'(t)`.
    fn term(&self, piece: Piece, t: &Float) -> Complex {
        let prec = self.prec;
        let (x, w) = match piece {
            Piece::Tail { a } => {
                let e = Float::with_val(prec, -t).exp();
                let y = Float::with_val(prec, t - &e).exp();
                let w = Float::with_val(prec, &y * (e + 1u32));
                (y + a, w)
            }
            Piece::Finite { a, b } => {
                let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
                let u = Float::with_val(prec, t.sinh_ref()) * &half_pi;
                let r = Float::with_val(prec, b - a) / 2u32;
                let c = Float::with_val(prec, b + a) / 2u32;
                let ch = Float::with_val(prec, u.cosh_ref());
                let w = Float::with_val(prec, t.cosh_ref()) * &half_pi * &r / ch.square();
                (c + r * u.tanh(), w)
            }
        };
        let fx = self.f.eval(&x) * w;
        match &self.minus_z {
            None => Complex::with_val(prec, fx),
            Some(mz) => Complex::with_val(prec, mz * &x).exp() * fx,
        }
    }

    /// `Σ g(n h)` over all integers `n`, or over odd `n` only, added to `base`.
    fn sweep(&self, piece: Piece, h: &Float, odd_only: bool, base: Complex) -> Result<Complex> {
        let stride: i64 = if odd_only { 2 } else { 1 };
        let first: i64 = if odd_only { 1 } else { 0 };
        let mut sum = base;
        for dir in [1i64, -1] {
            // -1 is the first index below zero on either grid.
            let mut n = if dir == 1 { first } else { -1 };
            let mut quiet = 0;
            let mut count = 0;
            loop {
                let t = Float::with_val(self.prec, h * n);
                let g = self.term(piece, &t);
                let negligible = {
                    let gn = Float::with_val(self.prec, g.norm_ref());
                    let sn = Float::with_val(self.prec, sum.norm_ref());
                    gn <= sn * &self.floor_sq
                };
                sum += g;
                quiet = if negligible { quiet + 1 } else { 0 };
                if quiet >= QUIET_TERMS {
                    break;
                }
                count += 1;
                if count >= self.max_terms {
                    return Err(Error::NonConvergent(format!(
                        "quadrature needed more than {} terms at h = {}",
                        self.max_terms,
                        h.to_f64()
                    )));
                }
                n += dir * stride;
            }
        }
        Ok(sum)
    }
}

/// One trapezoidal sum at the fixed step `params.h`.
pub fn de_quadrature(f: &Integrand, z: &Complex, params: &QuadratureParams) -> Result<Complex> {
    if !(params.h > 0.0) {
        return Err(Error::Invalid(format!("step h = {} must be positive", params.h)));
    }
    check_half_plane(z)?;
    let sw = Sweeper::new(f, z, params.term_floor, params.max_terms);
    let h = Float::with_val(sw.prec, params.h);
    let mut total = Complex::new(sw.prec);
    for piece in pieces(f.breakpoints()) {
        total += sw.sweep(piece, &h, false, Complex::new(sw.prec))?;
    }
    Ok(Complex::with_val(z.prec(), total * h))
}

/// Halves `h` from 0.5 until two successive sums agree to `digits - 5`
/// significant digits. Each halving only evaluates the new odd nodes.
pub fn auto_quadrature(f: &Integrand, z: &Complex, digits: u32) -> Result<Complex> {
    check_half_plane(z)?;
    let params = QuadratureParams::for_digits(digits, 0.5);
    let sw = Sweeper::new(f, z, params.term_floor, params.max_terms);
    let prec = sw.prec;
    let parts = pieces(f.breakpoints());
    let mut h = Float::with_val(prec, params.h);
    let mut raw = parts
        .iter()
        .map(|&piece| sw.sweep(piece, &h, false, Complex::new(prec)))
        .collect::<Result<Vec<_>>>()?;
    let total = |raw: &[Complex], h: &Float| raw.iter().fold(Complex::new(prec), |acc, r| acc + r) * h;
    let mut prev = total(&raw, &h);
    let tol_sq = Float::with_val(prec, 10).pow(-2.0 * (f64::from(digits) - 5.0));
    for _ in 0..MAX_HALVINGS {
        h /= 2u32;
        for (piece, r) in parts.iter().zip(raw.iter_mut()) {
            *r = sw.sweep(*piece, &h, true, r.clone())?;
        }
        let next = total(&raw, &h);
        let diff = Float::with_val(prec, Complex::with_val(prec, &next - &prev).norm_ref());
        let scale = Float::with_val(prec, next.norm_ref());
        if diff <= scale * &tol_sq {
            return Ok(Complex::with_val(z.prec(), next));
        }
        prev = next;
    }
    Err(Error::NonConvergent(format!(
        "quadrature did not settle after {MAX_HALVINGS} halvings"
    )))
}

fn check_half_plane(z: &Complex) -> Result<()> {
    if z.real().is_sign_negative() && !z.real().is_zero() {
        return Err(Error::DomainError(format!("Re z < 0 at z = {z}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum QuadratureMode {
    Auto,
    Fixed(QuadratureParams),
}

#[derive(Clone)]
pub enum LaplaceEvaluator {
    ClosedForm(ComplexFn),
    Numeric(Integrand, QuadratureMode),
}

impl std::fmt::Debug for LaplaceEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LaplaceEvaluator::ClosedForm(_) => f.write_str("ClosedForm(..)"),
            LaplaceEvaluator::Numeric(i, m) => f.debug_tuple("Numeric").field(i).field(m).finish(),
        }
    }
}

impl LaplaceEvaluator {
    pub fn closed_form(g: impl Fn(&Complex) -> Result<Complex> + Send + Sync + 'static) -> Self {
        LaplaceEvaluator::ClosedForm(Arc::new(g))
    }

    pub fn numeric(f: Integrand) -> Self {
        LaplaceEvaluator::Numeric(f, QuadratureMode::Auto)
    }

    /// `F(z)` at the precision of `z`.
    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        match self {
            LaplaceEvaluator::ClosedForm(g) => g(z),
            LaplaceEvaluator::Numeric(f, QuadratureMode::Auto) => {
                let digits = PrecisionContext::from_bits(z.prec().0).digits();
                auto_quadrature(f, z, digits)
            }
            LaplaceEvaluator::Numeric(f, QuadratureMode::Fixed(p)) => de_quadrature(f, z, p),
        }
    }
}

/// Evaluates at every point in parallel. The first failing index, in input
/// order, is reported.
pub fn eval_many(ev: &LaplaceEvaluator, zs: &[Complex]) -> Result<Vec<Complex>> {
    let results: Vec<Result<Complex>> = zs.par_iter().map(|z| ev.eval(z)).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::AtPoint {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}
