//! Exponential sums `φ(x) = Σ c_j e^{-λ_j x}`: extraction from a rational
//! Laplace transform, evaluation, the end-to-end approximation pipeline, error
//! measurement and parameter sweeps.

mod metrics;
mod pipeline;
mod serial;
mod sweep;

use std::cmp::Ordering;

use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};
use crate::polyrat::{partial_fractions, ApComplex, ApReal, PrecisionContext, RationalFunction, Scalar};

pub use metrics::{error_metrics, ErrorReport, DEFAULT_GRID};
pub(crate) use metrics::{linspace, sup_abs};
pub use pipeline::{approximate, approximate_detailed, ApproxConfig, Approximation};
pub use sweep::{cdf_from_laplace, sweep, CdfValue, Objective, SweepOutcome, SweepRow};

/// One term `c e^{-λ x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub c: ApComplex,
    pub lambda: ApComplex,
}

/// A sum of complex exponentials, real on the real axis.
///
/// Terms are kept sorted by `(Re λ, |Im λ|, Im λ)`, so a conjugate pair sits
/// in adjacent slots with the negative imaginary part first.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    terms: Vec<ExpTerm>,
    digits: u32,
    config: Option<ApproxConfig>,
}

impl ExpSum {
    /// Sorts the terms; no pairing or cleanup is done.
    pub fn new(mut terms: Vec<ExpTerm>, digits: u32) -> Self {
        terms.sort_by(term_order);
        ExpSum {
            terms,
            digits,
            config: None,
        }
    }

    pub fn with_config(mut self, cfg: ApproxConfig) -> Self {
        self.config = Some(cfg);
        self
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// The configuration that produced the sum, if known.
    pub fn config(&self) -> Option<&ApproxConfig> {
        self.config.as_ref()
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits).unwrap_or_default()
    }

    pub fn bits(&self) -> u32 {
        self.terms
            .first()
            .map_or_else(|| self.context().bits(), |t| t.c.prec().0)
    }

    pub fn max_abs_c(&self) -> f64 {
        self.terms.iter().map(|t| t.c.magnitude()).fold(0.0, f64::max)
    }

    /// `min Re λ_j`, or `+inf` for an empty sum.
    pub fn min_re_lambda(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.lambda.re_f64())
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ c_j`, which is `φ(0)`.
    pub fn coefficient_sum(&self) -> ApComplex {
        let mut acc = Complex::new(self.bits());
        for t in &self.terms {
            acc += &t.c;
        }
        acc
    }

    /// True when every non-real term has its exact conjugate as a neighbour.
    pub fn is_conjugate_closed(&self) -> bool {
        let mut i = 0;
        while i < self.terms.len() {
            if self.terms[i].lambda.imag().is_zero() {
                i += 1;
            } else if i + 1 < self.terms.len() && is_conj_pair(&self.terms[i], &self.terms[i + 1]) {
                i += 2;
            } else {
                return false;
            }
        }
        true
    }

    /// `φ(x)` as a complex number, using each conjugate pair once.
    fn eval_complex(&self, x: &Float) -> Complex {
        let prec = self.bits();
        let mut acc = Complex::new(prec);
        let mut i = 0;
        while i < self.terms.len() {
            let t = &self.terms[i];
            if !t.lambda.imag().is_zero() && i + 1 < self.terms.len() && is_conj_pair(t, &self.terms[i + 1]) {
                *acc.mut_real() += real_part_term(t, x, prec) * 2u32;
                i += 2;
            } else {
                let e = -Complex::with_val(prec, &t.lambda * x);
                let e = e.exp();
                acc += e * &t.c;
                i += 1;
            }
        }
        acc
    }
}

fn is_conj_pair(lower: &ExpTerm, upper: &ExpTerm) -> bool {
    lower.lambda.real() == upper.lambda.real()
        && *lower.lambda.imag() == -upper.lambda.imag().clone()
        && lower.c.real() == upper.c.real()
        && *lower.c.imag() == -upper.c.imag().clone()
}

/// `Re(c e^{-λx}) = e^{-ax} (c_r cos bx + c_i sin bx)` for `λ = a + bi`.
fn real_part_term(t: &ExpTerm, x: &Float, prec: u32) -> Float {
    let decay = (-Float::with_val(prec, t.lambda.real() * x)).exp();
    let arg = Float::with_val(prec, t.lambda.imag() * x);
    let (sin, cos) = arg.sin_cos(Float::new(prec));
    let v = Float::with_val(prec, t.c.real() * &cos) + Float::with_val(prec, t.c.imag() * &sin);
    v * decay
}

fn cmp_float(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn term_order(a: &ExpTerm, b: &ExpTerm) -> Ordering {
    cmp_float(a.lambda.real(), b.lambda.real())
        .then_with(|| {
            cmp_float(
                &Float::with_val(a.lambda.prec().0, a.lambda.imag().abs_ref()),
                &Float::with_val(b.lambda.prec().0, b.lambda.imag().abs_ref()),
            )
        })
        .then_with(|| cmp_float(a.lambda.imag(), b.lambda.imag()))
}

/// `λ_j = -pole_j` and `c_j = residue_j` of a proper `R` with simple poles.
///
/// Poles within `10^(-digits/2)` of the real axis are made real. Poles that
/// are conjugate to within `10^(-digits/4)` are paired, and each pair is
/// replaced by the average of its two estimates.
pub fn from_rational(r: &RationalFunction<ApComplex>) -> Result<ExpSum> {
    let terms = partial_fractions(r)?;
    let bits = terms
        .first()
        .map_or(PrecisionContext::default().bits(), |t| t.pole.prec().0);
    let ctx = PrecisionContext::from_bits(bits);
    let tol = half_digits_tolerance(&ctx);

    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for t in terms {
        let lambda = Complex::with_val(bits, -&t.pole);
        let scale = 1.0 + lambda.magnitude();
        let term = ExpTerm { c: t.residue, lambda };
        if term.lambda.im_f64().abs() <= tol * scale {
            reals.push(realify(term));
        } else if term.lambda.imag().is_sign_positive() {
            upper.push(term);
        } else {
            lower.push(term);
        }
    }

    let mut out = reals;
    let mut unmatched = Vec::new();
    for u in upper {
        let target = Scalar::conj(&u.lambda);
        let best = lower
            .iter()
            .enumerate()
            .map(|(k, l)| (k, l.lambda.minus(&target).magnitude()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, d)) if d <= tol.sqrt() * (1.0 + u.lambda.magnitude()) => {
                let l = lower.swap_remove(k);
                let (lo, hi) = average_pair(&u, &l, bits);
                out.push(lo);
                out.push(hi);
            }
            _ => unmatched.push(u),
        }
    }
    out.extend(unmatched);
    out.extend(lower);
    Ok(ExpSum::new(out, ctx.digits()))
}

/// `10^(-digits/2)`.
pub(crate) fn half_digits_tolerance(ctx: &PrecisionContext) -> f64 {
    PrecisionContext::tenth_power(f64::from(ctx.digits()) / 2.0)
}

fn realify(mut t: ExpTerm) -> ExpTerm {
    t.lambda.mut_imag().assign(0);
    t.c.mut_imag().assign(0);
    t
}

/// The pair `(x, conj x)` closest to the two estimates `u ≈ conj l`.
fn average_pair(u: &ExpTerm, l: &ExpTerm, bits: u32) -> (ExpTerm, ExpTerm) {
    let avg = |a: &Complex, b: &Complex| {
        let mut v = Complex::with_val(bits, a + &Scalar::conj(b));
        v /= 2u32;
        v
    };
    let hi = ExpTerm {
        c: avg(&u.c, &l.c),
        lambda: avg(&u.lambda, &l.lambda),
    };
    let lo = ExpTerm {
        c: Scalar::conj(&hi.c),
        lambda: Scalar::conj(&hi.lambda),
    };
    (lo, hi)
}

/// `Re φ(x)` at the precision of the sum.
///
/// The imaginary part must stay below `10^(-digits/2) Σ|c_j|`; a larger
/// value means the sum is not conjugate closed.
pub fn eval_expsum(s: &ExpSum, x: &Float) -> Result<ApReal> {
    let v = s.eval_complex(x);
    let residue = v.imag().to_f64().abs();
    if residue != 0.0 {
        let mass: f64 = s.terms.iter().map(|t| t.c.magnitude()).sum();
        let threshold = half_digits_tolerance(&s.context()) * mass;
        if residue > threshold {
            return Err(Error::ImaginaryLeak { residue, threshold });
        }
    }
    Ok(v.real().clone())
}

/// `-φ'`, i.e. the terms `(c_j λ_j, λ_j)`.
pub fn derivative_expsum(s: &ExpSum) -> ExpSum {
    let bits = s.bits();
    let terms = s
        .terms
        .iter()
        .map(|t| ExpTerm {
            c: Complex::with_val(bits, &t.c * &t.lambda),
            lambda: t.lambda.clone(),
        })
        .collect();
    ExpSum {
        terms,
        digits: s.digits,
        config: s.config,
    }
}
