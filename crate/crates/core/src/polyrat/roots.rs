//! Ehrlich–Aberth root finding and partial fractions over [`ApComplex`].

use std::f64::consts::PI;

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::poly::Polynomial;
use super::rational::RationalFunction;
use super::scalar::{ApComplex, PrecisionContext, Scalar};
use crate::error::{Error, Result};

/// Iteration cap for the simultaneous root iteration.
pub const MAX_ABERTH_ITERATIONS: usize = 500;

fn digits_of(p: &Polynomial<ApComplex>) -> u32 {
    let bits = p.coeffs().first().map_or(64, |c| c.prec().0);
    PrecisionContext::from_bits(bits).digits()
}

/// All `deg(p)` roots of `p`, with multiplicity.
///
/// Starts from points on the Fujiwara-bound circle
/// `2 max_k |a_{n-k} / a_n|^{1/k}` and runs Gauss–Seidel style
/// Ehrlich–Aberth updates until every correction is below `10^(-digits+5)` relative to its root. Each root is then checked
/// for a small backward error: `|p(r)| / Σ|a_k||r|^k < 10^(-digits+10)`.
pub fn poly_roots(p: &Polynomial<ApComplex>) -> Result<Vec<ApComplex>> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::Invalid(format!("root finding needs degree >= 1, got {n}")));
    }
    let n = n as usize;
    let coeffs = p.coeffs();
    let prec = coeffs[n].prec();
    let digits = digits_of(p);
    let step_tol = PrecisionContext::tenth_power(f64::from(digits) - 5.0);
    let resid_tol = PrecisionContext::tenth_power(f64::from(digits) - 10.0);
    let noise_floor = PrecisionContext::tenth_power(f64::from(digits) - 2.0);

    let lead_abs = coeffs[n].magnitude();
    let radius = 2.0
        * (1..=n)
            .map(|k| (coeffs[n - k].magnitude() / lead_abs).powf(1.0 / k as f64))
            .fold(0.0, f64::max);
    let radius = if radius > 0.0 { radius } else { 1.0 };

    let mut roots: Vec<ApComplex> = (0..n)
        .map(|k| {
            let theta = (2.0 * PI * k as f64 + 0.5) / n as f64;
            Complex::with_val(prec, (radius * theta.cos(), radius * theta.sin()))
        })
        .collect();

    let one = Complex::with_val(prec, 1);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITERATIONS {
        iterations += 1;
        let mut worst = 0.0f64;
        for k in 0..n {
            let (v, dv) = p.eval_with_derivative(&roots[k]);
            if v.is_zero() {
                continue;
            }
            let mut repulsion = Complex::new(prec);
            for (j, other) in roots.iter().enumerate() {
                if j != k {
                    repulsion += one.over(&roots[k].minus(other));
                }
            }
            let newton = if dv.is_zero() {
                // Nudge off a critical point.
                Complex::with_val(prec, (radius * 1e-3, radius * 1e-3))
            } else {
                v.over(&dv)
            };
            let denom = one.minus(&newton.times(&repulsion));
            let step = if denom.is_zero() { newton } else { newton.over(&denom) };
            let step_abs = step.magnitude();
            roots[k] -= &step;
            let scale = roots[k].magnitude().max(f64::MIN_POSITIVE);
            let rel = step_abs / scale;
            // Near a multiple root the corrections stall at noise level while
            // the backward error is already at rounding level.
            if rel >= step_tol && backward_error(p, &roots[k]) >= noise_floor {
                worst = worst.max(rel);
            }
        }
        if !worst.is_finite() {
            break;
        }
        if worst < step_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { iterations });
    }
    for r in &roots {
        if backward_error(p, r) >= resid_tol {
            return Err(Error::NonConvergence { iterations });
        }
    }
    Ok(roots)
}

/// `|p(r)| / Σ |a_k| |r|^k`.
pub fn backward_error(p: &Polynomial<ApComplex>, r: &ApComplex) -> f64 {
    let prec = r.prec().0;
    let rabs = r.abs_ref().complete(r.prec()).real().clone();
    let mut scale = Float::new(prec);
    for c in p.coeffs().iter().rev() {
        scale *= &rabs;
        scale += c.abs_ref().complete(c.prec()).real();
    }
    let v = p.eval(r).abs_ref().complete(r.prec()).real().clone();
    if scale.is_zero() {
        return 0.0;
    }
    (v / scale).to_f64()
}

/// One term `residue / (z - pole)` of a partial fraction expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub residue: ApComplex,
    pub pole: ApComplex,
}

/// Decomposes a strictly proper `R` with simple poles into
/// `Σ residue_k / (z - pole_k)`, `residue_k = num(pole_k) / den'(pole_k)`.
///
/// Poles closer than `10^(-digits/2 + 2) · max|pole|` are treated as a
/// multiple pole. A double root only resolves to about `10^(-digits/2)` in
/// rounded arithmetic, so the two extra orders of magnitude are needed to
/// catch it reliably.
pub fn partial_fractions(r: &RationalFunction<ApComplex>) -> Result<Vec<PoleTerm>> {
    let (dn, dd) = r.degrees();
    if dn >= dd {
        return Err(Error::Invalid(format!(
            "partial fractions need deg num < deg den, got [{dn}/{dd}]"
        )));
    }
    let poles = poly_roots(r.den())?;
    let digits = digits_of(r.den());
    let max_abs = poles.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let min_sep = PrecisionContext::tenth_power(f64::from(digits) / 2.0 - 2.0) * max_abs;
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            let distance = poles[i].minus(&poles[j]).magnitude();
            if distance <= min_sep {
                return Err(Error::MultiplePole {
                    first: i,
                    second: j,
                    distance,
                });
            }
        }
    }
    let dden = r.den().derivative();
    Ok(poles
        .into_iter()
        .map(|pole| {
            let residue = r.num().eval(&pole).over(&dden.eval(&pole));
            PoleTerm { residue, pole }
        })
        .collect())
}
