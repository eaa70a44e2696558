//! `ln Γ(z)` and `ln G(z)` on `Re z >= 3/2` from an exponential sum for the
//! gamma kernel, with sup-norm error bounds `ε₁`, `ε₂`.
//!
//! With `Φ(z) = Σ c_j / (z + λ_j)²`,
//!
//! ```text
//! ln Γ̂(z) = (z - 1/2) ln z - z + ln(2π)/2 + 1/(12z) - Φ'(z-1)
//! ln Ĝ(z) = (z²/2 - z + 5/12) ln z - 3z²/4 + ln(2π)(z-1)/2 + z + 1/12
//!           - ln A - 1/(12z) + Φ(z-1) - (z-1) Φ'(z-1)
//! ```
//!
//! where `A` is the Glaisher–Kinkelin constant. If `φ` approximates the
//! kernel `f`, then `|ln Γ - ln Γ̂| <= ε₁ = sup |2x²(f - φ)|` and
//! `|ln G - ln Ĝ| <= ε₂ = sup |6x(f - φ) + 2x²(f' - φ')|`.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::expsum::{linspace, sup_abs, ExpSum};
use crate::polyrat::{PrecisionContext, Scalar};
use crate::targets::TargetSpec;

/// `ln A`, `A = 1.2824271291…`, to 130 digits.
pub const LN_GLAISHER: &str = "0.2487544770337842625472529935761139760973697136685351169998556396906930329999105060928584336658420888717104535212182264455495452458";

/// Right end of the grid used for `ε₁`, `ε₂`.
pub const DEFAULT_X_MAX: f64 = 120.0;
/// Grid cells on `[0, x_max]`.
pub const DEFAULT_BOUND_GRID: usize = 6000;

#[derive(Clone, Debug)]
pub struct GammaApproximant {
    pub s: ExpSum,
    pub eps1: f64,
    pub eps2: f64,
    pub ln_2pi: Float,
    pub ln_glaisher: Float,
}

impl GammaApproximant {
    /// Wraps a kernel approximant; the bounds are unknown (`NaN`) until
    /// [`GammaApproximant::certify`] or [`GammaApproximant::with_bounds`].
    pub fn new(s: ExpSum) -> Self {
        let prec = s.bits() + 32;
        let ln_2pi = (Float::with_val(prec, Constant::Pi) * 2u32).ln();
        let ln_glaisher = PrecisionContext::from_bits(prec)
            .parse_real(LN_GLAISHER)
            .expect("constant literal parses");
        GammaApproximant {
            s,
            eps1: f64::NAN,
            eps2: f64::NAN,
            ln_2pi,
            ln_glaisher,
        }
    }

    pub fn with_bounds(mut self, eps1: f64, eps2: f64) -> Self {
        self.eps1 = eps1;
        self.eps2 = eps2;
        self
    }

    /// Estimates `ε₁`, `ε₂` against the gamma kernel on `[0, x_max]`.
    pub fn certify(self, kernel: &TargetSpec, x_max: f64) -> Result<Self> {
        let (e1, e2) = error_bounds(&self, kernel, x_max)?;
        Ok(self.with_bounds(e1, e2))
    }
}

/// `(Φ(z), Φ'(z))` with `Φ(z) = Σ c_j / (z + λ_j)²`.
pub fn phi_cap(s: &ExpSum, z: &Complex) -> Result<(Complex, Complex)> {
    let prec = s.bits().max(z.prec().0);
    let mut phi = Complex::new(prec);
    let mut dphi = Complex::new(prec);
    for t in s.terms() {
        let w = Complex::with_val(prec, z + &t.lambda);
        if w.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let inv = w.recip();
        let inv2 = Complex::with_val(prec, inv.square_ref());
        let term = Complex::with_val(prec, &t.c * &inv2);
        dphi -= Complex::with_val(prec, &term * &inv) * 2u32;
        phi += term;
    }
    Ok((phi, dphi))
}

fn check_domain(z: &Complex) -> Result<()> {
    if !(*z.real() >= 1.5) {
        return Err(Error::DomainError(format!("Re z = {} < 3/2", z.real().to_f64())));
    }
    Ok(())
}

pub fn ln_gamma_hat(g: &GammaApproximant, z: &Complex) -> Result<Complex> {
    check_domain(z)?;
    let prec = g.s.bits().max(z.prec().0);
    let z = Complex::with_val(prec, z);
    let (_, dphi) = phi_cap(&g.s, &Complex::with_val(prec, &z - 1u32))?;
    let ln_z = Complex::with_val(prec, z.ln_ref());
    let mut v = Complex::with_val(prec, &z - Float::with_val(prec, 0.5)) * ln_z;
    v -= &z;
    v += Float::with_val(prec, &g.ln_2pi / 2u32);
    v += Complex::with_val(prec, &z * 12u32).recip();
    v -= dphi;
    Ok(v)
}

pub fn ln_barnes_g_hat(g: &GammaApproximant, z: &Complex) -> Result<Complex> {
    check_domain(z)?;
    let prec = g.s.bits().max(z.prec().0);
    let z = Complex::with_val(prec, z);
    let zm1 = Complex::with_val(prec, &z - 1u32);
    let (phi, dphi) = phi_cap(&g.s, &zm1)?;
    let z2 = Complex::with_val(prec, z.square_ref());
    let ln_z = Complex::with_val(prec, z.ln_ref());

    let poly = Complex::with_val(prec, &z2 / 2u32) - &z + Float::with_val(prec, 5) / 12u32;
    let mut v = poly * ln_z;
    v -= Complex::with_val(prec, &z2 * 3u32) / 4u32;
    v += Complex::with_val(prec, &zm1 * &g.ln_2pi) / 2u32;
    v += &z;
    v += Float::with_val(prec, 12).recip();
    v -= &g.ln_glaisher;
    v -= Complex::with_val(prec, &z * 12u32).recip();
    v += phi;
    v -= zm1 * dphi;
    Ok(v)
}

/// `(ε₁, ε₂)`: the sup of `|η₁|`, `|η₂|` on a uniform grid over
/// `[0, x_max]` refined by golden section, or a tail bound beyond `x_max` if
/// that is larger.
pub fn error_bounds(g: &GammaApproximant, kernel: &TargetSpec, x_max: f64) -> Result<(f64, f64)> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Invalid(format!("x_max = {x_max}, need x_max > 0")));
    }
    let bits = g.s.bits();
    let minus_dphi = crate::expsum::derivative_expsum(&g.s);
    // (f - φ, f' - φ') at x.
    let diffs = |x: f64| -> Result<(Float, Float)> {
        let xf = Float::with_val(bits, x);
        let e = kernel.eval(&xf) - crate::expsum::eval_expsum(&g.s, &xf)?;
        let df = kernel
            .eval_derivative(&xf)
            .ok_or_else(|| Error::Invalid("kernel has no derivative".into()))?;
        let de = df + crate::expsum::eval_expsum(&minus_dphi, &xf)?;
        Ok((e, de))
    };
    let eta1 = |x: f64| -> Result<f64> {
        let (e, _) = diffs(x)?;
        Ok((e * x * x * 2u32).to_f64())
    };
    let eta2 = |x: f64| -> Result<f64> {
        let (e, de) = diffs(x)?;
        Ok((e * x * 6u32 + de * x * x * 2u32).to_f64())
    };
    let xs: Vec<f64> = linspace(0.0, x_max, DEFAULT_BOUND_GRID).collect();
    let (mut eps1, _) = sup_abs(&xs, eta1)?;
    let (mut eps2, _) = sup_abs(&xs, eta2)?;

    let (t1, t2) = tail_bounds(g, kernel, x_max, bits);
    eps1 = eps1.max(t1);
    eps2 = eps2.max(t2);
    Ok((eps1, eps2))
}

/// Bounds for `|η₁|`, `|η₂|` on `x >= x_max` from `|f|, |f'|` at `x_max`
/// and `Σ|c_j| e^{-Re λ_j x}`. Both are decreasing there once
/// `x_max > 3 / min Re λ_j`, otherwise the bound is infinite.
fn tail_bounds(g: &GammaApproximant, kernel: &TargetSpec, x_max: f64, bits: u32) -> (f64, f64) {
    let min_re = g.s.min_re_lambda();
    if !(min_re > 0.0 && x_max * min_re.min(1.0) > 3.0) {
        return (f64::INFINITY, f64::INFINITY);
    }
    let xf = Float::with_val(bits, x_max);
    let f = kernel.eval(&xf).to_f64().abs();
    let df = kernel.eval_derivative(&xf).map_or(f, |d| d.to_f64().abs());
    let (mut phi, mut dphi) = (0.0, 0.0);
    for t in g.s.terms() {
        let decay = (-t.lambda.re_f64() * x_max).exp();
        phi += t.c.magnitude() * decay;
        dphi += t.c.magnitude() * t.lambda.magnitude() * decay;
    }
    let e = f + phi;
    let de = df + dphi;
    (2.0 * x_max * x_max * e, 6.0 * x_max * e + 2.0 * x_max * x_max * de)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::ExpTerm;

    fn single() -> ExpSum {
        let ctx = PrecisionContext::default();
        ExpSum::new(
            vec![ExpTerm {
                c: ctx.one(),
                lambda: ctx.one(),
            }],
            100,
        )
    }

    #[test]
    fn phi_cap_examples() {
        let ctx = PrecisionContext::default();
        let (p, _) = phi_cap(&single(), &ctx.zero()).unwrap();
        assert_eq!(p, 1);
        let (p, dp) = phi_cap(&single(), &ctx.one()).unwrap();
        assert_eq!(p, Complex::with_val(10, 0.25));
        assert_eq!(dp, Complex::with_val(10, -0.25));
        assert!(matches!(
            phi_cap(&single(), &ctx.complex(-1.0, 0.0)),
            Err(Error::PoleAtPoint)
        ));
    }

    #[test]
    fn domain() {
        let g = GammaApproximant::new(single());
        let ctx = PrecisionContext::default();
        assert!(matches!(ln_gamma_hat(&g, &ctx.one()), Err(Error::DomainError(_))));
        assert!(matches!(
            ln_barnes_g_hat(&g, &ctx.complex(1.4999, 3.0)),
            Err(Error::DomainError(_))
        ));
        assert!(ln_gamma_hat(&g, &ctx.complex(1.5, -7.0)).is_ok());
    }

    #[test]
    fn constant_digits() {
        let g = GammaApproximant::new(single());
        let a = Float::with_val(g.ln_glaisher.prec(), g.ln_glaisher.exp_ref());
        let expected = "1.28242712910062263687534256886979172776768892732500119206374002174040630885882646112973649195820237439420646120399000748933157791362775280";
        let want = PrecisionContext::from_bits(a.prec()).parse_real(expected).unwrap();
        assert!(Float::with_val(a.prec(), &a - &want).abs() < 1e-125);
    }
}
