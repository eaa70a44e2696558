use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use super::{Decimal, ErrorRange, TargetSpec};
use crate::error::{Error, Result};
use crate::laplace::{auto_quadrature, Integrand, LaplaceEvaluator};
use crate::polyrat::{ApReal, PrecisionContext};

const GUARD: u32 = 24;

fn zeros(n: usize, ctx: &PrecisionContext) -> Vec<ApReal> {
    vec![Float::new(ctx.bits()); n]
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `e^{-x²}`.
pub fn gaussian() -> TargetSpec {
    let f = |x: &Float| Float::with_val(x.prec(), -Float::with_val(x.prec(), x.square_ref())).exp();
    TargetSpec::new(
        "gaussian",
        f,
        gaussian_taylor,
        LaplaceEvaluator::numeric(Integrand::new(f)),
    )
    .with_derivative(move |x| {
        let v = f(x) * x;
        -(v * 2u32)
    })
    .with_range(ErrorRange::Linear { x_max: 12.0 })
}

fn gaussian_taylor(n: usize, ctx: &PrecisionContext) -> Vec<ApReal> {
    (0..n)
        .map(|j| {
            if j % 2 == 1 {
                return Float::new(ctx.bits());
            }
            let k = (j / 2) as u32;
            let v = factorial(2 * k) / factorial(k);
            let v = if k % 2 == 1 { -v } else { v };
            Float::with_val(ctx.bits(), v)
        })
        .collect()
}

/// Coefficients `s_{2j}` of `s(x) = ((1/2)coth(x/2) - 1/x - x/12) / x³`,
/// from `B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}`, enough for `|x| < 1`.
fn kernel_series(prec: u32) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let terms = (prec as f64 / (2.0 * two_pi.to_f64().log2())) as usize + 4;
    let inv_sq = Float::with_val(prec, two_pi.square_ref()).recip();
    let mut scale = Float::with_val(prec, inv_sq.square_ref()) * 2u32;
    let mut out = Vec::with_capacity(terms);
    for j in 0..terms {
        let zeta = Float::with_val(prec, Float::zeta_u(2 * j as u32 + 4));
        let v = Float::with_val(prec, &zeta * &scale);
        out.push(if j % 2 == 0 { -v } else { v });
        scale *= &inv_sq;
    }
    let v = Arc::new(out);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// `(s(x), s'(x))` from the series.
fn kernel_s(x: &Float) -> (Float, Float) {
    let prec = x.prec() + GUARD;
    let coeffs = kernel_series(prec);
    let xx = Float::with_val(prec, x.square_ref());
    let mut s = Float::new(prec);
    let mut ds = Float::new(prec);
    for (j, c) in coeffs.iter().enumerate().rev() {
        s = s * &xx + c;
        if j > 0 {
            ds = ds * &xx + Float::with_val(prec, c * (2 * j as u32));
        }
    }
    // ds holds Σ 2j s_{2j} x^{2j-2}
    (s, ds * x)
}

/// `(q, q')` for `q(x) = (1/2)coth(x/2) - 1/x - x/12`.
fn kernel_q(x: &Float) -> (Float, Float) {
    let prec = x.prec() + GUARD + 16;
    let x = Float::with_val(prec, x);
    let half = Float::with_val(prec, &x / 2u32);
    let inv = Float::with_val(prec, x.recip_ref());
    let q = Float::with_val(prec, half.coth_ref()) / 2u32 - &inv - Float::with_val(prec, &x / 12u32);
    let csch = Float::with_val(prec, half.csch_ref());
    let dq = -(csch.square() / 4u32) + inv.square() - Float::with_val(prec, 12).recip();
    (q, dq)
}

fn kernel_value(x: &Float) -> Float {
    let prec = x.prec();
    if *x < 1 {
        let e = Float::with_val(prec + GUARD, -x).exp();
        Float::with_val(prec, kernel_s(x).0 * e)
    } else {
        let (q, _) = kernel_q(x);
        let p = q.prec();
        let e = Float::with_val(p, -x).exp();
        let x3 = Float::with_val(p, x.pow(3u32));
        Float::with_val(prec, q * e / x3)
    }
}

fn kernel_derivative(x: &Float) -> Float {
    let prec = x.prec();
    if *x < 1 {
        let e = Float::with_val(prec + GUARD, -x).exp();
        let (s, ds) = kernel_s(x);
        Float::with_val(prec, (ds - s) * e)
    } else {
        let (q, dq) = kernel_q(x);
        let p = q.prec();
        let xp = Float::with_val(p, x);
        let e = Float::with_val(p, -x).exp();
        let x3 = Float::with_val(p, (&xp).pow(3u32));
        let three_q_over_x = Float::with_val(p, &q * 3u32) / &xp;
        Float::with_val(prec, (dq - q - three_q_over_x) * e / x3)
    }
}

fn kernel_taylor(n: usize, ctx: &PrecisionContext) -> Vec<ApReal> {
    let prec = ctx.bits() + GUARD;
    let s = kernel_series(prec);
    let s_at = |m: usize| -> Float {
        if m % 2 == 1 {
            Float::new(prec)
        } else {
            s.get(m / 2).cloned().unwrap_or_else(|| Float::new(prec))
        }
    };
    (0..n)
        .map(|m| {
            let mut acc = Float::new(prec);
            let mut inv_fact = Float::with_val(prec, 1);
            for i in 0..=m {
                if i > 0 {
                    inv_fact /= i as u32;
                }
                let t = Float::with_val(prec, &inv_fact * s_at(m - i));
                if i % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            Float::with_val(ctx.bits(), acc * factorial(m as u32))
        })
        .collect()
}

/// The kernel `e^{-x} x^{-3} ((1/2)coth(x/2) - 1/x - x/12)` behind the
/// gamma and Barnes G approximations; a series below `x = 1`.
pub fn gamma_kernel() -> TargetSpec {
    TargetSpec::new(
        "gamma_kernel",
        kernel_value,
        kernel_taylor,
        LaplaceEvaluator::numeric(Integrand::new(kernel_value)),
    )
    .with_derivative(kernel_derivative)
    .with_range(ErrorRange::Linear { x_max: 12.0 })
}

/// Gompertz–Makeham density
/// `(a + b c^{x0+x}) exp(-a x - (b/ln c) c^{x0} (c^x - 1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GompertzMakeham {
    pub x0: Decimal,
    pub a: Decimal,
    pub b: Decimal,
    pub c: Decimal,
}

impl Default for GompertzMakeham {
    fn default() -> Self {
        GompertzMakeham {
            x0: Decimal::plain(65.0),
            a: Decimal::plain(0.0007),
            b: Decimal::plain(0.00005),
            c: Decimal::power(10.0, 0.04),
        }
    }
}

struct GmParams {
    a: Float,
    /// `b c^{x0}`
    beta: Float,
    /// `ln c`
    log_c: Float,
}

impl GompertzMakeham {
    fn at(&self, prec: u32) -> GmParams {
        let c = self.c.value(prec);
        let beta = Float::with_val(prec, (&c).pow(&self.x0.value(prec))) * self.b.value(prec);
        GmParams {
            a: self.a.value(prec),
            beta,
            log_c: c.ln(),
        }
    }
}

impl GmParams {
    /// `(hazard(x), survival(x), c^x)`.
    fn parts(&self, x: &Float) -> (Float, Float, Float) {
        let prec = self.a.prec();
        let cx = Float::with_val(prec, &self.log_c * x).exp();
        let hazard = Float::with_val(prec, &self.beta * &cx) + &self.a;
        let growth = Float::with_val(prec, &cx - 1u32) * &self.beta / &self.log_c;
        let expo = -(Float::with_val(prec, &self.a * x) + growth);
        (hazard, expo.exp(), cx)
    }
}

pub fn gompertz_makeham(gm: GompertzMakeham) -> Result<TargetSpec> {
    let a = gm.a.to_f64();
    let b = gm.b.to_f64();
    let c = gm.c.to_f64();
    if !(a >= 0.0 && b > 0.0 && c > 1.0) {
        return Err(Error::Invalid(format!(
            "Gompertz-Makeham needs a >= 0, b > 0, c > 1 (got a={a}, b={b}, c={c})"
        )));
    }
    let f = move |x: &Float| {
        let prec = x.prec();
        let (h, s, _) = gm.at(prec + GUARD).parts(x);
        Float::with_val(prec, h * s)
    };
    let df = move |x: &Float| {
        let prec = x.prec();
        let p = gm.at(prec + GUARD);
        let (h, s, cx) = p.parts(x);
        // f' = S (β ln c · c^x - hazard²)
        let slope = Float::with_val(prec + GUARD, &p.beta * &p.log_c) * cx;
        Float::with_val(prec, (slope - h.square()) * s)
    };
    let taylor = move |n: usize, ctx: &PrecisionContext| {
        let prec = ctx.bits() + GUARD;
        let p = gm.at(prec);
        // Exponent E = -a x - (β/L)(e^{Lx} - 1) = Σ e_k x^k.
        let mut e = vec![Float::new(prec); n + 2];
        e[1] = -(Float::with_val(prec, &p.a + &p.beta));
        let mut lk = Float::with_val(prec, 1);
        for (k, ek) in e.iter_mut().enumerate().skip(2) {
            lk *= &p.log_c;
            *ek = -(Float::with_val(prec, &p.beta * &lk) / factorial(k as u32));
        }
        // S = exp(E): s_m = (1/m) Σ k e_k s_{m-k}.
        let mut s = vec![Float::with_val(prec, 1)];
        for m in 1..n + 2 {
            let mut acc = Float::new(prec);
            for k in 1..=m {
                acc += Float::with_val(prec, &e[k] * &s[m - k]) * k as u32;
            }
            s.push(acc / m as u32);
        }
        // f = -S', so ξ_j = -(j+1)! s_{j+1}.
        (0..n)
            .map(|j| {
                Float::with_val(
                    ctx.bits(),
                    -(Float::with_val(prec, &s[j + 1] * factorial(j as u32 + 1))),
                )
            })
            .collect()
    };
    Ok(TargetSpec::new(
        "gompertz_makeham",
        f,
        taylor,
        LaplaceEvaluator::numeric(Integrand::new(f)),
    )
    .with_derivative(df)
    .with_range(ErrorRange::Linear { x_max: 60.0 }))
}

/// Lognormal density `exp(-ln²x / (2σ²)) / (x σ √(2π))`.
fn lognormal_density(sigma: f64) -> impl Fn(&Float) -> Float + Send + Sync + Clone + 'static {
    move |x: &Float| {
        let prec = x.prec();
        if *x <= 0 {
            return Float::new(prec);
        }
        let p = prec + GUARD;
        let s = PrecisionContext::from_bits(p).real_decimal(sigma);
        let ln = Float::with_val(p, x.ln_ref());
        let expo = -(ln.square() / Float::with_val(p, s.square_ref()) / 2u32);
        let norm = Float::with_val(p, Constant::Pi) * 2u32;
        let denom = norm.sqrt() * s * x;
        Float::with_val(prec, expo.exp() / denom)
    }
}

/// Survival function `∫_x^∞ g_σ = (1/2) erfc(ln x / (σ√2))` of the lognormal
/// law; its approximant is differentiated to approximate the density.
pub fn lognormal_survival(sigma: f64) -> Result<TargetSpec> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Invalid(format!("sigma = {sigma}, need sigma > 0")));
    }
    let f = move |x: &Float| {
        let prec = x.prec();
        if *x <= 0 {
            return Float::with_val(prec, 1);
        }
        let p = prec + GUARD;
        let s = PrecisionContext::from_bits(p).real_decimal(sigma);
        let arg = Float::with_val(p, x.ln_ref()) / (s * Float::with_val(p, 2).sqrt());
        Float::with_val(prec, arg.erfc() / 2u32)
    };
    let g = lognormal_density(sigma);
    let g_int = Integrand::new(g.clone());
    let laplace = LaplaceEvaluator::closed_form(move |z: &Complex| {
        let prec = z.prec().0;
        if z.is_zero() {
            // F(0) = ∫ survival = mean = e^{σ²/2}
            let s = PrecisionContext::from_bits(prec).real_decimal(sigma);
            return Ok(Complex::with_val(prec, (s.square() / 2u32).exp()));
        }
        // 1 - G(z) ~ z·mean near 0; carry extra bits through the cancellation.
        let mag = Float::with_val(53, z.abs_ref()).to_f64();
        let extra = (-mag.log2()).max(0.0).ceil() as u32 + 16;
        let zz = Complex::with_val(prec + extra, z);
        let digits = PrecisionContext::from_bits(prec + extra).digits();
        let g_val = auto_quadrature(&g_int, &zz, digits)?;
        let one_minus = Complex::with_val(prec + extra, 1) - g_val;
        Ok(Complex::with_val(prec, one_minus / zz))
    });
    let g_neg = g.clone();
    Ok(TargetSpec::new(
        "lognormal_survival",
        f,
        |n, ctx| {
            let mut v = zeros(n, ctx);
            if let Some(first) = v.first_mut() {
                *first = Float::with_val(ctx.bits(), 1);
            }
            v
        },
        laplace,
    )
    .with_derivative(move |x| -g_neg(x))
    .with_density(g)
    .with_range(ErrorRange::Log { lo: 1e-8, hi: 1e2 }))
}

/// `Σ_{k≥0} (-z)^k / (k+offset)!` to the precision of `z`.
fn shifted_exp_series(z: &Complex, offset: u32) -> Complex {
    let prec = z.prec().0 + GUARD;
    let eps = Float::with_val(prec, Float::u_exp(1, -(prec as i32)));
    let mut term = Complex::with_val(prec, Float::with_val(prec, factorial(offset)).recip());
    let mut sum = term.clone();
    let minus_z = Complex::with_val(prec, -z);
    let mut k = 0u32;
    loop {
        k += 1;
        term = term * &minus_z / (k + offset);
        sum += &term;
        if Float::with_val(prec, term.abs_ref()) <= eps {
            break;
        }
    }
    sum
}

/// `max(1 - x, 0)`.
pub fn hockey_stick() -> TargetSpec {
    let f = |x: &Float| {
        let v = Float::with_val(x.prec(), 1 - x);
        if v.is_sign_positive() {
            v
        } else {
            Float::new(x.prec())
        }
    };
    let laplace = LaplaceEvaluator::closed_form(|z: &Complex| {
        let prec = z.prec().0;
        if Float::with_val(53, z.abs_ref()) <= 1 {
            return Ok(Complex::with_val(prec, shifted_exp_series(z, 2)));
        }
        // z^{-2} (e^{-z} + z - 1)
        let p = prec + GUARD;
        let zz = Complex::with_val(p, z);
        let e = Complex::with_val(p, -&zz).exp();
        let num = e + &zz - 1u32;
        Ok(Complex::with_val(prec, num / zz.square()))
    });
    TargetSpec::new(
        "hockey_stick",
        f,
        |n, ctx| {
            let mut v = zeros(n, ctx);
            if n > 0 {
                v[0] = Float::with_val(ctx.bits(), 1);
            }
            if n > 1 {
                v[1] = Float::with_val(ctx.bits(), -1);
            }
            v
        },
        laplace,
    )
    .with_derivative(|x| Float::with_val(x.prec(), if *x < 1 { -1 } else { 0 }))
    .with_range(ErrorRange::Linear { x_max: 4.0 })
    .with_breakpoints(vec![1.0])
}

/// The indicator of `x <= 1`.
pub fn unit_step() -> TargetSpec {
    let f = |x: &Float| Float::with_val(x.prec(), if *x <= 1 { 1 } else { 0 });
    let laplace = LaplaceEvaluator::closed_form(|z: &Complex| {
        let prec = z.prec().0;
        if Float::with_val(53, z.abs_ref()) <= 1 {
            return Ok(Complex::with_val(prec, shifted_exp_series(z, 1)));
        }
        // (1 - e^{-z}) / z
        let p = prec + GUARD;
        let zz = Complex::with_val(p, z);
        let e = Complex::with_val(p, -&zz).exp();
        Ok(Complex::with_val(prec, (1u32 - e) / zz))
    });
    TargetSpec::new(
        "unit_step",
        f,
        |n, ctx| {
            let mut v = zeros(n, ctx);
            if n > 0 {
                v[0] = Float::with_val(ctx.bits(), 1);
            }
            v
        },
        laplace,
    )
    .with_derivative(|x| Float::new(x.prec()))
    .with_range(ErrorRange::Linear { x_max: 4.0 })
    .with_breakpoints(vec![1.0])
}

impl TargetSpec {
    /// Quadrature of `f` itself, whatever the registered evaluator is.
    pub fn numeric_laplace(&self) -> LaplaceEvaluator {
        let f = self.clone();
        LaplaceEvaluator::numeric(Integrand::new(move |x: &Float| f.eval(x)).with_breakpoints(self.breakpoints.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::Scalar;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn as_f64(v: &[ApReal]) -> Vec<f64> {
        v.iter().map(Float::to_f64).collect()
    }

    #[test]
    fn taylor_examples() {
        let c = ctx();
        assert_eq!(as_f64(&gaussian().taylor_coeffs(5, &c)), vec![1., 0., -2., 0., 12.]);
        assert_eq!(as_f64(&hockey_stick().taylor_coeffs(4, &c)), vec![1., -1., 0., 0.]);
        assert_eq!(as_f64(&unit_step().taylor_coeffs(3, &c)), vec![1., 0., 0.]);
        let ln = lognormal_survival(1.0).unwrap().taylor_coeffs(6, &c);
        assert_eq!(as_f64(&ln), vec![1., 0., 0., 0., 0., 0.]);

        let g = gamma_kernel().taylor_coeffs(2, &c);
        let exact = Float::with_val(c.bits(), -1) / 720u32;
        assert!(Float::with_val(c.bits(), &g[0] - &exact).abs() < 1e-100);
        assert!(Float::with_val(c.bits(), &g[1] + &exact).abs() < 1e-100);
    }

    #[test]
    fn point_values() {
        let c = ctx();
        let h = hockey_stick();
        assert_eq!(h.eval(&c.real(0.25)).to_f64(), 0.75);
        assert_eq!(h.eval(&c.real(2.0)).to_f64(), 0.0);
        let u = unit_step();
        assert_eq!(u.eval(&c.real(0.999)).to_f64(), 1.0);
        assert_eq!(u.eval(&c.real(1.0)).to_f64(), 1.0);
        assert_eq!(u.eval(&c.real(1.001)).to_f64(), 0.0);
        let k = gamma_kernel();
        assert!((k.eval(&c.real(1e-30)).to_f64() + 1.0 / 720.0).abs() < 1e-17);
    }

    #[test]
    fn kernel_branches_agree() {
        let c = ctx();
        let k = gamma_kernel();
        for x in [0.5, 0.75, 0.999] {
            let x = c.real(x);
            let closed = {
                let (q, _) = kernel_q(&x);
                let e = Float::with_val(q.prec(), -&x).exp();
                q * e / Float::with_val(c.bits() + 60, (&x).pow(3u32))
            };
            let series = k.eval(&x);
            let rel = Float::with_val(c.bits(), &series - &closed).abs() / closed.abs();
            assert!(rel < 1e-90, "x = {x}: {rel}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let c = ctx();
        let gm = gompertz_makeham(GompertzMakeham::default()).unwrap();
        for t in [gaussian(), gamma_kernel(), gm] {
            for x in [0.3, 0.9, 1.7, 5.0] {
                let h = c.real(1e-20);
                let xp = c.real(x) + &h;
                let xm = c.real(x) - &h;
                let fd = (t.eval(&xp) - t.eval(&xm)) / (h * 2u32);
                let d = t.eval_derivative(&c.real(x)).unwrap();
                let err = Float::with_val(c.bits(), &fd - &d).abs().to_f64();
                assert!(err < 1e-30 * (1.0 + d.to_f64().abs()), "{} at {x}: {err:e}", t.name);
            }
        }
    }

    #[test]
    fn gompertz_taylor_matches_derivatives() {
        let c = ctx();
        let t = gompertz_makeham(GompertzMakeham::default()).unwrap();
        let xi = t.taylor_coeffs(2, &c);
        assert!(Float::with_val(c.bits(), &xi[0] - t.eval(&c.real(0.0))).abs() < 1e-100);
        let d0 = t.eval_derivative(&c.real(0.0)).unwrap();
        assert!(Float::with_val(c.bits(), &xi[1] - d0).abs() < 1e-100);
    }

    #[test]
    fn closed_forms() {
        let c = ctx();
        let h = hockey_stick();
        let v = h.laplace_at(&c.one()).unwrap();
        let e1 = Complex::with_val(c.bits(), c.real(-1.0).exp());
        assert!(v.minus(&e1).magnitude() < 1e-95);
        let v = h.laplace_at(&c.zero()).unwrap();
        assert!(v.minus(&c.complex(0.5, 0.)).magnitude() < 1e-100);
        let v = unit_step().laplace_at(&c.zero()).unwrap();
        assert!(v.minus(&c.one()).magnitude() < 1e-100);
        let two = c.complex(2., 0.);
        let v = h.laplace_at(&two).unwrap();
        let want = Complex::with_val(c.bits(), (c.real(-2.0).exp() + 1u32) / 4u32);
        assert!(v.minus(&want).magnitude() < 1e-95);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let c = ctx();
        for t in [hockey_stick(), unit_step()] {
            let numeric = t.numeric_laplace();
            for z in [
                c.complex(0.5, 3.),
                c.complex(0.0, 40.),
                c.complex(2., -1.),
                c.complex(0.3, 0.2),
            ] {
                let a = t.laplace_at(&z).unwrap();
                let b = numeric.eval(&z).unwrap();
                assert!(a.minus(&b).magnitude() < 1e-88 * a.magnitude(), "{} at {z}", t.name);
            }
        }
    }

    #[test]
    fn lognormal_transform() {
        let c = ctx();
        let t = lognormal_survival(1.0).unwrap();
        let mean = Complex::with_val(c.bits(), c.real(0.5).exp());
        assert!(t.laplace_at(&c.zero()).unwrap().minus(&mean).magnitude() < 1e-95);
        let z = c.complex(1.0, 2.0);
        let via_g = t.laplace_at(&z).unwrap();
        let direct = t.numeric_laplace().eval(&z).unwrap();
        assert!(via_g.minus(&direct).magnitude() < 1e-85);
    }
}
