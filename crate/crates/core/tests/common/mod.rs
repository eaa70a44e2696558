//! Reference values for tests, independent of the code under test.
#![allow(dead_code)]

use expsum::polyrat::{ApComplex, Polynomial, PrecisionContext, RationalFunction, Scalar};
use rand::Rng;
use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};
use std::sync::OnceLock;

/// Reference precision, about 200 digits.
pub const REF_BITS: u32 = 680;

/// `B_0 .. B_n` exactly, from `Σ_{k<=m} C(m+1, k) B_k = 0`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for m in 1..=n {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * &binom);
            binom *= (m + 1 - k) as u32;
            binom /= (k + 1) as u32;
        }
        b.push(-acc / (m as u32 + 1));
    }
    b
}

/// `B_0 .. B_320`, computed once.
fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli(320))
}

fn ln_2pi() -> Float {
    (Float::with_val(REF_BITS, Constant::Pi) * 2u32).ln()
}

/// Principal `ln Γ(z)` for `Re z > 0`: shift to `|w| >= 60` by the
/// recurrence, then 150 Stirling terms (truncation error below `e^{-2π·60}`).
pub fn ln_gamma_ref(z: &Complex) -> Complex {
    let b = bernoulli_table();
    let mut w = Complex::with_val(REF_BITS, z);
    let mut shift = Complex::new(REF_BITS);
    while Float::with_val(53, w.abs_ref()) < 60 {
        shift += Complex::with_val(REF_BITS, w.ln_ref());
        w += 1u32;
    }
    let mut v =
        Complex::with_val(REF_BITS, &w - Float::with_val(REF_BITS, 0.5)) * Complex::with_val(REF_BITS, w.ln_ref());
    v -= &w;
    v += ln_2pi() / 2u32;
    let inv = Complex::with_val(REF_BITS, w.recip_ref());
    let inv2 = Complex::with_val(REF_BITS, inv.square_ref());
    let mut pow = inv.clone();
    for k in 1..=150usize {
        let coef = Rational::from(&b[2 * k] / Integer::from(2 * k * (2 * k - 1)));
        v += Complex::with_val(REF_BITS, &pow * Float::with_val(REF_BITS, &coef));
        pow *= &inv2;
    }
    v - shift
}

/// `ζ'(-1)` from `ln G(N+1) = Σ_{k<N} ln k!` and the large-`N` expansion.
pub fn zeta_prime_minus_one() -> Float {
    static VALUE: OnceLock<Float> = OnceLock::new();
    VALUE.get_or_init(zeta_prime_minus_one_uncached).clone()
}

fn zeta_prime_minus_one_uncached() -> Float {
    let n = 80u32;
    let b = bernoulli_table();
    let mut ln_g = Float::new(REF_BITS);
    let mut ln_fact = Float::new(REF_BITS);
    for k in 1..n {
        ln_fact += Float::with_val(REF_BITS, k).ln();
        ln_g += &ln_fact;
    }
    let big_n = Float::with_val(REF_BITS, n);
    let ln_n = Float::with_val(REF_BITS, big_n.ln_ref());
    let n2 = Float::with_val(REF_BITS, big_n.square_ref());
    let mut asym = Float::with_val(REF_BITS, &n2 * &ln_n) / 2u32 - Float::with_val(REF_BITS, &n2 * 3u32) / 4u32
        + Float::with_val(REF_BITS, &big_n * ln_2pi()) / 2u32
        - Float::with_val(REF_BITS, &ln_n / 12u32);
    let inv2 = Float::with_val(REF_BITS, n2.recip_ref());
    let mut pow = inv2.clone();
    for k in 1..=150usize {
        let coef = Rational::from(&b[2 * k + 2] / Integer::from(4 * k * (k + 1)));
        asym += Float::with_val(REF_BITS, &pow * Float::with_val(REF_BITS, &coef));
        pow *= &inv2;
    }
    ln_g - asym
}

/// Principal `ln G(z)` for `Re z > 0`, from the expansion of `ln G(w+1)` at
/// `|w| >= 60` and `ln G(z) = ln G(z+N) - Σ ln Γ(z+k)`.
pub fn ln_barnes_g_ref(z: &Complex) -> Complex {
    let b = bernoulli_table();
    let zp = zeta_prime_minus_one();
    let mut zz = Complex::with_val(REF_BITS, z);
    let mut shift = Complex::new(REF_BITS);
    let mut ln_gamma = ln_gamma_ref(z);
    // ln G(zz) with zz = w + 1 and |w| >= 60.
    while Float::with_val(53, Complex::with_val(REF_BITS, &zz - 1u32).abs_ref()) < 60 {
        shift += &ln_gamma;
        ln_gamma += Complex::with_val(REF_BITS, zz.ln_ref());
        zz += 1u32;
    }
    let w = Complex::with_val(REF_BITS, &zz - 1u32);
    let ln_w = Complex::with_val(REF_BITS, w.ln_ref());
    let w2 = Complex::with_val(REF_BITS, w.square_ref());
    let mut v = Complex::with_val(REF_BITS, &w2 * &ln_w) / 2u32;
    v -= Complex::with_val(REF_BITS, &w2 * 3u32) / 4u32;
    v += Complex::with_val(REF_BITS, &w * ln_2pi()) / 2u32;
    v -= Complex::with_val(REF_BITS, &ln_w / 12u32);
    v += &zp;
    let inv2 = Complex::with_val(REF_BITS, w2.recip_ref());
    let mut pow = inv2.clone();
    for k in 1..=150usize {
        let coef = Rational::from(&b[2 * k + 2] / Integer::from(4 * k * (k + 1)));
        v += Complex::with_val(REF_BITS, &pow * Float::with_val(REF_BITS, &coef));
        pow *= &inv2;
    }
    v - shift
}

/// A random proper rational `Σ c_j / (z + λ_j)` of type `[M-1/M]` with real
/// coefficients: conjugate pairs and real poles, `Re λ` in `[0.2, 4]`.
pub fn random_real_rational<R: Rng>(rng: &mut R, m: usize, ctx: &PrecisionContext) -> RationalFunction<ApComplex> {
    let mut num = Polynomial::new(vec![ctx.zero()]);
    let mut den = Polynomial::constant(ctx.one());
    let mut left = m;
    let add = |c: ApComplex, lambda: ApComplex, num: &mut Polynomial<ApComplex>, den: &mut Polynomial<ApComplex>| {
        let lin = Polynomial::new(vec![lambda, ctx.one()]);
        *num = num.mul(&lin).add(&den.scale(&c));
        *den = den.mul(&lin);
    };
    while left > 0 {
        let re = rng.gen_range(0.2..4.0);
        let c_re = rng.gen_range(-2.0..2.0);
        if left >= 2 && rng.gen_bool(0.6) {
            let im = rng.gen_range(0.3..5.0);
            let c_im = rng.gen_range(-2.0..2.0);
            let l = ctx.complex(re, im);
            let c = ctx.complex(c_re, c_im);
            add(c.clone(), l.clone(), &mut num, &mut den);
            add(Scalar::conj(&c), Scalar::conj(&l), &mut num, &mut den);
            left -= 2;
        } else {
            add(
                ctx.complex(c_re + 2.5 * c_re.signum(), 0.0),
                ctx.complex(re, 0.0),
                &mut num,
                &mut den,
            );
            left -= 1;
        }
    }
    RationalFunction::new(num, den).unwrap().normalized()
}

/// `max_k |a_k - b_k| / (1 + |b_k|)` over numerator and denominator.
pub fn coefficient_distance(a: &RationalFunction<ApComplex>, b: &RationalFunction<ApComplex>) -> f64 {
    let (a, b) = (a.normalized(), b.normalized());
    if a.degrees() != b.degrees() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for (pa, pb) in [(a.num(), b.num()), (a.den(), b.den())] {
        for (x, y) in pa.coeffs().iter().zip(pb.coeffs()) {
            worst = worst.max(x.minus(y).magnitude() / (1.0 + y.magnitude()));
        }
    }
    worst
}

pub fn c_abs(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}
