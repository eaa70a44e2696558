//! Scalars: the arbitrary-precision complex type, the precision context that
//! creates it, and the small field interface the Padé machinery is generic
//! over.

use std::fmt::Debug;

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Arbitrary-precision complex number (MPC).
pub type ApComplex = Complex;
/// Arbitrary-precision real number (MPFR).
pub type ApReal = Float;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 10;

/// Working precision, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: 100 }
    }
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 32;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision { digits });
        }
        Ok(PrecisionContext { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits: enough for `digits` decimal digits plus a few guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * BITS_PER_DIGIT).ceil() as u32 + GUARD_BITS
    }

    /// Recovers the context that produced a value of the given precision.
    pub fn from_bits(bits: u32) -> Self {
        let digits = (f64::from(bits.saturating_sub(GUARD_BITS)) / BITS_PER_DIGIT).floor() as u32;
        PrecisionContext { digits }
    }

    pub fn real(&self, x: f64) -> ApReal {
        Float::with_val(self.bits(), x)
    }

    /// Converts an `f64` through its shortest decimal representation, so that
    /// `0.1` becomes the decimal 1/10 rather than the nearest binary double.
    pub fn real_decimal(&self, x: f64) -> ApReal {
        self.parse_real(&format!("{x:e}"))
            .expect("f64 Display output is a valid decimal")
    }

    pub fn parse_real(&self, s: &str) -> Result<ApReal> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(parsed.complete(self.bits()))
    }

    pub fn complex(&self, re: f64, im: f64) -> ApComplex {
        Complex::with_val(self.bits(), (re, im))
    }

    pub fn from_parts(&self, re: &ApReal, im: &ApReal) -> ApComplex {
        Complex::with_val(self.bits(), (re, im))
    }

    pub fn zero(&self) -> ApComplex {
        Complex::new(self.bits())
    }

    pub fn one(&self) -> ApComplex {
        self.complex(1.0, 0.0)
    }

    /// `10^(-k)` as a plain `f64`; saturates to zero for huge `k`.
    pub fn tenth_power(k: f64) -> f64 {
        10f64.powf(-k)
    }
}

/// Number of decimal digits that guarantees a lossless round trip of a
/// binary float with `bits` mantissa bits.
fn roundtrip_digits(bits: u32) -> usize {
    (f64::from(bits) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Full-precision scientific notation; parses back to the identical value.
pub fn format_real(x: &ApReal) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    x.to_string_radix(10, Some(roundtrip_digits(x.prec())))
}

/// Serializes as `re±im i`, e.g. `1.5e0-2.25e-1i`.
pub fn format_complex(z: &ApComplex) -> String {
    let re = format_real(z.real());
    let im = format_real(z.imag());
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

/// Inverse of [`format_complex`]. Also accepts a bare real number.
pub fn parse_complex(s: &str, ctx: &PrecisionContext) -> Result<ApComplex> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        let re = ctx.parse_real(s)?;
        return Ok(ctx.from_parts(&re, &Float::new(ctx.bits())));
    };
    // The sign separating the parts is the last '+' or '-' that does not
    // belong to an exponent and is not the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| Error::Parse(format!("{s:?}: expected re±im i")))?;
    let re = ctx.parse_real(&body[..split])?;
    let im = ctx.parse_real(&body[split..])?;
    Ok(ctx.from_parts(&re, &im))
}

/// Field operations the continued-fraction solver and polynomial algebra
/// need. Implemented for [`ApComplex`] (rounded) and
/// [`ExactComplex`](super::ExactComplex) (exact rationals).
///
/// New values inherit their precision from `self`, which is why there are
/// `zero_like`/`one_like` instead of associated constants.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// Division; callers check `is_zero` on the divisor first.
    fn over(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Approximate modulus, for tolerance tests only.
    fn magnitude(&self) -> f64;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    /// Relative tolerance for consistency checks at this scalar's precision:
    /// `10^(-digits/2)` for rounded arithmetic, zero for exact arithmetic.
    fn check_tolerance(&self) -> f64;
}

impl Scalar for ApComplex {
    fn zero_like(&self) -> Self {
        Complex::new(self.prec())
    }

    fn one_like(&self) -> Self {
        Complex::with_val(self.prec(), 1)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Complex::with_val(self.prec(), n)
    }

    fn plus(&self, rhs: &Self) -> Self {
        (self + rhs).complete(self.prec())
    }

    fn minus(&self, rhs: &Self) -> Self {
        (self - rhs).complete(self.prec())
    }

    fn times(&self, rhs: &Self) -> Self {
        (self * rhs).complete(self.prec())
    }

    fn over(&self, rhs: &Self) -> Self {
        (self / rhs).complete(self.prec())
    }

    fn negated(&self) -> Self {
        (-self).complete(self.prec())
    }

    fn conj(&self) -> Self {
        self.conj_ref().complete(self.prec())
    }

    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.abs_ref().complete(self.prec()).real().to_f64_round(Round::Nearest)
    }

    fn re_f64(&self) -> f64 {
        self.real().to_f64()
    }

    fn im_f64(&self) -> f64 {
        self.imag().to_f64()
    }

    fn check_tolerance(&self) -> f64 {
        let digits = PrecisionContext::from_bits(self.prec().0).digits();
        PrecisionContext::tenth_power(f64::from(digits) / 2.0)
    }
}
