use super::poly::Polynomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `num(z) / den(z)` with a nonzero denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("rational function with zero denominator".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    /// `(deg num, deg den)`.
    pub fn degrees(&self) -> (isize, isize) {
        (self.num.degree(), self.den.degree())
    }

    /// Rescales so that the denominator is monic.
    pub fn normalized(&self) -> Self {
        let lead = self.den.leading().expect("denominator is nonzero");
        let inv = lead.one_like().over(lead);
        RationalFunction {
            num: self.num.scale(&inv),
            den: self.den.scale(&inv),
        }
    }

    pub fn eval(&self, z: &T) -> Result<T> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(z).over(&d))
    }

    /// Coefficients `b_0 .. b_{n-1}` of `R(z) = Σ b_j z^{-j}` near infinity.
    ///
    /// With `m = deg den`, `R(z) = (z^{-m} num(z)) / (z^{-m} den(z))`, and both
    /// factors are polynomials in `w = 1/z` whose coefficients are the reversed
    /// coefficient lists. The expansion is their truncated power-series
    /// quotient.
    pub fn series_at_infinity(&self, n: usize) -> Result<Vec<T>> {
        let (dn, dd) = self.degrees();
        if dn > dd {
            return Err(Error::DivergentAtInfinity { num: dn, den: dd });
        }
        let m = dd as usize;
        let den = self.den.coeffs();
        let zero = den[m].zero_like();
        // Coefficient of w^k in w^m den(1/w) is den[m - k].
        let rev_den = |k: usize| if k <= m { Some(&den[m - k]) } else { None };
        let rev_num = |k: usize| -> T {
            if k > m {
                return zero.clone();
            }
            self.num.coeffs().get(m - k).cloned().unwrap_or_else(|| zero.clone())
        };
        let lead = &den[m];
        let mut out: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = rev_num(k);
            for (i, b) in out.iter().enumerate() {
                if let Some(d) = rev_den(k - i) {
                    acc = acc.minus(&d.times(b));
                }
            }
            out.push(acc.over(lead));
        }
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        RationalFunction {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// Largest imaginary part among all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.im_f64().abs())
            .fold(0.0, f64::max)
    }
}
