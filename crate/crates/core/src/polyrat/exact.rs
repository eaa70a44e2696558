use std::fmt;

use rug::Rational;

use super::scalar::Scalar;

/// Complex number with exact rational parts.
///
/// Running the continued-fraction solver in this field reproduces
/// hand-computed intermediates digit for digit, which makes it a useful
/// cross-check for the rounded [`ApComplex`](super::ApComplex) path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        ExactComplex {
            re: re.into(),
            im: im.into(),
        }
    }

    /// `num/den` as a real number.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExactComplex::new(Rational::from((num, den)), 0)
    }

    fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.cmp0().is_lt() {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Scalar for ExactComplex {
    fn zero_like(&self) -> Self {
        ExactComplex::default()
    }

    fn one_like(&self) -> Self {
        ExactComplex::new(1, 0)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        ExactComplex::new(n, 0)
    }

    fn plus(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }

    fn minus(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }

    fn times(&self, rhs: &Self) -> Self {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        ExactComplex { re, im }
    }

    fn over(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sqr();
        let re = Rational::from(&self.re * &rhs.re) + Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.im * &rhs.re) - Rational::from(&self.re * &rhs.im);
        ExactComplex {
            re: re / &d,
            im: im / d,
        }
    }

    fn negated(&self) -> Self {
        ExactComplex {
            re: Rational::from(-&self.re),
            im: Rational::from(-&self.im),
        }
    }

    fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: Rational::from(-&self.im),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    fn magnitude(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    fn check_tolerance(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_is_exact() {
        // (1 + 2i) / (1 - 2i) = (-3 + 4i) / 5
        let a = ExactComplex::new(1, 2);
        let b = ExactComplex::new(1, -2);
        let q = a.over(&b);
        assert_eq!(q, ExactComplex::new(Rational::from((-3, 5)), Rational::from((4, 5))));
        assert_eq!(q.times(&b), a);
        assert_eq!(format!("{q}"), "-3/5+4/5i");
    }
}
