use super::scalar::Scalar;

/// Dense polynomial, coefficients in ascending degree order.
///
/// The zero polynomial is the empty coefficient list; otherwise the last
/// coefficient is nonzero. Only exactly-zero leading coefficients are
/// trimmed, never merely small ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Polynomial::new(vec![c])
    }

    /// `z - root`.
    pub fn linear_root(root: &T) -> Self {
        Polynomial::new(vec![root.negated(), root.one_like()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        let Some(first) = roots.first() else {
            return Polynomial::zero();
        };
        roots.iter().fold(Polynomial::constant(first.one_like()), |acc, r| {
            acc.mul(&Polynomial::linear_root(r))
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        let mut it = self.coeffs.iter().rev();
        let Some(lead) = it.next() else {
            return z.zero_like();
        };
        it.fold(lead.clone(), |acc, c| acc.times(z).plus(c))
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: &T) -> (T, T) {
        let mut it = self.coeffs.iter().rev();
        let Some(lead) = it.next() else {
            return (z.zero_like(), z.zero_like());
        };
        let mut p = lead.clone();
        let mut dp = z.zero_like();
        for c in it {
            dp = dp.times(z).plus(&p);
            p = p.times(z).plus(c);
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.times(&c.from_i64_like(k as i64)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(Scalar::negated).collect(),
        }
    }

    /// Coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    /// Multiplies by `z`.
    pub fn shift_up(&self) -> Self {
        match self.coeffs.first() {
            None => Polynomial::zero(),
            Some(c0) => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
                coeffs.push(c0.zero_like());
                coeffs.extend(self.coeffs.iter().cloned());
                Polynomial { coeffs }
            }
        }
    }

    pub fn conj(&self) -> Self {
        Polynomial::new(self.coeffs.iter().map(Scalar::conj).collect())
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}
