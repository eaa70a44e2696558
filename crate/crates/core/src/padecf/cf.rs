use crate::error::{Error, Result};
use crate::polyrat::{Polynomial, RationalFunction, Scalar};

/// The interpolant as a nested fraction.
///
/// ```text
/// R_{j-1}(z) = a_j / (1 + (z - z_j) R_j(z))       j = 1..p
/// R_p(z)     = c + d_1 / (z (1 + d_2 / (z (1 + ... d_K / z))))
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction<T> {
    /// `(z_j, a_j^{(j-1)})` in consumption order.
    pub nodes: Vec<(T, T)>,
    pub terminal_constant: T,
    pub terminal_d: Vec<T>,
}

impl<T: Scalar> ContinuedFraction<T> {
    /// `a_1`, the outermost numerator.
    pub fn head(&self) -> &T {
        &self.nodes[0].1
    }

    /// `(z_j, a_{j+1}^{(j)})` for `j = 1..p-1`.
    pub fn stages(&self) -> impl Iterator<Item = (&T, &T)> {
        self.nodes.windows(2).map(|w| (&w[0].0, &w[1].1))
    }

    pub fn k(&self) -> usize {
        self.terminal_d.len()
    }
}

/// Splits `R_p = γ_0 + γ_1 z^{-1} + .. + γ_K z^{-K} + O(z^{-K-1})` into its
/// terminal fraction `(γ_0, [d_1..d_K])`.
///
/// With `w = 1/z`, each step reads `d = u_1` off the current series `u` and
/// replaces `u` by `d / (z (u - u_0)) = 1 / (1 + (u_2/u_1) w + ..)`, one
/// coefficient shorter.
pub fn terminal_cf<T: Scalar>(gamma: &[T], k: usize) -> Result<(T, Vec<T>)> {
    if gamma.len() < k + 1 {
        return Err(Error::Invalid(format!(
            "terminal fraction needs {} coefficients, got {}",
            k + 1,
            gamma.len()
        )));
    }
    let constant = gamma[0].clone();
    let mut d = Vec::with_capacity(k);
    // u[i] is the coefficient of w^{i+1}.
    let mut u: Vec<T> = gamma[1..=k].to_vec();
    for m in 1..=k {
        let dm = u[0].clone();
        if m < k {
            if dm.is_zero() {
                return Err(Error::DegenerateSeries { level: m });
            }
            // q_i = u_{i+1}/u_1, then invert 1 + q_1 w + .. to r - 1 terms.
            let q: Vec<T> = u[1..].iter().map(|x| x.over(&dm)).collect();
            let r = u.len();
            let mut inv = vec![dm.one_like()];
            for n in 1..r {
                let mut acc = dm.zero_like();
                for i in 1..=n {
                    acc = acc.minus(&q[i - 1].times(&inv[n - i]));
                }
                inv.push(acc);
            }
            u = inv.split_off(1);
        }
        d.push(dm);
    }
    Ok((constant, d))
}

/// The terminal fraction alone as `num / den`.
pub fn assemble_terminal<T: Scalar>(constant: &T, d: &[T]) -> (Polynomial<T>, Polynomial<T>) {
    let one = constant.one_like();
    if d.is_empty() {
        return (Polynomial::new(vec![constant.clone()]), Polynomial::constant(one));
    }
    let mut num = Polynomial::constant(one.clone());
    let mut den = Polynomial::constant(one.clone());
    for m in (1..=d.len()).rev() {
        let c = if m == 1 { constant } else { &one };
        let zn = num.shift_up();
        num = zn.scale(c).add(&den.scale(&d[m - 1]));
        den = zn;
        // Every other level both sides pick up an exact factor of z.
        if num.coeffs().first().is_some_and(Scalar::is_zero) {
            num = Polynomial::new(num.coeffs()[1..].to_vec());
            den = Polynomial::new(den.coeffs()[1..].to_vec());
        }
    }
    (num, den)
}

/// Back-substitutes the whole fraction into a normalized `num / den`.
pub fn assemble<T: Scalar>(cf: &ContinuedFraction<T>) -> RationalFunction<T> {
    let (mut num, mut den) = assemble_terminal(&cf.terminal_constant, &cf.terminal_d);
    for (z, a) in cf.nodes.iter().rev() {
        let shifted = num.shift_up().sub(&num.scale(z));
        num = den.scale(a);
        den = den.add(&shifted);
    }
    RationalFunction::new(num, den)
        .expect("back substitution keeps a nonzero denominator")
        .normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::ExactComplex;
    use rug::Rational;

    fn q(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
        ExactComplex::new(Rational::from(re), Rational::from(im))
    }

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    fn ints(cs: &[i64]) -> Polynomial<ExactComplex> {
        Polynomial::new(cs.iter().map(|&x| c(x, 0)).collect())
    }

    #[test]
    fn worked_terminal() {
        let gamma = [c(0, 0), q((-3, 5), (0, 1)), q((-3, 25), (9, 25))];
        let (constant, d) = terminal_cf(&gamma, 2).unwrap();
        assert!(constant.is_zero());
        assert_eq!(d, vec![q((-3, 5), (0, 1)), q((-1, 5), (3, 5))]);
        let (num, den) = assemble_terminal(&constant, &d);
        let r = RationalFunction::new(num, den).unwrap().normalized();
        let expected = RationalFunction::new(
            Polynomial::constant(q((-3, 5), (0, 1))),
            Polynomial::new(vec![q((-1, 5), (3, 5)), c(1, 0)]),
        )
        .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn constant_terminal() {
        let (constant, d) = terminal_cf(&[c(4, -1)], 0).unwrap();
        assert_eq!(constant, c(4, -1));
        assert!(d.is_empty());
    }

    #[test]
    fn geometric_tail() {
        let a = q((2, 3), (-1, 1));
        let (constant, d) = terminal_cf(&[c(0, 0), c(1, 0), a.clone()], 2).unwrap();
        let (num, den) = assemble_terminal(&constant, &d);
        let r = RationalFunction::new(num, den).unwrap().normalized();
        assert_eq!(
            r,
            RationalFunction::new(ints(&[1]), Polynomial::linear_root(&a)).unwrap()
        );
    }

    #[test]
    fn longer_terminal_matches_its_series() {
        let gamma: Vec<_> = [0, 2, -1, 3, 5].iter().map(|&x| c(x, 1)).collect();
        let (constant, d) = terminal_cf(&gamma, 4).unwrap();
        let (num, den) = assemble_terminal(&constant, &d);
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r.series_at_infinity(5).unwrap(), gamma);
    }

    #[test]
    fn degenerate_terminal() {
        let gamma = [c(0, 0), c(0, 0), c(1, 0)];
        assert!(matches!(terminal_cf(&gamma, 2), Err(Error::DegenerateSeries { .. })));
        // A vanishing last d is allowed.
        assert!(terminal_cf(&[c(1, 0), c(1, 0), c(0, 0)], 2).is_ok());
    }

    #[test]
    fn worked_example_assembles() {
        let cf = ContinuedFraction {
            nodes: vec![(c(1, 1), c(1, -2)), (c(1, -1), q((2, 5), (-4, 5)))],
            terminal_constant: c(0, 0),
            terminal_d: vec![q((-3, 5), (0, 1)), q((-1, 5), (3, 5))],
        };
        assert_eq!(cf.head(), &c(1, -2));
        assert_eq!(cf.stages().count(), 1);
        let r = assemble(&cf);
        assert_eq!(r, RationalFunction::new(ints(&[1, 1]), ints(&[1, -1, 1])).unwrap());
    }

    #[test]
    fn one_level_nesting() {
        // a1 / (1 + (z - z1) c)
        let cf = ContinuedFraction {
            nodes: vec![(c(2, 0), c(3, 0))],
            terminal_constant: c(5, 0),
            terminal_d: vec![],
        };
        let r = assemble(&cf);
        let expected = RationalFunction::new(ints(&[3]), ints(&[-9, 5])).unwrap().normalized();
        assert_eq!(r, expected);
    }
}
