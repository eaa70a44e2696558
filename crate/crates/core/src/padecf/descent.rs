//! One level of the continued-fraction descent.
//!
//! Each level writes the current interpolant as
//! `R(z) = a_1 / (1 + (z - z_1) R_1(z))`, which removes the condition at
//! `z_1`, maps the remaining point values to those of `R_1`, and maps the
//! expansion of `R` at infinity to the expansion of `R_1`.

use crate::error::{Error, Result};
use crate::polyrat::Scalar;

/// Expansion of `R_1` when `R = Σ b_j z^{-j}` has `b_0 = 0`.
///
/// Consumes `b_0 .. b_k` and returns `b1_0 .. b1_{k-1}`:
///
/// ```text
/// b1_0 = a1 / b_1
/// b1_n = -(1/b_1) [ b_n + Σ_{i<n} b1_i (b_{n+1-i} - z1 b_{n-i}) ]
/// ```
pub fn series_descend_case1<T: Scalar>(b: &[T], z1: &T, a1: &T, k: usize) -> Result<Vec<T>> {
    if b.len() < k + 1 {
        return Err(Error::Invalid(format!(
            "case 1 needs {} coefficients, got {}",
            k + 1,
            b.len()
        )));
    }
    if !b[0].is_zero() {
        return Err(Error::Invalid("case 1 needs b_0 = 0".into()));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let b1 = &b[1];
    if b1.is_zero() {
        return Err(Error::DegenerateSeries { level: 0 });
    }
    let mut out = Vec::with_capacity(k);
    out.push(a1.over(b1));
    for n in 1..k {
        let mut acc = b[n].clone();
        for (i, c) in out.iter().enumerate() {
            acc = acc.plus(&c.times(&b[n + 1 - i].minus(&z1.times(&b[n - i]))));
        }
        out.push(acc.over(b1).negated());
    }
    Ok(out)
}

/// Expansion of `R_1` when `b_0 != 0`.
///
/// Consumes `b_0 .. b_{k-1}` and returns `b1_0 .. b1_k` with `b1_0 = 0`:
///
/// ```text
/// b1_1     = a1 / b_0 - 1
/// b1_{n+1} = -(1/b_0) [ b_n + Σ_{1<=i<=n} b1_i (b_{n+1-i} - z1 b_{n-i}) ]
/// ```
pub fn series_descend_case2<T: Scalar>(b: &[T], z1: &T, a1: &T, k: usize) -> Result<Vec<T>> {
    if k == 0 || b.len() < k {
        return Err(Error::Invalid(format!(
            "case 2 needs k >= 1 and {k} coefficients, got {}",
            b.len()
        )));
    }
    let b0 = &b[0];
    if b0.is_zero() {
        return Err(Error::Invalid("case 2 needs b_0 != 0".into()));
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(b0.zero_like());
    out.push(a1.over(b0).minus(&b0.one_like()));
    for n in 1..k {
        let mut acc = b[n].clone();
        for i in 1..=n {
            acc = acc.plus(&out[i].times(&b[n + 1 - i].minus(&z1.times(&b[n - i]))));
        }
        out.push(acc.over(b0).negated());
    }
    Ok(out)
}

/// Interpolation data for `R_1`: `a_j' = (a_l / a_j - 1) / (z_j - z_l)`.
pub fn value_descend<T: Scalar>(values: &[(T, T)], z_l: &T, a_l: &T) -> Result<Vec<(T, T)>> {
    values
        .iter()
        .enumerate()
        .map(|(index, (z, a))| {
            if a.is_zero() {
                return Err(Error::ZeroInterpolant { level: 0, index });
            }
            let dz = z.minus(z_l);
            if dz.is_zero() {
                return Err(Error::Invalid(format!("repeated interpolation point {index}")));
            }
            Ok((z.clone(), a_l.over(a).minus(&a.one_like()).over(&dz)))
        })
        .collect()
}

/// State between descent levels: the expansion of `R_l` at infinity and the
/// interpolation conditions it still has to meet.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentState<T> {
    pub level: usize,
    /// `γ_0^{(l)} ..`; `γ_0` is zero exactly at even levels.
    pub gamma: Vec<T>,
    /// `(z_j, a_j^{(l)})` for the points not yet consumed, in order.
    pub pending: Vec<(T, T)>,
}

impl<T: Scalar> DescentState<T> {
    /// Level 0: `γ = [0, ξ_0, .., ξ_{n_inf-1}]` and the raw data.
    pub fn initial(points: &[T], values: &[T], xi: &[T]) -> Self {
        let zero = xi
            .first()
            .or(points.first())
            .map(Scalar::zero_like)
            .expect("non-empty problem");
        let gamma = std::iter::once(zero).chain(xi.iter().cloned()).collect();
        let pending = points.iter().cloned().zip(values.iter().cloned()).collect();
        DescentState {
            level: 0,
            gamma,
            pending,
        }
    }

    pub fn num_gamma(&self) -> usize {
        self.gamma.len()
    }

    /// Consumes the next pending point. Returns that node `(z, a)` together
    /// with the state one level down.
    pub fn step(&self) -> Result<((T, T), DescentState<T>)> {
        let level = self.level;
        let ((z, a), rest) = self
            .pending
            .split_first()
            .ok_or_else(|| Error::Invalid("no interpolation points left".into()))?;
        if a.is_zero() {
            return Err(Error::ZeroInterpolant { level, index: 0 });
        }
        let pending = value_descend(rest, z, a).map_err(|e| match e {
            Error::ZeroInterpolant { index, .. } => Error::ZeroInterpolant {
                level,
                index: index + 1,
            },
            e => e,
        })?;
        let b = &self.gamma;
        let gamma = if b[0].is_zero() {
            series_descend_case1(b, z, a, b.len() - 1)
        } else {
            series_descend_case2(b, z, a, b.len())
        }
        .map_err(|e| match e {
            Error::DegenerateSeries { .. } => Error::DegenerateSeries { level },
            e => e,
        })?;
        let next = DescentState {
            level: level + 1,
            gamma,
            pending,
        };
        Ok(((z.clone(), a.clone()), next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::{ExactComplex, PrecisionContext};
    use rug::Rational;

    fn q(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
        ExactComplex::new(Rational::from(re), Rational::from(im))
    }

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    #[test]
    fn case1_worked_example() {
        let b = [c(0, 0), c(1, 0), c(2, 0)];
        let out = series_descend_case1(&b, &c(1, 1), &c(1, -2), 2).unwrap();
        assert_eq!(out, vec![c(1, -2), c(0, 3)]);
    }

    #[test]
    fn case1_reciprocal() {
        // R = 1/z, a1 = 1, z1 = 0 gives R_1 = (z - 1)/z = 1 - 1/z.
        let b = [c(0, 0), c(1, 0), c(0, 0), c(0, 0)];
        let out = series_descend_case1(&b, &c(0, 0), &c(1, 0), 3).unwrap();
        assert_eq!(out, vec![c(1, 0), c(-1, 0), c(0, 0)]);
    }

    #[test]
    fn case1_degenerate() {
        let b = [c(0, 0), c(0, 0), c(1, 0)];
        assert!(matches!(
            series_descend_case1(&b, &c(0, 0), &c(1, 0), 2),
            Err(Error::DegenerateSeries { .. })
        ));
    }

    #[test]
    fn case2_worked_example() {
        let b = [c(1, -2), c(0, 3)];
        let a1 = q((2, 5), (-4, 5));
        let out = series_descend_case2(&b, &c(1, -1), &a1, 2).unwrap();
        assert_eq!(out, vec![c(0, 0), q((-3, 5), (0, 1)), q((-3, 25), (9, 25))]);
    }

    #[test]
    fn case2_trivial_inputs() {
        let a1 = c(3, -1);
        let out = series_descend_case2(std::slice::from_ref(&a1), &c(7, 7), &a1, 1).unwrap();
        assert_eq!(out, vec![c(0, 0), c(0, 0)]);

        let b = [c(2, 0), c(0, 0), c(0, 0)];
        let out = series_descend_case2(&b, &c(0, 0), &c(2, 0), 3).unwrap();
        assert_eq!(out, vec![c(0, 0); 4]);
    }

    #[test]
    fn values_worked_example() {
        let out = value_descend(&[(c(1, -1), c(1, 2))], &c(1, 1), &c(1, -2)).unwrap();
        assert_eq!(out, vec![(c(1, -1), q((2, 5), (-4, 5)))]);
    }

    #[test]
    fn values_equal_to_consumed_value_map_to_zero() {
        let out = value_descend(&[(c(2, 0), c(5, 1))], &c(1, 0), &c(5, 1)).unwrap();
        assert!(out[0].1.is_zero());
    }

    #[test]
    fn values_zero_interpolant() {
        let r = value_descend(&[(c(1, 0), c(1, 0)), (c(2, 0), c(0, 0))], &c(0, 0), &c(1, 0));
        assert!(matches!(r, Err(Error::ZeroInterpolant { index: 1, .. })));
    }

    #[test]
    fn rounded_and_exact_agree() {
        let ctx = PrecisionContext::default();
        let b = [ctx.zero(), ctx.one(), ctx.complex(2.0, 0.0)];
        let out = series_descend_case1(&b, &ctx.complex(1., 1.), &ctx.complex(1., -2.), 2).unwrap();
        assert_eq!(out, vec![ctx.complex(1., -2.), ctx.complex(0., 3.)]);
    }

    #[test]
    fn state_alternates() {
        let points = [c(1, 1), c(1, -1)];
        let values = [c(1, -2), c(1, 2)];
        let xi = [c(1, 0), c(2, 0)];
        let s0 = DescentState::initial(&points, &values, &xi);
        assert_eq!(s0.num_gamma(), 3);
        let (_, s1) = s0.step().unwrap();
        assert!(!s1.gamma[0].is_zero());
        assert_eq!(s1.num_gamma(), 2);
        assert_eq!(s1.pending, vec![(c(1, -1), q((2, 5), (-4, 5)))]);
        let (node, s2) = s1.step().unwrap();
        assert_eq!(node.1, q((2, 5), (-4, 5)));
        assert_eq!(s2.gamma, vec![c(0, 0), q((-3, 5), (0, 1)), q((-3, 25), (9, 25))]);
        assert!(s2.pending.is_empty());
        assert!(s2.step().is_err());
    }
}
