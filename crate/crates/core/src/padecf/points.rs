use crate::error::{Error, Result};
use crate::polyrat::{ApComplex, PrecisionContext, Scalar};

/// `p` points spaced evenly along the corner path
/// `[A - Bi, 0] ∪ [0, A + Bi]`, where `corner = A + Bi`.
///
/// With `t_j = (j-1)/(p-1)` the point is `(1 - 2t_j)·conj(corner)` on the
/// lower leg and `(2t_j - 1)·corner` on the upper leg. Both legs have the
/// same length, so even spacing in `t` is even spacing in arc length. The
/// output is ordered by increasing imaginary part and satisfies
/// `z_{p+1-j} = conj(z_j)`; odd `p` puts the middle point exactly at 0.
pub fn build_points_on<T: Scalar>(p: usize, corner: &T) -> Vec<T> {
    assert!(p >= 2, "need at least two interpolation points");
    let lower = corner.conj();
    let denom = corner.from_i64_like(p as i64 - 1);
    (1..=p)
        .map(|j| {
            let s = p as i64 + 1 - 2 * j as i64;
            let weight = corner.from_i64_like(s.abs()).over(&denom);
            if s >= 0 {
                lower.times(&weight)
            } else {
                corner.times(&weight)
            }
        })
        .collect()
}

/// Interpolation points on the `γ_{A,B}` curve at the given precision.
///
/// `a` and `b` go through their shortest decimal form, so `0.1` means 1/10.
pub fn build_points(p: usize, a: f64, b: f64, ctx: &PrecisionContext) -> Result<Vec<ApComplex>> {
    if p < 2 {
        return Err(Error::Invalid(format!("p = {p}, need p >= 2")));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::Invalid(format!("A = {a}, need A >= 0")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Invalid(format!("B = {b}, need B > 0")));
    }
    let corner = ctx.from_parts(&ctx.real_decimal(a), &ctx.real_decimal(b));
    Ok(build_points_on(p, &corner))
}
