//! Target functions: point values, derivatives at `0+`, Laplace transforms.

mod builtin;

use std::sync::Arc;

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::laplace::{LaplaceEvaluator, RealFn};
use crate::polyrat::{ApReal, PrecisionContext};

pub use builtin::{
    gamma_kernel, gaussian, gompertz_makeham, hockey_stick, lognormal_survival, unit_step, GompertzMakeham,
};

/// A parameter value `base` or `base^exp`, both read as exact decimals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decimal {
    pub base: f64,
    pub exp: Option<f64>,
}

impl Decimal {
    pub fn plain(base: f64) -> Self {
        Decimal { base, exp: None }
    }

    pub fn power(base: f64, exp: f64) -> Self {
        Decimal { base, exp: Some(exp) }
    }

    pub fn value(&self, prec: u32) -> Float {
        let ctx = PrecisionContext::from_bits(prec);
        let b = ctx.real_decimal(self.base);
        match self.exp {
            None => b,
            Some(e) => Float::with_val(prec, (&b).pow(&ctx.real_decimal(e))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.exp {
            None => self.base,
            Some(e) => self.base.powf(e),
        }
    }
}

impl std::str::FromStr for Decimal {
    type Err = Error;

    fn from_str(v: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad parameter value {v:?}"));
        let num = |s: &str| -> Result<f64> {
            let x: f64 = s.trim().parse().map_err(|_| bad())?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad())
            }
        };
        let d = match v.split_once('^') {
            Some((b, e)) => Decimal::power(num(b)?, num(e)?),
            None => Decimal::plain(num(v)?),
        };
        if d.to_f64().is_finite() {
            Ok(d)
        } else {
            Err(bad())
        }
    }
}

pub type TaylorFn = Arc<dyn Fn(usize, &PrecisionContext) -> Vec<ApReal> + Send + Sync>;

/// What the approximant of `f` is finally used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostTransform {
    /// `φ` approximates `f` itself.
    Identity,
    /// `f(x) = ∫_x^∞ g`, and `-φ'` approximates `g`.
    NegateDerivative,
}

/// Where approximation errors are measured by default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ErrorRange {
    Linear {
        x_max: f64,
    },
    /// Log-spaced over `[lo, hi]`.
    Log {
        lo: f64,
        hi: f64,
    },
}

#[derive(Clone)]
pub struct TargetSpec {
    pub name: String,
    /// Parameters as given, for manifests.
    pub params: Vec<(String, String)>,
    eval_f: RealFn,
    eval_df: Option<RealFn>,
    eval_user: Option<RealFn>,
    taylor: TaylorFn,
    pub laplace: LaplaceEvaluator,
    pub post_transform: PostTransform,
    pub range: ErrorRange,
    /// Points where `f` is not smooth.
    pub breakpoints: Vec<f64>,
}

impl std::fmt::Debug for TargetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TargetSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("post_transform", &self.post_transform)
            .field("range", &self.range)
            .finish_non_exhaustive()
    }
}

impl TargetSpec {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Float) -> Float + Send + Sync + 'static,
        taylor: impl Fn(usize, &PrecisionContext) -> Vec<ApReal> + Send + Sync + 'static,
        laplace: LaplaceEvaluator,
    ) -> Self {
        TargetSpec {
            name: name.into(),
            params: Vec::new(),
            eval_f: Arc::new(f),
            eval_df: None,
            eval_user: None,
            taylor: Arc::new(taylor),
            laplace,
            post_transform: PostTransform::Identity,
            range: ErrorRange::Linear { x_max: 10.0 },
            breakpoints: Vec::new(),
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(&Float) -> Float + Send + Sync + 'static) -> Self {
        self.eval_df = Some(Arc::new(df));
        self
    }

    /// Marks `f` as the tail integral of `g`; errors are then measured on `g`.
    pub fn with_density(mut self, g: impl Fn(&Float) -> Float + Send + Sync + 'static) -> Self {
        self.eval_user = Some(Arc::new(g));
        self.post_transform = PostTransform::NegateDerivative;
        self
    }

    pub fn with_range(mut self, range: ErrorRange) -> Self {
        self.range = range;
        self
    }

    pub fn with_breakpoints(mut self, b: Vec<f64>) -> Self {
        self.breakpoints = b;
        self
    }

    pub fn with_params(mut self, params: Vec<(String, String)>) -> Self {
        self.params = params;
        self
    }

    /// `f(x)` at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Float {
        (self.eval_f)(x)
    }

    pub fn eval_derivative(&self, x: &Float) -> Option<Float> {
        self.eval_df.as_ref().map(|df| df(x))
    }

    /// The function the final approximant is compared with: `f`, or `g`
    /// under [`PostTransform::NegateDerivative`].
    pub fn eval_user(&self, x: &Float) -> Float {
        match &self.eval_user {
            Some(g) => g(x),
            None => self.eval(x),
        }
    }

    /// `ξ_j = f^{(j)}(0+)` for `j < n`.
    pub fn taylor_coeffs(&self, n: usize, ctx: &PrecisionContext) -> Vec<ApReal> {
        (self.taylor)(n, ctx)
    }

    pub fn laplace_at(&self, z: &Complex) -> Result<Complex> {
        self.laplace.eval(z)
    }
}

pub const TARGET_NAMES: [&str; 6] = [
    "gaussian",
    "gamma_kernel",
    "gompertz_makeham",
    "lognormal_survival",
    "hockey_stick",
    "unit_step",
];

/// Builds a registered target. Parameters are `key=value` decimal strings;
/// a value may also be written `base^exponent`.
pub fn lookup(name: &str, params: &[(String, String)]) -> Result<TargetSpec> {
    let allowed: &[&str] = match name {
        "gompertz_makeham" => &["x0", "a", "b", "c"],
        "lognormal_survival" => &["sigma"],
        n if TARGET_NAMES.contains(&n) => &[],
        _ => return Err(Error::UnknownTarget(name.to_string())),
    };
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Invalid(format!("target {name} has no parameter {k}")));
        }
    }
    let get = |key: &str| -> Result<Option<Decimal>> {
        params
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.parse())
            .transpose()
    };
    let spec = match name {
        "gaussian" => gaussian(),
        "gamma_kernel" => gamma_kernel(),
        "hockey_stick" => hockey_stick(),
        "unit_step" => unit_step(),
        "lognormal_survival" => lognormal_survival(get("sigma")?.map_or(1.0, |d| d.to_f64()))?,
        "gompertz_makeham" => {
            let mut gm = GompertzMakeham::default();
            if let Some(v) = get("x0")? {
                gm.x0 = v;
            }
            if let Some(v) = get("a")? {
                gm.a = v;
            }
            if let Some(v) = get("b")? {
                gm.b = v;
            }
            if let Some(v) = get("c")? {
                gm.c = v;
            }
            gompertz_makeham(gm)?
        }
        _ => unreachable!(),
    };
    Ok(spec.with_params(params.to_vec()))
}

/// Splits `key=value`.
pub fn parse_key_value(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::Parse(format!("expected key=value, got {s:?}"))),
    }
}
