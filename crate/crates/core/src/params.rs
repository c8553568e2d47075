use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Default admissibility margin for `alpha >= -1 + delta`.
pub const DEFAULT_DELTA: f64 = 0.05;

/// Degree `n`, parameter `a` and the derived large parameter quantities.
///
/// `u = n + 1/2`, `alpha = (a - 2)/u` and `sigma = sqrt(1 + alpha)`. The
/// parameter `a` is also kept as an exact rational (the shortest decimal
/// representation of the `f64`), which the oracle uses for exact
/// Pochhammer and binomial products.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams {
    pub n: u32,
    pub a: f64,
    pub u: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub delta: f64,
    a_exact: Rational,
}

impl ProblemParams {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        Self::with_delta(n, a, DEFAULT_DELTA)
    }

    pub fn with_delta(n: u32, a: f64, delta: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!("a = {a} is not finite")));
        }
        Self::build(n, a, decimal_rational(a), delta)
    }

    /// Builds the parameters from an exact rational `a`.
    pub fn with_exact_a(n: u32, a: Rational, delta: f64) -> Result<Self> {
        let af = a.to_f64();
        Self::build(n, af, a, delta)
    }

    fn build(n: u32, a: f64, a_exact: Rational, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} must lie in (0, 1)"
            )));
        }
        let u = f64::from(n) + 0.5;
        let alpha = (a - 2.0) / u;
        check_range(alpha, delta)?;
        Ok(Self {
            n,
            a,
            u,
            alpha,
            sigma: (1.0 + alpha).sqrt(),
            delta,
            a_exact,
        })
    }

    /// Parameters without the `alpha` admissibility gate. Only the exact
    /// evaluators accept such values.
    pub fn unchecked(n: u32, a: f64) -> Self {
        let u = f64::from(n) + 0.5;
        let alpha = (a - 2.0) / u;
        Self {
            n,
            a,
            u,
            alpha,
            sigma: (1.0 + alpha).max(0.0).sqrt(),
            delta: DEFAULT_DELTA,
            a_exact: decimal_rational(a),
        }
    }

    pub fn a_exact(&self) -> &Rational {
        &self.a_exact
    }

    /// `u = n + 1/2` as an exact rational.
    pub fn u_exact(&self) -> Rational {
        Rational::from((2 * u64::from(self.n) + 1, 2u64))
    }

    /// `alpha = (a - 2)/u` as an exact rational.
    pub fn alpha_exact(&self) -> Rational {
        (self.a_exact.clone() - 2u32) / self.u_exact()
    }

    /// Turning point `z1 = -alpha/2 + i sigma` in the upper half-plane.
    pub fn z1(&self) -> Complex64 {
        Complex64::new(-0.5 * self.alpha, self.sigma)
    }

    /// Copy of the parameters at a different degree with the same `a`.
    pub fn with_degree(&self, n: u32) -> Result<Self> {
        Self::build(n, self.a, self.a_exact.clone(), self.delta)
    }
}

/// Enforces `-1 + delta <= alpha`.
pub fn check_range(alpha: f64, delta: f64) -> Result<()> {
    let bound = -1.0 + delta;
    if alpha.is_nan() || alpha < bound {
        return Err(Error::Range { alpha, bound });
    }
    Ok(())
}

/// Exact rational equal to the shortest round-trip decimal form of `x`.
pub fn decimal_rational(x: f64) -> Rational {
    let text = format!("{x}");
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int_part}{frac_part}");
    let num = Integer::from_str_radix(&digits, 10).expect("f64 display is decimal");
    let den = Integer::from(10u32).pow(frac_part.len() as u32);
    let r = Rational::from((num, den));
    if neg {
        -r
    } else {
        r
    }
}

/// A complex number stored as `mant * exp(log_scale)` to survive the very
/// large and very small magnitudes met at high degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mant: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn new(mant: Complex64, log_scale: f64) -> Self {
        Self { mant, log_scale }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    /// Builds `exp(log)` for a complex logarithm.
    pub fn from_log(log: Complex64) -> Self {
        Self::new(Complex64::from_polar(1.0, log.im), log.re)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::new(self.mant * other.mant, self.log_scale + other.log_scale).normalized()
    }

    pub fn mul_c64(self, z: Complex64) -> Self {
        Self::new(self.mant * z, self.log_scale).normalized()
    }

    /// Moves the magnitude of the mantissa into the scale.
    pub fn normalized(self) -> Self {
        let m = self.mant.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        Self::new(self.mant / m, self.log_scale + m.ln())
    }

    /// Natural logarithm of the modulus.
    pub fn ln_abs(&self) -> f64 {
        self.mant.norm().ln() + self.log_scale
    }

    /// Converts to a plain complex number (may overflow to infinity).
    pub fn to_c64(&self) -> Complex64 {
        self.mant * self.log_scale.exp()
    }
}
