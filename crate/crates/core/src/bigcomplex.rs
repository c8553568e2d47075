use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

use crate::params::ScaledComplex;

/// Smallest working precision accepted anywhere, in bits.
pub const MIN_PRECISION_BITS: u32 = 64;

/// Default oracle precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

/// Converts decimal digits to binary precision (never below the minimum).
pub fn digits_to_bits(digits: u32) -> u32 {
    let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
    bits.max(MIN_PRECISION_BITS)
}

/// Arbitrary-precision complex number with an explicit working precision.
///
/// Arithmetic between two values is carried out at the smaller of the two
/// precisions.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    value: Complex,
}

impl BigComplex {
    pub fn new(re: f64, im: f64, precision_bits: u32) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self {
            value: Complex::with_val(p, (re, im)),
        }
    }

    pub fn from_c64(z: Complex64, precision_bits: u32) -> Self {
        Self::new(z.re, z.im, precision_bits)
    }

    pub fn from_rug(value: Complex) -> Self {
        let p = value.prec();
        let p = p.0.min(p.1);
        if p < MIN_PRECISION_BITS {
            let mut v = value;
            v.set_prec(MIN_PRECISION_BITS);
            return Self { value: v };
        }
        Self { value }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::new(0.0, 0.0, precision_bits)
    }

    pub fn precision_bits(&self) -> u32 {
        let p = self.value.prec();
        p.0.min(p.1)
    }

    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    pub fn as_rug(&self) -> &Complex {
        &self.value
    }

    pub fn into_rug(self) -> Complex {
        self.value
    }

    /// Copy rounded to another precision.
    pub fn with_precision(&self, precision_bits: u32) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self {
            value: Complex::with_val(p, &self.value),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.value.real().to_f64(), self.value.imag().to_f64())
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.clone().conj(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.real().is_zero() && self.value.imag().is_zero()
    }

    /// Modulus as a high-precision real.
    pub fn abs_float(&self) -> Float {
        Float::with_val(self.precision_bits(), self.value.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs_float().to_f64()
    }

    /// Natural logarithm of the modulus (finite for any nonzero value,
    /// whatever its exponent).
    pub fn ln_abs(&self) -> f64 {
        let a = self.abs_float();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, a.ln_ref()).to_f64()
    }

    /// Converts to a scaled `f64` representation without overflow.
    pub fn to_scaled(&self) -> ScaledComplex {
        if self.is_zero() {
            return ScaledComplex::new(Complex64::new(0.0, 0.0), 0.0);
        }
        let p = self.precision_bits();
        let ln_abs = Float::with_val(p, self.abs_float().ln_ref());
        let inv = Float::with_val(p, -&ln_abs).exp();
        let unit = Complex::with_val(p, &self.value * &inv);
        ScaledComplex::new(
            Complex64::new(unit.real().to_f64(), unit.imag().to_f64()),
            ln_abs.to_f64(),
        )
    }

    /// Relative distance `|self - other| / |other|`.
    pub fn rel_diff(&self, other: &BigComplex) -> f64 {
        let p = self.precision_bits().min(other.precision_bits());
        let d = Complex::with_val(p, &self.value - &other.value);
        let num = Float::with_val(p, d.abs_ref());
        let den = other.abs_float();
        if den.is_zero() {
            return if num.is_zero() { 0.0 } else { f64::INFINITY };
        }
        Float::with_val(p, num / den).to_f64()
    }

    fn binary_prec(&self, other: &BigComplex) -> u32 {
        self.precision_bits().min(other.precision_bits())
    }
}

/// Builds a complex value from a scaled `f64` representation.
pub fn scaled_to_rug(s: &ScaledComplex, prec: u32) -> Complex {
    let scale = Float::with_val(prec, s.log_scale).exp();
    Complex::with_val(prec, (s.mant.re, s.mant.im)) * scale
}

/// `pi` at the requested precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigComplex({:e} + {:e}i, {} bits)",
            self.value.real().to_f64(),
            self.value.imag().to_f64(),
            self.precision_bits()
        )
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.precision_bits()) / std::f64::consts::LOG2_10) as usize;
        write!(
            f,
            "{} + {}i",
            self.value.real().to_string_radix(10, Some(digits)),
            self.value.imag().to_string_radix(10, Some(digits))
        )
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                let p = self.binary_prec(rhs);
                BigComplex {
                    value: Complex::with_val(p, &self.value $op &rhs.value),
                }
            }
        }
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { value: -self.value }
    }
}
