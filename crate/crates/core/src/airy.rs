//! Complex Airy functions `Ai_l(w) = Ai(w exp(-2 pi i l/3))`, `l = 0, +1, -1`,
//! and the coefficients `a_s`, `a~_s` of the exponent form of their
//! asymptotic expansions
//!
//! `Ai(w)  ~ exp(-xi + sum (-1)^s a_s/(s xi^s)) / (2 sqrt(pi) w^(1/4))`,
//! `Ai'(w) ~ -w^(1/4) exp(-xi + sum (-1)^s a~_s/(s xi^s)) / (2 sqrt(pi))`,
//!
//! with `xi = (2/3) w^(3/2)` and `|arg w| <= 2 pi/3`.
//!
//! Derivatives are always taken with respect to `w`, so the derivative of
//! `Ai_l` carries the factor `exp(-2 pi i l/3)`.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

type C = Complex64;

/// `|w|` at and below which the Maclaurin series is used.
pub const CROSSOVER_RADIUS: f64 = 10.0;

/// Number of exponent coefficients available to the optimally truncated
/// asymptotic expansion.
const ASYMPTOTIC_TERMS: usize = 120;

/// Exact coefficients `a_s`, `a~_s` for `s = 1..=max_order` (index 0 unused).
#[derive(Debug, Clone, PartialEq)]
pub struct AiryCoeffTable {
    pub a: Vec<Rational>,
    pub a_tilde: Vec<Rational>,
    pub max_order: usize,
}

fn airy_recursion(seed: Rational, order: usize) -> Vec<Rational> {
    let mut a = vec![Rational::new(), seed.clone(), seed];
    for s in 2..order {
        let mut next = &a[s] * Rational::from((s as u64 + 1, 2u64));
        let mut conv = Rational::new();
        for j in 1..s {
            conv += Rational::from(&a[j] * &a[s - j]);
        }
        next += conv / 2u32;
        a.push(next);
    }
    a.truncate(order + 1);
    a
}

/// Builds `a_s` and `a~_s` through order `order` from the seeds
/// `a_1 = a_2 = 5/72` and `a~_1 = a~_2 = -7/72`.
pub fn airy_coeffs(order: usize) -> Result<AiryCoeffTable> {
    if order < 2 {
        return Err(Error::InvalidParameter(format!(
            "Airy coefficient order {order} must be at least 2"
        )));
    }
    Ok(AiryCoeffTable {
        a: airy_recursion(Rational::from((5, 72)), order),
        a_tilde: airy_recursion(Rational::from((-7, 72)), order),
        max_order: order,
    })
}

/// `(a_s, a~_s)` as `f64`, index 0 unused.
pub fn airy_coeffs_f64() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let t = airy_coeffs(ASYMPTOTIC_TERMS).expect("order >= 2");
        t.a.iter()
            .zip(&t.a_tilde)
            .map(|(x, y)| (x.to_f64(), y.to_f64()))
            .collect()
    })
}

/// `Ai` and its derivative stored as `(ai, aip) * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: C,
    pub aip: C,
    pub ln_scale: f64,
}

impl AiryValue {
    /// Unscaled `(Ai, Ai')` (may overflow or underflow).
    pub fn value(&self) -> (C, C) {
        let s = self.ln_scale.exp();
        (self.ai * s, self.aip * s)
    }
}

fn rotation(l: i32) -> C {
    C::from_polar(1.0, -2.0 * PI * f64::from(l) / 3.0)
}

/// Rotates `w` by `exp(-2 pi i l/3)`, keeping the argument in `(-pi, pi]`.
fn rotate(w: C, l: i32) -> C {
    let mut arg = w.arg() - 2.0 * PI * f64::from(l) / 3.0;
    while arg > PI {
        arg -= 2.0 * PI;
    }
    while arg <= -PI {
        arg += 2.0 * PI;
    }
    C::from_polar(w.norm(), arg)
}

/// `(Ai_l(w), d/dw Ai_l(w))` in double precision.
pub fn airy_eval(l: i32, w: C) -> (C, C) {
    airy_scaled(l, w).value()
}

/// `Ai_l(w)` and `d/dw Ai_l(w)` with an exponential scale factor split off.
pub fn airy_scaled(l: i32, w: C) -> AiryValue {
    if l == 0 {
        return airy_scaled_base(w);
    }
    let r = rotation(l);
    let v = airy_scaled_base(rotate(w, l));
    AiryValue {
        ai: v.ai,
        aip: v.aip * r,
        ln_scale: v.ln_scale,
    }
}

fn airy_scaled_base(w: C) -> AiryValue {
    if w.norm() <= CROSSOVER_RADIUS {
        let (ai, aip) = airy_series(w);
        return AiryValue { ai, aip, ln_scale: 0.0 };
    }
    if w.arg().abs() <= 2.0 * PI / 3.0 {
        return airy_asymptotic(w).expect("sector checked");
    }
    // Ai(w) = e^{pi i/3} Ai_1(w) + e^{-pi i/3} Ai_{-1}(w)
    let p = airy_asymptotic(rotate(w, 1)).expect("rotated into sector");
    let m = airy_asymptotic(rotate(w, -1)).expect("rotated into sector");
    let scale = p.ln_scale.max(m.ln_scale);
    let fp = (p.ln_scale - scale).exp();
    let fm = (m.ln_scale - scale).exp();
    let e1 = C::from_polar(1.0, PI / 3.0);
    let em1 = C::from_polar(1.0, -PI / 3.0);
    AiryValue {
        ai: e1 * p.ai * fp + em1 * m.ai * fm,
        aip: em1 * p.aip * fp + e1 * m.aip * fm,
        ln_scale: scale,
    }
}

/// Exponent-form asymptotic expansion, optimally truncated, for
/// `|arg w| <= 2 pi/3`. The scale is `exp(-Re xi)`.
pub fn airy_asymptotic(w: C) -> Result<AiryValue> {
    if w.arg().abs() > 2.0 * PI / 3.0 + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "asymptotic Airy expansion used outside |arg w| <= 2 pi/3 at w = {w}"
        )));
    }
    let xi = 2.0 / 3.0 * w.powf(1.5);
    let (sa, st) = exponent_sums(xi);
    let q = w.powf(0.25);
    let norm = 2.0 * PI.sqrt();
    let phase = C::from_polar(1.0, -xi.im);
    Ok(AiryValue {
        ai: phase * sa.exp() / (norm * q),
        aip: -phase * q * st.exp() / norm,
        ln_scale: -xi.re,
    })
}

/// Truncated sums `sum (-1)^s a_s/(s xi^s)` for both sequences, each stopped
/// before its terms start to grow.
fn exponent_sums(xi: C) -> (C, C) {
    let table = airy_coeffs_f64();
    let inv = -1.0 / xi;
    let mut sums = [C::new(0.0, 0.0); 2];
    for (idx, sum) in sums.iter_mut().enumerate() {
        let mut power = C::new(1.0, 0.0);
        let mut prev = f64::INFINITY;
        for (s, &(a, at)) in table.iter().enumerate().skip(1) {
            power *= inv;
            let c = if idx == 0 { a } else { at };
            let term = power * (c / s as f64);
            let size = term.norm();
            if size > prev || !size.is_finite() {
                break;
            }
            *sum += term;
            prev = size;
            if size <= 1e-18 * sum.norm() {
                break;
            }
        }
    }
    (sums[0], sums[1])
}

/// `(Ai(w), Ai'(w))` by the Maclaurin series, rounded to double precision.
pub fn airy_series(w: C) -> (C, C) {
    let wb = Complex::with_val(64, (w.re, w.im));
    let (ai, aip) = airy_big(&wb, 64);
    (to_c64(&ai), to_c64(&aip))
}

fn to_c64(z: &Complex) -> C {
    C::new(z.real().to_f64(), z.imag().to_f64())
}

/// Extra bits lost to cancellation in the series: the largest term is about
/// `exp(|xi|)` while the result may be as small as `exp(-|xi|)`.
fn series_guard_bits(r: f64) -> u32 {
    let xi = 2.0 / 3.0 * r.powf(1.5);
    (2.0 * xi / LN_2).ceil() as u32 + 8
}

/// `(Ai(w), Ai'(w))` by the Maclaurin series with relative accuracy about
/// `2^-prec`. The series is summed at `prec` plus enough guard bits to cover
/// cancellation, so this is usable for any `|w|` at a cost growing like
/// `|w|^(3/2)`.
pub fn airy_big(w: &Complex, prec: u32) -> (Complex, Complex) {
    let r = Float::with_val(64, w.abs_ref()).to_f64();
    let wp = prec + series_guard_bits(r) + 16;
    let w = Complex::with_val(wp, w);
    let w3 = Complex::with_val(wp, w.square_ref()) * &w;
    let w3_abs = Float::with_val(64, w3.abs_ref()).to_f64();

    // f = sum t_k, g = sum s_k, with derivative series df, dg
    let mut t = Complex::with_val(wp, 1);
    let mut s = w.clone();
    let mut dt = Complex::with_val(wp, w.square_ref()) / 2u32;
    let mut ds = Complex::with_val(wp, 1);
    let mut f = t.clone();
    let mut g = s.clone();
    let mut df = dt.clone();
    let mut dg = ds.clone();
    let mut max_term = 1.0f64.max(r).max(r * r / 2.0);
    let tiny = (-(f64::from(wp) - 8.0) * LN_2).exp();
    let mut k: u64 = 0;
    loop {
        let k3 = 3 * k;
        t *= &w3;
        t /= Float::with_val(wp, (k3 + 2) * (k3 + 3));
        s *= &w3;
        s /= Float::with_val(wp, (k3 + 3) * (k3 + 4));
        dt *= &w3;
        dt /= Float::with_val(wp, (k3 + 3) * (k3 + 5));
        ds *= &w3;
        ds /= Float::with_val(wp, (k3 + 1) * (k3 + 3));
        f += &t;
        g += &s;
        df += &dt;
        dg += &ds;
        k += 1;
        let size = [&t, &s, &dt, &ds]
            .iter()
            .map(|x| Float::with_val(64, x.abs_ref()).to_f64())
            .fold(0.0f64, f64::max);
        max_term = max_term.max(size);
        let ratio = w3_abs / ((3 * k + 1) as f64 * (3 * k + 2) as f64);
        if ratio < 0.5 && size <= tiny * max_term {
            break;
        }
    }
    let (c1, c2) = airy_origin(wp);
    let ai = Complex::with_val(wp, &f * &c1) - Complex::with_val(wp, &g * &c2);
    let aip = Complex::with_val(wp, &df * &c1) - Complex::with_val(wp, &dg * &c2);
    let ai = Complex::with_val(prec, ai);
    let aip = Complex::with_val(prec, aip);
    (ai, aip)
}

/// `Ai(0) = 3^(-2/3)/Gamma(2/3)` and `-Ai'(0) = 3^(-1/3)/Gamma(1/3)`.
fn airy_origin(prec: u32) -> (Float, Float) {
    let three = Float::with_val(prec, 3);
    let third = Float::with_val(prec, 1) / 3u32;
    let two_thirds = Float::with_val(prec, 2) / 3u32;
    let g13 = Float::with_val(prec, third.gamma_ref());
    let g23 = Float::with_val(prec, two_thirds.gamma_ref());
    let c1 = Float::with_val(prec, (&three).pow(&two_thirds)).recip() / g23;
    let c2 = Float::with_val(prec, (&three).pow(&third)).recip() / g13;
    (c1, c2)
}

/// `(Ai_l(w), d/dw Ai_l(w))` at high precision.
pub fn airy_big_l(l: i32, w: &Complex, prec: u32) -> (Complex, Complex) {
    if l == 0 {
        return airy_big(w, prec);
    }
    let angle = Float::with_val(prec + 16, Constant::Pi) * (-2 * l) / 3u32;
    let r = Complex::with_val(prec + 16, (angle.clone().cos(), angle.sin()));
    let wr = Complex::with_val(prec + 16, w * &r);
    let (ai, aip) = airy_big(&wr, prec);
    let aip = Complex::with_val(prec, aip * &r);
    (ai, aip)
}

/// Relative disagreement between the series and the asymptotic expansion
/// at `w` (`|arg w| <= 2 pi/3`), the larger of the `Ai` and `Ai'` values.
pub fn crossover_disagreement(w: C) -> Result<f64> {
    let (ai, aip) = airy_series(w);
    let (ba, bp) = airy_asymptotic(w)?.value();
    Ok(((ai - ba).norm() / ai.norm()).max((aip - bp).norm() / aip.norm()))
}
