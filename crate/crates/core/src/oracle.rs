//! High-precision direct evaluation of `theta_n`, `w^(0)`, `w^(-1)`, `w^(1)`
//! and the connection-formula residual used as ground truth.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::bigcomplex::{digits_to_bits, pi, BigComplex, DEFAULT_DIGITS};
use crate::error::{Error, Result};
use crate::params::ProblemParams;

/// Extra bits carried on top of the caller's precision.
const GUARD_BITS: u32 = 32;
/// Ceiling on automatic precision escalation.
const MAX_PRECISION_BITS: u32 = 1 << 16;

/// Default oracle precision in bits (overridable through each call's input precision).
pub fn default_precision_bits() -> u32 {
    digits_to_bits(DEFAULT_DIGITS)
}

/// Exact coefficients `c_k = C(n,k) (n+a-1)_k / 2^k`, so that
/// `theta_n(z) = sum_k c_k z^(n-k)`.
pub fn theta_coefficients(params: &ProblemParams) -> Vec<Rational> {
    let n = params.n;
    let base = Rational::from(params.a_exact() + Integer::from(n)) - 1u32;
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = Rational::from(1u32);
    out.push(c.clone());
    for k in 0..n {
        // c_{k+1} = c_k (n-k)/(k+1) (n+a-1+k) / 2
        let factor = Rational::from(&base + Integer::from(k));
        c *= factor;
        c *= Rational::from((n - k, 2 * (k + 1)));
        out.push(c.clone());
    }
    out
}

/// Horner evaluation of `sum c_k z^(n-k)` and of the majorant `sum |c_k| |z|^(n-k)`.
fn horner(coeffs: &[Rational], z: &Complex, prec: u32) -> (Complex, Float) {
    let mut acc = Complex::with_val(prec, (0, 0));
    let az = Float::with_val(64, z.abs_ref());
    let mut mag = Float::with_val(64, 0);
    for c in coeffs {
        acc *= z;
        acc += Float::with_val(prec, c);
        mag *= &az;
        mag += Float::with_val(64, c).abs();
    }
    (acc, mag)
}

/// Bits lost to cancellation when a sum of magnitude `mag` evaluates to `value`.
fn lost_bits(mag: &Float, value: &Complex) -> u32 {
    let v = Float::with_val(64, value.abs_ref());
    if v.is_zero() {
        return MAX_PRECISION_BITS;
    }
    let ratio = Float::with_val(64, mag / &v);
    if ratio <= 1 {
        return 0;
    }
    ratio.log2().to_f64().ceil() as u32
}

/// Runs `eval(prec) -> (value, lost)` with increasing precision until the
/// result keeps at least `target` significant bits.
fn escalate<F>(target: u32, mut eval: F) -> Result<Complex>
where
    F: FnMut(u32) -> Result<(Complex, u32)>,
{
    let mut prec = target + GUARD_BITS;
    loop {
        let (value, lost) = eval(prec)?;
        if prec >= target + lost + 8 {
            return Ok(Complex::with_val(target, value));
        }
        let next = target + lost + 2 * GUARD_BITS;
        if next > MAX_PRECISION_BITS || next <= prec {
            return Err(Error::PrecisionInsufficient(format!(
                "cancellation of {lost} bits exceeds the escalation ceiling"
            )));
        }
        prec = next;
    }
}

/// `theta_n(z; a)` by direct finite summation with exact coefficients.
pub fn theta_direct(params: &ProblemParams, z: &BigComplex) -> BigComplex {
    let coeffs = theta_coefficients(params);
    theta_with_coefficients(&coeffs, z)
}

/// Same as [`theta_direct`] with precomputed coefficients.
pub fn theta_with_coefficients(coeffs: &[Rational], z: &BigComplex) -> BigComplex {
    let target = z.precision_bits();
    let zr = z.as_rug();
    let value = escalate(target, |prec| {
        let zp = Complex::with_val(prec, zr);
        let (v, mag) = horner(coeffs, &zp, prec);
        let lost = lost_bits(&mag, &v);
        Ok((v, lost.min(MAX_PRECISION_BITS / 2)))
    })
    .unwrap_or_else(|_| {
        // An exact zero of the polynomial: report it at the target precision.
        let (v, _) = horner(coeffs, &Complex::with_val(target, zr), target);
        v
    });
    BigComplex::from_rug(value)
}

/// Convenience: `theta_n(z)` at a double-precision point and default precision.
pub fn theta_direct_c64(params: &ProblemParams, z: Complex64) -> BigComplex {
    theta_direct(params, &BigComplex::from_c64(z, default_precision_bits()))
}

/// Principal power `z^p` for a real exponent `p` given as a high-precision value.
fn cpow(z: &Complex, p: &Float, prec: u32) -> Complex {
    let ln = Complex::with_val(prec, z.ln_ref());
    Complex::with_val(prec, ln * p).exp()
}

/// `w^(0)(z) = 2^(-n-a+1) z^(1-n-a/2) e^(-z) theta_n(z)`.
pub fn w0_direct(params: &ProblemParams, z: &BigComplex) -> Result<BigComplex> {
    if z.is_zero() {
        return Err(Error::InvalidParameter("w0_direct is undefined at z = 0".into()));
    }
    let prec = z.precision_bits() + GUARD_BITS;
    let zp = BigComplex::from_rug(Complex::with_val(prec, z.as_rug()));
    let theta = theta_direct(params, &zp);
    let a = Float::with_val(prec, params.a_exact());
    let n = Float::with_val(prec, params.n);
    let expo = Float::with_val(prec, 1 - n.clone() - a.clone() / 2u32);
    let two_pow = Float::with_val(prec, 2).pow(Float::with_val(prec, 1 - n - a));
    let mut v = cpow(zp.as_rug(), &expo, prec);
    v *= Complex::with_val(prec, -zp.as_rug()).exp();
    v *= theta.as_rug();
    v *= two_pow;
    Ok(BigComplex::from_rug(Complex::with_val(z.precision_bits(), v)))
}

/// Regularised Kummer series `M(A, b, x)/Gamma(b)` summed at precision `prec`.
/// Returns the sum and the number of bits lost to cancellation.
fn kummer_regularised(
    big_a: &Float,
    b: &Float,
    x: &Complex,
    tol_bits: u32,
    prec: u32,
) -> Result<(Complex, u32)> {
    let ax = Float::with_val(64, x.abs_ref()).to_f64();
    let abs_a = big_a.to_f64().abs();
    let bf = b.to_f64();
    let mut term = Complex::with_val(prec, (Float::with_val(prec, b.gamma_ref()).recip(), 0));
    let mut sum = term.clone();
    let mut max_abs = Float::with_val(64, term.abs_ref());
    let kmax = (20.0 * ax) as u64 + 100_000;
    let mut k: u64 = 0;
    loop {
        let kf = Float::with_val(prec, k);
        let num = Float::with_val(prec, big_a + &kf);
        let den = Float::with_val(prec, b + &kf) * Float::with_val(prec, &kf + 1u32);
        term *= x;
        term *= num;
        term /= den;
        sum += &term;
        let t_abs = Float::with_val(64, term.abs_ref());
        if t_abs > max_abs {
            max_abs = t_abs.clone();
        }
        k += 1;
        let kk = k as f64;
        let ratio = ax * (abs_a + kk) / ((bf + kk) * (kk + 1.0));
        if kk > ax && ratio < 0.5 {
            // tail <= |term| r/(1-r), compared with 2^-tol_bits |sum|
            let s_abs = Float::with_val(64, sum.abs_ref());
            if t_abs.is_zero() {
                break;
            }
            let tail = Float::with_val(64, &t_abs * (ratio / (1.0 - ratio)));
            if !s_abs.is_zero() {
                let gap = Float::with_val(64, s_abs / tail).log2().to_f64();
                if gap >= f64::from(tol_bits) {
                    break;
                }
            }
        }
        if k > kmax {
            return Err(Error::PrecisionInsufficient(format!(
                "Kummer series tail bound stagnates above 2^-{tol_bits} after {k} terms"
            )));
        }
    }
    Ok((sum.clone(), lost_bits(&max_abs, &sum)))
}

/// `w^(-1)(z) = z^(n+a/2) e^(-z) M(n+a-1, 2n+a, 2z)/Gamma(2n+a)`, summing the
/// regularised Kummer series until its geometric tail bound is below `tol`
/// relative to the partial sum.
pub fn w_minus1_direct(params: &ProblemParams, z: &BigComplex, tol: f64) -> Result<BigComplex> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    let tol_bits = (-tol.log2()).ceil().max(1.0) as u32;
    w_minus1_bits(params, z, tol_bits)
}

fn w_minus1_bits(params: &ProblemParams, z: &BigComplex, tol_bits: u32) -> Result<BigComplex> {
    let target = z.precision_bits();
    let zr = z.as_rug().clone();
    let a = params.a_exact().clone();
    let n = params.n;
    let value = escalate(target, |prec| {
        let big_a = Float::with_val(prec, Rational::from(&a + Integer::from(n)) - 1u32);
        let b = Float::with_val(prec, Rational::from(&a + Integer::from(2 * n)));
        let zp = Complex::with_val(prec, &zr);
        let x = Complex::with_val(prec, &zp * 2u32);
        let (m, lost) = kummer_regularised(&big_a, &b, &x, tol_bits.max(prec), prec)?;
        let expo = Float::with_val(prec, Float::with_val(prec, &a) / 2u32 + n);
        let mut v = if zp.real().is_zero() && zp.imag().is_zero() {
            Complex::with_val(prec, (0, 0))
        } else {
            cpow(&zp, &expo, prec)
        };
        v *= Complex::with_val(prec, -&zp).exp();
        v *= m;
        Ok((v, lost))
    })?;
    Ok(BigComplex::from_rug(value))
}

/// `w^(-1)` with the tail tolerance matched to the input precision.
pub fn w_minus1_default(params: &ProblemParams, z: &BigComplex) -> Result<BigComplex> {
    w_minus1_bits(params, z, z.precision_bits() + 4)
}

/// `(-1)^(n+1) e^(a pi i)/n!`, the coefficient of `w^(0)` in the connection formula.
pub fn connection_coefficient(params: &ProblemParams, prec: u32) -> Complex {
    let ap = Float::with_val(prec, params.a_exact()) * pi(prec);
    let phase = Complex::with_val(prec, (Float::with_val(prec, ap.cos_ref()), Float::with_val(prec, ap.sin_ref())));
    let fact = Float::with_val(prec, Integer::from(Integer::factorial(params.n)));
    let mut c = phase / fact;
    if params.n % 2 == 0 {
        c = -c;
    }
    c
}

/// `Gamma(n+a-1)` at precision `prec`.
pub fn gamma_n_a_1(params: &ProblemParams, prec: u32) -> Float {
    let x = Float::with_val(prec, Rational::from(params.a_exact() + Integer::from(params.n)) - 1u32);
    x.gamma()
}

/// `w^(1) = Gamma(n+a-1) [w^(-1) - (-1)^(n+1) (e^(a pi i)/n!) w^(0)]`.
pub fn w1_direct(params: &ProblemParams, z: &BigComplex) -> Result<BigComplex> {
    let target = z.precision_bits();
    let value = escalate(target, |prec| {
        let zp = z.with_precision(prec);
        let wm = w_minus1_default(params, &zp)?;
        let w0 = w0_direct(params, &zp)?;
        let t0 = Complex::with_val(prec, connection_coefficient(params, prec) * w0.as_rug());
        let diff = Complex::with_val(prec, wm.as_rug() - &t0);
        let mag = Float::with_val(64, wm.as_rug().abs_ref()).max(&Float::with_val(64, t0.abs_ref()));
        let lost = lost_bits(&mag, &diff);
        Ok((diff * gamma_n_a_1(params, prec), lost))
    })?;
    Ok(BigComplex::from_rug(value))
}

/// Routes available for an independent `w^(1)` in the residual check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W1Route {
    /// Taylor-series integration of the ODE from the recessive normalisation at `-inf`.
    OdeIntegration,
    /// No independent route configured.
    Unconfigured,
}

/// Coefficients of `w^(1) ~ 2^(-n-1) e^x x^rho sum c_k x^(-k)` at `x -> -inf`.
fn asymptotic_w1_start(params: &ProblemParams, x0: &Complex, prec: u32) -> (Complex, Complex) {
    let a = Float::with_val(prec, params.a_exact());
    let rho = Float::with_val(prec, &a / 2u32) - 1u32;
    let nh = Float::with_val(prec, &a / 2u32) + params.n;
    let mu = Float::with_val(prec, &nh * Float::with_val(prec, &nh - 1u32));
    let inv = Complex::with_val(prec, x0.recip_ref());
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let mut c = Float::with_val(prec, 1);
    let mut xk = Complex::with_val(prec, (1, 0));
    let mut sum = Complex::with_val(prec, (1, 0));
    // sum of c_k x^-k (rho - k)/x for the derivative
    let mut dsum = Complex::with_val(prec, &rho * &inv);
    let mut last = f64::INFINITY;
    for k in 1..100_000u32 {
        let kf = Float::with_val(prec, k);
        let f1 = Float::with_val(prec, &rho - &kf) + 1u32;
        let f2 = Float::with_val(prec, &rho - &kf);
        c = c * (f1 * f2 - &mu) / (kf * 2u32);
        xk *= &inv;
        let term = Complex::with_val(prec, &xk * &c);
        let tabs = Float::with_val(64, term.abs_ref()).to_f64();
        if tabs > last {
            break;
        }
        last = tabs;
        let d = Complex::with_val(prec, Float::with_val(prec, &rho - k) * &inv);
        dsum += Complex::with_val(prec, &term * &d);
        sum += &term;
        if Float::with_val(64, term.abs_ref()) < Float::with_val(64, &eps) {
            break;
        }
    }
    // prefactor 2^(-n-1) e^x x^rho
    let ln = Complex::with_val(prec, x0.ln_ref());
    let lpre = Complex::with_val(prec, &ln * &rho) + x0
        - Float::with_val(prec, Float::with_val(prec, 2).ln() * (params.n + 1));
    let pre = lpre.exp();
    let w = Complex::with_val(prec, &pre * &sum);
    let wp = Complex::with_val(prec, &pre * (Complex::with_val(prec, &sum + &dsum)));
    (w, wp)
}

/// One Taylor step of `x^2 w'' = (x^2 + (a-2) x + mu) w` from `xc` by `h`.
fn taylor_step(
    xc: &Complex,
    h: &Complex,
    w: &Complex,
    wp: &Complex,
    am2: &Float,
    mu: &Float,
    prec: u32,
) -> (Complex, Complex) {
    let xc2 = Complex::with_val(prec, xc.square_ref());
    let q0 = Complex::with_val(prec, &xc2 + Complex::with_val(prec, xc * am2)) + mu;
    let q1 = Complex::with_val(prec, xc * 2u32) + am2;
    let h2 = Complex::with_val(prec, h.square_ref());
    let h3 = Complex::with_val(prec, &h2 * h);
    let h4 = Complex::with_val(prec, h2.square_ref());
    let two_xc_h = Complex::with_val(prec, xc * h) * 2u32;
    let eps = Float::with_val(64, Float::i_exp(1, -(prec as i32) - 4));
    // beta_k = b_k h^k
    let mut beta: Vec<Complex> = vec![w.clone(), Complex::with_val(prec, wp * h)];
    let mut sum = Complex::with_val(prec, w + &beta[1]);
    let mut dsum = beta[1].clone();
    let mut small_run = 0;
    for k in 0..100_000usize {
        let kf = k as u32;
        let mut rhs = Complex::with_val(prec, &q0 * &h2) * &beta[k];
        rhs -= Complex::with_val(prec, &h2 * &beta[k]) * (kf * kf.saturating_sub(1));
        if k >= 1 {
            rhs += Complex::with_val(prec, &q1 * &h3) * &beta[k - 1];
        }
        if k >= 2 {
            rhs += Complex::with_val(prec, &h4 * &beta[k - 2]);
        }
        rhs -= Complex::with_val(prec, &two_xc_h * &beta[k + 1]) * ((kf + 1) * kf);
        let next = rhs / Complex::with_val(prec, &xc2 * ((kf + 2) * (kf + 1)));
        sum += &next;
        dsum += Complex::with_val(prec, &next * (kf + 2));
        let tabs = Float::with_val(64, next.abs_ref());
        let sabs = Float::with_val(64, sum.abs_ref());
        beta.push(next);
        if tabs <= Float::with_val(64, &sabs * &eps) {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let wp_new = dsum / h;
    (sum, wp_new)
}

/// Independent `w^(1)(z)` by high-precision Taylor integration of the ODE
/// from the recessive normalisation at `-inf`, along a path through the
/// upper half-plane (principal branches, `arg x = pi` at the start).
pub fn w1_ode(params: &ProblemParams, z: &BigComplex) -> Result<BigComplex> {
    if z.is_zero() {
        return Err(Error::InvalidParameter("w1_ode is undefined at z = 0".into()));
    }
    let prec = z.precision_bits() + 2 * GUARD_BITS;
    let a = Float::with_val(prec, params.a_exact());
    let nh = Float::with_val(prec, &a / 2u32) + params.n;
    let mu = Float::with_val(prec, &nh * Float::with_val(prec, &nh - 1u32));
    let am2 = Float::with_val(prec, &a - 2u32);
    let zc = z.to_c64();
    let r0 = f64::from(prec) * std::f64::consts::LN_2 / 2.0 + 2.0 * mu.to_f64().abs().sqrt() + 20.0;
    let height = zc.im.max(0.0) + 1.0;
    let x0 = Complex::with_val(prec, (-r0, 0));
    let waypoints = [
        Complex64::new(-r0, height),
        Complex64::new(zc.re, height),
    ];
    let (mut w, mut wp) = asymptotic_w1_start(params, &x0, prec);
    let mut xc = x0;
    let mut legs: Vec<Complex> = waypoints
        .iter()
        .map(|p| Complex::with_val(prec, (p.re, p.im)))
        .collect();
    legs.push(Complex::with_val(prec, z.as_rug()));
    for target in legs {
        loop {
            let d = Complex::with_val(prec, &target - &xc);
            let dist = Float::with_val(64, d.abs_ref()).to_f64();
            if dist == 0.0 {
                break;
            }
            let r = Float::with_val(64, xc.abs_ref()).to_f64();
            let hmax = (0.25 * r).min(2.0);
            if hmax < 1e-12 {
                return Err(Error::StepCollapse(Complex64::new(0.0, 0.0)));
            }
            let h = if dist <= hmax {
                d
            } else {
                d * Float::with_val(prec, hmax / dist)
            };
            let (w2, wp2) = taylor_step(&xc, &h, &w, &wp, &am2, &mu, prec);
            w = w2;
            wp = wp2;
            if dist <= hmax {
                xc = target.clone();
                break;
            }
            xc += h;
        }
    }
    Ok(BigComplex::from_rug(Complex::with_val(z.precision_bits(), w)))
}

/// Relative residual of the connection formula computed from independently
/// obtained solutions: `w^(-1)` from its series, `w^(0)` from the polynomial,
/// and `w^(1)` from ODE integration.
pub fn connection_residual(params: &ProblemParams, z: &BigComplex) -> Result<f64> {
    connection_residual_with(params, z, W1Route::OdeIntegration)
}

pub fn connection_residual_with(
    params: &ProblemParams,
    z: &BigComplex,
    route: W1Route,
) -> Result<f64> {
    if route == W1Route::Unconfigured {
        return Err(Error::Unavailable(
            "no independent route for w^(1) is configured".into(),
        ));
    }
    let target = z.precision_bits();
    let mut prec = target + GUARD_BITS;
    loop {
        let zp = z.with_precision(prec);
        let lhs = w_minus1_default(params, &zp)?;
        let w0 = w0_direct(params, &zp)?;
        let w1 = w1_ode(params, &zp)?;
        let t0 = Complex::with_val(prec, connection_coefficient(params, prec) * w0.as_rug());
        let t1 = Complex::with_val(prec, w1.as_rug() / gamma_n_a_1(params, prec));
        let mag = Float::with_val(64, t0.abs_ref()).max(&Float::with_val(64, t1.abs_ref()));
        let lost = lost_bits(&mag, lhs.as_rug());
        if prec >= target + lost + 8 {
            let rhs = Complex::with_val(prec, &t0 + &t1);
            let d = Complex::with_val(prec, lhs.as_rug() - &rhs);
            let num = Float::with_val(prec, d.abs_ref());
            let den = Float::with_val(prec, lhs.as_rug().abs_ref());
            return Ok(Float::with_val(prec, num / den).to_f64());
        }
        let next = target + lost + 2 * GUARD_BITS;
        if next > MAX_PRECISION_BITS {
            return Err(Error::PrecisionInsufficient(
                "connection residual needs more than the escalation ceiling".into(),
            ));
        }
        prec = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, a: f64) -> ProblemParams {
        ProblemParams::new(n, a).unwrap()
    }

    fn big(re: f64, im: f64) -> BigComplex {
        BigComplex::new(re, im, default_precision_bits())
    }

    #[test]
    fn theta_degree_zero_is_one() {
        let t = theta_direct(&p(0, 1.6), &big(0.7, 0.0));
        assert_eq!(t.to_c64(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn theta_degree_one_is_z_plus_half_a() {
        let prm = p(1, 2.5);
        let t = theta_direct(&prm, &big(0.3, -1.25));
        let want = Complex64::new(0.3 + 1.25, -1.25);
        assert!((t.to_c64() - want).norm() < 1e-15);
    }

    #[test]
    fn theta_degree_two_hand_expansion() {
        let t = theta_direct(&p(2, 2.0), &big(1.0, 0.0));
        assert!((t.to_c64() - Complex64::new(7.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn theta_at_zero_is_pochhammer_over_power_of_two() {
        for &a in &[1.2, 2.0, 5.0] {
            for n in 0..=40u32 {
                let prm = ProblemParams::unchecked(n, a);
                let t = theta_direct(&prm, &big(0.0, 0.0));
                let prec = default_precision_bits();
                let mut want = Float::with_val(prec, 1);
                let base = Float::with_val(prec, prm.a_exact()) + n - 1u32;
                for k in 0..n {
                    want *= Float::with_val(prec, &base + k);
                }
                want /= Float::with_val(prec, 2).pow(n);
                let got = t.re().clone();
                let rel = Float::with_val(prec, (got - &want) / &want).abs().to_f64();
                assert!(rel < 1e-45, "n={n} a={a} rel={rel}");
            }
        }
    }

    #[test]
    fn theta_conjugate_symmetry_is_exact() {
        let prm = p(20, 1.2);
        for &(x, y) in &[(2.0, 0.5), (-3.0, 1.0), (0.1, 4.0)] {
            let t = theta_direct(&prm, &big(x, y));
            let tc = theta_direct(&prm, &big(x, -y));
            assert_eq!(t.conj(), tc);
        }
    }

    #[test]
    fn w0_trivial_value() {
        let v = w0_direct(&p(0, 2.0), &big(1.0, 0.0)).unwrap();
        let want = (-1.0f64).exp() / 2.0;
        assert!((v.to_c64().re - want).abs() < 1e-15 && v.to_c64().im.abs() < 1e-30);
    }

    #[test]
    fn w0_zero_is_domain_error() {
        assert!(w0_direct(&p(3, 2.0), &big(0.0, 0.0)).is_err());
    }

    #[test]
    fn w0_recessive_normalisation() {
        let prm = p(5, 1.2);
        let x = 1.0e6;
        let v = w0_direct(&prm, &big(x, 0.0)).unwrap();
        let prec = default_precision_bits();
        let norm = Float::with_val(prec, 2).pow(Float::with_val(prec, 1.0 - 5.0 - 1.2))
            * Float::with_val(prec, x).pow(Float::with_val(prec, 1.0 - 0.6))
            * Float::with_val(prec, -x).exp();
        let ratio = Float::with_val(prec, v.re() / norm).to_f64();
        assert!((ratio - 1.0).abs() < 1e-4, "ratio {ratio}");
    }

    #[test]
    fn w0_conjugate_symmetry() {
        let prm = p(7, 1.2);
        let v = w0_direct(&prm, &big(-1.5, 2.0)).unwrap();
        let vc = w0_direct(&prm, &big(-1.5, -2.0)).unwrap();
        assert!(v.conj().rel_diff(&vc) < 1e-45);
    }

    #[test]
    fn w_minus1_small_z_limit() {
        let prm = p(4, 1.2);
        let z = 1e-12;
        let v = w_minus1_default(&prm, &big(z, 0.0)).unwrap();
        let prec = default_precision_bits();
        let lead = Float::with_val(prec, z).pow(Float::with_val(prec, 4.6))
            / Float::with_val(prec, 9.2).gamma();
        let ratio = Float::with_val(prec, v.re() / lead).to_f64();
        assert!((ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn w_minus1_stable_under_precision_doubling() {
        let prm = p(20, 1.2);
        let lo = w_minus1_default(&prm, &big(3.0, 0.0)).unwrap();
        let hi = w_minus1_default(&prm, &BigComplex::new(3.0, 0.0, 2 * default_precision_bits())).unwrap();
        assert!(lo.rel_diff(&hi) < 1e-48);
    }

    #[test]
    fn w_minus1_conjugate_symmetry() {
        let prm = p(10, 1.2);
        let v = w_minus1_default(&prm, &big(-2.0, 0.5)).unwrap();
        let vc = w_minus1_default(&prm, &big(-2.0, -0.5)).unwrap();
        assert!(v.conj().rel_diff(&vc) < 1e-45);
    }

    #[test]
    fn w1_direct_stable_under_precision_doubling() {
        let prm = p(20, 1.2);
        let lo = w1_direct(&prm, &big(-2.0, 0.5)).unwrap();
        let hi = w1_direct(&prm, &BigComplex::new(-2.0, 0.5, 2 * default_precision_bits())).unwrap();
        assert!(lo.rel_diff(&hi) < 1e-45);
    }

    #[test]
    fn w1_recessive_normalisation_on_negative_axis() {
        let prm = p(3, 1.2);
        let x = -400.0;
        let v = w1_direct(&prm, &big(x, 0.0)).unwrap();
        let prec = default_precision_bits();
        let zb = Complex::with_val(prec, (x, 0));
        let norm = cpow(&zb, &Float::with_val(prec, 0.6 - 1.0), prec)
            * Float::with_val(prec, x).exp()
            / Float::with_val(prec, 2).pow(4u32);
        let ratio = Complex::with_val(prec, v.as_rug() / norm);
        let r = Complex64::new(ratio.real().to_f64(), ratio.imag().to_f64());
        // two terms of the recessive expansion: 1 + ((rho)(rho - 1) - mu)/(2x)
        let (rho, mu) = (0.6 - 1.0, 3.6 * 2.6);
        let want = 1.0 + (rho * (rho - 1.0) - mu) / (2.0 * x);
        assert!((r - want).norm() < 1e-3, "ratio {r} want {want}");
    }

    #[test]
    fn w1_ode_matches_connection_route() {
        let prm = p(2, 2.0);
        let z = big(1.0, 0.0);
        let a = w1_ode(&prm, &z).unwrap();
        let b = w1_direct(&prm, &z).unwrap();
        assert!(a.rel_diff(&b) < 1e-40, "{}", a.rel_diff(&b));
    }

    #[test]
    fn residual_small_for_degree_two() {
        let r = connection_residual(&p(2, 2.0), &big(1.0, 0.0)).unwrap();
        assert!(r < 1e-30, "residual {r}");
    }

    #[test]
    fn residual_for_degree_zero() {
        let r = connection_residual(&p(0, 2.0), &big(0.5, 0.25)).unwrap();
        assert!(r < 1e-30, "residual {r}");
    }

    #[test]
    fn residual_decreases_with_precision() {
        let prm = p(10, 1.2);
        let lo = connection_residual(&prm, &BigComplex::new(-2.0, 0.5, digits_to_bits(25))).unwrap();
        let hi = connection_residual(&prm, &BigComplex::new(-2.0, 0.5, digits_to_bits(50))).unwrap();
        assert!(hi < lo, "lo {lo} hi {hi}");
    }

    #[test]
    fn residual_unavailable_without_route() {
        let r = connection_residual_with(&p(2, 2.0), &big(1.0, 0.0), W1Route::Unconfigured);
        assert!(matches!(r, Err(Error::Unavailable(_))));
    }
}
