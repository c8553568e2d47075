//! Airy-type uniform expansion of `theta_n(uz; a)`:
//!
//! `theta_n(uz; a) = u^(1/6) e^(-(u+a+2) pi i/2) (2^a pi n!/Gamma(n+a-1))^(1/2)
//!   (zeta/f)^(1/4) (uz)^(n+a/2-1) e^(uz) [Ai(u^(2/3) zeta) A + Ai'(u^(2/3) zeta) B]`
//!
//! with the coefficient functions `A`, `B` expanded away from the turning
//! point in exponential form and near it by the regular expansions, whose
//! coefficients are continued across the removable singularity at `z1` by a
//! discrete Cauchy integral.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::airy::{airy_big_l, airy_coeffs_f64, airy_scaled};
use crate::bigcomplex::BigComplex;
use crate::error::{Error, Result};
use crate::mapping::{MapPoint, Side, StokesBranch};
use crate::oracle;
use crate::params::ScaledComplex;
use crate::problem::{CircleSamples, Problem};

type C = Complex64;

/// Largest supported truncation order `S` (needs `E_{S+1}` from the tables).
pub const MAX_ORDER: usize = 7;
/// Default truncation order.
pub const DEFAULT_ORDER: usize = 6;
/// Default number of Cauchy nodes on the near-regime circle.
pub const DEFAULT_CAUCHY_POINTS: usize = 128;
/// Working precision of [`ab_oracle`] in bits.
pub const ORACLE_BITS: u32 = 256;
/// Agreement demanded between the Airy representations in [`ab_oracle`].
pub const REPRESENTATION_TOL: f64 = 1e-10;

/// The constants `d_1, d_3, ...` of the odd part of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct DTable {
    /// `d[k] = d_{2k+1}`.
    pub d: Vec<f64>,
    /// Number of constants.
    pub s: usize,
}

impl DTable {
    /// `d_j` for odd `j` (zero for even `j`).
    pub fn odd(&self, j: usize) -> f64 {
        if j % 2 == 1 {
            self.d.get(j / 2).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }
}

fn closed_form_poly(k: usize) -> (i64, i64, &'static [i64]) {
    // (numerator factor, denominator, polynomial coefficients in alpha)
    match k {
        0 => (-1, 48, &[1]),
        1 => (7, 5760, &[3, 3, 1]),
        2 => (-31, 80640, &[5, 10, 10, 5, 1]),
        _ => (127, 430080, &[7, 21, 35, 35, 21, 7, 1]),
    }
}

/// `d_{2k+1}(alpha)` from the closed forms, `k = 0..=3`, exactly.
pub fn d_closed_exact(alpha: &Rational, k: usize) -> Rational {
    assert!(k < 4, "closed forms exist for d_1..d_7 only");
    let (num, den, poly) = closed_form_poly(k);
    let mut p = Rational::new();
    for c in poly.iter().rev() {
        p = p * alpha + Rational::from(*c);
    }
    let opa = Rational::from(alpha + 1u32);
    let power = opa.pow(2 * k as i32 + 1);
    Rational::from(num) * alpha * p / (power * Rational::from(den))
}

/// `d_{2k+1}(alpha)` from the closed forms, `k = 0..=3`.
pub fn d_closed(alpha: f64, k: usize) -> f64 {
    let (num, den, poly) = closed_form_poly(k);
    let p = poly.iter().rev().fold(0.0, |acc, &c| acc * alpha + c as f64);
    num as f64 * alpha * p / (den as f64 * (1.0 + alpha).powi(2 * k as i32 + 1))
}

/// Bernoulli numbers `B_0..=B_m` (with `B_1 = -1/2`).
fn bernoulli(m: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for k in 1..=m {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(bj * &binom);
            binom = binom * (k as u64 + 1 - j as u64) / (j as u64 + 1);
        }
        b.push(-acc / Integer::from(k + 1));
    }
    b
}

/// `d_{2k+1}(alpha)` from the Stirling series of the log-gamma ratio:
/// `d_{2m-1} = B_{2m}(1/2) (1 - (1+alpha)^(1-2m)) / (4m(2m-1))` with
/// `B_{2m}(1/2) = -(1 - 2^(1-2m)) B_{2m}`.
pub fn d_stirling(alpha: f64, k: usize) -> f64 {
    let m = k + 1;
    let b = bernoulli(2 * m);
    let b_half = -(1.0 - 2f64.powi(1 - 2 * m as i32)) * b[2 * m].to_f64();
    b_half / (4.0 * m as f64 * (2.0 * m as f64 - 1.0)) * (1.0 - (1.0 + alpha).powi(1 - 2 * m as i32))
}

/// The first `s` constants: closed forms through `d_7`, Stirling series
/// beyond.
pub fn d_coeffs(alpha: f64, s: usize) -> DTable {
    let d = (0..s)
        .map(|k| if k < 4 { d_closed(alpha, k) } else { d_stirling(alpha, k) })
        .collect();
    DTable { d, s }
}

fn check_order(s: usize) -> Result<()> {
    if s == 0 || s > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "truncation order S = {s} must lie in 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `(calE_s, calE~_s)` for `s = 0..=s_max` (index 0 holds zero):
/// `calE_s = E_s + (-1)^s a_s/(s xi^s)` and likewise with `a~_s`.
pub fn cal_e(problem: &Problem, pt: &MapPoint, s_max: usize) -> Result<(Vec<C>, Vec<C>)> {
    if pt.xi.norm() < 1e-10 {
        return Err(Error::TurningPoint(pt.z));
    }
    let e = problem.e_values(pt);
    if s_max >= e.len() {
        return Err(Error::InvalidParameter(format!(
            "coefficient order {s_max} exceeds the table order {}",
            e.len() - 1
        )));
    }
    let coeffs = airy_coeffs_f64();
    let mut ce = vec![C::new(0.0, 0.0); s_max + 1];
    let mut ct = ce.clone();
    let mut xi_pow = C::new(1.0, 0.0);
    for s in 1..=s_max {
        xi_pow *= pt.xi;
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        let denom = s as f64 * xi_pow;
        ce[s] = e[s] + sign * coeffs[s].0 / denom;
        ct[s] = e[s] + sign * coeffs[s].1 / denom;
    }
    Ok((ce, ct))
}

/// Which expansion produced a coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Away,
    Near,
}

/// Coefficient functions `A`, `B` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbValue {
    pub a: C,
    pub b: C,
    pub regime: Regime,
    pub order: usize,
}

fn reflect(v: AbValue) -> AbValue {
    AbValue {
        a: v.a.conj(),
        b: v.b.conj(),
        ..v
    }
}

/// Default radius of the near-regime disk about `z1`.
pub fn default_r0(problem: &Problem) -> f64 {
    0.5 * problem.params.sigma
}

/// Exponential-form expansion of `A` and `B` truncated at order `S`.
pub fn ab_away(problem: &Problem, z: C, s: usize) -> Result<AbValue> {
    check_order(s)?;
    if z.im < 0.0 {
        return ab_away(problem, z.conj(), s).map(reflect);
    }
    if (z - problem.z1()).norm() < 1e-6 * problem.z1().norm() {
        return Err(Error::TurningPoint(z));
    }
    let pt = problem.point(z)?;
    let (ce, ct) = cal_e(problem, &pt, s)?;
    let u = problem.params.u;
    let d = d_coeffs(problem.params.alpha, s.div_ceil(2));
    let split = |c: &[C]| {
        let even: C = (1..=s / 2).map(|k| c[2 * k] / u.powi(2 * k as i32)).sum();
        let odd: C = (0..s.div_ceil(2))
            .map(|k| (c[2 * k + 1] + d.d[k]) / u.powi(2 * k as i32 + 1))
            .sum();
        (even, odd)
    };
    let (ev, od) = split(&ct);
    let a = ev.exp() * od.cosh();
    let (ev, od) = split(&ce);
    let b = ev.exp() * od.sinh() / (u.cbrt() * pt.zeta_sqrt);
    Ok(AbValue {
        a,
        b,
        regime: Regime::Away,
        order: s,
    })
}

/// Coefficients of the regular expansions at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    pub cal_e: Vec<C>,
    pub cal_e_tilde: Vec<C>,
    pub q: Vec<C>,
    pub q_tilde: Vec<C>,
    /// `A_s`, `s = 1..`; index 0 holds zero.
    pub a: Vec<C>,
    /// `B_s`, `s = 0..`.
    pub b: Vec<C>,
}

/// `q_s = e_s + (1/s) sum_{j=1}^{s-1} j e_j q_{s-j}`, so that
/// `sum q_s t^s = exp(sum e_s t^s) - 1`.
fn q_recursion(e: &[C]) -> Vec<C> {
    let mut q = vec![C::new(0.0, 0.0); e.len()];
    for s in 1..e.len() {
        let mut acc = C::new(0.0, 0.0);
        for j in 1..s {
            acc += j as f64 * e[j] * q[s - j];
        }
        q[s] = e[s] + acc / s as f64;
    }
    q
}

/// Regular-expansion coefficients `A_s = q~_{2s}` and
/// `B_s = zeta^(-1/2) q_{2s+1}` for `s <= S/2`, with the odd inputs shifted
/// by `d_{2s+1}`.
pub fn q_coeffs(problem: &Problem, z: C, s: usize) -> Result<QTable> {
    check_order(s)?;
    if z.im < 0.0 {
        let t = q_coeffs(problem, z.conj(), s)?;
        let c = |v: Vec<C>| v.into_iter().map(|x| x.conj()).collect::<Vec<_>>();
        return Ok(QTable {
            cal_e: c(t.cal_e),
            cal_e_tilde: c(t.cal_e_tilde),
            q: c(t.q),
            q_tilde: c(t.q_tilde),
            a: c(t.a),
            b: c(t.b),
        });
    }
    let pt = problem.point(z)?;
    let top = 2 * (s / 2) + 1;
    let (ce, ct) = cal_e(problem, &pt, top)?;
    let d = d_coeffs(problem.params.alpha, top.div_ceil(2));
    let shift = |c: &[C]| -> Vec<C> { c.iter().enumerate().map(|(j, v)| v + d.odd(j)).collect() };
    let q = q_recursion(&shift(&ce));
    let q_tilde = q_recursion(&shift(&ct));
    let a = (0..=s / 2)
        .map(|k| if k == 0 { C::new(0.0, 0.0) } else { q_tilde[2 * k] })
        .collect();
    let b = (0..=s / 2).map(|k| q[2 * k + 1] / pt.zeta_sqrt).collect();
    Ok(QTable {
        cal_e: ce,
        cal_e_tilde: ct,
        q,
        q_tilde,
        a,
        b,
    })
}

fn sum_regular(u: f64, a_s: &[C], b_s: &[C]) -> (C, C) {
    let a = C::new(1.0, 0.0)
        + a_s
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| v / u.powi(2 * k as i32))
            .sum::<C>();
    let b = b_s
        .iter()
        .enumerate()
        .map(|(k, v)| v / u.powi(2 * k as i32))
        .sum::<C>()
        / u.powf(4.0 / 3.0);
    (a, b)
}

fn circle_samples(problem: &Problem, s: usize, r0: f64, m: usize) -> Result<Arc<CircleSamples>> {
    let key = (s, r0.to_bits(), m);
    if let Some(c) = problem.circles.lock().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let z1 = problem.z1();
    let mut nodes = Vec::with_capacity(m);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for k in 0..m {
        let mut theta = 2.0 * PI * (k as f64 + 0.5) / m as f64;
        let mut t = z1 + C::from_polar(r0, theta);
        while problem.mapping.side(t) == Side::OnCut {
            theta += 1e-7;
            t = z1 + C::from_polar(r0, theta);
        }
        let q = q_coeffs(problem, t, s)?;
        nodes.push(t);
        a.push(q.a);
        b.push(q.b);
    }
    let samples = Arc::new(CircleSamples { nodes, a, b });
    problem
        .circles
        .lock()
        .expect("cache lock")
        .insert(key, samples.clone());
    Ok(samples)
}

/// Barycentric form of the trapezoidal Cauchy integral on a circle about
/// `center`: `f(z) = sum w_m f_m/(t_m - z) / sum w_m/(t_m - z)` with
/// `w_m = t_m - center`.
pub fn cauchy_interpolate(center: C, nodes: &[C], values: &[C], z: C) -> C {
    let mut num = C::new(0.0, 0.0);
    let mut den = C::new(0.0, 0.0);
    for (t, v) in nodes.iter().zip(values) {
        if *t == z {
            return *v;
        }
        let k = (t - center) / (t - z);
        num += k * v;
        den += k;
    }
    num / den
}

/// Regular expansions of `A`, `B` inside the disk `|z - z1| < r0`, the
/// coefficients reconstructed from `M` samples on its boundary.
pub fn ab_near(problem: &Problem, z: C, s: usize, r0: f64, m: usize) -> Result<AbValue> {
    check_order(s)?;
    if z.im < 0.0 {
        return ab_near(problem, z.conj(), s, r0, m).map(reflect);
    }
    let z1 = problem.z1();
    if (z - z1).norm() >= r0 {
        return Err(Error::InvalidParameter(format!(
            "z = {z} lies outside the near-regime disk of radius {r0}"
        )));
    }
    if r0 >= z1.im {
        return Err(Error::InvalidParameter(format!(
            "near-regime radius {r0} reaches the real axis"
        )));
    }
    let c = circle_samples(problem, s, r0, m)?;
    let pick = |rows: &[Vec<C>], k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let a_s: Vec<C> = (0..c.a[0].len())
        .map(|k| cauchy_interpolate(z1, &c.nodes, &pick(&c.a, k), z))
        .collect();
    let b_s: Vec<C> = (0..c.b[0].len())
        .map(|k| cauchy_interpolate(z1, &c.nodes, &pick(&c.b, k), z))
        .collect();
    let (a, b) = sum_regular(problem.params.u, &a_s, &b_s);
    Ok(AbValue {
        a,
        b,
        regime: Regime::Near,
        order: s,
    })
}

/// Largest change of `A`, `B` from [`ab_near`] when `M` is doubled.
pub fn ab_near_aliasing(problem: &Problem, z: C, s: usize, r0: f64, m: usize) -> Result<f64> {
    let x = ab_near(problem, z, s, r0, m)?;
    let y = ab_near(problem, z, s, r0, 2 * m)?;
    Ok(((x.a - y.a).norm() / y.a.norm()).max((x.b - y.b).norm() / y.b.norm()))
}

/// `A`, `B` in the exponential form away from `z1` and the regular form
/// inside the disk of radius `r0 = sigma/2`.
pub fn ab(problem: &Problem, z: C, s: usize) -> Result<AbValue> {
    let r0 = default_r0(problem);
    let zu = if z.im < 0.0 { z.conj() } else { z };
    if (zu - problem.z1()).norm() < r0 {
        ab_near(problem, z, s, r0, DEFAULT_CAUCHY_POINTS)
    } else {
        ab_away(problem, z, s)
    }
}

/// The regular expansions of `A`, `B` everywhere: direct coefficients
/// outside the disk, Cauchy reconstruction inside.
pub fn ab_regular(problem: &Problem, z: C, s: usize) -> Result<AbValue> {
    let r0 = default_r0(problem);
    let zu = if z.im < 0.0 { z.conj() } else { z };
    if (zu - problem.z1()).norm() < r0 {
        return ab_near(problem, z, s, r0, DEFAULT_CAUCHY_POINTS);
    }
    let q = q_coeffs(problem, z, s)?;
    let (a, b) = sum_regular(problem.params.u, &q.a, &q.b);
    Ok(AbValue {
        a,
        b,
        regime: Regime::Near,
        order: s,
    })
}

/// `(A, B)` recovered from the exact solutions through three Airy
/// representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbOracle {
    /// From `w^(0)`, `w^(1)` with `Ai_1`, `Ai`.
    pub upper: (C, C),
    /// From `w^(0)`, `w^(-1)` with `Ai_-1`, `Ai`.
    pub lower: (C, C),
    /// From `w^(1)`, `w^(-1)` with `Ai_-1`, `Ai_1`.
    pub alternative: (C, C),
}

impl AbOracle {
    /// Largest relative disagreement between the representations.
    pub fn mismatch(&self) -> f64 {
        let rel = |x: C, y: C| (x - y).norm() / y.norm();
        let (u, l, t) = (self.upper, self.lower, self.alternative);
        [rel(l.0, u.0), rel(l.1, u.1), rel(t.0, u.0), rel(t.1, u.1)]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn cis(prec: u32, angle: &Float) -> Complex {
    Complex::with_val(prec, (Float::with_val(prec, angle.cos_ref()), Float::with_val(prec, angle.sin_ref())))
}

fn cis_pi(prec: u32, fraction: &Rational) -> Complex {
    let angle = Float::with_val(prec, Constant::Pi) * Float::with_val(prec, fraction);
    cis(prec, &angle)
}

fn to_c(z: &Complex) -> C {
    C::new(z.real().to_f64(), z.imag().to_f64())
}

/// Reference values of `A`, `B` from the exact solutions, at `prec` bits.
pub fn ab_oracle_all(problem: &Problem, z: C, prec: u32) -> Result<AbOracle> {
    if z.im < 0.0 {
        let r = ab_oracle_all(problem, z.conj(), prec)?;
        let c = |p: (C, C)| (p.0.conj(), p.1.conj());
        return Ok(AbOracle {
            upper: c(r.upper),
            lower: c(r.lower),
            alternative: c(r.alternative),
        });
    }
    let params = &problem.params;
    let pt = problem.point(z)?;
    if pt.xi.norm() < 1e-10 {
        return Err(Error::TurningPoint(z));
    }
    let zb = BigComplex::from_c64(z, prec);
    let xi = problem.mapping.xi_big(params, &zb)?.into_rug();
    let zr = zb.as_rug();
    let al = Float::with_val(prec, params.alpha_exact());
    let w = Complex::with_val(prec, zr + Float::with_val(prec, &al / 2u32)).square() + Float::with_val(prec, &al + 1u32);
    let mut big_z = w.sqrt();
    if (to_c(&big_z) - pt.big_z).norm() > (to_c(&big_z) + pt.big_z).norm() {
        big_z = -big_z;
    }
    let mut p = (Complex::with_val(prec, &xi * Rational::from((3, 2)))).ln() / 3u32;
    p = p.exp();
    if pt.side == Side::Left && pt.xi.im < 0.0 {
        p *= cis_pi(prec, &Rational::from((2, 3)));
    }
    let zeta = Complex::with_val(prec, p.square_ref());
    let h = (Complex::with_val(prec, &p * zr) / &big_z).sqrt();
    let u = Float::with_val(prec, params.u_exact());
    let u23 = Float::with_val(prec, u.cbrt_ref()).square();
    let arg = Complex::with_val(prec, &zeta * &u23);
    let (ai, aip) = airy_big_l(0, &arg, prec);
    let (ai1, aip1) = airy_big_l(1, &arg, prec);
    let (aim, aipm) = airy_big_l(-1, &arg, prec);

    let uz = BigComplex::from_rug(Complex::with_val(prec, zr * &u));
    let w0 = oracle::w0_direct(params, &uz)?.into_rug();
    let w1 = oracle::w1_direct(params, &uz)?.into_rug();
    let wm = oracle::w_minus1_default(params, &uz)?.into_rug();

    let n = params.n;
    let fact = Float::with_val(prec, Integer::from(Integer::factorial(n)));
    let gamma = oracle::gamma_n_a_1(params, prec);
    let mut c = cis_pi(prec, params.a_exact()) / &fact;
    if n % 2 == 1 {
        c = -c;
    }
    let e = |num: i64, den: u64| cis_pi(prec, &Rational::from((num, den)));
    let two_pi_h = Complex::with_val(prec, Float::with_val(prec, Constant::Pi) * 2u32 / &h);
    let lam1 = e(-1, 6) / &gamma;
    let combine = |c1: &Complex, x1: &Complex, y1: &Complex, c2: &Complex, x2: &Complex, y2: &Complex| {
        let t1 = Complex::with_val(prec, c1 * x1) * y1;
        let t2 = Complex::with_val(prec, c2 * x2) * y2;
        Complex::with_val(prec, &two_pi_h * (t1 - t2))
    };
    let c_up = Complex::with_val(prec, &c * e(1, 6));
    let c_lo = Complex::with_val(prec, &c * e(1, 2));
    let i_over_g = Complex::with_val(prec, (Float::new(prec), Float::with_val(prec, 1u32) / &gamma));
    let e_m = e(-1, 6);
    let e_p = e(1, 6);
    let a_up = combine(&c_up, &w0, &aip1, &lam1, &w1, &aip);
    let b_up = -combine(&c_up, &w0, &ai1, &lam1, &w1, &ai);
    let a_lo = combine(&c_lo, &w0, &aipm, &e_m, &wm, &aip);
    let b_lo = -combine(&c_lo, &w0, &aim, &e_m, &wm, &ai);
    let a_alt = combine(&i_over_g, &w1, &aipm, &e_p, &wm, &aip1);
    let b_alt = -combine(&i_over_g, &w1, &aim, &e_p, &wm, &ai1);

    // e^{5 pi i/6} e^{(u+a) pi i/2} u^{1/6} 2^{1-n} (pi/(2^a n! Gamma(n+a-1)))^{1/2}
    let turns = Rational::from((5, 6)) + (params.u_exact() + params.a_exact().clone()) / 2u32;
    let two_a = Float::with_val(prec, Float::with_val(prec, params.a_exact()) * Float::with_val(prec, Constant::Log2)).exp();
    let root = (Float::with_val(prec, Constant::Pi) / (two_a * &fact * &gamma)).sqrt();
    let u16 = Float::with_val(prec, u.ln_ref()) / 6u32;
    let pow2 = Float::with_val(prec, 2u32).pow(1 - params.n as i32);
    let modulus = u16.exp() * root * pow2;
    let pref = cis_pi(prec, &turns) * modulus;
    let q = |x: Complex| to_c(&Complex::with_val(prec, x / &pref));
    Ok(AbOracle {
        upper: (q(a_up), q(b_up)),
        lower: (q(a_lo), q(b_lo)),
        alternative: (q(a_alt), q(b_alt)),
    })
}

/// Reference `(A, B)` from the upper representation, checked against the
/// other two. The working precision starts at [`ORACLE_BITS`] plus the bits
/// lost to the exponential sizes `exp(+-u xi)` of the terms and is doubled
/// until the representations agree.
pub fn ab_oracle(problem: &Problem, z: C) -> Result<(C, C)> {
    let xi = problem.point(z)?.xi;
    let guard = (2.0 * problem.params.u * xi.norm() / std::f64::consts::LN_2).ceil() as u32;
    let mut prec = ORACLE_BITS + guard;
    loop {
        let r = ab_oracle_all(problem, z, prec)?;
        let m = r.mismatch();
        if m <= REPRESENTATION_TOL {
            return Ok(r.upper);
        }
        if prec >= 16 * (ORACLE_BITS + guard) {
            return Err(Error::RepresentationMismatch(format!(
                "Airy representations of A, B differ by {m:e} at z = {z} with {prec} bits"
            )));
        }
        prec *= 2;
    }
}

/// `(zeta/f)^(1/4) = (zeta^(1/2) z/Z)^(1/2)`; at the turning point, where
/// it is analytic, by the mean over a small circle.
fn zeta_over_f_quarter(problem: &Problem, z: C, pt: Option<&MapPoint>) -> Result<C> {
    let z1 = problem.z1();
    if let Some(pt) = pt.filter(|_| (z - z1).norm() > 1e-6 * z1.norm()) {
        return Ok((pt.zeta_sqrt * z / pt.big_z).sqrt());
    }
    let rho = 1e-3 * z1.norm();
    let m = 32;
    let mut nodes = Vec::with_capacity(m);
    let mut vals = Vec::with_capacity(m);
    for k in 0..m {
        let t = z1 + C::from_polar(rho, 2.0 * PI * (k as f64 + 0.5) / m as f64);
        let q = problem.point(t)?;
        nodes.push(t);
        vals.push(q.zeta_sqrt * t / q.big_z);
    }
    Ok(cauchy_interpolate(z1, &nodes, &vals, z).sqrt())
}

/// Reduces `r` half turns to an angle in `[0, 2 pi)`.
fn half_turn_angle(r: Rational) -> f64 {
    let q = Rational::from(&r / 2u32).floor();
    PI * (r - q * 2u32).to_f64()
}

/// Evaluates the uniform expansion with given coefficient functions.
pub fn theta_from_ab(problem: &Problem, z: C, a: C, b: C) -> Result<ScaledComplex> {
    if z.im < 0.0 {
        let r = theta_from_ab(problem, z.conj(), a.conj(), b.conj())?;
        return Ok(ScaledComplex::new(r.mant.conj(), r.log_scale));
    }
    if z == C::new(0.0, 0.0) {
        return Err(Error::PoleAtZero);
    }
    let params = &problem.params;
    let pt = problem.point(z).ok();
    let h = zeta_over_f_quarter(problem, z, pt.as_ref())?;
    let zeta = match &pt {
        Some(p) => p.zeta,
        None => C::new(0.0, 0.0),
    };
    let u = params.u;
    let n = f64::from(params.n);
    let prec = 128;
    let lg = |x: Rational| Float::with_val(prec, x).ln_gamma().to_f64();
    let ln_ratio = lg(Rational::from(params.n + 1)) - lg(params.a_exact().clone() + params.n - 1u32);
    let log_mod = u.ln() / 6.0 + 0.5 * (params.a * std::f64::consts::LN_2 + PI.ln() + ln_ratio);
    let phase = -half_turn_angle((params.u_exact() + params.a_exact().clone() + 2u32) / 2u32);
    let uz = u * z;
    let power = (n + 0.5 * params.a - 1.0) * uz.ln();
    let w = u.powf(2.0 / 3.0) * zeta;
    let air = airy_scaled(0, w);
    let mant = air.ai * a + air.aip * b;
    Ok(ScaledComplex::from_log(C::new(log_mod, phase) + power + uz)
        .mul_c64(h)
        .mul(ScaledComplex::new(mant, air.ln_scale)))
}

/// `theta_n(uz; a)` from the uniform expansion truncated at order `S`.
pub fn theta_airy(problem: &Problem, z: C, s: usize) -> Result<ScaledComplex> {
    let v = ab(problem, z, s)?;
    theta_from_ab(problem, z, v.a, v.b)
}

/// [`theta_airy`] with the regular expansions of `A`, `B`.
pub fn theta_airy_regular(problem: &Problem, z: C, s: usize) -> Result<ScaledComplex> {
    let v = ab_regular(problem, z, s)?;
    theta_from_ab(problem, z, v.a, v.b)
}

/// `theta_n(uz; a)` from the direct sum.
pub fn theta_reference(problem: &Problem, z: C) -> BigComplex {
    theta_reference_with(problem, z, oracle::default_precision_bits())
}

/// [`theta_reference`] at `prec` bits.
pub fn theta_reference_with(problem: &Problem, z: C, prec: u32) -> BigComplex {
    let zb = BigComplex::from_c64(z, prec);
    let u = Float::with_val(prec, problem.params.u_exact());
    let uz = BigComplex::from_rug(Complex::with_val(prec, zb.as_rug() * &u));
    oracle::theta_direct(&problem.params, &uz)
}

/// One sample of a relative-error scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPoint {
    /// Curve parameter (`z` on the real line, `tau` on the Stokes curve).
    pub t: f64,
    pub z: C,
    pub theta: C,
    pub approx: C,
    /// `log10 |(theta - approx)/theta|`.
    pub omega: f64,
    /// Whether the sample sits next to a zero of `theta`.
    pub cusp: bool,
}

fn omega_value(exact: &BigComplex, approx: ScaledComplex) -> (C, C, f64) {
    let prec = exact.precision_bits().max(128);
    let a = crate::bigcomplex::scaled_to_rug(&approx, prec);
    let diff = Complex::with_val(prec, exact.as_rug() - &a);
    let num = Float::with_val(prec, diff.abs_ref()).to_f64();
    let den = exact.abs_f64();
    let rel = if den > 0.0 && num.is_finite() {
        Float::with_val(prec, diff.abs_ref()) / exact.abs_float()
    } else {
        Float::with_val(prec, f64::INFINITY)
    };
    let omega = rel.log10().to_f64();
    (exact.to_c64(), BigComplex::from_rug(a).to_c64(), omega)
}

/// Marks samples with `|theta_i| < 1e-8 max(|theta_{i-1}|, |theta_{i+1}|)`.
pub fn flag_cusps(abs_theta: &[f64]) -> Vec<bool> {
    (0..abs_theta.len())
        .map(|i| {
            let left = if i > 0 { abs_theta[i - 1] } else { 0.0 };
            let right = abs_theta.get(i + 1).copied().unwrap_or(0.0);
            abs_theta[i] == 0.0 || abs_theta[i] < 1e-8 * left.max(right)
        })
        .collect()
}

/// `Omega = log10 |(theta - Theta_S)/theta|` at one point.
pub fn omega(problem: &Problem, z: C, s: usize) -> Result<f64> {
    let approx = theta_airy(problem, z, s)?;
    Ok(omega_value(&theta_reference(problem, z), approx).2)
}

/// One scan sample against a reference at `prec` bits, together with
/// `ln |theta|` for cusp detection.
pub fn omega_sample(problem: &Problem, t: f64, z: C, approx: ScaledComplex, prec: u32) -> (OmegaPoint, f64) {
    let exact = theta_reference_with(problem, z, prec);
    let ln_abs = exact.abs_float().ln().to_f64();
    let (theta, approx, omega) = omega_value(&exact, approx);
    let p = OmegaPoint {
        t,
        z,
        theta,
        approx,
        omega,
        cusp: false,
    };
    (p, ln_abs)
}

/// [`flag_cusps`] on `ln |theta|`, so that overflowing magnitudes still work.
pub fn flag_cusps_log(ln_abs: &[f64]) -> Vec<bool> {
    let shift = ln_abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = ln_abs.iter().map(|m| (m - shift).exp()).collect();
    if scaled.iter().all(|v| *v > 0.0) || ln_abs.len() < 2 {
        return flag_cusps(&scaled);
    }
    (0..ln_abs.len())
        .map(|i| {
            let l = if i > 0 { ln_abs[i - 1] } else { f64::NEG_INFINITY };
            let r = ln_abs.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
            ln_abs[i] < l.max(r) + 1e-8f64.ln()
        })
        .collect()
}

fn scan<F>(problem: &Problem, pts: &[(f64, C)], approx: F) -> Result<Vec<OmegaPoint>>
where
    F: Fn(C) -> Result<ScaledComplex>,
{
    let prec = oracle::default_precision_bits();
    let mut out = Vec::with_capacity(pts.len());
    let mut mags = Vec::with_capacity(pts.len());
    for &(t, z) in pts {
        let (p, m) = omega_sample(problem, t, z, approx(z)?, prec);
        out.push(p);
        mags.push(m);
    }
    for (p, c) in out.iter_mut().zip(flag_cusps_log(&mags)) {
        p.cusp = c;
    }
    Ok(out)
}

/// `Omega` on the points `zs` (parameter = real part).
pub fn omega_scan(problem: &Problem, zs: &[C], s: usize) -> Result<Vec<OmegaPoint>> {
    let pts: Vec<(f64, C)> = zs.iter().map(|z| (z.re, *z)).collect();
    scan(problem, &pts, |z| theta_airy(problem, z, s))
}

/// `tau_0 = arg z1 = pi/2 + arctan(alpha/(2 sigma))`.
pub fn tau0(problem: &Problem) -> f64 {
    let p = &problem.params;
    0.5 * PI + (p.alpha / (2.0 * p.sigma)).atan()
}

/// The point `z(tau) = r(tau) e^{i tau}` of the Stokes curve `AH`.
pub fn z_on_ah(problem: &Problem, tau: f64) -> Result<C> {
    let t0 = tau0(problem);
    if !(t0 - 1e-12..=PI + 1e-12).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau} lies outside [{t0}, pi]"
        )));
    }
    let line = problem.stokes(StokesBranch::AH)?;
    if (tau - t0).abs() < 1e-12 {
        return Ok(problem.z1());
    }
    if (PI - tau).abs() < 1e-12 {
        return Ok(*line.points.last().expect("nonempty"));
    }
    // starting radius from the traced polyline
    let dir = C::from_polar(1.0, tau);
    let mut r = line
        .points
        .iter()
        .min_by(|a, b| {
            let da = (a.arg() - tau).abs();
            let db = (b.arg() - tau).abs();
            da.total_cmp(&db)
        })
        .map(|p| p.norm())
        .expect("nonempty");
    for _ in 0..60 {
        let z = dir * r;
        let pt = problem.point(z)?;
        let slope = (pt.big_z / z * dir).re;
        let step = pt.xi.re / slope;
        r -= step;
        if step.abs() < 1e-13 * r {
            return Ok(dir * r);
        }
    }
    Err(Error::NoConvergence(format!("Stokes curve point at tau = {tau}")))
}

/// `Omega-hat` at one `tau` on the Stokes curve, regular expansions.
pub fn omega_hat(problem: &Problem, tau: f64, s: usize) -> Result<f64> {
    let z = z_on_ah(problem, tau)?;
    let approx = theta_airy_regular(problem, z, s)?;
    Ok(omega_value(&theta_reference(problem, z), approx).2)
}

/// `Omega-hat` on the given `tau` values.
pub fn omega_hat_scan(problem: &Problem, taus: &[f64], s: usize) -> Result<Vec<OmegaPoint>> {
    let pts = taus
        .iter()
        .map(|&t| z_on_ah(problem, t).map(|z| (t, z)))
        .collect::<Result<Vec<_>>>()?;
    scan(problem, &pts, |z| theta_airy_regular(problem, z, s))
}

/// Coefficients `c_-1, c_0, c_1` of the Laurent expansion about `z1` of
/// `sqrt(2 sigma i) (z - z1)^(1/2) (E_1 + d_1)`, the square root branch
/// following `Z`, from `m` samples on the circle of radius `rho`.
pub fn laurent_e1(problem: &Problem, rho: f64, m: usize) -> Result<[C; 3]> {
    let z1 = problem.z1();
    let sigma = problem.params.sigma;
    let d1 = d_closed(problem.params.alpha, 0);
    let root = C::new(0.0, 2.0 * sigma).sqrt();
    let mut c = [C::new(0.0, 0.0); 3];
    for k in 0..m {
        let eps = C::from_polar(rho, 2.0 * PI * (k as f64 + 0.5) / m as f64);
        let pt = problem.point(z1 + eps)?;
        let e1 = problem.e_values(&pt)[1];
        let mut r = root * eps.sqrt();
        if (r - pt.big_z).norm() > (r + pt.big_z).norm() {
            r = -r;
        }
        let g = r * (e1 + d1);
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += g * eps.powi(1 - j as i32);
        }
    }
    Ok(c.map(|v| v / m as f64))
}

/// Closed forms of the leading coefficients `5(sigma+i)^2 i/96`,
/// `(alpha - 6 sigma i)/(128 sigma)`, `(18 sigma + 31 alpha i)/(1024(1+alpha))`.
pub fn laurent_e1_closed_form(alpha: f64) -> [C; 3] {
    let sigma = (1.0 + alpha).sqrt();
    let i = C::new(0.0, 1.0);
    [
        5.0 * (sigma + i).powi(2) * i / 96.0,
        (alpha - 6.0 * sigma * i) / (128.0 * sigma),
        (18.0 * sigma + 31.0 * alpha * i) / (1024.0 * (1.0 + alpha)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ProblemParams;

    fn problem(n: u32, a: f64) -> Problem {
        Problem::new(&ProblemParams::new(n, a).unwrap()).unwrap()
    }

    fn rel_scaled(a: ScaledComplex, b: &BigComplex) -> f64 {
        let prec = b.precision_bits();
        let x = crate::bigcomplex::scaled_to_rug(&a, prec);
        BigComplex::from_rug(x).rel_diff(b)
    }

    #[test]
    fn d_closed_forms() {
        assert!((d_closed(1.0, 0) + 1.0 / 96.0).abs() < 1e-17);
        assert_eq!(d_closed_exact(&Rational::from(1), 1), Rational::from((49, 46080)));
        for k in 0..4 {
            assert_eq!(d_closed(0.0, k), 0.0);
            for al in [-0.5, 0.1, 1.0, 3.0] {
                let a = d_closed(al, k);
                let b = d_stirling(al, k);
                assert!((a - b).abs() < 1e-15 * (1.0 + a.abs()), "k = {k}, alpha = {al}");
            }
        }
        assert_eq!(d_stirling(0.0, 6), 0.0);
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(8);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[8], Rational::from((-1, 30)));
        assert_eq!(b[3], Rational::new());
    }

    #[test]
    fn cal_e_difference_is_airy_term() {
        let p = problem(20, 1.2);
        let pt = p.point(C::new(2.0, 0.0)).unwrap();
        let (ce, ct) = cal_e(&p, &pt, 3).unwrap();
        let diff = ce[1] - ct[1];
        assert!((diff + (1.0 / 6.0) / pt.xi).norm() < 1e-15);
        let e1 = p.e_values(&pt)[1];
        assert!((ce[1] - (e1 - (5.0 / 72.0) / pt.xi)).norm() < 1e-15);
    }

    #[test]
    fn cal_e_vanishes_at_infinity() {
        let p = problem(20, 1.2);
        let pt = p.point(C::new(1e7, 0.0)).unwrap();
        let (ce, ct) = cal_e(&p, &pt, 4).unwrap();
        for s in 1..=4 {
            assert!(ce[s].norm() < 1e-6 && ct[s].norm() < 1e-6);
        }
    }

    #[test]
    fn q_recursion_is_exponential_series() {
        let e = vec![C::new(0.0, 0.0), C::new(0.3, 0.1), C::new(-0.2, 0.05), C::new(0.1, -0.4)];
        let q = q_recursion(&e);
        assert!((q[1] - e[1]).norm() < 1e-16);
        assert!((q[2] - (e[2] + 0.5 * e[1] * q[1])).norm() < 1e-16);
        // exp(sum e_s t^s) at small t
        let t = 1e-3;
        let lhs = (e[1] * t + e[2] * t * t + e[3] * t * t * t).exp();
        let rhs = 1.0 + q[1] * t + q[2] * t * t + q[3] * t * t * t;
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn leading_b_matches_regular_b0() {
        let p = problem(20, 1.2);
        let z = C::new(2.0, 0.0);
        let q = q_coeffs(&p, z, 6).unwrap();
        let pt = p.point(z).unwrap();
        let (ce, _) = cal_e(&p, &pt, 1).unwrap();
        let b0 = (ce[1] + d_closed(p.params.alpha, 0)) / pt.zeta_sqrt;
        assert!((q.b[0] - b0).norm() < 1e-14 * b0.norm());
    }

    #[test]
    fn exponential_and_regular_forms_agree_to_higher_order() {
        // the two truncations differ at O(u^-8)
        let gap = |n: u32, z: C| {
            let p = problem(n, 1.2);
            let x = ab_away(&p, z, 6).unwrap();
            let q = q_coeffs(&p, z, 6).unwrap();
            let (a, b) = sum_regular(p.params.u, &q.a, &q.b);
            ((x.a - a).norm(), (x.b - b).norm() / b.norm())
        };
        for z in [C::new(2.0, 0.0), C::new(-1.0, 1.5)] {
            let (a20, b20) = gap(20, z);
            let (_, b80) = gap(80, z);
            assert!(a20 < 1e-10 && b20 < 1e-7, "{z}: {a20:e} {b20:e}");
            assert!(b80 < b20 / 1000.0, "{z}: {b20:e} {b80:e}");
        }
    }

    #[test]
    fn cauchy_reproduces_polynomials() {
        let z1 = C::new(0.3, 1.0);
        let nodes: Vec<C> = (0..64)
            .map(|k| z1 + C::from_polar(0.25, 2.0 * PI * (k as f64 + 0.5) / 64.0))
            .collect();
        let vals: Vec<C> = nodes.iter().map(|t| (t - z1).powi(2)).collect();
        assert!(cauchy_interpolate(z1, &nodes, &vals, z1).norm() < 1e-12);
        let z = z1 + C::new(0.1, -0.05);
        assert!((cauchy_interpolate(z1, &nodes, &vals, z) - (z - z1).powi(2)).norm() < 1e-12);
    }

    #[test]
    fn handshake_on_the_circle() {
        let p = problem(20, 1.2);
        let r0 = default_r0(&p);
        let z1 = p.z1();
        for k in 0..16 {
            let d = C::from_polar(1.0, 2.0 * PI * k as f64 / 16.0 + 0.1);
            let near = ab_near(&p, z1 + d * 0.999 * r0, 6, r0, DEFAULT_CAUCHY_POINTS).unwrap();
            let away = ab_away(&p, z1 + d * 1.001 * r0, 6).unwrap();
            assert!((near.a - away.a).norm() / away.a.norm() < 1e-5, "k = {k}");
        }
        let at = ab(&p, z1, 6).unwrap();
        assert!(at.a.is_finite() && at.b.is_finite());
        assert_eq!(at.regime, Regime::Near);
        assert!(ab_near_aliasing(&p, z1 + 0.1, 6, r0, 64).unwrap() < 1e-8);
    }

    #[test]
    fn oracle_representations_agree() {
        let p = problem(20, 1.2);
        let r = ab_oracle_all(&p, C::new(2.0, 0.0), ORACLE_BITS).unwrap();
        assert!(r.mismatch() < 1e-10, "{:e}", r.mismatch());
        let (a, b) = r.upper;
        let x = ab_away(&p, C::new(2.0, 0.0), 6).unwrap();
        assert!((x.a - a).norm() / a.norm() < 1e-6);
        assert!((x.b - b).norm() / b.norm() < 1e-6);
    }

    #[test]
    fn oracle_ab_reproduces_theta() {
        let p = problem(20, 1.2);
        for z in [C::new(2.0, 0.0), C::new(-1.0, 0.7)] {
            let (a, b) = ab_oracle(&p, z).unwrap();
            let t = theta_from_ab(&p, z, a, b).unwrap();
            let e = rel_scaled(t, &theta_reference(&p, z));
            assert!(e < 1e-12, "{z}: {e:e}");
        }
    }

    #[test]
    fn theta_airy_accuracy_and_realness() {
        let p = problem(20, 1.2);
        let z = C::new(2.0, 0.0);
        let t = theta_airy(&p, z, 6).unwrap();
        assert!(rel_scaled(t, &theta_reference(&p, z)) < 1e-6);
        assert!(t.mant.im.abs() / t.mant.norm() < 1e-10);
    }

    #[test]
    fn theta_airy_near_turning_point_is_continuous() {
        let p = problem(20, 1.2);
        let z1 = p.z1();
        let inside = theta_airy(&p, z1 + C::new(0.0, 0.01), 6).unwrap();
        let exact = theta_reference(&p, z1 + C::new(0.0, 0.01));
        assert!(rel_scaled(inside, &exact) < 1e-5);
        let at = theta_airy(&p, z1, 6).unwrap();
        assert!(rel_scaled(at, &theta_reference(&p, z1)) < 1e-5);
    }

    #[test]
    fn reflection() {
        let p = problem(20, 1.2);
        for z in [C::new(1.0, 0.5), C::new(-3.0, 2.0)] {
            let a = theta_airy(&p, z, 6).unwrap();
            let b = theta_airy(&p, z.conj(), 6).unwrap();
            assert!((a.mant - b.mant.conj()).norm() < 1e-13 && a.log_scale == b.log_scale);
        }
    }

    #[test]
    fn stokes_parameterisation() {
        let p = problem(20, 1.2);
        assert!((z_on_ah(&p, tau0(&p)).unwrap() - p.z1()).norm() < 1e-15);
        let q = problem(20, 2.0);
        assert!((tau0(&q) - 0.5 * PI).abs() < 1e-15);
        let z = z_on_ah(&p, 0.5 * (tau0(&p) + PI)).unwrap();
        assert!(p.point(z).unwrap().xi.re.abs() < 1e-10);
    }

    #[test]
    fn cusp_flags() {
        let f = flag_cusps(&[1.0, 2.0, 1e-9, 3.0, 1.0]);
        assert_eq!(f, vec![false, false, true, false, false]);
    }
}
