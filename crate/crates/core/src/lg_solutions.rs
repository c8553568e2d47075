//! Liouville-Green solutions `W_0`, `W_1`, `W_-1^+`, `W_-1^-`, their matching
//! constants and computable error bounds.
//!
//! `w^(j)(uz; a) = C^(j) f^(-1/4) exp(+-u xi + sum (+-1)^s E_s/u^s) (1 + eta)`
//! with `f^(-1/4) = (z/Z)^(1/2)`. The bound on `eta` is
//! `|eta| <= (Phi/u^N) exp(Psi/u + Phi/u^N)`, where `Phi` and `Psi` are
//! integrals of `|F_k|` and `|F_k F_m|` with respect to `|d xi|` along a
//! path on which `Re xi` is monotone.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::bigcomplex::BigComplex;
use crate::error::{Error, Result};
use crate::mapping::{Side, StokesBranch};
use crate::params::{ProblemParams, ScaledComplex};
use crate::problem::Problem;

type C = Complex64;

/// One of the four LG solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LgSolution {
    /// Recessive at `+infinity`.
    W0,
    /// Recessive at `-infinity`.
    W1,
    /// Recessive at `0+`, growing exponent.
    WMinus1Plus,
    /// Recessive at `0-`, decaying exponent.
    WMinus1Minus,
}

/// Reference point of the error bound integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferencePoint {
    PlusInfinity,
    MinusInfinity,
    ZeroPlus,
    ZeroMinus,
}

impl LgSolution {
    /// Builds the solution from its index `j` and, for `j = -1`, a sign.
    pub fn from_index(j: i32, sign: Option<char>) -> Result<Self> {
        match (j, sign) {
            (0, None) => Ok(Self::W0),
            (1, None) => Ok(Self::W1),
            (-1, Some('+')) => Ok(Self::WMinus1Plus),
            (-1, Some('-')) => Ok(Self::WMinus1Minus),
            _ => Err(Error::InvalidParameter(format!(
                "no LG solution with j = {j} and sign {sign:?}"
            ))),
        }
    }

    /// Sign in front of `u xi`.
    pub fn exponent_sign(self) -> f64 {
        match self {
            Self::W0 | Self::WMinus1Minus => -1.0,
            Self::W1 | Self::WMinus1Plus => 1.0,
        }
    }

    pub fn reference(self) -> ReferencePoint {
        match self {
            Self::W0 => ReferencePoint::PlusInfinity,
            Self::W1 => ReferencePoint::MinusInfinity,
            Self::WMinus1Plus => ReferencePoint::ZeroPlus,
            Self::WMinus1Minus => ReferencePoint::ZeroMinus,
        }
    }
}

impl fmt::Display for LgSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::W0 => "0",
            Self::W1 => "1",
            Self::WMinus1Plus => "-1+",
            Self::WMinus1Minus => "-1-",
        })
    }
}

impl FromStr for LgSolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Self::W0),
            "1" => Ok(Self::W1),
            "-1+" | "m1+" => Ok(Self::WMinus1Plus),
            "-1-" | "m1-" => Ok(Self::WMinus1Minus),
            _ => Err(Error::InvalidParameter(format!("unknown LG solution '{s}'"))),
        }
    }
}

impl ReferencePoint {
    /// Sign of `Re xi` at the reference point (`+1` for `+infinity`).
    pub fn direction(self) -> f64 {
        match self {
            Self::PlusInfinity | Self::ZeroMinus => 1.0,
            Self::MinusInfinity | Self::ZeroPlus => -1.0,
        }
    }

    /// `Im xi` at the reference point.
    pub fn level(self, alpha: f64) -> f64 {
        match self {
            Self::PlusInfinity | Self::ZeroPlus => -0.5 * (1.0 + alpha) * PI,
            Self::MinusInfinity | Self::ZeroMinus => -0.5 * PI,
        }
    }

    fn reached(self, z: C) -> Option<bool> {
        let big = z.norm() > 1e8;
        let small = z.norm() < 1e-12;
        if !big && !small {
            return None;
        }
        Some(match self {
            Self::PlusInfinity => big && z.re > 0.0,
            Self::MinusInfinity => big && z.re < 0.0,
            Self::ZeroPlus => small && z.re > 0.0,
            Self::ZeroMinus => small && z.re < 0.0,
        })
    }
}

/// `ln|C|` and `arg C / pi` of a matching constant at precision `prec`.
fn matching_log(params: &ProblemParams, sol: LgSolution, prec: u32) -> (Float, Rational) {
    let al = Float::with_val(prec, params.alpha_exact());
    let u = Float::with_val(prec, params.u_exact());
    let one_al = Float::with_val(prec, &al + 1u32);
    let ln2 = Float::with_val(prec, Constant::Log2);
    let u_half = Float::with_val(prec, &u / 2u32);
    let ua_half = Float::with_val(prec, &u * &al) / 2u32;
    let two_u_opa = Float::with_val(prec, &u * &one_al) * 2u32;
    // ln of (e/(2u(1+alpha)))^{u alpha/2} and of its reciprocal
    let t_minus = Float::with_val(prec, &ua_half * (Float::with_val(prec, 1u32) - two_u_opa.clone().ln()));
    let t_plus = Float::with_val(prec, -&t_minus) - Float::with_val(prec, &ua_half * &ln2) * 2u32;
    let ln4opa = Float::with_val(prec, Float::with_val(prec, &one_al * 4u32).ln());
    let half_ln2 = Float::with_val(prec, &ln2 / 2u32);
    let ln_opa = Float::with_val(prec, one_al.ln_ref());
    let n = params.n;
    let l = match sol {
        LgSolution::W0 => -half_ln2 - Float::with_val(prec, &u_half * &ln4opa) + &t_minus,
        LgSolution::W1 => {
            let lq = Float::with_val(prec, &ln_opa - Float::with_val(prec, &ln2 * 2u32));
            -half_ln2 + Float::with_val(prec, &u_half * &lq) + &t_plus
        }
        LgSolution::WMinus1Plus => {
            let g = crate::oracle::gamma_n_a_1(params, prec);
            let lg = Float::with_val(prec, g.abs().ln());
            Float::with_val(prec, &u_half * &ln_opa) - Float::with_val(prec, &ln2 * (n + 1)) - lg + &t_plus
        }
        LgSolution::WMinus1Minus => {
            let lf = Float::with_val(prec, Float::with_val(prec, n + 1).ln_gamma_ref());
            -half_ln2 - Float::with_val(prec, &u_half * &ln4opa) - lf + &t_minus
        }
    };
    // u (1 + alpha) = u + a - 2, so the phase is +-(u + a - 2)/2 half turns
    let r = (params.u_exact() + params.a_exact().clone() - 2u32) / 2u32;
    let turns = match sol {
        LgSolution::W0 => -r,
        LgSolution::W1 | LgSolution::WMinus1Plus => r,
        LgSolution::WMinus1Minus => r + Rational::from((1, 2)),
    };
    (l, reduce_half_turns(turns))
}

/// Reduces an angle in half turns to `[0, 2)`.
fn reduce_half_turns(t: Rational) -> Rational {
    let q = Rational::from(&t / 2u32).floor();
    t - q * 2u32
}

/// The matching constant `C^(j)` at precision `prec`.
pub fn matching_constant_big(params: &ProblemParams, sol: LgSolution, prec: u32) -> BigComplex {
    let (l, turns) = matching_log(params, sol, prec + 32);
    let angle = Float::with_val(prec + 32, Constant::Pi) * Float::with_val(prec + 32, &turns);
    let m = l.exp();
    let (c, s) = (Float::with_val(prec + 32, angle.cos_ref()), Float::with_val(prec + 32, angle.sin_ref()));
    let v = Complex::with_val(prec, (Float::with_val(prec, &m * &c), Float::with_val(prec, &m * &s)));
    BigComplex::from_rug(v)
}

/// The matching constant in scaled form (no overflow at high degree).
pub fn matching_constant(params: &ProblemParams, sol: LgSolution) -> ScaledComplex {
    let (l, turns) = matching_log(params, sol, 128);
    let angle = PI * turns.to_f64();
    ScaledComplex::new(C::from_polar(1.0, angle), l.to_f64())
}

/// An LG approximation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgResult {
    /// Approximation to `w^(j)(uz; a)`.
    pub value: ScaledComplex,
    /// Truncation order `N` (the exponent sum runs to `N - 1`).
    pub order: usize,
    /// `sum_{s=1}^{N-1} (+-1)^s E_s/u^s`.
    pub exponent_sum: C,
    pub eta_bound: Option<f64>,
    /// Whether `z` lies in the validity region of the solution.
    pub in_region: bool,
}

fn check_order(problem: &Problem, order: usize) -> Result<()> {
    let max = problem.tables.order();
    if order < 2 || order > max {
        return Err(Error::InvalidParameter(format!(
            "truncation order N = {order} must lie in 2..={max}"
        )));
    }
    Ok(())
}

/// Evaluates the LG approximation of `w^(j)(uz; a)` truncated at order `N`.
/// Lower half-plane points are answered by reflection.
pub fn lg_eval(problem: &Problem, sol: LgSolution, order: usize, z: C) -> Result<LgResult> {
    check_order(problem, order)?;
    if z.im < 0.0 {
        let r = lg_eval(problem, sol, order, z.conj())?;
        return Ok(LgResult {
            value: ScaledComplex::new(r.value.mant.conj(), r.value.log_scale),
            exponent_sum: r.exponent_sum.conj(),
            ..r
        });
    }
    let pt = problem.point(z)?;
    if pt.xi.norm() < 1e-10 {
        return Err(Error::TurningPoint(z));
    }
    let e = problem.e_values(&pt);
    let u = problem.params.u;
    let sgn = sol.exponent_sign();
    let mut sum = C::new(0.0, 0.0);
    let mut factor = 1.0;
    for es in e.iter().take(order).skip(1) {
        factor *= sgn / u;
        sum += es * factor;
    }
    let fm14 = (z / pt.big_z).sqrt();
    let value = matching_constant(&problem.params, sol)
        .mul(ScaledComplex::from_log(sgn * u * pt.xi + sum))
        .mul_c64(fm14);
    Ok(LgResult {
        value,
        order,
        exponent_sum: sum,
        eta_bound: None,
        in_region: region_check(problem, sol, z),
    })
}

/// [`lg_eval`] with the error bound of the default path attached.
pub fn lg_eval_with_bound(problem: &Problem, sol: LgSolution, order: usize, z: C) -> Result<LgResult> {
    let mut r = lg_eval(problem, sol, order, z)?;
    r.eta_bound = Some(eta_bound(problem, sol, order, z)?.eta);
    Ok(r)
}

/// Error bound data along one path.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub phi: f64,
    pub psi: f64,
    pub eta: f64,
    /// Finite `xi`-plane vertices from the reference side to `xi(z)`.
    pub path: Vec<C>,
    pub reference: ReferencePoint,
    /// Whether the path starts with a ray from the reference point at
    /// infinite `Re xi`.
    pub infinite_ray: bool,
}

/// Integrals `I_k = int |F_k| |d xi|` and `J_km = int |F_k| |F_m| |d xi|`.
#[derive(Debug, Clone)]
struct PathIntegrals {
    n: usize,
    i: Vec<f64>,
    j: Vec<f64>,
}

impl PathIntegrals {
    fn new(n: usize) -> Self {
        Self {
            n,
            i: vec![0.0; n + 1],
            j: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    fn add(&mut self, weight: f64, f_abs: &[f64]) {
        for k in 1..=self.n {
            self.i[k] += weight * f_abs[k];
            for m in 1..=self.n {
                self.j[k * (self.n + 1) + m] += weight * f_abs[k] * f_abs[m];
            }
        }
    }

    fn pair(&self, k: usize, m: usize) -> f64 {
        self.j[k * (self.n + 1) + m]
    }

    /// `(Phi_N, Psi_N)`.
    fn phi_psi(&self, u: f64) -> (f64, f64) {
        let n = self.n;
        let mut phi = 2.0 * self.i[n];
        for s in 1..n {
            let mut inner = 0.0;
            for k in s..n {
                inner += self.pair(k, s + n - k - 1);
            }
            phi += inner / u.powi(s as i32);
        }
        let mut psi = 0.0;
        for s in 0..=n.saturating_sub(2) {
            psi += self.i[s + 1] / u.powi(s as i32);
        }
        (phi, 4.0 * psi)
    }
}

/// Gauss-Kronrod 15-point nodes and weights on `[-1, 1]`.
const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_W: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];

/// Follows the `z` preimage of a `xi`-plane path, continuing `Z` by
/// continuity, and accumulates the bound integrals.
struct Walker<'a> {
    problem: &'a Problem,
    z: C,
    big_z: C,
    acc: PathIntegrals,
    steps: usize,
}

const MAX_STEPS: usize = 200_000;

impl<'a> Walker<'a> {
    fn continued_z(&self, z: C, near: C) -> C {
        let al = self.problem.params.alpha;
        let r = ((z + 0.5 * al).powi(2) + 1.0 + al).sqrt();
        if (r - near).norm() <= (r + near).norm() {
            r
        } else {
            -r
        }
    }

    fn slope(&self, z: C, near: C) -> (C, C) {
        let zz = self.continued_z(z, near);
        (z / zz, zz)
    }

    /// Classical RK4 for `dz/dxi = z/Z` over a `xi` increment `h`.
    fn rk4(&self, z: C, zz: C, h: C) -> (C, C) {
        let (k1, _) = self.slope(z, zz);
        let (k2, _) = self.slope(z + 0.5 * h * k1, zz);
        let (k3, _) = self.slope(z + 0.5 * h * k2, zz);
        let (k4, _) = self.slope(z + h * k3, zz);
        let zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let zzn = self.continued_z(zn, zz);
        (zn, zzn)
    }

    fn step_length(&self) -> Result<f64> {
        let z1 = self.problem.z1();
        let dist = (self.z - z1).norm().min((self.z - z1.conj()).norm());
        if dist < 1e-6 {
            return Err(Error::Path(format!("path passes through the turning point near z = {}", self.z)));
        }
        Ok(0.05 * self.z.norm().min(dist) * (self.big_z / self.z).norm())
    }

    fn f_abs(&self, z: C, zz: C) -> Vec<f64> {
        self.problem.f_values_with(z, zz).iter().map(|v| v.norm()).collect()
    }

    /// Walks a straight `xi` step of length `h` in direction `d`.
    fn step(&mut self, d: C, h: f64) -> Result<()> {
        let half = 0.5 * h;
        let row = |x: f64, w: f64, this: &mut Self| {
            let (zt, zzt) = this.rk4(this.z, this.big_z, d * x);
            let fa = this.f_abs(zt, zzt);
            this.acc.add(w * half, &fa);
        };
        for k in 0..7 {
            row(half * (1.0 - GK_X[k]), GK_W[k], self);
            row(half * (1.0 + GK_X[k]), GK_W[k], self);
        }
        row(half, GK_W[7], self);
        let (zm, zzm) = self.rk4(self.z, self.big_z, d * half);
        let (zn, zzn) = self.rk4(zm, zzm, d * half);
        if !zn.re.is_finite() || !zn.im.is_finite() {
            return Err(Error::Path("path preimage diverged".into()));
        }
        if zn.im < -1e-9 * (1.0 + zn.norm()) {
            return Err(Error::Path(format!("path preimage leaves the upper half-plane at z = {zn}")));
        }
        self.z = zn;
        self.big_z = zzn;
        self.steps += 1;
        if self.steps > MAX_STEPS {
            return Err(Error::NoConvergence("bound path needs too many steps".into()));
        }
        Ok(())
    }

    fn segment(&mut self, from: C, to: C) -> Result<()> {
        let len = (to - from).norm();
        if len == 0.0 {
            return Ok(());
        }
        let d = (to - from) / len;
        let mut done = 0.0;
        while done < len {
            let h = self.step_length()?.min(len - done);
            self.step(d, h)?;
            done += h;
        }
        Ok(())
    }

    fn ray(&mut self, d: C, reference: ReferencePoint) -> Result<()> {
        loop {
            if let Some(ok) = reference.reached(self.z) {
                if ok {
                    return Ok(());
                }
                return Err(Error::Path(format!(
                    "ray in the xi plane ends at z = {} instead of the reference point {reference:?}",
                    self.z
                )));
            }
            let h = self.step_length()?;
            self.step(d, h)?;
        }
    }
}

/// Checks that `Re xi` is monotone from the reference side to `xi(z)`.
fn check_monotone(path: &[C], direction: f64) -> Result<()> {
    for w in path.windows(2) {
        // moving away from the reference, Re xi must move against `direction`
        if direction * (w[1].re - w[0].re) > 1e-12 * (1.0 + w[0].re.abs()) {
            return Err(Error::Monotonicity(format!(
                "Re xi moves toward the reference between {} and {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Error bound along an explicit finite polygon `path` of `xi` vertices
/// ending at `xi(z)`; the first vertex plays the role of the reference
/// point.
pub fn eta_bound_along(problem: &Problem, sol: LgSolution, order: usize, z: C, path: &[C]) -> Result<BoundReport> {
    bound_impl(problem, sol, order, z, path, false)
}

/// Error bound along the default path: a horizontal ray from `xi(z)` to the
/// reference point, or, when that ray does not reach it, a vertical leg to
/// the reference level `Im xi` followed by the ray.
pub fn eta_bound(problem: &Problem, sol: LgSolution, order: usize, z: C) -> Result<BoundReport> {
    let z = if z.im < 0.0 { z.conj() } else { z };
    let xi = problem.point(z)?.xi;
    match bound_impl(problem, sol, order, z, &[xi], true) {
        Err(Error::Path(_)) => {}
        other => return other,
    }
    let level = sol.reference().level(problem.params.alpha);
    let foot = C::new(xi.re, level);
    bound_impl(problem, sol, order, z, &[foot, xi], true)
}

fn bound_impl(problem: &Problem, sol: LgSolution, order: usize, z: C, path: &[C], ray: bool) -> Result<BoundReport> {
    check_order(problem, order)?;
    let z = if z.im < 0.0 { z.conj() } else { z };
    let reference = sol.reference();
    if path.is_empty() {
        return Err(Error::Path("empty path".into()));
    }
    check_monotone(path, reference.direction())?;
    let pt = problem.point(z)?;
    if (path[path.len() - 1] - pt.xi).norm() > 1e-9 * (1.0 + pt.xi.norm()) {
        return Err(Error::Path(format!(
            "path ends at {} but xi(z) = {}",
            path[path.len() - 1],
            pt.xi
        )));
    }
    let mut walker = Walker {
        problem,
        z,
        big_z: pt.big_z,
        acc: PathIntegrals::new(order),
        steps: 0,
    };
    for w in path.windows(2).rev() {
        walker.segment(w[1], w[0])?;
    }
    if ray {
        walker.ray(C::new(reference.direction(), 0.0), reference)?;
    }
    let u = problem.params.u;
    let (phi, psi) = walker.acc.phi_psi(u);
    let un = u.powi(order as i32);
    let eta = phi / un * (psi / u + phi / un).exp();
    Ok(BoundReport {
        phi,
        psi,
        eta,
        path: path.to_vec(),
        reference,
        infinite_ray: ray,
    })
}

/// Even-odd point in polygon test.
fn inside_polygon(z: C, poly: &[C]) -> bool {
    let mut odd = false;
    let n = poly.len();
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        if (p.im > z.im) != (q.im > z.im) {
            let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
            if x > z.re {
                odd = !odd;
            }
        }
    }
    odd
}

fn dist_to_polyline(z: C, pts: &[C]) -> f64 {
    pts.windows(2)
        .map(|e| {
            let d = e[1] - e[0];
            let l2 = d.norm_sqr();
            let t = if l2 == 0.0 { 0.0 } else { (((z - e[0]) * d.conj()).re / l2).clamp(0.0, 1.0) };
            (z - (e[0] + d * t)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn closed_polygon_contains(z: C, poly: &[C], tol: f64) -> bool {
    let mut ring = poly.to_vec();
    ring.push(poly[0]);
    inside_polygon(z, poly) || dist_to_polyline(z, &ring) <= tol
}

/// Whether `z` lies in the region where the bound for solution `sol` holds,
/// judged against the traced Stokes lines and the branch cut.
pub fn region_check(problem: &Problem, sol: LgSolution, z: C) -> bool {
    let z = if z.im < 0.0 { z.conj() } else { z };
    let z1 = problem.z1();
    let tol = 1e-9 * (1.0 + z1.norm());
    if (z - z1).norm() <= tol || z == C::new(0.0, 0.0) {
        return false;
    }
    let cut = problem.mapping.cut();
    let origin = C::new(0.0, 0.0);
    match sol {
        LgSolution::W0 => {
            let Ok(ah) = problem.stokes(StokesBranch::AH) else {
                return false;
            };
            let mut poly = ah.points.clone();
            poly.push(origin);
            poly.extend(cut.iter().rev().skip(1));
            !closed_polygon_contains(z, &poly, tol)
        }
        LgSolution::W1 => {
            let Ok(ad) = problem.stokes(StokesBranch::AD) else {
                return false;
            };
            let mut poly = cut.to_vec();
            poly.extend(ad.points.iter().rev());
            !closed_polygon_contains(z, &poly, tol)
        }
        LgSolution::WMinus1Plus | LgSolution::WMinus1Minus => {
            let Ok(af) = problem.stokes(StokesBranch::AF) else {
                return false;
            };
            if dist_to_polyline(z, &af.points) <= tol || problem.mapping.side(z) == Side::OnCut {
                return false;
            }
            let left = if z.im == 0.0 {
                z.re < 0.0
            } else {
                inside_polygon(z, &minus_polygon(cut, &af.points))
            };
            left == (sol == LgSolution::WMinus1Minus)
        }
    }
}

/// Polygon enclosing the region left of the cut and of `AF`.
fn minus_polygon(cut: &[C], af: &[C]) -> Vec<C> {
    const BIG: f64 = 1e7;
    let n = af.len();
    let last = af[n - 1];
    let dir = (last - af[n.saturating_sub(2)]).unscale((last - af[n.saturating_sub(2)]).norm());
    let far = last + dir * BIG;
    let top = far.im.max(BIG);
    let mut poly = vec![C::new(-BIG, 0.0), C::new(0.0, 0.0)];
    poly.extend(cut.iter().rev().skip(1));
    poly.extend(af.iter().skip(1));
    poly.push(far);
    poly.push(C::new(far.re, top));
    poly.push(C::new(-BIG, top));
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn problem(n: u32, a: f64) -> Problem {
        Problem::new(&ProblemParams::new(n, a).unwrap()).unwrap()
    }

    fn oracle_w0(p: &Problem, z: C) -> ScaledComplex {
        let u = p.params.u;
        oracle::w0_direct(&p.params, &BigComplex::from_c64(z * u, 256)).unwrap().to_scaled()
    }

    fn rel(a: ScaledComplex, b: ScaledComplex) -> f64 {
        let d = a.log_scale - b.log_scale;
        (a.mant * d.exp() - b.mant).norm() / b.mant.norm()
    }

    #[test]
    fn matching_constant_alpha_zero_modulus() {
        let params = ProblemParams::new(7, 2.0).unwrap();
        let c = matching_constant(&params, LgSolution::W0);
        let want = -(0.5 * 2f64.ln()) - params.u * 2f64.ln();
        assert!((c.ln_abs() - want).abs() < 1e-13);
    }

    #[test]
    fn matching_constant_phases_cancel() {
        let params = ProblemParams::new(20, 1.2).unwrap();
        let c = matching_constant(&params, LgSolution::W0).mul(matching_constant(&params, LgSolution::W1));
        assert!(c.mant.im.abs() < 1e-14 && c.mant.re > 0.0);
    }

    #[test]
    fn matching_constant_precision_doubling() {
        let params = ProblemParams::new(20, 1.2).unwrap();
        for sol in [LgSolution::W0, LgSolution::W1, LgSolution::WMinus1Plus, LgSolution::WMinus1Minus] {
            let a = matching_constant_big(&params, sol, 200);
            let b = matching_constant_big(&params, sol, 400);
            assert!(a.rel_diff(&b) < 1e-25);
            let s = matching_constant(&params, sol);
            assert!(rel(s, b.to_scaled()) < 1e-13);
        }
    }

    #[test]
    fn w0_matches_oracle_at_three() {
        let p = problem(20, 1.2);
        let r = lg_eval(&p, LgSolution::W0, 5, C::new(3.0, 0.0)).unwrap();
        assert!(r.in_region);
        let e = rel(r.value, oracle_w0(&p, C::new(3.0, 0.0)));
        assert!(e < 1e-8, "{e:e}");
    }

    #[test]
    fn w0_far_out_on_the_axis() {
        let p = problem(20, 1.2);
        for x in [50.0, 500.0] {
            let z = C::new(x, 0.0);
            let e = rel(lg_eval(&p, LgSolution::W0, 5, z).unwrap().value, oracle_w0(&p, z));
            assert!(e < 1e-9, "x = {x}: {e:e}");
        }
    }

    #[test]
    fn minus_one_forms_in_their_own_regions() {
        let p = problem(20, 1.2);
        let u = p.params.u;
        for (sol, z) in [(LgSolution::WMinus1Plus, C::new(0.1, 0.0)), (LgSolution::WMinus1Minus, C::new(-0.1, 0.0))] {
            let r = lg_eval(&p, sol, 5, z).unwrap();
            assert!(r.in_region);
            let w = oracle::w_minus1_default(&p.params, &BigComplex::from_c64(z * u, 256)).unwrap();
            let e = rel(r.value, w.to_scaled());
            assert!(e < 1e-8, "{sol}: {e:e}");
        }
        assert!(!region_check(&p, LgSolution::WMinus1Minus, C::new(0.1, 0.0)));
        assert!(!region_check(&p, LgSolution::WMinus1Plus, C::new(-0.1, 0.0)));
    }

    #[test]
    fn region_examples() {
        let p = problem(20, 1.2);
        assert!(region_check(&p, LgSolution::W0, C::new(3.0, 0.0)));
        assert!(region_check(&p, LgSolution::W1, C::new(-3.0, 0.0)));
        assert!(!region_check(&p, LgSolution::W1, C::new(0.2, 0.0)));
        assert!(!region_check(&p, LgSolution::W0, C::new(-0.2, 0.0)));
        for sol in [LgSolution::W0, LgSolution::W1, LgSolution::WMinus1Plus, LgSolution::WMinus1Minus] {
            assert!(!region_check(&p, sol, p.z1()));
        }
    }

    #[test]
    fn bound_dominates_and_shrinks() {
        let p = problem(20, 1.2);
        let z = C::new(3.0, 0.0);
        let w = oracle_w0(&p, z);
        let mut prev = f64::INFINITY;
        for n in 2..=4 {
            let b = eta_bound(&p, LgSolution::W0, n, z).unwrap();
            let err = rel(lg_eval(&p, LgSolution::W0, n, z).unwrap().value, w);
            assert!(b.eta >= err, "N = {n}: eta {:e} < error {err:e}", b.eta);
            assert!(b.eta < prev);
            prev = b.eta;
        }
    }

    #[test]
    fn zero_length_path_gives_zero_bound() {
        let p = problem(20, 1.2);
        let z = C::new(3.0, 0.0);
        let xi = p.point(z).unwrap().xi;
        let b = eta_bound_along(&p, LgSolution::W0, 4, z, &[xi]).unwrap();
        assert_eq!((b.phi, b.psi, b.eta), (0.0, 0.0, 0.0));
    }

    #[test]
    fn non_monotone_path_is_rejected() {
        let p = problem(20, 1.2);
        let z = C::new(3.0, 0.0);
        let xi = p.point(z).unwrap().xi;
        let path = [xi + 1.0, xi - 0.5, xi];
        assert!(matches!(
            eta_bound_along(&p, LgSolution::W0, 4, z, &path),
            Err(Error::Monotonicity(_))
        ));
    }

    #[test]
    fn independent_of_truncation_order_within_bound() {
        let p = problem(20, 1.2);
        let z = C::new(3.0, 0.0);
        let a = lg_eval(&p, LgSolution::W0, 4, z).unwrap().value;
        let b = lg_eval(&p, LgSolution::W0, 6, z).unwrap().value;
        let eta = eta_bound(&p, LgSolution::W0, 4, z).unwrap().eta;
        assert!(rel(a, b) < eta);
    }

    #[test]
    fn connection_formula_consistency() {
        let p = problem(20, 1.2);
        let u = p.params.u;
        let z = C::new(1.0, 3.0);
        let prec = 256;
        let l0 = lg_eval_with_bound(&p, LgSolution::W0, 5, z).unwrap();
        let l1 = lg_eval_with_bound(&p, LgSolution::W1, 5, z).unwrap();
        let to_big = |s: ScaledComplex| BigComplex::from_rug(crate::bigcomplex::scaled_to_rug(&s, prec));
        let c = BigComplex::from_rug(oracle::connection_coefficient(&p.params, prec));
        let g = oracle::gamma_n_a_1(&p.params, prec);
        let lhs = &(&c * &to_big(l0.value))
            + &BigComplex::from_rug(Complex::with_val(prec, to_big(l1.value).as_rug() / &g));
        let w = oracle::w_minus1_default(&p.params, &BigComplex::from_c64(z * u, prec)).unwrap();
        let e = lhs.rel_diff(&w);
        let budget = l0.eta_bound.unwrap() + l1.eta_bound.unwrap();
        assert!(e < budget.max(1e-300) * 10.0 || e < 1e-8, "{e:e} vs {budget:e}");
    }

    #[test]
    fn reflection_symmetry() {
        let p = problem(20, 1.2);
        for z in [C::new(3.0, 0.5), C::new(1.0, 0.1)] {
            let a = lg_eval(&p, LgSolution::W0, 5, z).unwrap().value;
            let b = lg_eval(&p, LgSolution::W0, 5, z.conj()).unwrap().value;
            assert!((a.mant - b.mant.conj()).norm() < 1e-12 && a.log_scale == b.log_scale);
        }
    }
}
