//! Exact Liouville-Green exponent coefficients `E_s(alpha, phi)` and their
//! `xi`-derivatives `F_s`, as trigonometric polynomials in `phi` whose
//! coefficients lie in `Q(alpha)[sigma]` with `sigma^2 = 1 + alpha`.
//!
//! A [`TrigPoly`] is stored in real form: index `k >= 0` carries `cos(k phi)`
//! and index `k < 0` carries `sin(|k| phi)`. With `e^{i phi} = (z - z2)/Z`
//! the numerical evaluation needs no complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Maximum order built by default.
pub const DEFAULT_ORDER: usize = 8;

/// Polynomial in `alpha` with rational coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn from_coeffs(c: Vec<Rational>) -> Self {
        Poly(c).trimmed()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| *c == 0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = Rational::new();
            if let Some(a) = self.0.get(k) {
                c += a;
            }
            if let Some(b) = o.0.get(k) {
                c += b;
            }
            out.push(c);
        }
        Poly(out).trimmed()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| Rational::from(-c)).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly(out).trimmed()
    }

    fn scale(&self, r: &Rational) -> Poly {
        Poly(self.0.iter().map(|c| Rational::from(c * r)).collect()).trimmed()
    }

    /// Multiplies by `1 + alpha`.
    fn mul_opa(&self) -> Poly {
        self.add(&Poly(std::iter::once(Rational::new()).chain(self.0.iter().cloned()).collect()))
    }

    /// Divides by `1 + alpha` when exact.
    fn div_opa(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        // synthetic division by (alpha + 1)
        let n = self.0.len();
        let mut q = vec![Rational::new(); n - 1];
        let mut carry = Rational::new();
        for k in (0..n).rev() {
            let c = Rational::from(&self.0[k] - &carry);
            if k == 0 {
                return if c == 0 { Some(Poly(q).trimmed()) } else { None };
            }
            q[k - 1] = c.clone();
            carry = c;
        }
        unreachable!()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::new(), |acc, c| acc * x + c)
    }
}

/// Element `(p0(alpha) + p1(alpha) sigma) / (1 + alpha)^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefField {
    p0: Poly,
    p1: Poly,
    m: u32,
}

impl CoefField {
    pub fn zero() -> Self {
        Self {
            p0: Poly::zero(),
            p1: Poly::zero(),
            m: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn rational(r: Rational) -> Self {
        Self {
            p0: Poly::constant(r),
            p1: Poly::zero(),
            m: 0,
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::from((num, den)))
    }

    pub fn alpha() -> Self {
        Self {
            p0: Poly::from_coeffs(vec![Rational::new(), Rational::from(1)]),
            p1: Poly::zero(),
            m: 0,
        }
    }

    pub fn sigma() -> Self {
        Self {
            p0: Poly::zero(),
            p1: Poly::constant(Rational::from(1)),
            m: 0,
        }
    }

    /// Builds `(p0 + p1 sigma)/(1 + alpha)^m`.
    pub fn from_parts(p0: Poly, p1: Poly, m: u32) -> Self {
        Self { p0, p1, m }.normalized()
    }

    pub fn parts(&self) -> (&Poly, &Poly, u32) {
        (&self.p0, &self.p1, self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.p0.is_zero() && self.p1.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.is_zero() {
            self.m = 0;
            return self;
        }
        while self.m > 0 {
            match (self.p0.div_opa(), self.p1.div_opa()) {
                (Some(a), Some(b)) => {
                    self.p0 = a;
                    self.p1 = b;
                    self.m -= 1;
                }
                _ => break,
            }
        }
        self
    }

    fn lift(&self, m: u32) -> (Poly, Poly) {
        let mut a = self.p0.clone();
        let mut b = self.p1.clone();
        for _ in self.m..m {
            a = a.mul_opa();
            b = b.mul_opa();
        }
        (a, b)
    }

    pub fn add(&self, o: &CoefField) -> CoefField {
        let m = self.m.max(o.m);
        let (a0, a1) = self.lift(m);
        let (b0, b1) = o.lift(m);
        CoefField {
            p0: a0.add(&b0),
            p1: a1.add(&b1),
            m,
        }
        .normalized()
    }

    pub fn neg(&self) -> CoefField {
        CoefField {
            p0: self.p0.neg(),
            p1: self.p1.neg(),
            m: self.m,
        }
    }

    pub fn sub(&self, o: &CoefField) -> CoefField {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CoefField) -> CoefField {
        // (a0 + a1 s)(b0 + b1 s) = a0 b0 + a1 b1 (1 + alpha) + (a0 b1 + a1 b0) s
        let p0 = self.p0.mul(&o.p0).add(&self.p1.mul(&o.p1).mul_opa());
        let p1 = self.p0.mul(&o.p1).add(&self.p1.mul(&o.p0));
        CoefField {
            p0,
            p1,
            m: self.m + o.m,
        }
        .normalized()
    }

    pub fn scale(&self, r: &Rational) -> CoefField {
        CoefField {
            p0: self.p0.scale(r),
            p1: self.p1.scale(r),
            m: self.m,
        }
        .normalized()
    }

    /// Divides by `(1 + alpha)^j`.
    pub fn div_opa(&self, j: u32) -> CoefField {
        CoefField {
            p0: self.p0.clone(),
            p1: self.p1.clone(),
            m: self.m + j,
        }
        .normalized()
    }

    /// Divides by `sigma^j`, using `1/sigma = sigma/(1 + alpha)`.
    pub fn div_sigma(&self, j: u32) -> CoefField {
        let mut out = self.clone();
        for _ in 0..j {
            out = out.mul(&CoefField::sigma()).div_opa(1);
        }
        out
    }

    pub fn eval(&self, alpha: f64, sigma: f64) -> f64 {
        (self.p0.eval(alpha) + self.p1.eval(alpha) * sigma) / (1.0 + alpha).powi(self.m as i32)
    }
}

/// Trigonometric polynomial in `phi` over [`CoefField`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<i32, CoefField>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CoefField) -> Self {
        let mut p = Self::zero();
        p.insert(0, c);
        p
    }

    pub fn one() -> Self {
        Self::constant(CoefField::one())
    }

    /// `cos(k phi)`.
    pub fn cos(k: u32) -> Self {
        let mut p = Self::zero();
        p.insert(k as i32, CoefField::one());
        p
    }

    /// `sin(k phi)`.
    pub fn sin(k: u32) -> Self {
        let mut p = Self::zero();
        if k > 0 {
            p.insert(-(k as i32), CoefField::one());
        }
        p
    }

    fn insert(&mut self, k: i32, c: CoefField) {
        let entry = self.terms.entry(k).or_insert_with(CoefField::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &CoefField)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i32) -> CoefField {
        self.terms.get(&k).cloned().unwrap_or_else(CoefField::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_frequency(&self) -> u32 {
        self.terms.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> TrigPoly {
        TrigPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &TrigPoly) -> TrigPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CoefField) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (k, a) in &self.terms {
            out.insert(*k, a.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> TrigPoly {
        self.scale(&CoefField::rational(r.clone()))
    }

    pub fn pow(&self, e: u32) -> TrigPoly {
        (0..e).fold(TrigPoly::one(), |acc, _| trig_mul(&acc, self))
    }

    /// `d/dphi`.
    pub fn derivative(&self) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            let kk = k.unsigned_abs();
            if kk == 0 {
                continue;
            }
            let f = Rational::from(kk);
            if *k > 0 {
                out.insert(-*k, c.scale(&f).neg());
            } else {
                out.insert(kk as i32, c.scale(&f));
            }
        }
        out
    }

    /// Value at `phi = 0`.
    pub fn at_zero(&self) -> CoefField {
        self.terms
            .iter()
            .filter(|(k, _)| **k >= 0)
            .fold(CoefField::zero(), |acc, (_, c)| acc.add(c))
    }

    /// Value at `phi = pi/2`.
    pub fn at_half_pi(&self) -> CoefField {
        let mut acc = CoefField::zero();
        for (k, c) in &self.terms {
            let kk = k.unsigned_abs();
            let v: i64 = if *k >= 0 {
                match kk % 4 {
                    0 => 1,
                    2 => -1,
                    _ => 0,
                }
            } else {
                match kk % 4 {
                    1 => 1,
                    3 => -1,
                    _ => 0,
                }
            };
            if v != 0 {
                acc = acc.add(&c.scale(&Rational::from(v)));
            }
        }
        acc
    }
}

/// Product of two trigonometric polynomials.
pub fn trig_mul(p: &TrigPoly, q: &TrigPoly) -> TrigPoly {
    let mut out = TrigPoly::zero();
    let half = Rational::from((1, 2));
    for (&j, a) in &p.terms {
        for (&k, b) in &q.terms {
            let c = a.mul(b).scale(&half);
            let (ja, ka) = (j.unsigned_abs() as i32, k.unsigned_abs() as i32);
            match (j >= 0, k >= 0) {
                // cos a cos b = (cos(a-b) + cos(a+b))/2
                (true, true) => {
                    out.insert((ja - ka).abs(), c.clone());
                    out.insert(ja + ka, c);
                }
                // sin a sin b = (cos(a-b) - cos(a+b))/2
                (false, false) => {
                    out.insert((ja - ka).abs(), c.clone());
                    out.insert(ja + ka, c.neg());
                }
                // sin a cos b = (sin(a+b) + sin(a-b))/2
                (false, true) | (true, false) => {
                    let (s, co) = if j < 0 { (ja, ka) } else { (ka, ja) };
                    out.insert(-(s + co), c.clone());
                    let d = s - co;
                    if d > 0 {
                        out.insert(-d, c);
                    } else if d < 0 {
                        out.insert(d, c.neg());
                    }
                }
            }
        }
    }
    out
}

/// Antiderivative vanishing at `phi = 0`; fails on a nonzero constant term.
pub fn trig_integrate(p: &TrigPoly) -> Result<TrigPoly> {
    trig_integrate_order(p, 0)
}

fn trig_integrate_order(p: &TrigPoly, order: usize) -> Result<TrigPoly> {
    if !p.coefficient(0).is_zero() {
        return Err(Error::SecularTerm { order });
    }
    let mut out = TrigPoly::zero();
    for (&k, c) in &p.terms {
        let kk = Rational::from(k.unsigned_abs());
        let inv = Rational::from(1) / kk;
        let c = c.scale(&inv);
        if k > 0 {
            out.insert(-k, c);
        } else {
            // integral of sin(k phi) from 0 is (1 - cos(k phi))/k
            out.insert(0, c.clone());
            out.insert(-k, c.neg());
        }
    }
    Ok(out)
}

fn sin_t() -> TrigPoly {
    TrigPoly::sin(1)
}

fn cos_t() -> TrigPoly {
    TrigPoly::cos(1)
}

fn k(c: CoefField) -> TrigPoly {
    TrigPoly::constant(c)
}

/// `G = cos(phi) sin^2(phi)/(2 sigma) - alpha sin^3(phi)/(4 (1 + alpha))`.
pub fn build_g() -> TrigPoly {
    let s = sin_t();
    let c = cos_t();
    let t1 = trig_mul(&c, &s.pow(2)).scale(&CoefField::ratio(1, 2).div_sigma(1));
    let t2 = s.pow(3).scale(&CoefField::alpha().scale(&Rational::from((-1, 4))).div_opa(1));
    t1.add(&t2)
}

/// `E_1` in closed form.
pub fn build_e1() -> TrigPoly {
    let s = sin_t();
    let c = cos_t();
    let c2 = c.pow(2);
    let t1 = trig_mul(&s, &c2.scale_rational(&Rational::from(5)).sub(&k(CoefField::ratio(2, 1))))
        .scale(&CoefField::ratio(1, 24).div_sigma(1));
    let inner = trig_mul(&c, &c2.scale_rational(&Rational::from(5)).sub(&k(CoefField::ratio(6, 1)))).add(&TrigPoly::one());
    let t2 = inner.scale(&CoefField::alpha().scale(&Rational::from((1, 48))).div_opa(1));
    t1.add(&t2)
}

/// `E_2` in closed form.
pub fn build_e2() -> TrigPoly {
    let s = sin_t();
    let c = cos_t();
    let c2 = c.pow(2);
    let al = CoefField::alpha();
    let al2 = al.mul(&al);
    let t1 = trig_mul(
        &trig_mul(&c, &s.pow(3)),
        &k(CoefField::ratio(3, 1)).sub(&c2.scale_rational(&Rational::from(5))),
    )
    .scale(&al.scale(&Rational::from((1, 16))).div_sigma(3));
    let c4coef = CoefField::ratio(4, 1).sub(&al2).add(&al.scale(&Rational::from(4))).scale(&Rational::from(5));
    let c2coef = al2
        .scale(&Rational::from(7))
        .sub(&al.scale(&Rational::from(16)))
        .sub(&CoefField::ratio(16, 1));
    let c0coef = al2.scale(&Rational::from(-2));
    let bracket = c2.pow(2).scale(&c4coef).add(&c2.scale(&c2coef)).add(&k(c0coef));
    let t2 = trig_mul(&s.pow(2), &bracket).scale(&CoefField::ratio(1, 64).div_opa(2));
    t1.add(&t2)
}

/// `psi` written in `phi`: with `z sin(phi) = sigma cos(phi) - (alpha/2) sin(phi)`
/// and `Z = sigma/sin(phi)`.
pub fn build_psi() -> TrigPoly {
    let s = sin_t();
    let c = cos_t();
    let al = CoefField::alpha();
    let half_al = al.scale(&Rational::from((1, 2)));
    let p = c.scale(&CoefField::sigma()).sub(&s.scale(&half_al));
    let kc = CoefField::ratio(4, 1)
        .add(&al.scale(&Rational::from(3)))
        .mul(&CoefField::ratio(4, 1).add(&al));
    let two_al = CoefField::ratio(2, 1).add(&al);
    let lc = al.mul(&two_al).mul(&two_al);
    let inner = p
        .pow(3)
        .scale_rational(&Rational::from(4))
        .sub(&trig_mul(&p, &s.pow(2)).scale(&kc))
        .sub(&s.pow(3).scale(&lc));
    trig_mul(&trig_mul(&p, &inner), &s.pow(2)).scale(&CoefField::ratio(-1, 16).div_sigma(6))
}

/// Exact `E_s`, `F_s` (`s = 1..=S`) and `G`. Index 0 is unused.
#[derive(Clone, Debug)]
pub struct ExpansionTables {
    pub e: Vec<TrigPoly>,
    pub f: Vec<TrigPoly>,
    pub g: TrigPoly,
    pub order: usize,
}

/// Builds `E_1..E_S` by the recursion
/// `E_{s+1} = G E_s' + int_0^phi G sum_{j=1}^{s-1} E_j' E_{s-j}'`.
pub fn compute_e(order: usize) -> Result<ExpansionTables> {
    if order < 2 {
        return Err(Error::InvalidParameter(format!("order {order} must be at least 2")));
    }
    let g = build_g();
    let mut e = vec![TrigPoly::zero(), build_e1(), build_e2()];
    let mut de: Vec<TrigPoly> = e.iter().map(|p| p.derivative()).collect();
    for s in 2..order {
        let mut acc = TrigPoly::zero();
        for j in 1..s {
            acc = acc.add(&trig_mul(&de[j], &de[s - j]));
        }
        let integral = trig_integrate_order(&trig_mul(&g, &acc), s + 1)?;
        let next = trig_mul(&g, &de[s]).add(&integral);
        de.push(next.derivative());
        e.push(next);
    }
    let mut tables = ExpansionTables {
        e,
        f: Vec::new(),
        g,
        order,
    };
    compute_f(&mut tables);
    Ok(tables)
}

/// `F_s = dE_s/dxi = -2 G dE_s/dphi`.
pub fn compute_f(tables: &mut ExpansionTables) {
    let m2g = tables.g.scale_rational(&Rational::from(-2));
    tables.f = tables
        .e
        .iter()
        .enumerate()
        .map(|(s, p)| if s == 0 { TrigPoly::zero() } else { trig_mul(&m2g, &p.derivative()) })
        .collect();
}

/// The shared exact table of order [`DEFAULT_ORDER`].
pub fn default_tables() -> &'static ExpansionTables {
    static TABLES: OnceLock<ExpansionTables> = OnceLock::new();
    TABLES.get_or_init(|| compute_e(DEFAULT_ORDER).expect("secular terms vanish through the default order"))
}

/// Evaluates `p` at complex `sin(phi)`, `cos(phi)`.
pub fn eval_trig(p: &TrigPoly, alpha: f64, sigma: f64, sin_phi: Complex64, cos_phi: Complex64) -> Complex64 {
    NumericTrig::new(p, alpha, sigma).eval(sin_phi, cos_phi)
}

/// A trigonometric polynomial with coefficients evaluated at one `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTrig {
    terms: Vec<(i32, f64)>,
    max_k: u32,
}

impl NumericTrig {
    pub fn new(p: &TrigPoly, alpha: f64, sigma: f64) -> Self {
        let terms: Vec<(i32, f64)> = p.terms().map(|(k, c)| (k, c.eval(alpha, sigma))).collect();
        Self {
            max_k: p.max_frequency(),
            terms,
        }
    }

    /// Value from `e^{i phi} = cos + i sin`.
    pub fn eval(&self, sin_phi: Complex64, cos_phi: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.eval_exp(cos_phi + i * sin_phi, cos_phi - i * sin_phi)
    }

    /// Value from `p = e^{i phi}` and `q = e^{-i phi}` supplied separately.
    pub fn eval_exp(&self, p: Complex64, q: Complex64) -> Complex64 {
        let n = self.max_k as usize;
        let mut pp = Vec::with_capacity(n + 1);
        let mut qq = Vec::with_capacity(n + 1);
        pp.push(Complex64::new(1.0, 0.0));
        qq.push(Complex64::new(1.0, 0.0));
        for j in 1..=n {
            pp.push(pp[j - 1] * p);
            qq.push(qq[j - 1] * q);
        }
        let half = 0.5;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, c) in &self.terms {
            let kk = k.unsigned_abs() as usize;
            let v = if k >= 0 {
                (pp[kk] + qq[kk]) * half
            } else {
                (pp[kk] - qq[kk]) * Complex64::new(0.0, -half)
            };
            acc += v * c;
        }
        acc
    }
}

/// `E_s` and `F_s` with coefficients evaluated at one `alpha`.
#[derive(Clone, Debug)]
pub struct NumericTables {
    pub alpha: f64,
    pub sigma: f64,
    pub e: Vec<NumericTrig>,
    pub f: Vec<NumericTrig>,
}

impl NumericTables {
    pub fn new(tables: &ExpansionTables, alpha: f64) -> Self {
        let sigma = (1.0 + alpha).sqrt();
        Self {
            alpha,
            sigma,
            e: tables.e.iter().map(|p| NumericTrig::new(p, alpha, sigma)).collect(),
            f: tables.f.iter().map(|p| NumericTrig::new(p, alpha, sigma)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.e.len() - 1
    }

    /// `E_1..E_S` at a point given `e^{+-i phi}`; index 0 holds zero.
    pub fn e_values(&self, p: Complex64, q: Complex64) -> Vec<Complex64> {
        self.e.iter().map(|t| t.eval_exp(p, q)).collect()
    }

    pub fn f_values(&self, p: Complex64, q: Complex64) -> Vec<Complex64> {
        self.f.iter().map(|t| t.eval_exp(p, q)).collect()
    }
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.coeffs().iter().rev().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for CoefField {
    /// `P0 , P1 , m`: coefficient lists in descending powers of alpha.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} , {} , {}", fmt_poly(&self.p0), fmt_poly(&self.p1), self.m)
    }
}

/// Text dump of the tables, one line per nonzero Fourier coefficient:
/// `E s k : P0 , P1 , m` (and likewise `F`), meaning the coefficient
/// `(P0(alpha) + P1(alpha) sigma)/(1 + alpha)^m` of `cos(k phi)` for `k >= 0`
/// or `sin(|k| phi)` for `k < 0`.
pub fn dump(tables: &ExpansionTables) -> String {
    let mut out = String::new();
    for (name, list) in [("E", &tables.e), ("F", &tables.f)] {
        for (s, p) in list.iter().enumerate().skip(1) {
            for (k, c) in p.terms() {
                out.push_str(&format!("{name} {s} {k} : {c}\n"));
            }
        }
    }
    out
}

/// Integer-valued helper for tests and the dump: common denominator of a
/// coefficient list.
pub fn common_denominator(p: &Poly) -> Integer {
    p.coeffs()
        .iter()
        .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()))
}
