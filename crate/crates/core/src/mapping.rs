//! The Liouville-Green and Airy variables `xi`, `zeta` and the auxiliary
//! quantities `f`, `g`, `psi`, `Z`, `sin(phi)`, `cos(phi)` in the upper
//! half-plane, together with the branch cut geometry, Stokes-line tracing and
//! inversion of `xi`.
//!
//! `Z = sqrt((z - z1)(z - z2))` is positive on the positive axis, negative on
//! the negative axis and `~ z` at infinity. Its cut runs from `z = 0` to the
//! turning point `z1` along the curve where `Im xi = 0`; this curve is traced
//! once per `alpha` and cached in [`Mapping`].

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rug::{Complex, Float};

use crate::bigcomplex::{pi, BigComplex};
use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::quad;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Position of a point relative to the branch cut of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
    OnCut,
}

/// Values of every mapping quantity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub z: C,
    pub f_val: C,
    pub g_val: C,
    pub psi_val: C,
    pub big_z: C,
    pub xi: C,
    pub zeta: C,
    /// The square root of `zeta` consistent with `(2/3) zeta^(3/2) = xi`.
    pub zeta_sqrt: C,
    pub sin_phi: C,
    pub cos_phi: C,
    pub side: Side,
}

/// Stokes lines `Re xi = 0` emanating from `z1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StokesBranch {
    /// Ends on the positive real axis.
    AD,
    /// Ends on the negative real axis at `x1`, where `xi = -pi i/2`.
    AH,
    /// Runs to infinity in the upper half-plane.
    AF,
}

impl StokesBranch {
    pub fn name(self) -> &'static str {
        match self {
            StokesBranch::AD => "AD",
            StokesBranch::AH => "AH",
            StokesBranch::AF => "AF",
        }
    }
}

impl std::str::FromStr for StokesBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AD" => Ok(StokesBranch::AD),
            "AH" => Ok(StokesBranch::AH),
            "AF" => Ok(StokesBranch::AF),
            _ => Err(Error::InvalidParameter(format!("unknown Stokes branch {s}"))),
        }
    }
}

/// A traced Stokes line, starting at `z1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesPolyline {
    pub branch: StokesBranch,
    pub points: Vec<C>,
    pub xi_values: Vec<C>,
}

impl StokesPolyline {
    /// CSV with header `branch,k,re_z,im_z,re_xi,im_xi`.
    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str("branch,k,re_z,im_z,re_xi,im_xi\n");
        }
        for (k, (z, x)) in self.points.iter().zip(&self.xi_values).enumerate() {
            let _ = writeln!(
                out,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.branch.name(),
                k,
                z.re,
                z.im,
                x.re,
                x.im
            );
        }
        out
    }
}

/// Options for Stokes-line tracing.
#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Maximum arc-length step.
    pub max_step: f64,
    /// `AF` stops once `|z|` exceeds this radius.
    pub far_radius: f64,
    /// Corrector tolerance on `|Re xi|`.
    pub tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            max_step: 0.01,
            far_radius: 20.0,
            tol: 1e-13,
        }
    }
}

/// `f`, `g` and `psi` at `z`.
pub fn f_g_psi(params: &ProblemParams, z: C) -> Result<(C, C, C)> {
    if z == C::new(0.0, 0.0) {
        return Err(Error::PoleAtZero);
    }
    let al = params.alpha;
    let w = (z + 0.5 * al).powi(2) + 1.0 + al;
    let f = w / (z * z);
    let g = -0.25 / (z * z);
    if w.norm() < 1e-300 {
        return Err(Error::TurningPoint(z));
    }
    let num = z * (4.0 * z.powi(3) - (4.0 + 3.0 * al) * (4.0 + al) * z - al * (2.0 + al).powi(2));
    let psi = -num / (16.0 * w.powi(3));
    if !psi.re.is_finite() || !psi.im.is_finite() {
        return Err(Error::TurningPoint(z));
    }
    Ok((f, g, psi))
}

/// Turning points `z1` (upper half-plane) and `z2 = conj(z1)`.
pub fn turning_points(params: &ProblemParams) -> Result<(C, C)> {
    crate::params::check_range(params.alpha, params.delta)?;
    let z1 = params.z1();
    Ok((z1, z1.conj()))
}

/// `zeta = (3 xi/2)^(2/3)` with the principal power.
pub fn zeta_of_xi(xi: C) -> C {
    if xi == C::new(0.0, 0.0) {
        return xi;
    }
    (1.5 * xi).powf(2.0 / 3.0)
}

/// Branch geometry and mapping functions for one value of `alpha`.
#[derive(Debug, Clone)]
pub struct Mapping {
    pub alpha: f64,
    pub sigma: f64,
    pub z1: C,
    cut: Vec<C>,
    cut_tol: f64,
    /// Whether `Im` strictly decreases along the cut, enabling bisection.
    cut_monotone: bool,
}

impl Mapping {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        crate::params::check_range(params.alpha, params.delta)?;
        Self::from_alpha(params.alpha)
    }

    /// Builds the mapping for `alpha > -1`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::Range {
                alpha,
                bound: -1.0,
            });
        }
        let sigma = (1.0 + alpha).sqrt();
        let z1 = C::new(-0.5 * alpha, sigma);
        let cut = trace_cut(alpha, sigma, z1)?;
        let cut_monotone = cut.windows(2).all(|e| e[1].im < e[0].im);
        Ok(Self {
            alpha,
            sigma,
            z1,
            cut,
            cut_tol: 1e-12 * (1.0 + z1.norm()),
            cut_monotone,
        })
    }

    /// The traced cut as a polyline from `z1` to `0`.
    pub fn cut(&self) -> &[C] {
        &self.cut
    }

    fn w(&self, z: C) -> C {
        (z + 0.5 * self.alpha).powi(2) + 1.0 + self.alpha
    }

    /// Classifies a point of the closed upper half-plane against the barrier
    /// formed by the cut and the vertical ray above `z1`.
    pub fn side(&self, z: C) -> Side {
        let z = if z.im < 0.0 { z.conj() } else { z };
        if self.cut_monotone {
            return self.side_monotone(z);
        }
        if dist_to_polyline(z, &self.cut) <= self.cut_tol {
            return Side::OnCut;
        }
        if z.im == 0.0 {
            return if z.re > 0.0 { Side::Right } else { Side::Left };
        }
        if self.crosses_left(z) {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn side_monotone(&self, z: C) -> Side {
        let cut = &self.cut;
        if z.im > self.z1.im + self.cut_tol {
            return if z.re < self.z1.re { Side::Left } else { Side::Right };
        }
        // first index whose height is below z.im
        let k = cut.partition_point(|p| p.im >= z.im).clamp(1, cut.len() - 1);
        let lo = k.saturating_sub(3).max(1);
        let hi = (k + 3).min(cut.len() - 1);
        let near = (lo..=hi)
            .map(|j| dist_to_segment(z, cut[j - 1], cut[j]))
            .fold(f64::INFINITY, f64::min);
        if near <= self.cut_tol {
            return Side::OnCut;
        }
        if z.im == 0.0 {
            return if z.re > 0.0 { Side::Right } else { Side::Left };
        }
        if z.im >= self.z1.im {
            return if z.re < self.z1.re { Side::Left } else { Side::Right };
        }
        let (p, q) = (cut[k - 1], cut[k]);
        let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
        if z.re < x {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Even-odd crossing count of the horizontal ray from `z` to `+inf`.
    fn crosses_left(&self, z: C) -> bool {
        let mut odd = false;
        for e in self.cut.windows(2) {
            let (p, q) = (e[0], e[1]);
            if (p.im > z.im) != (q.im > z.im) {
                let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
                if x > z.re {
                    odd = !odd;
                }
            }
        }
        if z.im >= self.z1.im && self.z1.re > z.re {
            odd = !odd;
        }
        odd
    }

    /// Whether `z` is within rounding distance of `z1` or `z2`.
    pub fn near_turning_point(&self, z: C) -> bool {
        self.w(z).norm() < 1e-14 * (1.0 + z.norm_sqr())
    }

    /// `Z` on a given side of the barrier.
    pub fn big_z_on(&self, z: C, left: bool) -> C {
        let r = csqrt_upper(self.w(z));
        if left {
            -r
        } else {
            r
        }
    }

    /// `Z(z)` with its branch; lower half-plane points are reflected.
    pub fn big_z(&self, z: C) -> Result<(C, Side)> {
        if z.im < 0.0 {
            let (v, s) = self.big_z(z.conj())?;
            return Ok((v.conj(), s));
        }
        let side = self.side(z);
        let left = side == Side::Left;
        Ok((self.big_z_on(z, left), side))
    }

    fn branch_z(&self, z: C) -> Result<(C, bool)> {
        let (zz, side) = self.big_z(z)?;
        if side == Side::OnCut {
            return Err(Error::Path(format!("z = {z} lies on the branch cut")));
        }
        Ok((zz, side == Side::Left))
    }

    /// Closed form of `xi` with principal logarithms. On the real axis the
    /// logarithms take their limits from the upper half-plane.
    pub fn xi_closed_raw(&self, z: C, zz: C) -> (C, bool) {
        let al = self.alpha;
        let dz = (z + 0.5 * al) / zz;
        let num = 4.0 * zz + 2.0 * al * (zz + z + 2.0) + 4.0 + al * al;
        let dnum = (4.0 + 2.0 * al) * dz + 2.0 * al;
        let arg1 = num / z;
        let darg1 = dnum / z - num / (z * z);
        let arg2 = 2.0 * zz + 2.0 * z + al;
        let darg2 = 2.0 * dz + 2.0;
        let (l1, n1) = log_upper(arg1, darg1, z.im == 0.0);
        let (l2, n2) = log_upper(arg2, darg2, z.im == 0.0);
        let xi = zz - (1.0 + 0.5 * al) * l1 + 0.5 * al * l2 + 0.5 * (1.0 + al).ln() + (2.0 + 0.5 * al) * LN_2
            - I * (0.5 * (1.0 + al) * PI);
        (xi, n1 || (n2 && al != 0.0))
    }

    /// `xi(z)` by the closed form. When a logarithm argument lies close to
    /// its principal cut the result is checked against quadrature.
    pub fn xi_closed(&self, z: C) -> Result<C> {
        if z.im < 0.0 {
            return self.xi_closed(z.conj()).map(|v| v.conj());
        }
        if z == C::new(0.0, 0.0) {
            return Err(Error::PoleAtZero);
        }
        if z == self.z1 {
            return Ok(C::new(0.0, 0.0));
        }
        let (zz, _) = self.branch_z(z)?;
        let (xi, near_cut) = self.xi_closed_raw(z, zz);
        if near_cut {
            let q = self.xi_quadrature(z)?;
            let diff = (q - xi).norm();
            if diff > 1e-8 {
                return Err(Error::BranchInconsistency { z, diff });
            }
        }
        Ok(xi)
    }

    /// `xi(z)`, falling back to quadrature where the closed form is unreliable.
    pub fn xi(&self, z: C) -> Result<C> {
        match self.xi_closed(z) {
            Err(Error::BranchInconsistency { .. }) => self.xi_quadrature(z),
            r => r,
        }
    }

    /// `xi(z)` by adaptive quadrature of `Z/t` from `z1` along a polyline
    /// that does not cross the cut.
    pub fn xi_quadrature(&self, z: C) -> Result<C> {
        if z.im < 0.0 {
            return self.xi_quadrature(z.conj()).map(|v| v.conj());
        }
        if z == C::new(0.0, 0.0) {
            return Err(Error::PoleAtZero);
        }
        if (z - self.z1).norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        let side = self.side(z);
        if side == Side::OnCut {
            return Err(Error::Path(format!("z = {z} lies on the branch cut")));
        }
        let left = side == Side::Left;
        let path = self
            .quadrature_path(z)
            .ok_or_else(|| Error::Path(format!("no cut-free path from z1 to {z}")))?;
        let mut total = C::new(0.0, 0.0);
        for (k, seg) in path.windows(2).enumerate() {
            let (p, q) = (seg[0], seg[1]);
            let d = q - p;
            let eval = |t: C| -> C {
                let s = self.side(t);
                let on_left = match s {
                    Side::OnCut => left,
                    s => s == Side::Left,
                };
                self.big_z_on(t, on_left) / t
            };
            let r = if k == 0 {
                // t = s^2 removes the square-root endpoint behaviour at z1
                quad::integrate(|s| eval(p + d * (s * s)) * d * (2.0 * s), 0.0, 1.0, 1e-14, 1e-14, 4000)?
            } else {
                quad::integrate(|s| eval(p + d * s) * d, 0.0, 1.0, 1e-14, 1e-14, 4000)?
            };
            total += r.value;
        }
        Ok(total)
    }

    /// Candidate integration paths from `z1` to `z`, first one that avoids
    /// the cut and the pole wins.
    fn quadrature_path(&self, z: C) -> Option<Vec<C>> {
        let z1 = self.z1;
        let scale = 1.0 + z1.norm();
        let mut candidates: Vec<Vec<C>> = vec![vec![z1, z]];
        let h = z.im.max(z1.im) + 0.5 * scale;
        let top = C::new(z1.re, h);
        candidates.push(vec![z1, top, C::new(z.re, h), z]);
        for k in 0..16 {
            let ang = PI * (k as f64) / 8.0;
            let r = 0.5 * scale;
            let p = z1 + r * C::from_polar(1.0, ang);
            if p.im > 0.0 {
                candidates.push(vec![z1, p, z]);
            }
        }
        let xr = z.re.abs().max(1.0) + scale;
        for &x in &[xr, -xr] {
            candidates.push(vec![z1, top, C::new(x, h), C::new(x, 0.0), C::new(z.re, 0.0), z]);
        }
        candidates.into_iter().find(|path| self.path_is_clear(path))
    }

    fn path_is_clear(&self, path: &[C]) -> bool {
        let min_pole = 0.25 * path.last().map(|z| z.norm()).unwrap_or(0.0).min(1.0);
        for (k, seg) in path.windows(2).enumerate() {
            let (p, q) = (seg[0], seg[1]);
            if p.im < 0.0 || q.im < 0.0 {
                return false;
            }
            let last = k + 2 == path.len();
            if !last && dist_to_segment(C::new(0.0, 0.0), p, q) < min_pole {
                return false;
            }
            if last && q.norm() > 0.0 && dist_to_segment(C::new(0.0, 0.0), p, q) < 0.5 * q.norm().min(min_pole) {
                return false;
            }
            for e in self.cut.windows(2) {
                let start = if k == 0 { 1e-9 } else { 0.0 };
                if segments_intersect(p, q, e[0], e[1], start) {
                    return false;
                }
            }
            // the vertical ray above z1 is not a cut; nothing to check
        }
        true
    }

    /// `(zeta, zeta^(1/2))` continuous across the cut and analytic at `z1`.
    pub fn zeta_from_xi(&self, xi: C, side: Side) -> (C, C) {
        if xi == C::new(0.0, 0.0) {
            return (xi, xi);
        }
        let mut p = (1.5 * xi).powf(1.0 / 3.0);
        if side == Side::Left && xi.im < 0.0 {
            p *= C::from_polar(1.0, 2.0 * PI / 3.0);
        }
        (p * p, p)
    }

    pub fn zeta(&self, z: C) -> Result<C> {
        Ok(self.point(z)?.zeta)
    }

    /// `(sin(phi), cos(phi)) = (sigma/Z, (z + alpha/2)/Z)`.
    pub fn phi_trig(&self, z: C) -> Result<(C, C)> {
        if self.near_turning_point(z) {
            return Err(Error::TurningPoint(z));
        }
        let (zz, _) = self.big_z(z)?;
        Ok((C::new(self.sigma, 0.0) / zz, (z + 0.5 * self.alpha) / zz))
    }

    /// All mapping quantities at `z` (lower half-plane by reflection).
    pub fn point(&self, z: C) -> Result<MapPoint> {
        if z.im < 0.0 {
            let p = self.point(z.conj())?;
            return Ok(MapPoint {
                z,
                f_val: p.f_val.conj(),
                g_val: p.g_val.conj(),
                psi_val: p.psi_val.conj(),
                big_z: p.big_z.conj(),
                xi: p.xi.conj(),
                zeta: p.zeta.conj(),
                zeta_sqrt: p.zeta_sqrt.conj(),
                sin_phi: p.sin_phi.conj(),
                cos_phi: p.cos_phi.conj(),
                side: p.side,
            });
        }
        if z == C::new(0.0, 0.0) {
            return Err(Error::PoleAtZero);
        }
        if self.near_turning_point(z) {
            return Err(Error::TurningPoint(z));
        }
        let (zz, side) = self.big_z(z)?;
        if side == Side::OnCut {
            return Err(Error::Path(format!("z = {z} lies on the branch cut")));
        }
        let al = self.alpha;
        let w = zz * zz;
        let f = w / (z * z);
        let g = -0.25 / (z * z);
        let psi = -z * (4.0 * z.powi(3) - (4.0 + 3.0 * al) * (4.0 + al) * z - al * (2.0 + al).powi(2))
            / (16.0 * w.powi(3));
        let xi = self.xi(z)?;
        let (zeta, p) = self.zeta_from_xi(xi, side);
        Ok(MapPoint {
            z,
            f_val: f,
            g_val: g,
            psi_val: psi,
            big_z: zz,
            xi,
            zeta,
            zeta_sqrt: p,
            sin_phi: C::new(self.sigma, 0.0) / zz,
            cos_phi: (z + 0.5 * al) / zz,
            side,
        })
    }

    /// Solves `xi(z) = target` by damped Newton iteration from `hint`.
    pub fn invert_xi(&self, target: C, hint: C) -> Result<C> {
        const MAX_ITER: usize = 60;
        if target.norm() < 1e-14 {
            return Ok(self.z1);
        }
        let tol = 1e-12 * (1.0 + target.norm());
        let mut z = hint;
        let mut res = self.xi(z)? - target;
        for _ in 0..MAX_ITER {
            if res.norm() < tol {
                return self.check_sheet(z, target);
            }
            let (zz, _) = self.big_z(z)?;
            if zz.norm() == 0.0 {
                return Err(Error::TurningPoint(z));
            }
            let step = -res * z / zz;
            let mut lam = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = z + lam * step;
                if cand.norm() > 0.0 && self.side(cand) != Side::OnCut {
                    if let Ok(x) = self.xi(cand) {
                        let r = x - target;
                        if r.norm() < res.norm() {
                            z = cand;
                            res = r;
                            accepted = true;
                            break;
                        }
                    }
                }
                lam *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res.norm() < tol {
            return self.check_sheet(z, target);
        }
        Err(Error::NoConvergence(format!(
            "xi inversion for target {target} stalled at z = {z}, residual {:e}",
            res.norm()
        )))
    }

    fn check_sheet(&self, z: C, target: C) -> Result<C> {
        let back = self.xi(z)?;
        if (back - target).norm() > 1e-8 * (1.0 + target.norm()) {
            return Err(Error::WrongSheet(format!("xi({z}) = {back}, wanted {target}")));
        }
        Ok(z)
    }

    /// Start directions of the three Stokes lines at `z1`.
    fn stokes_starts(&self, radius: f64) -> Result<Vec<(StokesBranch, C)>> {
        const M: usize = 720;
        let at = |th: f64| -> Result<(C, C, Side)> {
            let z = self.z1 + radius * C::from_polar(1.0, th);
            let side = self.side(z);
            let side = if side == Side::OnCut { Side::Right } else { side };
            let (xi, _) = self.xi_closed_raw(z, self.big_z_on(z, side == Side::Left));
            Ok((z, xi, side))
        };
        let scale = radius.powf(1.5) * (2.0 * self.sigma).sqrt() / self.z1.norm();
        let mut out = Vec::new();
        let mut prev = at(0.0)?;
        for k in 1..=M {
            let th = 2.0 * PI * (k as f64) / (M as f64);
            let cur = at(th)?;
            let jump = (cur.1 - prev.1).norm() > 0.2 * scale;
            if !jump && (prev.1.re > 0.0) != (cur.1.re > 0.0) {
                let (mut lo, mut hi) = (th - 2.0 * PI / (M as f64), th);
                let lo_pos = prev.1.re > 0.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let v = at(mid)?;
                    if (v.1.re > 0.0) == lo_pos {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let (z, xi, side) = at(0.5 * (lo + hi))?;
                let branch = if xi.im > 0.0 {
                    StokesBranch::AF
                } else if side == Side::Left {
                    StokesBranch::AH
                } else {
                    StokesBranch::AD
                };
                out.push((branch, z));
            }
            prev = cur;
        }
        Ok(out)
    }

    /// Traces a Stokes line from `z1` by predictor-corrector continuation.
    pub fn trace_stokes(&self, branch: StokesBranch) -> Result<StokesPolyline> {
        self.trace_stokes_with(branch, TraceOptions::default())
    }

    pub fn trace_stokes_with(&self, branch: StokesBranch, opts: TraceOptions) -> Result<StokesPolyline> {
        let scale = self.z1.norm();
        let r0 = 1e-3 * scale;
        let starts = self.stokes_starts(r0)?;
        let start = starts
            .iter()
            .find(|(b, _)| *b == branch)
            .map(|(_, z)| *z)
            .ok_or_else(|| Error::Path(format!("Stokes line {} not found at z1", branch.name())))?;
        let left = branch == StokesBranch::AH;
        let xi_at = |z: C| -> Result<C> {
            match branch {
                StokesBranch::AF => self.xi(z),
                _ => {
                    let (xi, _) = self.xi_closed_raw(z, self.big_z_on(z, left));
                    Ok(xi)
                }
            }
        };
        let z_at = |z: C| -> C {
            match branch {
                StokesBranch::AF => self.big_z(z).map(|v| v.0).unwrap_or_else(|_| self.big_z_on(z, false)),
                _ => self.big_z_on(z, left),
            }
        };
        let correct = |mut z: C| -> Result<(C, C)> {
            for _ in 0..30 {
                let xi = xi_at(z)?;
                if xi.re.abs() < opts.tol {
                    return Ok((z, xi));
                }
                z -= xi.re * z / z_at(z);
            }
            let xi = xi_at(z)?;
            if xi.re.abs() < 1e2 * opts.tol {
                return Ok((z, xi));
            }
            Err(Error::NoConvergence(format!("Stokes corrector at {z}: Re xi = {:e}", xi.re)))
        };
        let mut points = vec![self.z1];
        let mut xis = vec![C::new(0.0, 0.0)];
        let (mut z, mut xi) = correct(start)?;
        points.push(z);
        xis.push(xi);
        let mut dir = z - self.z1;
        dir /= dir.norm();
        let max_step = opts.max_step * scale.max(1.0);
        for _ in 0..200_000 {
            let h = max_step.min(0.25 * (z - self.z1).norm()).min(0.1 * z.norm());
            if h < 1e-12 * scale {
                return Err(Error::StepCollapse(z));
            }
            let mut t = I * z / z_at(z);
            t /= t.norm();
            if (t * dir.conj()).re < 0.0 {
                t = -t;
            }
            let (zn, xin) = correct(z + h * t)?;
            if zn.im <= 0.0 {
                let x = self.real_axis_end(branch, z, zn)?;
                let xe = xi_at(C::new(x, 0.0))?;
                points.push(C::new(x, 0.0));
                xis.push(xe);
                break;
            }
            dir = (zn - z) / (zn - z).norm();
            z = zn;
            xi = xin;
            points.push(z);
            xis.push(xi);
            if branch == StokesBranch::AF && z.norm() > opts.far_radius {
                break;
            }
        }
        if branch == StokesBranch::AH {
            for k in 1..xis.len() {
                if xis[k].im > xis[k - 1].im + 1e-12 {
                    return Err(Error::Monotonicity(format!(
                        "Im xi increases between points {} and {k} of AH",
                        k - 1
                    )));
                }
            }
        }
        Ok(StokesPolyline {
            branch,
            points,
            xi_values: xis,
        })
    }

    /// Root of `Re xi(x) = 0` on the real axis between the last two trace
    /// points.
    fn real_axis_end(&self, branch: StokesBranch, a: C, b: C) -> Result<f64> {
        let left = branch == StokesBranch::AH;
        let t = a.im / (a.im - b.im);
        let mut x = a.re + t * (b.re - a.re);
        if (left && x >= 0.0) || (!left && x <= 0.0) {
            return Err(Error::Path(format!("{} left the expected half-axis", branch.name())));
        }
        for _ in 0..60 {
            let z = C::new(x, 0.0);
            let zz = self.big_z_on(z, left);
            let (xi, _) = self.xi_closed_raw(z, zz);
            let dx = xi.re / (zz / z).re;
            x -= dx;
            if dx.abs() < 1e-15 * x.abs() {
                break;
            }
        }
        Ok(x)
    }

    /// Negative root `x1` of `xi(x) = -pi i/2`, the end point of `AH`.
    pub fn x1(&self) -> Result<f64> {
        let line = self.trace_stokes(StokesBranch::AH)?;
        Ok(line.points.last().expect("nonempty").re)
    }

    /// `xi` at high precision by the closed form, using the branch of `Z`
    /// fixed by the double-precision geometry.
    pub fn xi_big(&self, params: &ProblemParams, z: &BigComplex) -> Result<BigComplex> {
        let zc = z.to_c64();
        if zc.im < 0.0 {
            return self.xi_big(params, &z.conj()).map(|v| v.conj());
        }
        let (_, side) = self.big_z(zc)?;
        if side == Side::OnCut {
            return Err(Error::Path(format!("z = {zc} lies on the branch cut")));
        }
        let prec = z.precision_bits();
        let al = Float::with_val(prec, params.alpha_exact());
        let zr = z.as_rug();
        let half_al = Float::with_val(prec, &al / 2u32);
        let one_al = Float::with_val(prec, &al + 1u32);
        let shifted = Complex::with_val(prec, zr + &half_al);
        let w = Complex::with_val(prec, shifted.square_ref()) + &one_al;
        let mut zz = Complex::with_val(prec, w.sqrt_ref());
        if zz.imag().is_zero() && zz.real().is_zero() {
            return Err(Error::TurningPoint(zc));
        }
        // principal sqrt of a negative real with -0 imaginary part
        let wz = self.w(zc);
        if wz.im == 0.0 && wz.re < 0.0 {
            zz = Complex::with_val(prec, (Float::new(prec), Float::with_val(prec, w.real().clone().abs()).sqrt()));
        }
        if side == Side::Left {
            zz = -zz;
        }
        let zzc = C::new(zz.real().to_f64(), zz.imag().to_f64());
        let dz = (zc + 0.5 * self.alpha) / zzc;
        let al2 = Float::with_val(prec, al.square_ref());
        let num = Complex::with_val(prec, &zz * 4u32)
            + (Complex::with_val(prec, &zz + zr) + 2u32) * Float::with_val(prec, &al * 2u32)
            + 4u32
            + &al2;
        let arg1 = Complex::with_val(prec, &num / zr);
        let arg2 = Complex::with_val(prec, &zz * 2u32) + Complex::with_val(prec, zr * 2u32) + &al;
        let numc = C::new(num.real().to_f64(), num.imag().to_f64());
        let darg1 = ((4.0 + 2.0 * self.alpha) * dz + 2.0 * self.alpha) / zc - numc / (zc * zc);
        let darg2 = 2.0 * dz + 2.0;
        let real_axis = zc.im == 0.0;
        let l1 = big_log_upper(&arg1, darg1, real_axis, prec);
        let l2 = big_log_upper(&arg2, darg2, real_axis, prec);
        let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
        let c1 = Float::with_val(prec, &half_al + 1u32);
        let c2 = Float::with_val(prec, &half_al + 2u32);
        let mut xi = zz - l1 * &c1 + l2 * &half_al;
        xi += Float::with_val(prec, one_al.ln_ref()) / 2u32;
        xi += c2 * ln2;
        let im = Float::with_val(prec, &one_al * pi(prec)) / 2u32;
        xi -= Complex::with_val(prec, (Float::new(prec), im));
        Ok(BigComplex::from_rug(xi))
    }
}

/// Principal logarithm; on the negative real axis (`real_axis` input) the
/// limit from the upper half-plane is taken using the derivative `darg` of
/// the argument. Also reports proximity to the principal cut.
fn log_upper(arg: C, darg: C, real_axis: bool) -> (C, bool) {
    let on_cut = arg.re < 0.0 && arg.im.abs() <= 1e-300;
    if on_cut && real_axis {
        let s = if darg.re >= 0.0 { 1.0 } else { -1.0 };
        return (C::new(arg.norm().ln(), s * PI), false);
    }
    let near = arg.re < 0.0 && arg.im.abs() < 1e-6 * arg.norm();
    (arg.ln(), near)
}

fn big_log_upper(arg: &Complex, darg: C, real_axis: bool, prec: u32) -> Complex {
    let neg_real = arg.real().is_sign_negative() && arg.imag().is_zero();
    if neg_real && real_axis {
        let s: i32 = if darg.re >= 0.0 { 1 } else { -1 };
        let m = Float::with_val(prec, arg.abs_ref()).ln();
        return Complex::with_val(prec, (m, pi(prec) * s));
    }
    Complex::with_val(prec, arg.ln_ref())
}

/// Principal square root, taking `+i sqrt|w|` on the negative real axis
/// regardless of the sign of zero.
fn csqrt_upper(w: C) -> C {
    if w.im == 0.0 && w.re < 0.0 {
        return C::new(0.0, (-w.re).sqrt());
    }
    w.sqrt()
}

/// Traces `Im xi = 0` from `z1` to `0` (with `xi` real and decreasing).
fn trace_cut(alpha: f64, sigma: f64, z1: C) -> Result<Vec<C>> {
    let w = |z: C| (z + 0.5 * alpha).powi(2) + 1.0 + alpha;
    // xi ~ (2/3) c (z - z1)^(3/2) near z1 with c = (2 i sigma)^(1/2)/z1
    let c = (2.0 * I * sigma).sqrt() / z1;
    let toward = -z1 / z1.norm();
    let mut best = (f64::INFINITY, C::new(1.0, 0.0));
    for k in 0..3 {
        let th = ((k as f64) * PI - c.arg()) * 2.0 / 3.0;
        let d = C::from_polar(1.0, th);
        let score = (d * toward.conj()).arg().abs();
        if score < best.0 {
            best = (score, d);
        }
    }
    let scale = z1.norm();
    let eps = 1e-6 * scale;
    let mut z = z1 + eps * best.1;
    let mut zz = w(z).sqrt();
    if ((z - z1) * zz / z1).re > 0.0 {
        zz = -zz;
    }
    let track = |z: C, prev: C| -> C {
        let r = w(z).sqrt();
        if (r - prev).norm() <= (r + prev).norm() {
            r
        } else {
            -r
        }
    };
    let field = |z: C, prev: C| -> (C, C) {
        let zc = track(z, prev);
        let v = -z / zc;
        (v / v.norm(), zc)
    };
    let mut pts = vec![z1, z];
    let stop = 1e-7 * scale;
    let mut guard = 0;
    while z.norm() > stop {
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::NoConvergence("cut tracing did not reach z = 0".into()));
        }
        let h = (0.002 * scale).min(0.25 * (z - z1).norm()).min(0.05 * z.norm());
        let (k1, z_1) = field(z, zz);
        let (k2, _) = field(z + 0.5 * h * k1, z_1);
        let (k3, _) = field(z + 0.5 * h * k2, z_1);
        let (k4, _) = field(z + h * k3, z_1);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        zz = track(z, z_1);
        if (z - z1).norm() > 1e-3 * scale {
            // Newton projection back onto Im xi = 0
            for _ in 0..3 {
                let xi = xi_right(alpha, z, zz);
                if xi.im.abs() < 1e-15 * (1.0 + xi.norm()) {
                    break;
                }
                z -= I * xi.im * z / zz;
                zz = track(z, zz);
            }
        }
        if z.im < -1e-12 * scale {
            return Err(Error::Path(format!("cut left the upper half-plane at {z}")));
        }
        pts.push(z);
    }
    pts.push(C::new(0.0, 0.0));
    Ok(pts)
}

fn xi_right(alpha: f64, z: C, zz: C) -> C {
    let num = 4.0 * zz + 2.0 * alpha * (zz + z + 2.0) + 4.0 + alpha * alpha;
    zz - (1.0 + 0.5 * alpha) * (num / z).ln() + 0.5 * alpha * (2.0 * zz + 2.0 * z + alpha).ln()
        + 0.5 * (1.0 + alpha).ln()
        + (2.0 + 0.5 * alpha) * LN_2
        - I * (0.5 * (1.0 + alpha) * PI)
}

fn dist_to_segment(z: C, p: C, q: C) -> f64 {
    let d = q - p;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - p).norm();
    }
    let t = ((z - p) * d.conj()).re / l2;
    let t = t.clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

fn dist_to_polyline(z: C, pts: &[C]) -> f64 {
    pts.windows(2)
        .map(|e| dist_to_segment(z, e[0], e[1]))
        .fold(f64::INFINITY, f64::min)
}

fn cross(a: C, b: C) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Whether segment `p + t (q - p)`, `t in [t_min, 1]`, meets segment `a b`.
fn segments_intersect(p: C, q: C, a: C, b: C, t_min: f64) -> bool {
    let r = q - p;
    let s = b - a;
    let den = cross(r, s);
    if den == 0.0 {
        return false;
    }
    let t = cross(a - p, s) / den;
    let u = cross(a - p, r) / den;
    t >= t_min && t <= 1.0 && (0.0..=1.0).contains(&u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mapping(n: u32, a: f64) -> (ProblemParams, Mapping) {
        let p = ProblemParams::new(n, a).unwrap();
        let m = Mapping::new(&p).unwrap();
        (p, m)
    }

    fn alpha_mapping(alpha: f64) -> Mapping {
        Mapping::from_alpha(alpha).unwrap()
    }

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn f_and_g_at_unit_point() {
        let p = ProblemParams::new(10, 2.0).unwrap();
        let (f, g, _) = f_g_psi(&p, c(1.0, 0.0)).unwrap();
        assert!((f - 2.0).norm() < 1e-15);
        assert!((g + 0.25).norm() < 1e-15);
        assert_eq!(f_g_psi(&p, c(0.0, 0.0)), Err(Error::PoleAtZero));
    }

    #[test]
    fn psi_limits() {
        let p = ProblemParams::new(20, 1.2).unwrap();
        let small: Vec<f64> = [1e-5, 1e-6]
            .iter()
            .map(|&r| f_g_psi(&p, c(r, r)).unwrap().2.norm() / r)
            .collect();
        assert!((small[0] / small[1] - 1.0).abs() < 1e-2);
        let big: Vec<f64> = [1e3, 1e4]
            .iter()
            .map(|&r| f_g_psi(&p, c(0.3 * r, r)).unwrap().2.norm() * r * r)
            .collect();
        assert!((big[0] / big[1] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn turning_point_values() {
        let p = ProblemParams::new(10, 2.0).unwrap();
        let (z1, z2) = turning_points(&p).unwrap();
        assert!((z1 - c(0.0, 1.0)).norm() < 1e-15 && (z2 - c(0.0, -1.0)).norm() < 1e-15);
        // alpha = 3: a = 2 + 3u
        let p = ProblemParams::new(1, 6.5).unwrap();
        assert!((p.alpha - 3.0).abs() < 1e-15);
        let (z1, _) = turning_points(&p).unwrap();
        assert!((z1 - c(-1.5, 2.0)).norm() < 1e-15);
        for &al in &[0.0, 0.5, 3.0] {
            let m = alpha_mapping(al);
            assert!((m.z1.norm() - (1.0 + 0.5 * al)).abs() < 1e-14);
        }
    }

    #[test]
    fn monotone_classifier_agrees_with_crossing_count() {
        for &al in &[-0.039, 0.0, 0.5, 3.0, -0.9] {
            let m = alpha_mapping(al);
            assert!(m.cut_monotone);
            let mut slow = m.clone();
            slow.cut_monotone = false;
            for i in 0..80 {
                for j in 0..40 {
                    let z = c(-4.0 + 0.1 * (i as f64) + 1e-3, 0.07 * (j as f64));
                    assert_eq!(m.side(z), slow.side(z), "al {al} z {z}");
                }
            }
        }
    }

    #[test]
    fn big_z_axis_signs() {
        let m = alpha_mapping(0.0);
        let (z, s) = m.big_z(c(2.0, 0.0)).unwrap();
        assert_eq!(s, Side::Right);
        assert!((z - 5f64.sqrt()).norm() < 1e-15);
        let (z, s) = m.big_z(c(-2.0, 0.0)).unwrap();
        assert_eq!(s, Side::Left);
        assert!((z + 5f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn big_z_above_turning_point_continues_from_the_right() {
        let m = alpha_mapping(0.0);
        let (target, _) = m.big_z(c(0.0, 3.0)).unwrap();
        // follow the arc z = 2..3i with numeric sqrt tracking
        let mut prev = 5f64.sqrt() * c(1.0, 0.0);
        let steps = 2000;
        for k in 0..=steps {
            let t = (k as f64) / (steps as f64);
            let z = c(2.0 + t * (0.0 - 2.0), 3.0 * t);
            let r = (z * z + 1.0).sqrt();
            prev = if (r - prev).norm() < (r + prev).norm() { r } else { -r };
        }
        assert!((target - prev).norm() < 1e-12);
        assert!((target - c(0.0, 8f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn z_is_continuous_off_the_cut() {
        let m = alpha_mapping(-0.039);
        let mut prev: Option<C> = None;
        // a path crossing the vertical ray above z1 and the negative axis region
        for k in 0..=4000 {
            let t = (k as f64) / 4000.0;
            let z = c(3.0 - 6.0 * t, 2.5);
            let (v, _) = m.big_z(z).unwrap();
            if let Some(p) = prev {
                assert!((v - p).norm() < 1e-2, "jump at {z}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn cut_is_a_level_curve_of_im_xi() {
        for &al in &[-0.039, 0.0, 0.5, 3.0, -0.9] {
            let m = alpha_mapping(al);
            let cut = m.cut();
            for z in cut.iter().skip(1).step_by(37) {
                if z.norm() < 1e-3 {
                    continue;
                }
                let zz = m.big_z_on(*z, false);
                let (xi, _) = m.xi_closed_raw(*z, zz);
                assert!(xi.im.abs() < 1e-11, "al {al} z {z} xi {xi}");
                assert!(xi.re < 0.0);
            }
        }
    }

    #[test]
    fn xi_vanishes_at_turning_point() {
        let (_, m) = mapping(20, 1.2);
        assert_eq!(m.xi_closed(m.z1).unwrap(), c(0.0, 0.0));
        let near = m.z1 + c(1e-7, 1e-7);
        assert!(m.xi(near).unwrap().norm() < 1e-10);
    }

    #[test]
    fn xi_closed_matches_quadrature_on_grid() {
        for &a in &[1.2, 2.0, 5.0] {
            let (_, m) = mapping(20, a);
            let mut worst: f64 = 0.0;
            for i in 0..20 {
                for j in 0..10 {
                    let r = 0.05 * (400f64).powf(i as f64 / 19.0);
                    let th = PI * (j as f64) / 9.0;
                    let z = C::from_polar(r, th);
                    if (z - m.z1).norm() < 0.1 || dist_to_polyline(z, m.cut()) < 1e-3 {
                        continue;
                    }
                    let x1 = m.xi_closed(z).unwrap();
                    let x2 = m.xi_quadrature(z).unwrap();
                    worst = worst.max((x1 - x2).norm());
                }
            }
            assert!(worst < 1e-9, "a {a} worst {worst}");
        }
    }

    #[test]
    fn xi_quadrature_on_positive_axis_has_constant_imaginary_part() {
        let (p, m) = mapping(20, 1.2);
        for &x in &[0.1, 1.0, 7.0] {
            let xi = m.xi_quadrature(c(x, 0.0)).unwrap();
            assert!((xi.im + 0.5 * (1.0 + p.alpha) * PI).abs() < 1e-10);
        }
    }

    #[test]
    fn xi_derivative_by_finite_differences() {
        let (_, m) = mapping(20, 1.2);
        let h = 1e-6;
        for k in 0..50 {
            let th = 0.05 + 3.0 * (k as f64) / 50.0;
            let r = 0.3 + 0.1 * (k as f64);
            let z = C::from_polar(r, th);
            if (z - m.z1).norm() < 0.1 || dist_to_polyline(z, m.cut()) < 1e-3 {
                continue;
            }
            let d = (m.xi(z + h).unwrap() - m.xi(z - h).unwrap()) / (2.0 * h);
            let (zz, _) = m.big_z(z).unwrap();
            let want = zz / z;
            assert!((d - want).norm() / want.norm() < 1e-6, "z {z}");
        }
    }

    #[test]
    fn zeta_of_xi_examples() {
        assert!((zeta_of_xi(c(2.0 / 3.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((zeta_of_xi(c(-1.0, 0.0)).arg() - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((zeta_of_xi(c(0.0, -PI / 2.0)).arg() + PI / 3.0).abs() < 1e-14);
        assert_eq!(zeta_of_xi(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn analytic_zeta_satisfies_defining_relation_and_is_continuous() {
        let (_, m) = mapping(20, 1.2);
        let mut grid = Vec::new();
        for i in 0..60 {
            for j in 0..30 {
                grid.push(c(-3.0 + 0.1 * (i as f64), 0.02 + 0.1 * (j as f64)));
            }
        }
        for z in grid {
            if dist_to_polyline(z, m.cut()) < 1e-9 {
                continue;
            }
            let p = m.point(z).unwrap();
            let back = (2.0 / 3.0) * p.zeta_sqrt.powi(3);
            assert!((back - p.xi).norm() < 1e-12 * (1.0 + p.xi.norm()), "z {z}");
            assert!((p.zeta_sqrt * p.zeta_sqrt - p.zeta).norm() < 1e-13 * (1.0 + p.zeta.norm()));
            let q = m.point(z + 1e-4).unwrap();
            if z.norm() > 0.05 {
                assert!((q.zeta - p.zeta).norm() < 1e-2, "zeta jump at {z}");
            }
        }
    }

    #[test]
    fn zeta_is_negative_on_ah() {
        let (_, m) = mapping(20, 1.2);
        let line = m.trace_stokes(StokesBranch::AH).unwrap();
        for z in line.points.iter().skip(5).step_by(10) {
            let p = m.point(*z).unwrap();
            assert!(p.zeta.re < 0.0 && p.zeta.im.abs() < 1e-8 * p.zeta.norm(), "{}", p.zeta);
        }
    }

    #[test]
    fn phi_trig_identities() {
        let m = alpha_mapping(0.3);
        let x = -0.15 + m.sigma;
        let (s, co) = m.phi_trig(c(x, 0.0)).unwrap();
        assert!((s - 0.5f64.sqrt()).norm() < 1e-14 && (co - 0.5f64.sqrt()).norm() < 1e-14);
        let (_, co) = m.phi_trig(C::from_polar(1e8, PI / 4.0)).unwrap();
        assert!((co - 1.0).norm() < 1e-7);
        let mut seed = 12345u64;
        for _ in 0..100 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u1 = (seed >> 11) as f64 / (1u64 << 53) as f64;
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u2 = (seed >> 11) as f64 / (1u64 << 53) as f64;
            let z = c(-5.0 + 10.0 * u1, 5.0 * u2 + 1e-3);
            if (z - m.z1).norm() < 1e-3 {
                continue;
            }
            let (s, co) = m.phi_trig(z).unwrap();
            assert!((s * s + co * co - 1.0).norm() < 1e-14);
        }
        assert!(matches!(m.phi_trig(m.z1), Err(Error::TurningPoint(_))));
    }

    #[test]
    fn invert_xi_round_trips() {
        let (_, m) = mapping(20, 1.2);
        let t = m.xi(c(2.0, 0.0)).unwrap();
        let z = m.invert_xi(t, c(2.5, 0.0)).unwrap();
        assert!((z - 2.0).norm() < 1e-12);
        assert_eq!(m.invert_xi(c(0.0, 0.0), m.z1 + 0.1).unwrap(), m.z1);
        let x1 = m.invert_xi(c(0.0, -PI / 2.0), c(-0.3, 0.0)).unwrap();
        assert!(x1.re < 0.0 && x1.im.abs() < 1e-10, "{x1}");
        assert!((x1.re - m.x1().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn stokes_lines_start_at_z1_and_stay_on_level_curve() {
        let (_, m) = mapping(20, 1.2);
        for b in [StokesBranch::AD, StokesBranch::AH, StokesBranch::AF] {
            let line = m.trace_stokes(b).unwrap();
            assert_eq!(line.points[0], m.z1);
            for x in &line.xi_values {
                assert!(x.re.abs() < 1e-10, "{} {x}", b.name());
            }
        }
        let ah = m.trace_stokes(StokesBranch::AH).unwrap();
        let end = *ah.xi_values.last().unwrap();
        assert!((end - c(0.0, -PI / 2.0)).norm() < 1e-8, "{end}");
        let x1 = ah.points.last().unwrap().re;
        assert!((x1 + 0.643104491492547).abs() < 1e-9, "{x1}");
        let ad = m.trace_stokes(StokesBranch::AD).unwrap();
        assert!(ad.points.last().unwrap().re > 0.0);
        let af = m.trace_stokes(StokesBranch::AF).unwrap();
        assert!(af.xi_values.last().unwrap().im > 1.0);
    }

    #[test]
    fn tau0_for_alpha_zero() {
        let m = alpha_mapping(0.0);
        assert!((m.z1.arg() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn stokes_csv_has_header_and_rows() {
        let (_, m) = mapping(20, 1.2);
        let line = m.trace_stokes(StokesBranch::AH).unwrap();
        let csv = line.to_csv(true);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("branch,k,re_z,im_z,re_xi,im_xi"));
        assert_eq!(csv.lines().count(), line.points.len() + 1);
    }

    #[test]
    fn reflection_conjugates_values() {
        let (_, m) = mapping(20, 1.2);
        for z in [c(1.0, 0.5), c(-2.0, 0.3), c(0.2, 2.0)] {
            let a = m.point(z).unwrap();
            let b = m.point(z.conj()).unwrap();
            assert_eq!(a.xi.conj(), b.xi);
            assert_eq!(a.zeta.conj(), b.zeta);
            assert_eq!(a.big_z.conj(), b.big_z);
        }
    }

    #[test]
    fn xi_big_matches_double_precision() {
        let (p, m) = mapping(20, 1.2);
        for z in [c(2.0, 0.0), c(-2.0, 0.5), c(0.3, 0.2), c(-5.0, 0.0), c(1.0, 3.0)] {
            let big = m.xi_big(&p, &BigComplex::from_c64(z, 200)).unwrap();
            let x = m.xi(z).unwrap();
            assert!((big.to_c64() - x).norm() < 1e-13 * (1.0 + x.norm()), "z {z}");
        }
    }
}
