//! Exponential, logarithm branches, iterated exponentials, spherical
//! coordinates and the nested maps `E₂`, `E₆`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::algebra::{gen, CdNumber};
use crate::error::{CdError, Result};
use crate::plane::{axis_of, REAL_CUTOFF};

pub fn exp(z: &CdNumber) -> CdNumber {
    let v = z.im();
    let th = v.norm();
    let er = z.re().exp();
    let sinc = if th < 1e-8 { 1.0 - th * th / 6.0 } else { th.sin() / th };
    (v.scale(er * sinc) + er * th.cos()).lift(z.level())
}

/// Directional derivative of `exp` at `x` along `h`.
pub fn exp_derivative(x: &CdNumber, h: &CdNumber) -> CdNumber {
    let v = x.im();
    let w = h.im();
    let th = v.norm();
    let vw = v.dot(&w);
    let (sinc, g) = if th < 1e-4 {
        let t2 = th * th;
        (1.0 - t2 / 6.0 + t2 * t2 / 120.0, -1.0 / 3.0 + t2 / 30.0)
    } else {
        (th.sin() / th, (th * th.cos() - th.sin()) / (th * th * th))
    };
    let e = exp(x);
    let inner = w.scale(sinc) + v.scale(vw * g) - sinc * vw;
    (e.scale(h.re()) + inner.scale(x.re().exp())).lift(x.level().max(h.level()))
}

/// `|z| exp(axis (angle + 2π branch))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub modulus: f64,
    pub axis: CdNumber,
    pub angle: f64,
    pub branch: i64,
}

impl PolarForm {
    pub fn reconstruct(&self) -> CdNumber {
        let phi = self.angle + TAU * self.branch as f64;
        exp(&self.axis.scale(phi)).scale(self.modulus)
    }
}

/// Polar decomposition with angle in `[0, π]`; negative reals get axis `i1`.
pub fn polar(z: &CdNumber) -> Result<PolarForm> {
    polar_branch(z, 0)
}

pub fn polar_branch(z: &CdNumber, branch: i64) -> Result<PolarForm> {
    let r = z.norm();
    if r == 0.0 {
        return Err(CdError::ZeroArgument("polar"));
    }
    let level = z.level().max(1);
    let (axis, angle) = match axis_of(z) {
        Some(m) => (m.lift(level), z.im_norm().atan2(z.re())),
        None => (gen(1).lift(level), if z.re() < 0.0 { PI } else { 0.0 }),
    };
    Ok(PolarForm { modulus: r, axis, angle, branch })
}

/// `ln|z| + M (φ + 2π n)`.
pub fn ln(z: &CdNumber, branch: i64) -> Result<CdNumber> {
    let p = polar_branch(z, branch)?;
    let phi = p.angle + TAU * branch as f64;
    Ok(p.axis.scale(phi) + p.modulus.ln())
}

/// The logarithm of `z` closest to `prev`; when `z` is real the previous
/// axis is kept. Returns the value and its distance from `prev`.
pub fn ln_nearest(z: &CdNumber, prev: &CdNumber) -> Result<(CdNumber, f64)> {
    let r = z.norm();
    if r == 0.0 {
        return Err(CdError::ZeroArgument("ln"));
    }
    let level = z.level().max(prev.level()).max(1);
    let (m, phi) = match axis_of(z) {
        Some(m) => (m.lift(level), z.im_norm().atan2(z.re())),
        None => {
            let m = axis_of(&prev.im()).unwrap_or_else(|| gen(1)).lift(level);
            (m, if z.re() < 0.0 { PI } else { 0.0 })
        }
    };
    let s = prev.im().dot(&m);
    let k = ((s - phi) / TAU).round();
    let val = m.scale(phi + TAU * k) + r.ln();
    let jump = val.dist(prev);
    Ok((val, jump))
}

/// `exp(w · ln(z, branch))`.
pub fn power(z: &CdNumber, w: &CdNumber, branch: i64) -> Result<CdNumber> {
    if w.is_real(0.0) {
        let e = w.re();
        if e.fract() == 0.0 && e.abs() <= 64.0 {
            return int_power(z, e as i64);
        }
    }
    Ok(exp(&(*w * ln(z, branch)?)))
}

/// Repeated multiplication; exact up to rounding (power associativity).
pub fn int_power(z: &CdNumber, n: i64) -> Result<CdNumber> {
    let base = if n < 0 { z.inverse()? } else { *z };
    let mut acc = CdNumber::one(z.level());
    let mut b = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        k >>= 1;
    }
    Ok(acc)
}

/// `Exp_n(a_1..a_n; z) = Exp_{n-1}(a_1..a_{n-1}; exp(a_n z))`.
pub fn exp_n(a: &[CdNumber], z: &CdNumber) -> Result<CdNumber> {
    if a.is_empty() {
        return Err(CdError::Invalid("exp_n needs at least one coefficient".into()));
    }
    let mut w = *z;
    for ak in a.iter().rev() {
        if ak.norm() == 0.0 {
            return Err(CdError::ZeroArgument("exp_n coefficient"));
        }
        w = exp(&(*ak * w));
    }
    Ok(w)
}

/// Inverse of [`exp_n`]: peels `a_1` first, `w ↦ a_k⁻¹ Ln(w)` for k = 1..n.
/// `branches` may be shorter than `a`; missing entries are 0.
pub fn ln_n(a: &[CdNumber], z: &CdNumber, branches: &[i64]) -> Result<CdNumber> {
    if a.is_empty() {
        return Err(CdError::Invalid("ln_n needs at least one coefficient".into()));
    }
    let mut w = *z;
    for (k, ak) in a.iter().enumerate() {
        if w.norm() == 0.0 {
            return Err(CdError::ZeroArgument("ln_n intermediate"));
        }
        let l = ln(&w, branches.get(k).copied().unwrap_or(0))?;
        w = l.div_left(ak).map_err(|_| CdError::ZeroArgument("ln_n coefficient"))?;
    }
    Ok(w)
}

/// Branch-continuous evaluation of `ln_n` along a sequence of arguments.
#[derive(Clone, Debug)]
pub struct LnChain {
    a: Vec<CdNumber>,
    logs: Vec<Option<CdNumber>>,
}

impl LnChain {
    pub fn new(a: &[CdNumber]) -> Result<Self> {
        if a.is_empty() {
            return Err(CdError::Invalid("ln_n needs at least one coefficient".into()));
        }
        if a.iter().any(|x| x.norm() == 0.0) {
            return Err(CdError::ZeroArgument("ln_n coefficient"));
        }
        Ok(Self { a: a.to_vec(), logs: vec![None; a.len()] })
    }

    /// Chain whose branches satisfy `Ln_n(a; Exp_n(a; z)) = z` at the given `z`.
    pub fn seeded(a: &[CdNumber], z: &CdNumber) -> Result<Self> {
        let mut ch = Self::new(a)?;
        let mut v = *z;
        for k in (0..a.len()).rev() {
            let l = a[k] * v;
            ch.logs[k] = Some(l);
            v = exp(&l);
        }
        Ok(ch)
    }

    /// Next value; also returns the largest per-stage log jump.
    pub fn next(&mut self, z: &CdNumber) -> Result<(CdNumber, f64)> {
        let mut w = *z;
        let mut worst = 0.0f64;
        let mut logs = self.logs.clone();
        for (k, ak) in self.a.iter().enumerate() {
            if w.norm() == 0.0 {
                return Err(CdError::BranchFailure(format!("stage {} hits zero", k + 1)));
            }
            let l = match &logs[k] {
                None => ln(&w, 0)?,
                Some(prev) => {
                    let (v, jump) = ln_nearest(&w, prev)?;
                    worst = worst.max(jump);
                    v
                }
            };
            logs[k] = Some(l);
            w = l.div_left(ak)?;
        }
        self.logs = logs;
        Ok((w, worst))
    }

    /// Evaluates without committing the branch state.
    pub fn peek(&self, z: &CdNumber) -> Result<(CdNumber, f64)> {
        let mut c = self.clone();
        c.next(z)
    }
}

/// Radius and angles `θ₁ ∈ [0, 2π)`, `θ_j ∈ [0, π]` for j ≥ 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalCoords {
    pub radius: f64,
    pub theta: Vec<f64>,
}

/// Unit axis `i1 cos θ₂ + i2 sin θ₂ cos θ₃ + … + i_m sin θ₂ ⋯ sin θ_m`
/// from the full angle list (θ₁ is ignored).
pub fn axis_from_angles(theta: &[f64]) -> Result<CdNumber> {
    let m = theta.len();
    let level = level_for_angles(m)?;
    let mut c = [0.0; 8];
    if m == 0 {
        return Ok(CdNumber::zero(level));
    }
    let mut s = 1.0;
    for j in 1..m {
        c[j] = s * theta[j].cos();
        s *= theta[j].sin();
    }
    c[m] = s;
    Ok(CdNumber::from_array(level, c))
}

fn level_for_angles(m: usize) -> Result<u8> {
    match m {
        0 => Ok(0),
        1 => Ok(1),
        3 => Ok(2),
        7 => Ok(3),
        _ => Err(CdError::Invalid(format!("{m} angles do not match any level"))),
    }
}

pub fn to_spherical(z: &CdNumber) -> Result<SphericalCoords> {
    let a = z.norm();
    if a == 0.0 {
        return Err(CdError::ZeroArgument("to_spherical"));
    }
    let x = z.coeffs();
    let n = x.len();
    let m = n - 1;
    if m == 0 {
        return Ok(SphericalCoords { radius: a, theta: vec![] });
    }
    let s: f64 = if x[m] < 0.0 { -1.0 } else { 1.0 };
    // tail[j] = ‖x_j..x_m‖
    let mut tail = vec![0.0f64; n + 1];
    for j in (0..n).rev() {
        tail[j] = tail[j + 1].hypot(x[j]);
    }
    let mut theta = vec![0.0; m];
    let mut t1 = (s * tail[1]).atan2(x[0]);
    if t1 < 0.0 {
        t1 += TAU;
    }
    theta[0] = t1;
    for j in 1..m {
        theta[j] = tail[j + 1].atan2(s * x[j]);
    }
    Ok(SphericalCoords { radius: a, theta })
}

pub fn from_spherical(sc: &SphericalCoords) -> Result<CdNumber> {
    if sc.theta.is_empty() {
        return Ok(CdNumber::real(sc.radius));
    }
    let m = axis_from_angles(&sc.theta)?;
    Ok(exp(&m.scale(sc.theta[0])).scale(sc.radius))
}

/// Generators and signs of the nested exponential, outermost first:
/// `E = p0 + p1 g1 W1`, `W_k = exp(σ_{k+1} p_{k+1} g_{k+1} W_{k+1})`.
const E_GENS_H: [(usize, f64); 3] = [(1, 1.0), (3, -1.0), (1, -1.0)];
const E_GENS_O: [(usize, f64); 7] =
    [(1, 1.0), (3, -1.0), (1, -1.0), (7, -1.0), (1, 1.0), (3, -1.0), (1, -1.0)];

fn e_chain(level: u8) -> Result<&'static [(usize, f64)]> {
    match level {
        2 => Ok(&E_GENS_H),
        3 => Ok(&E_GENS_O),
        _ => Err(CdError::LevelMismatch("E needs level 2 or 3".into())),
    }
}

/// `E₂` on ℍ and `E₆` on 𝕆, evaluated as the literal nested exponential.
/// Complex arguments are returned unchanged.
pub fn e_map(p: &CdNumber) -> Result<CdNumber> {
    if p.level() < 2 {
        return Ok(*p);
    }
    let chain = e_chain(p.level())?;
    let b = p.level();
    let m = chain.len();
    let mut w = CdNumber::one(b);
    for k in (1..m).rev() {
        let (g, sg) = chain[k];
        let x = (gen(g).lift(b) * w).scale(sg * p.coeff(k + 1));
        w = exp(&x);
    }
    Ok((gen(chain[0].0).lift(b) * w).scale(p.coeff(1)) + p.re())
}

/// Unit imaginary `K` with `E(p) = p0 + p1 K`.
pub fn e_axis(p: &CdNumber) -> Result<CdNumber> {
    let q = p.with_coeff(0, 0.0).with_coeff(1, 1.0);
    e_map(&q)
}

/// Inverse of [`e_map`] on the principal domain `p1 > 0`,
/// `p2..p_{m-1} ∈ (0, π)`, `p_m ∈ [0, 2π)`; `branch` shifts the last angle.
/// Complex arguments are returned unchanged.
pub fn e_inv(z: &CdNumber, branch: i64) -> Result<CdNumber> {
    let b = z.level();
    if b < 2 || z.lies_in(1, REAL_CUTOFF * z.norm()) {
        return Ok(*z);
    }
    let chain = e_chain(b)?;
    let m = chain.len();
    let v = z.im();
    let p1 = v.norm();
    let mut p = [0.0; 8];
    p[0] = z.re();
    p[1] = p1;
    let k_axis = v.scale(1.0 / p1);
    // W1 = g1⁻¹ K
    let mut w = -(gen(chain[0].0).lift(b) * k_axis);
    for k in 1..m {
        let (g, sg) = chain[k];
        let gk = gen(g).lift(b);
        let c = w.re();
        let iw = w.im();
        if k == m - 1 {
            let mut ang = (sg * iw.dot(&gk)).atan2(c);
            if ang < 0.0 {
                ang += TAU;
            }
            p[k + 1] = ang + TAU * branch as f64;
        } else {
            let s = iw.norm();
            if s <= 1e-12 {
                return Err(CdError::DegenerateAngles(format!(
                    "sin p{} vanishes; later angles are undetermined",
                    k + 1
                )));
            }
            p[k + 1] = s.atan2(c);
            let u = iw.scale(sg / s);
            w = -(gk * u);
        }
    }
    Ok(CdNumber::from_array(b, p))
}
