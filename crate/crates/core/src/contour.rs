//! Line integrals of `𝒜_b`-valued differential forms along parametric
//! paths, residues, `n`-residues and the argument variation `Δ Arg_n`.
//!
//! Integrands are ℝ-linear forms `ω(z, dz)`. The usual `f(z) dz` (right
//! order) and `dz f(z)` (left order) are the two standard forms; a general
//! form lets the increment sit inside a product such as
//! `a((b (z−y)⁻¹ dz) c) e`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::CdNumber;
use crate::error::{CdError, Result};
use crate::qcx::{eval_extension, ExtensionSpec};
use crate::quad::{integrate, periodic, QuadOptions};
use crate::transcend::{exp, exp_n, LnChain};

pub const MAX_SAMPLES: usize = 1 << 20;
const FD_STEP: f64 = 2e-4;

pub type PathFn = Arc<dyn Fn(f64) -> CdNumber + Send + Sync>;

#[derive(Clone)]
pub enum Path {
    Segment { from: CdNumber, to: CdNumber },
    /// `center + radius · exp(2π t axis)` for `t ∈ [t0, t1]`.
    Arc { center: CdNumber, radius: f64, axis: CdNumber, t0: f64, t1: f64 },
    Custom { map: PathFn, closed: bool },
    Concat(Vec<Path>),
    Reversed(Box<Path>),
}

impl std::fmt::Debug for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Path::Segment { from, to } => write!(f, "Segment({from} -> {to})"),
            Path::Arc { center, radius, axis, t0, t1 } => {
                write!(f, "Arc({center}, {radius}, {axis}, [{t0}, {t1}])")
            }
            Path::Custom { closed, .. } => write!(f, "Custom(closed={closed})"),
            Path::Concat(p) => f.debug_list().entries(p).finish(),
            Path::Reversed(p) => write!(f, "Reversed({p:?})"),
        }
    }
}

impl Path {
    pub fn segment(from: CdNumber, to: CdNumber) -> Self {
        Path::Segment { from, to }
    }

    /// Full positively oriented circle in the plane `center + (ℝ ⊕ axis ℝ)`.
    pub fn circle(center: CdNumber, radius: f64, axis: CdNumber) -> Result<Self> {
        Self::arc(center, radius, axis, 0.0, 1.0)
    }

    pub fn arc(center: CdNumber, radius: f64, axis: CdNumber, t0: f64, t1: f64) -> Result<Self> {
        let a = axis.im();
        let n = a.norm();
        if n == 0.0 || !(radius > 0.0) {
            return Err(CdError::Invalid("arc needs a positive radius and an imaginary axis".into()));
        }
        Ok(Path::Arc { center, radius, axis: a.scale(1.0 / n), t0, t1 })
    }

    pub fn custom<F>(map: F, closed: bool) -> Result<Self>
    where
        F: Fn(f64) -> CdNumber + Send + Sync + 'static,
    {
        if closed {
            let (a, b) = (map(0.0), map(1.0));
            if a.dist(&b) > 1e-9 * a.norm().max(1.0) {
                return Err(CdError::Invalid("closed path endpoints differ".into()));
            }
        }
        Ok(Path::Custom { map: Arc::new(map), closed })
    }

    pub fn concat(parts: Vec<Path>) -> Result<Self> {
        if parts.is_empty() {
            return Err(CdError::Invalid("empty path list".into()));
        }
        for w in parts.windows(2) {
            let (e, s) = (w[0].point(1.0), w[1].point(0.0));
            if e.dist(&s) > 1e-9 * e.norm().max(1.0) {
                return Err(CdError::Invalid("concatenated pieces do not meet".into()));
            }
        }
        Ok(Path::Concat(parts))
    }

    pub fn reversed(self) -> Self {
        match self {
            Path::Reversed(p) => *p,
            p => Path::Reversed(Box::new(p)),
        }
    }

    pub fn point(&self, t: f64) -> CdNumber {
        match self {
            Path::Segment { from, to } => *from + (*to - *from).scale(t),
            Path::Arc { center, radius, axis, t0, t1 } => {
                let s = t0 + (t1 - t0) * t;
                *center + exp(&axis.scale(TAU * s)).scale(*radius)
            }
            Path::Custom { map, .. } => map(t),
            Path::Concat(parts) => {
                let (k, s) = piece(parts.len(), t);
                parts[k].point(s)
            }
            Path::Reversed(p) => p.point(1.0 - t),
        }
    }

    pub fn derivative(&self, t: f64) -> CdNumber {
        match self {
            Path::Segment { from, to } => *to - *from,
            Path::Arc { radius, axis, t0, t1, .. } => {
                let s = t0 + (t1 - t0) * t;
                (*axis * exp(&axis.scale(TAU * s))).scale(TAU * (t1 - t0) * radius)
            }
            Path::Custom { map, .. } => five_point(map.as_ref(), t),
            Path::Concat(parts) => {
                let n = parts.len();
                let (k, s) = piece(n, t);
                parts[k].derivative(s).scale(n as f64)
            }
            Path::Reversed(p) => -p.derivative(1.0 - t),
        }
    }

    pub fn is_closed(&self) -> bool {
        let (a, b) = (self.point(0.0), self.point(1.0));
        a.dist(&b) <= 1e-9 * a.norm().max(1.0)
    }

    /// Polygonal length estimate from `samples` chords.
    pub fn length(&self, samples: usize) -> f64 {
        let n = samples.max(1);
        (0..n).map(|k| self.point((k + 1) as f64 / n as f64).dist(&self.point(k as f64 / n as f64))).sum()
    }

    fn is_full_circle(&self) -> bool {
        matches!(self, Path::Arc { t0, t1, .. } if ((t1 - t0).abs() - (t1 - t0).abs().round()).abs() < 1e-15 && (t1 - t0).abs() >= 1.0)
    }
}

fn piece(n: usize, t: f64) -> (usize, f64) {
    let x = t.clamp(0.0, 1.0) * n as f64;
    let k = (x.floor() as usize).min(n - 1);
    (k, x - k as f64)
}

/// Five-point derivative, one-sided near the ends of `[0, 1]`.
fn five_point(f: &(dyn Fn(f64) -> CdNumber + Send + Sync), t: f64) -> CdNumber {
    let h = FD_STEP;
    if t - 2.0 * h >= 0.0 && t + 2.0 * h <= 1.0 {
        (f(t - 2.0 * h) - f(t - h).scale(8.0) + f(t + h).scale(8.0) - f(t + 2.0 * h)).scale(1.0 / (12.0 * h))
    } else {
        let s = if t - 2.0 * h < 0.0 { 1.0 } else { -1.0 };
        let p = |k: f64| f(t + s * k * h);
        (p(0.0).scale(-25.0) + p(1.0).scale(48.0) - p(2.0).scale(36.0) + p(3.0).scale(16.0) - p(4.0).scale(3.0))
            .scale(s / (12.0 * h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// `f(z) · dz`
    #[default]
    Right,
    /// `dz · f(z)`
    Left,
}

/// Integral of the form `ω(z, dz)` along `path`.
pub fn form_integral<W>(omega: W, path: &Path, tol: f64) -> Result<CdNumber>
where
    W: Fn(&CdNumber, &CdNumber) -> Result<CdNumber>,
{
    form_integral_dyn(&omega, path, tol)
}

type Form<'a> = &'a dyn Fn(&CdNumber, &CdNumber) -> Result<CdNumber>;

fn form_integral_dyn(omega: Form, path: &Path, tol: f64) -> Result<CdNumber> {
    match path {
        Path::Concat(parts) => {
            let mut acc = CdNumber::zero(0);
            for p in parts {
                acc += form_integral_dyn(omega, p, tol)?;
            }
            Ok(acc)
        }
        Path::Reversed(p) if !matches!(**p, Path::Custom { .. }) => Ok(-form_integral_dyn(omega, p, tol)?),
        _ => {
            let g = |t: f64| -> Result<CdNumber> {
                let v = omega(&path.point(t), &path.derivative(t))?;
                if !v.is_finite() {
                    return Err(CdError::EvaluationFailure(format!("non-finite integrand at t = {t}")));
                }
                Ok(v)
            };
            let r = if path.is_full_circle() {
                periodic(g, tol, MAX_SAMPLES)
            } else {
                integrate(g, 0.0, 1.0, &QuadOptions { abs_tol: tol, rel_tol: tol, max_intervals: MAX_SAMPLES / 15 })
            };
            r.map(|q| q.value).map_err(|e| match e {
                CdError::QuadratureFailure(m) => CdError::NoConvergence(m),
                other => other,
            })
        }
    }
}

pub fn line_integral<F>(f: F, path: &Path, tol: f64, order: Order) -> Result<CdNumber>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    match order {
        Order::Right => form_integral(|z, dz| Ok(f(z)? * *dz), path, tol),
        Order::Left => form_integral(|z, dz| Ok(*dz * f(z)?), path, tol),
    }
}

fn unit_axis(n: &CdNumber) -> Result<(CdNumber, f64)> {
    let a = n.im();
    let s = a.norm();
    if s == 0.0 {
        return Err(CdError::Invalid("residue direction must be a nonzero imaginary".into()));
    }
    Ok((a.scale(1.0 / s), s))
}

/// `res(z0, ω).N = (2π)⁻¹ ∮ ω` over `z0 + ρ exp(2π t N/|N|)`, scaled by `|N|`.
pub fn residue_form<W>(omega: W, z0: &CdNumber, n: &CdNumber, rho: f64, tol: f64) -> Result<CdNumber>
where
    W: Fn(&CdNumber, &CdNumber) -> Result<CdNumber>,
{
    if n.norm() == 0.0 {
        return Ok(CdNumber::zero(z0.level()));
    }
    let (u, s) = unit_axis(n)?;
    let path = Path::circle(*z0, rho, u)?;
    Ok(form_integral(omega, &path, tol)?.scale(s / TAU))
}

pub fn residue<F>(f: F, z0: &CdNumber, n: &CdNumber, rho: f64, tol: f64) -> Result<CdNumber>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    residue_form(|z, dz| Ok(f(z)? * *dz), z0, n, rho, tol)
}

/// `n`-residue with `a = (a_1, …, a_{n−1})`. The loop
/// `γ_n(t) = z0 + ρ Exp_n(a, 1; 2π M t)` is pulled back through a
/// branch-tracked `Ln_{n−1}` seeded so that `Ln_{n−1}(Exp_{n−1}(u)) = u`,
/// giving `w(t) = ρ Ln_{n−1}(a; (γ_n(t) − z0)/ρ)`; the result is
/// `(2π)⁻¹ ∮ f(z0 + w) dw`.
pub fn residue_n<F>(f: F, z0: &CdNumber, m: &CdNumber, rho: f64, a: &[CdNumber], tol: f64) -> Result<CdNumber>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    if a.is_empty() {
        return residue(f, z0, m, rho, tol);
    }
    if m.norm() == 0.0 {
        return Ok(CdNumber::zero(z0.level()));
    }
    let (u, s) = unit_axis(m)?;
    // 8th-order periodic central difference
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut prev: Option<CdNumber> = None;
    let mut n = 64usize;
    while n <= 1 << 16 {
        let mut chain = LnChain::seeded(a, &CdNumber::one(u.level()))?;
        let mut w = Vec::with_capacity(n);
        for k in 0..n {
            let e = exp(&u.scale(TAU * k as f64 / n as f64));
            let g = exp_n(a, &e)?;
            let (v, jump) = chain.next(&g)?;
            if jump > PI {
                return Err(CdError::BranchFailure(format!("log jump {jump:.3} at t = {}", k as f64 / n as f64)));
            }
            w.push(v.scale(rho));
        }
        let h = 1.0 / n as f64;
        let mut acc = CdNumber::zero(z0.level());
        for k in 0..n {
            let mut d = CdNumber::zero(z0.level());
            for (j, c) in C.iter().enumerate() {
                let p = w[(k + j + 1) % n];
                let q = w[(k + n - j - 1) % n];
                d += (p - q).scale(*c);
            }
            let dw = d.scale(1.0 / h);
            let v = f(&(*z0 + w[k]))? * dw;
            if !v.is_finite() {
                return Err(CdError::EvaluationFailure(format!("non-finite integrand at t = {}", k as f64 * h)));
            }
            acc += v;
        }
        let cur = acc.scale(h * s / TAU);
        if let Some(p) = prev {
            if cur.dist(&p) <= tol * cur.norm().max(1.0) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        n *= 2;
    }
    Err(CdError::NoConvergence("n-residue quadrature did not settle".into()))
}

/// `Δ_γ Arg_n f` with `Ln_n(a_1, …, a_{n−1}, 1; ·)` tracked along the path.
/// Steps whose per-stage logarithm jumps exceed π are bisected first.
pub fn delta_arg_n<F>(f: F, path: &Path, a: &[CdNumber]) -> Result<CdNumber>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    let mut coeffs = a.to_vec();
    let level = a.iter().map(|x| x.level()).chain([path.point(0.0).level()]).max().unwrap_or(0);
    coeffs.push(CdNumber::one(level));
    let raw = |t: f64| -> Result<CdNumber> {
        let v = f(&path.point(t))?;
        if !v.is_finite() {
            return Err(CdError::EvaluationFailure(format!("non-finite value at t = {t}")));
        }
        Ok(v)
    };
    let v0 = raw(0.0)?;
    let scale = v0.norm();
    let eval = |t: f64| -> Result<CdNumber> {
        let v = raw(t)?;
        if v.norm() <= 1e-12 * scale || v.norm() < f64::MIN_POSITIVE {
            return Err(CdError::ZeroOnPath(t));
        }
        Ok(v)
    };
    if scale < f64::MIN_POSITIVE {
        return Err(CdError::ZeroOnPath(0.0));
    }
    let mut chain = LnChain::new(&coeffs)?;
    let (start, _) = chain.next(&v0)?;
    let base = 512usize;
    let mut end = start;
    for k in 0..base {
        end = advance(&eval, &mut chain, k as f64 / base as f64, (k + 1) as f64 / base as f64, 0, scale)?;
    }
    Ok(end - start)
}

fn advance<E>(eval: &E, chain: &mut LnChain, t0: f64, t1: f64, depth: u32, scale: f64) -> Result<CdNumber>
where
    E: Fn(f64) -> Result<CdNumber>,
{
    let v = eval(t1)?;
    let (val, jump) = chain.peek(&v)?;
    if jump <= 0.5 {
        chain.next(&v)?;
        return Ok(val);
    }
    if depth >= 24 {
        if jump <= PI {
            chain.next(&v)?;
            return Ok(val);
        }
        if v.norm() < 1e-6 * scale {
            return Err(CdError::ZeroOnPath(t1));
        }
        return Err(CdError::UnwrapAmbiguity(t1));
    }
    let mid = 0.5 * (t0 + t1);
    advance(eval, chain, t0, mid, depth + 1, scale)?;
    advance(eval, chain, mid, t1, depth + 1, scale)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArgRatio {
    /// Integer estimate of `|Δ_γ Arg_n f| / |Δ_ω Arg_1 f|`.
    pub p: i64,
    /// `K` with `Δ_γ Arg_n f = p K Δ_ω Arg_1 f`; absent when `p = 0`.
    pub k: Option<CdNumber>,
    pub delta_gamma: CdNumber,
    pub delta_omega: CdNumber,
}

/// Argument variation of the extension of `spec` over the composite loop
/// in the plane `Re z0 + (ℝ ⊕ M ℝ)`: the outer circle of radius `ρ+`, a
/// real segment to radius `ρ−`, the inner circle reversed, and the segment
/// back. Compared with the variation over a small complex loop around `z0`.
pub fn surface_arg_ratio(
    spec: &ExtensionSpec,
    z0: &CdNumber,
    m: &CdNumber,
    rho_plus: f64,
    rho_minus: f64,
    a: &[CdNumber],
) -> Result<ArgRatio> {
    let h = z0.im_norm();
    if !(0.0 < rho_minus && rho_minus < h && h < rho_plus) {
        return Err(CdError::Invalid(format!("need 0 < ρ− < |Im z0| = {h} < ρ+")));
    }
    let (m, _) = unit_axis(m)?;
    let level = spec.level;
    let c = CdNumber::real(z0.re()).lift(level);
    let outer = Path::circle(c, rho_plus, m)?;
    let inner = Path::circle(c, rho_minus, m)?.reversed();
    let out_pt = c + rho_plus;
    let in_pt = c + rho_minus;
    let gamma = Path::concat(vec![
        outer,
        Path::segment(out_pt, in_pt),
        inner,
        Path::segment(in_pt, out_pt),
    ])?;
    let f = |z: &CdNumber| eval_extension(spec, z);
    let delta_gamma = delta_arg_n(f, &gamma, a)?;
    let r = 0.5 * (h - rho_minus).min(rho_plus - h);
    let axis = z0.im().scale(1.0 / h);
    let omega = Path::circle(z0.lift(level), r, axis)?;
    let delta_omega = delta_arg_n(f, &omega, &[])?;
    let w = delta_omega.norm();
    let p = if w == 0.0 { 0 } else { (delta_gamma.norm() / w).round() as i64 };
    let k = if p == 0 {
        None
    } else {
        Some(delta_gamma.div_right(&delta_omega)?.scale(1.0 / p as f64))
    };
    Ok(ArgRatio { p, k, delta_gamma, delta_omega })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interp {
    Linear,
    Arc,
}

/// Control point of an imported path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControlPoint {
    pub t: f64,
    pub coeffs: Vec<f64>,
    /// Interpolation towards the next point.
    #[serde(default = "default_interp")]
    pub interp: Interp,
}

fn default_interp() -> Interp {
    Interp::Linear
}

/// Path through control points; `arc` pieces interpolate the modulus
/// linearly and the direction along the great circle about the origin.
pub fn path_from_json(s: &str) -> Result<Path> {
    let pts: Vec<ControlPoint> = serde_json::from_str(s).map_err(|e| CdError::Invalid(e.to_string()))?;
    path_from_points(&pts)
}

pub fn path_from_points(pts: &[ControlPoint]) -> Result<Path> {
    if pts.len() < 2 {
        return Err(CdError::Invalid("a path needs at least two control points".into()));
    }
    if pts.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(CdError::Invalid("control points must have increasing t".into()));
    }
    let zs = pts.iter().map(|p| CdNumber::from_slice(&p.coeffs)).collect::<Result<Vec<_>>>()?;
    let level = zs.iter().map(|z| z.level()).max().unwrap_or(0);
    let zs: Vec<CdNumber> = zs.iter().map(|z| z.lift(level)).collect();
    let ts: Vec<f64> = pts.iter().map(|p| p.t).collect();
    let kinds: Vec<Interp> = pts.iter().map(|p| p.interp).collect();
    let (t0, t1) = (ts[0], ts[ts.len() - 1]);
    let closed = zs[0].dist(&zs[zs.len() - 1]) <= 1e-9 * zs[0].norm().max(1.0);
    let map = move |t: f64| {
        let tt = t0 + (t1 - t0) * t.clamp(0.0, 1.0);
        let k = ts.partition_point(|x| *x <= tt).clamp(1, ts.len() - 1) - 1;
        let s = (tt - ts[k]) / (ts[k + 1] - ts[k]);
        interpolate(&zs[k], &zs[k + 1], s, kinds[k])
    };
    Path::custom(map, closed)
}

fn interpolate(a: &CdNumber, b: &CdNumber, s: f64, kind: Interp) -> CdNumber {
    match kind {
        Interp::Linear => *a + (*b - *a).scale(s),
        Interp::Arc => {
            let (ra, rb) = (a.norm(), b.norm());
            if ra == 0.0 || rb == 0.0 {
                return *a + (*b - *a).scale(s);
            }
            let (ua, ub) = (a.scale(1.0 / ra), b.scale(1.0 / rb));
            let th = ua.dot(&ub).clamp(-1.0, 1.0).acos();
            let r = ra + (rb - ra) * s;
            if th < 1e-12 {
                return (ua + (ub - ua).scale(s)).scale(r);
            }
            let st = th.sin();
            (ua.scale(((1.0 - s) * th).sin() / st) + ub.scale((s * th).sin() / st)).scale(r)
        }
    }
}
