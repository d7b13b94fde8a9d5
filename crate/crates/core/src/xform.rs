//! Noncommutative Laplace (one- and two-sided) and Mellin transforms with the
//! linear kernel `u = pt + q` and the spherical kernel `u = E(pt + q)`,
//! Bromwich-line inversion, and the reality/symmetry checks on images.
//!
//! Originals multiply the kernel from the left: `∫ f(t) exp(−u(p,t;q)) dt`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{gen, CdNumber};
use crate::error::{CdError, Result};
use crate::quad::{integrate, wynn_epsilon_cd, QuadOptions};
use crate::rotor::{build_rotation, find_partner, RotationAutomorphism};
use crate::transcend::{e_map, exp, exp_derivative};

/// Strip margin: `Re p` must clear `s0` (and `s1`) by at least this much.
pub const STRIP_MARGIN: f64 = 1e-6;
/// Hard cap on the truncation point of a forward integral.
pub const T_MAX: f64 = 1e6;
/// Inversion gives up after this many outer panels.
pub const MAX_PANELS: usize = 1 << 16;

pub type OriginalFn = Arc<dyn Fn(f64) -> CdNumber + Send + Sync>;
pub type ImageFn<'a> = &'a dyn Fn(&CdNumber) -> Result<CdNumber>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// `t ≥ 0`, one-sided Laplace.
    Right,
    /// `t ∈ ℝ`, two-sided Laplace.
    TwoSided,
    /// `τ > 0`, Mellin.
    Multiplicative,
}

/// A function-original with its declared growth data.
///
/// For `Right` and `TwoSided` originals `|f(t)| ≤ c·exp(s0 t)` on `t ≥ 0` and
/// `|f(t)| ≤ c·exp(−s1 t)` on `t < 0`. For `Multiplicative` originals
/// `(s0, s1)` is the Mellin strip itself.
#[derive(Clone)]
pub struct Original {
    f: OriginalFn,
    pub s0: f64,
    pub s1: f64,
    pub c: f64,
    pub support: Support,
    pub discontinuities: Vec<f64>,
}

impl std::fmt::Debug for Original {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("Original")
            .field("s0", &self.s0)
            .field("s1", &self.s1)
            .field("c", &self.c)
            .field("support", &self.support)
            .field("discontinuities", &self.discontinuities)
            .finish()
    }
}

impl Original {
    pub fn new<F>(f: F, s0: f64, s1: f64, support: Support) -> Self
    where
        F: Fn(f64) -> CdNumber + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), s0, s1, c: 1.0, support, discontinuities: vec![] }
    }

    /// One-sided original; `f` is only sampled on `t ≥ 0`.
    pub fn right<F>(f: F, s0: f64) -> Self
    where
        F: Fn(f64) -> CdNumber + Send + Sync + 'static,
    {
        Self::new(f, s0, f64::INFINITY, Support::Right)
    }

    pub fn two_sided<F>(f: F, s0: f64, s1: f64) -> Self
    where
        F: Fn(f64) -> CdNumber + Send + Sync + 'static,
    {
        Self::new(f, s0, s1, Support::TwoSided)
    }

    /// Mellin original `g(τ)` on `τ > 0` with strip `s0 < Re p < s1`.
    pub fn multiplicative<F>(g: F, s0: f64, s1: f64) -> Self
    where
        F: Fn(f64) -> CdNumber + Send + Sync + 'static,
    {
        Self::new(g, s0, s1, Support::Multiplicative)
    }

    pub fn with_growth_constant(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_discontinuities(mut self, pts: Vec<f64>) -> Self {
        self.discontinuities = pts;
        self
    }

    pub fn eval(&self, t: f64) -> CdNumber {
        (self.f)(t)
    }

    /// Samples the growth bounds on `n` points of `[−t_max, t_max]` (or
    /// `[1/t_max, t_max]` for Mellin originals) and returns the first
    /// violating abscissa.
    pub fn growth_violation(&self, t_max: f64, n: usize) -> Option<f64> {
        let slack = 1.0 + 1e-9;
        (0..=n).find_map(|k| {
            let s = -t_max + 2.0 * t_max * k as f64 / n as f64;
            let (t, bound) = match self.support {
                Support::Right if s < 0.0 => return None,
                Support::Right | Support::TwoSided if s >= 0.0 => (s, self.c * (self.s0 * s).exp()),
                Support::TwoSided => (s, self.c * (-self.s1 * s).exp()),
                Support::Right => unreachable!(),
                Support::Multiplicative => {
                    // τ = e^s: |g| ≤ c τ^{−s0} near 0 and c τ^{−s1} at infinity
                    let e = if s < 0.0 { -self.s0 } else { -self.s1 };
                    (s.exp(), self.c * (e * s).exp())
                }
            };
            let v = self.eval(t).norm();
            (!(v <= bound * slack)).then_some(t)
        })
    }

    /// The two-sided original `t ↦ g(e^t)` behind a Mellin original.
    fn log_pullback(&self) -> Original {
        let g = self.f.clone();
        Original {
            f: Arc::new(move |t| g(t.exp())),
            s0: -self.s1,
            s1: -self.s0,
            c: self.c,
            support: Support::TwoSided,
            discontinuities: self.discontinuities.iter().filter(|d| **d > 0.0).map(|d| d.ln()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Spherical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kernel: Kernel,
    /// Generator basis `N_j = v(i_j)`; `None` is the standard basis.
    #[serde(default)]
    pub basis: Option<RotationAutomorphism>,
    pub q: CdNumber,
    pub level: u8,
    pub tol: f64,
}

impl TransformSpec {
    pub fn linear(level: u8) -> Self {
        Self { kernel: Kernel::Linear, basis: None, q: CdNumber::zero(level), level, tol: 1e-10 }
    }

    pub fn spherical(level: u8) -> Result<Self> {
        let s = Self { kernel: Kernel::Spherical, ..Self::linear(level) };
        s.validate()?;
        Ok(s)
    }

    pub fn with_q(mut self, q: CdNumber) -> Self {
        self.q = q;
        self
    }

    pub fn with_basis(mut self, basis: RotationAutomorphism) -> Self {
        self.basis = Some(basis);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.level > 3 {
            return Err(CdError::LevelMismatch(format!("transform level {} > 3", self.level)));
        }
        if self.kernel == Kernel::Spherical && !(2..=3).contains(&self.level) {
            return Err(CdError::LevelMismatch("spherical kernel needs level 2 or 3".into()));
        }
        if self.q.level() > self.level {
            return Err(CdError::LevelMismatch("q above transform level".into()));
        }
        if let Some(b) = &self.basis {
            if b.level() != self.level {
                return Err(CdError::LevelMismatch("basis level differs from transform level".into()));
            }
        }
        if !(self.tol > 0.0) {
            return Err(CdError::Invalid(format!("tolerance {}", self.tol)));
        }
        Ok(())
    }

    /// `N_j`, with `N_0 = 1`.
    pub fn basis_element(&self, j: usize) -> CdNumber {
        match (&self.basis, j) {
            (_, 0) => CdNumber::one(self.level),
            (Some(b), _) => b.images()[j - 1],
            (None, _) => gen(j).lift(self.level),
        }
    }

    fn lift(&self, p: &CdNumber) -> Result<CdNumber> {
        p.embed(self.level)
    }

    fn neg_q(&self) -> Self {
        Self { q: -self.q, ..self.clone() }
    }

    /// `u(p, t; q)`.
    pub fn u(&self, p: &CdNumber, t: f64) -> Result<CdNumber> {
        let x = (p.scale(t) + self.q).lift(self.level);
        match (self.kernel, &self.basis) {
            (Kernel::Linear, _) => Ok(x),
            (Kernel::Spherical, None) => e_map(&x),
            (Kernel::Spherical, Some(v)) => v.apply(&e_map(&v.inverse().apply(&x)?)?),
        }
    }

    /// `exp(−u(p, t; q))`.
    pub fn kernel_at(&self, p: &CdNumber, t: f64) -> Result<CdNumber> {
        Ok(exp(&-self.u(p, t)?))
    }

    /// Directional derivative of `exp(−u(p, t; q))` in `p` along `h`.
    pub fn kernel_dp(&self, p: &CdNumber, t: f64, h: &CdNumber) -> Result<CdNumber> {
        match self.kernel {
            Kernel::Linear => Ok(exp_derivative(&-self.u(p, t)?, &h.scale(-t))),
            Kernel::Spherical => {
                let e = 1e-5 * p.norm().max(1.0) / h.norm().max(f64::MIN_POSITIVE);
                let fp = self.kernel_at(&(*p + h.scale(e)), t)?;
                let fm = self.kernel_at(&(*p - h.scale(e)), t)?;
                Ok((fp - fm).scale(0.5 / e))
            }
        }
    }
}

/// Integration line `p(τ) = a + Sτ` with initial symmetric truncation `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BromwichLine {
    pub a: f64,
    pub s: CdNumber,
    pub b: f64,
}

impl BromwichLine {
    pub fn new(a: f64, s: CdNumber, b: f64) -> Result<Self> {
        if s.re().abs() > 1e-12 || (s.norm() - 1.0).abs() > 1e-9 {
            return Err(CdError::UnsupportedLine(format!("direction {s} is not a unit imaginary")));
        }
        if !(b > 0.0) || !a.is_finite() {
            return Err(CdError::UnsupportedLine(format!("anchor {a}, truncation {b}")));
        }
        Ok(Self { a, s, b })
    }

    /// `S = i1`, `B = 1`.
    pub fn standard(a: f64) -> Self {
        Self { a, s: gen(1), b: 1.0 }
    }

    pub fn point(&self, tau: f64) -> CdNumber {
        self.s.scale(tau) + self.a
    }
}

fn check_strip(re_p: f64, s0: f64, s1: f64) -> Result<()> {
    if s1 <= s0 {
        return Err(CdError::EmptyStrip(s0, s1));
    }
    if re_p <= s0 + STRIP_MARGIN {
        return Err(CdError::DomainOfConvergence { re_p, detail: format!("need Re p > {s0}") });
    }
    if re_p >= s1 - STRIP_MARGIN {
        return Err(CdError::DomainOfConvergence { re_p, detail: format!("need Re p < {s1}") });
    }
    Ok(())
}

/// `∫_0^∞ g(t) dt` for an integrand decaying at least like `c·t·exp(−δt)`.
fn half_line(g: &dyn Fn(f64) -> Result<CdNumber>, delta: f64, c: f64, disc: &[f64], tol: f64) -> Result<CdNumber> {
    let mut t_end = if delta.is_finite() {
        ((10.0 * c.max(1e-300) / (tol * delta)).ln() / delta).clamp(1.0, T_MAX)
    } else {
        1.0
    };
    // the majorant can be loose in either direction; confirm with samples
    let tail = |t0: f64| -> Result<f64> {
        let mut m = 0.0f64;
        for k in 0..8 {
            let t = t0 * (1.0 + k as f64 / 8.0);
            m = m.max(g(t)?.norm() * t);
        }
        Ok(m)
    };
    while tail(t_end)? > 0.01 * tol {
        if t_end >= T_MAX {
            return Err(CdError::QuadratureFailure(format!("integrand not negligible at t = {t_end:e}")));
        }
        t_end = (2.0 * t_end).min(T_MAX);
    }
    let mut cuts = vec![0.0];
    let mut x = 1.0;
    while x < t_end {
        cuts.push(x);
        x *= 2.0;
    }
    cuts.extend(disc.iter().copied().filter(|d| *d > 0.0 && *d < t_end));
    cuts.push(t_end);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let opts = QuadOptions { abs_tol: 0.1 * tol / cuts.len() as f64, rel_tol: tol, max_intervals: 20_000 };
    let mut acc = CdNumber::zero(0);
    for w in cuts.windows(2) {
        acc += integrate(g, w[0], w[1], &opts)?.value;
    }
    Ok(acc)
}

/// `∫ f(t) K(t) dt` over the support of a right or two-sided original.
fn integrate_original(
    orig: &Original,
    re_p: f64,
    kern: &dyn Fn(f64) -> Result<CdNumber>,
    tol: f64,
) -> Result<CdNumber> {
    // a vanished original wins over an overflowing kernel
    let weigh = |f: CdNumber, t: f64| -> Result<CdNumber> {
        if f.norm() == 0.0 {
            Ok(f)
        } else {
            Ok(f * kern(t)?)
        }
    };
    let plus = |t: f64| weigh(orig.eval(t), t);
    let mut v = half_line(&plus, re_p - orig.s0, orig.c, &orig.discontinuities, tol)?;
    if orig.support == Support::TwoSided {
        let minus = |s: f64| weigh(orig.eval(-s), -s);
        let disc: Vec<f64> = orig.discontinuities.iter().map(|d| -d).collect();
        v += half_line(&minus, orig.s1 - re_p, orig.c, &disc, tol)?;
    }
    Ok(v)
}

/// One-sided image `F(p) = ∫_0^∞ f(t) exp(−u(p,t;q)) dt`.
pub fn laplace(orig: &Original, p: &CdNumber, spec: &TransformSpec) -> Result<CdNumber> {
    spec.validate()?;
    let p = spec.lift(p)?;
    check_strip(p.re(), orig.s0, f64::INFINITY)?;
    let right = Original { support: Support::Right, ..orig.clone() };
    let kern = |t: f64| spec.kernel_at(&p, t);
    integrate_original(&right, p.re(), &kern, spec.tol)
}

/// Two-sided image, split at `t = 0` using `u(p,−t;q) = u(−p,t;q)`.
pub fn laplace_two_sided(orig: &Original, p: &CdNumber, spec: &TransformSpec) -> Result<CdNumber> {
    spec.validate()?;
    let p = spec.lift(p)?;
    check_strip(p.re(), orig.s0, orig.s1)?;
    let both = Original { support: Support::TwoSided, ..orig.clone() };
    let kern = |t: f64| spec.kernel_at(&p, t);
    integrate_original(&both, p.re(), &kern, spec.tol)
}

/// Mellin image `∫_0^∞ g(τ) exp(−u(−p, ln τ; −q)) τ^{-1} dτ`, computed as the
/// two-sided image of `g(e^t)` at `(−p, −q)`.
pub fn mellin(orig: &Original, p: &CdNumber, spec: &TransformSpec) -> Result<CdNumber> {
    check_strip(p.re(), orig.s0, orig.s1)?;
    laplace_two_sided(&orig.log_pullback(), &-*p, &spec.neg_q())
}

/// Dispatches on the original's support.
pub fn transform(orig: &Original, p: &CdNumber, spec: &TransformSpec) -> Result<CdNumber> {
    match orig.support {
        Support::Right => laplace(orig, p, spec),
        Support::TwoSided => laplace_two_sided(orig, p, spec),
        Support::Multiplicative => mellin(orig, p, spec),
    }
}

fn check_line(line: &BromwichLine, spec: &TransformSpec) -> Result<()> {
    spec.validate()?;
    if line.s.level() > spec.level {
        return Err(CdError::LevelMismatch("line direction above transform level".into()));
    }
    if spec.q.im_norm() > 1e-12 {
        return Err(CdError::UnsupportedLine("inversion needs Im q = 0".into()));
    }
    if spec.kernel == Kernel::Spherical {
        let n1 = spec.basis_element(1);
        let s = line.s.lift(spec.level);
        if s.dist(&n1).min(s.dist(&-n1)) > 1e-9 {
            return Err(CdError::UnsupportedLine(format!("spherical kernel needs S = ±N₁, got {s}")));
        }
    }
    Ok(())
}

/// `(2π)^{-1} S̃ ∫ F(a+Sτ) exp(u(a+Sτ, t)) S dτ` as a symmetric principal
/// value.
///
/// The central block `[−B, B]` is followed by symmetric panel pairs of one
/// half-period `π/|t|` each (doubling widths when `t = 0`), and the partial
/// sums are accelerated with Wynn's epsilon.
pub fn invert(image: ImageFn<'_>, t: f64, line: &BromwichLine, spec: &TransformSpec) -> Result<CdNumber> {
    check_line(line, spec)?;
    let s = line.s.lift(spec.level);
    let g = |tau: f64| -> Result<CdNumber> {
        let p = line.point(tau).lift(spec.level);
        Ok((image(&p)? * exp(&spec.u(&p, t)?)) * s)
    };
    let sym = |tau: f64| -> Result<CdNumber> { Ok(g(tau)? + g(-tau)?) };
    let tol = spec.tol;
    let opts = QuadOptions { abs_tol: 0.01 * tol, rel_tol: 0.01 * tol, max_intervals: 4096 };
    let mut sum = integrate(sym, 0.0, line.b, &opts)?.value;
    let mut sums = vec![sum];
    let mut lo = line.b;
    let mut last_est: Option<CdNumber> = None;
    let mut settled = 0;
    let mut largest = 0.0f64;
    for k in 0..MAX_PANELS {
        let hi = if t == 0.0 { 2.0 * lo } else { lo + PI / t.abs() };
        let piece = integrate(sym, lo, hi, &opts)?.value;
        sum += piece;
        sums.push(sum);
        lo = hi;
        largest = largest.max(piece.norm());
        // extrapolation is only trusted once the panels actually shrink
        let shrinking = piece.norm() <= 0.5 * largest;
        let scale = sum.norm().max(1.0);
        if piece.norm() < 1e-3 * tol * scale && k >= 2 {
            return Ok(finish(&s, sum));
        }
        if sums.len() >= 5 {
            let window = &sums[sums.len().saturating_sub(24)..];
            let (est, _) = wynn_epsilon_cd(window);
            if let Some(prev) = last_est {
                if shrinking && est.is_finite() && est.dist(&prev) < 0.1 * tol * scale {
                    settled += 1;
                    if settled >= 2 {
                        return Ok(finish(&s, est));
                    }
                } else {
                    settled = 0;
                }
            }
            last_est = Some(est);
        }
        if t == 0.0 && k >= 16 {
            break;
        }
    }
    Err(CdError::TruncationTooSmall(format!("line integral at t = {t} did not settle, last panel end {lo:e}")))
}

fn finish(s: &CdNumber, integral: CdNumber) -> CdNumber {
    (s.conj() * integral).scale(0.5 / PI)
}

/// Componentwise inversion `Σ_j f_j(t) N_j` from the images of the real
/// components `f_j`.
pub fn invert_components(images: &[ImageFn<'_>], t: f64, line: &BromwichLine, spec: &TransformSpec) -> Result<CdNumber> {
    if images.len() > crate::algebra::dim(spec.level) {
        return Err(CdError::LevelMismatch(format!("{} components at level {}", images.len(), spec.level)));
    }
    let mut acc = CdNumber::zero(spec.level);
    for (j, im) in images.iter().enumerate() {
        acc += invert(*im, t, line, spec)? * spec.basis_element(j);
    }
    Ok(acc)
}

/// Mellin inversion at `τ > 0`: the two-sided inversion of `p ↦ G(−p)` on
/// the mirrored line, evaluated at `t = ln τ`.
pub fn invert_mellin(image: ImageFn<'_>, tau: f64, line: &BromwichLine, spec: &TransformSpec) -> Result<CdNumber> {
    if !(tau > 0.0) {
        return Err(CdError::OutOfDomain(format!("Mellin inversion at τ = {tau}")));
    }
    let mirrored = BromwichLine { a: -line.a, ..*line };
    let g = |p: &CdNumber| image(&-*p);
    invert(&g, tau.ln(), &mirrored, &spec.neg_q())
}

/// `|D_h F(p) − ∫ f(t) ∂_p exp(−u(p,t;q)).h dt|`, with the left side a
/// fourth-order central difference of the computed image.
pub fn diff_under_integral_check(orig: &Original, p: &CdNumber, h: &CdNumber, spec: &TransformSpec) -> Result<f64> {
    spec.validate()?;
    if h.norm() == 0.0 {
        return Ok(0.0);
    }
    // D_h M(p) = D_{-h} T(-p) for the pulled-back two-sided image T
    let (eff, p_eff, h_eff, spec_eff) = match orig.support {
        Support::Multiplicative => (orig.log_pullback(), -*p, -*h, spec.neg_q()),
        _ => (orig.clone(), *p, *h, spec.clone()),
    };
    let p_eff = spec_eff.lift(&p_eff)?;
    let s1 = if eff.support == Support::Right { f64::INFINITY } else { eff.s1 };
    check_strip(p_eff.re(), eff.s0, s1)?;
    let room = (p_eff.re() - eff.s0).min(s1 - p_eff.re());
    let hn = h_eff.norm();
    let mut e = 1e-3 * p_eff.norm().max(1.0) / hn;
    if h_eff.re() != 0.0 {
        e = e.min(0.4 * room / h_eff.re().abs());
    }
    if !(e * hn > 1e-8) || p_eff + h_eff.scale(e) == p_eff {
        return Err(CdError::StepUnderflow(e * hn));
    }
    let tighter = TransformSpec { tol: spec_eff.tol * 1e-2, ..spec_eff.clone() };
    let f = |x: &CdNumber| -> Result<CdNumber> {
        let kern = |t: f64| tighter.kernel_at(x, t);
        integrate_original(&eff, x.re(), &kern, tighter.tol)
    };
    let d1 = f(&(p_eff + h_eff.scale(e)))? - f(&(p_eff - h_eff.scale(e)))?;
    let d2 = f(&(p_eff + h_eff.scale(2.0 * e)))? - f(&(p_eff - h_eff.scale(2.0 * e)))?;
    let fd = (d1.scale(8.0) - d2).scale(1.0 / (12.0 * e));
    let dk = |t: f64| tighter.kernel_dp(&p_eff, t, &h_eff);
    let under = integrate_original(&eff, p_eff.re(), &dk, tighter.tol)?;
    Ok(fd.dist(&under))
}

/// Residuals of the identities satisfied by images of real originals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `max |F(p̃) − F(p)~|`, the linear-kernel identity.
    pub conj_sym: f64,
    /// `max |F(−p) − F(p)|`, characterising even originals.
    pub even_sym: f64,
    /// `max |F(p₀ − p₁i₁ + p₂i₂ + …) − F(p)~|`, the spherical-kernel identity.
    pub spherical_conj_sym: f64,
}

fn flip1(p: &CdNumber) -> CdNumber {
    p.with_coeff(1, -p.coeff(1))
}

/// Probes whose mirrored points fail to evaluate are skipped for that
/// identity; an identity with no usable probe reports `NaN`.
pub fn symmetry_report(image: ImageFn<'_>, probes: &[CdNumber], spec: &TransformSpec) -> SymmetryReport {
    let mut out = [f64::NAN; 3];
    for z in probes {
        let Ok(z) = spec.lift(z) else { continue };
        let Ok(fz) = image(&z) else { continue };
        let fzc = fz.conj();
        let cands = [image(&z.conj()).map(|v| v.dist(&fzc)), image(&-z).map(|v| v.dist(&fz)), image(&flip1(&z)).map(|v| v.dist(&fzc))];
        for (slot, c) in out.iter_mut().zip(cands) {
            if let Ok(r) = c {
                *slot = if slot.is_nan() { r } else { slot.max(r) };
            }
        }
    }
    SymmetryReport { conj_sym: out[0], even_sym: out[1], spherical_conj_sym: out[2] }
}

/// `max |F(z) − R(F(x))|` over probes, with `x` the complex partner of `z`
/// (of `E(z)` for the spherical kernel) and `R` the rotation carrying `x` to
/// `z` (to `E(z)`).
pub fn quasi_regularity_check(orig: &Original, spec: &TransformSpec, probes: &[CdNumber]) -> Result<f64> {
    spec.validate()?;
    let b = spec.level.max(2);
    let mut worst = 0.0f64;
    for z in probes {
        let z = spec.lift(z)?;
        if z.lies_in(1, 0.0) {
            continue;
        }
        let target = match spec.kernel {
            Kernel::Linear => z,
            Kernel::Spherical => e_map(&z)?,
        };
        let x = find_partner(&target, 1);
        let rot = build_rotation(&target, &x, (1, b))?;
        let fz = transform(orig, &z, spec)?;
        let fx = transform(orig, &x, spec)?;
        worst = worst.max(fz.dist(&rot.apply(&fx)?));
    }
    Ok(worst)
}
