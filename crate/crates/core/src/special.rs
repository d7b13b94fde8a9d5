//! Γ, digamma, ζ in several representations, the symmetry functions χ, ξ, Υ,
//! the theta series ψ and the spherical-coordinate transform Ω^s.
//!
//! All of these have real coefficients, so a quaternion or octonion argument
//! is evaluated in the plane `ℝ ⊕ Mℝ` through it (`M` the axis of `Im z`).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{gen, CdNumber};
use crate::contour::{form_integral, Path};
use crate::error::{CdError, Result};
use crate::plane::{axis_of, try_eval_in_plane, Plane};
use crate::quad::{integrate, QuadOptions};
use crate::rotor::{build_rotation, find_partner};
use crate::xform::{laplace_two_sided, Original, TransformSpec};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `B_2, B_4, …, B_24`.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn nonpositive_integer(z: C) -> Option<i64> {
    (z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0).then_some(z.re as i64)
}

/// `a^z` for real `a > 0` on the real branch of `ln a`.
fn rpow(a: f64, z: C) -> C {
    (z * a.ln()).exp()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Σ_{k>n} k^{-m}` for integer `m ≥ 2` by Euler–Maclaurin from `n + 1`.
fn hurwitz_tail(m: u32, n: usize) -> f64 {
    let a = (n + 1) as f64;
    let mf = m as f64;
    let mut s = a.powf(1.0 - mf) / (mf - 1.0) + 0.5 * a.powf(-mf);
    let mut rising = mf;
    for (j, b) in BERNOULLI.iter().enumerate().take(6) {
        let k = 2 * (j + 1);
        if j > 0 {
            rising *= (mf + k as f64 - 3.0) * (mf + k as f64 - 2.0);
        }
        s += b / factorial(k) * rising * a.powf(-mf - k as f64 + 1.0);
    }
    s
}

/// `1/Γ(z)` from the Weierstrass product `1/Γ(z+1) = e^{Cz} Π (1+z/k) e^{-z/k}`.
///
/// The logarithm of the product is summed to `N ≥ 2|z| + 16` factors and the
/// remainder `Σ_{k>N} [ln(1+z/k) − z/k]` is expanded in powers of `z` with
/// Hurwitz tails.
pub fn rgamma_c(z: C) -> C {
    if nonpositive_integer(z).is_some() {
        return c(0.0);
    }
    let n = (2.0 * z.norm()).ceil() as usize + 16;
    let mut l = z * EULER_GAMMA;
    for k in 1..=n {
        let kf = k as f64;
        l += (z / kf).ln_1p() - z / kf;
    }
    let mut zp = z;
    for m in 2..=80u32 {
        zp *= z;
        let h = hurwitz_tail(m, n);
        let term = zp * h / m as f64;
        l += if m % 2 == 0 { -term } else { term };
        if term.norm() < 1e-18 * l.norm().max(1.0) {
            break;
        }
    }
    z * l.exp()
}

trait Ln1p {
    fn ln_1p(self) -> Self;
}

impl Ln1p for C {
    fn ln_1p(self) -> Self {
        if self.norm() < 1e-4 {
            // avoid cancellation in ln(1 + small)
            self - self * self / 2.0 + self * self * self / 3.0 - self.powi(4) / 4.0
        } else {
            (self + 1.0).ln()
        }
    }
}

pub fn gamma_c(z: C) -> Result<C> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(CdError::PoleAt(format!("Γ at {n}")));
    }
    Ok(rgamma_c(z).inv())
}

pub fn gamma_reciprocal(z: &CdNumber) -> CdNumber {
    crate::plane::eval_in_plane(z, rgamma_c)
}

pub fn gamma(z: &CdNumber) -> Result<CdNumber> {
    try_eval_in_plane(z, gamma_c)
}

/// `ψ(1+z) = −C − Σ_k ((z+k)^{-1} − k^{-1})`, summed to `N` terms with a
/// midpoint Euler–Maclaurin estimate of the tail.
pub fn digamma_c(z: C) -> Result<C> {
    if let Some(n) = nonpositive_integer(z + 1.0) {
        return Err(CdError::PoleAt(format!("ψ(1+z) at z = {}", n - 1)));
    }
    let n = 64 + (4.0 * z.norm()).ceil() as usize;
    let mut s = c(-EULER_GAMMA);
    for k in 1..=n {
        let kf = k as f64;
        s -= (z + kf).inv() - 1.0 / kf;
    }
    let a = n as f64 + 0.5;
    let d1 = -(z + a).powi(-2) + a.powi(-2);
    let d3 = -6.0 * (z + a).powi(-4) + 6.0 * a.powi(-4);
    let tail = -(z / a).ln_1p() + d1 / 24.0 - d3 * 7.0 / 5760.0;
    Ok(s - tail)
}

/// `ψ(1+z)`, the logarithmic derivative of `Γ(1+z)`.
pub fn digamma(z: &CdNumber) -> Result<CdNumber> {
    try_eval_in_plane(z, digamma_c)
}

/// `ψ(1+z) − Ln z`, the Mellin integrand behind the digamma representation of ζ.
pub fn digamma_minus_log(z: &CdNumber) -> Result<CdNumber> {
    try_eval_in_plane(z, |w| {
        if w.norm() == 0.0 {
            return Err(CdError::ZeroArgument("ln"));
        }
        Ok(digamma_c(w)? - w.ln())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaRep {
    /// Sawtooth integral from 1, `σ > −1`.
    EulerMaclaurin,
    /// Sawtooth integral from 0, `−1 < σ < 0`.
    Strip,
    /// Functional equation, `σ < 0`.
    Reflected,
    /// Loop integral around the positive axis, `z ≠ 1`.
    Hankel,
    /// Mellin transform of `ψ(1+x) − ln x`, `0 < σ < 1`.
    MellinDigamma,
}

impl ZetaRep {
    pub const ALL: [ZetaRep; 5] =
        [ZetaRep::EulerMaclaurin, ZetaRep::Strip, ZetaRep::Reflected, ZetaRep::Hankel, ZetaRep::MellinDigamma];

    pub fn contains(&self, z: C) -> bool {
        let s = z.re;
        match self {
            ZetaRep::EulerMaclaurin => s > -1.0,
            ZetaRep::Strip => -1.0 < s && s < 0.0,
            ZetaRep::Reflected => s < 0.0,
            ZetaRep::Hankel => true,
            ZetaRep::MellinDigamma => 0.0 < s && s < 1.0,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ZetaRep::EulerMaclaurin => "euler_maclaurin",
            ZetaRep::Strip => "strip",
            ZetaRep::Reflected => "reflected",
            ZetaRep::Hankel => "hankel",
            ZetaRep::MellinDigamma => "mellin_digamma",
        }
    }
}

/// `z Σ_{n=1}^{N-1} ∫_n^{n+1} (n + 1/2 − x) x^{-z-1} dx` from the exact
/// antiderivative on each unit interval.
fn sawtooth_head(z: C, n_max: usize) -> C {
    let mut s = c(0.0);
    let w = z / (c(1.0) - z);
    let mut prev_mz = c(1.0); // n^{-z}
    let mut prev_1mz = c(1.0); // n^{1-z}
    for n in 1..n_max {
        let next = (n + 1) as f64;
        let mz = rpow(next, -z);
        let omz = mz * next;
        s += (prev_mz - mz) * (n as f64 + 0.5) - w * (omz - prev_1mz);
        prev_mz = mz;
        prev_1mz = omz;
    }
    s
}

/// `z ∫_N^∞ ([x] − x + 1/2) x^{-z-1} dx = Σ_k B_{2k}/(2k)! (z)_{2k−1} N^{−z−2k+1}`.
fn sawtooth_tail(z: C, n: usize) -> C {
    let nf = n as f64;
    let mut s = c(0.0);
    let mut rising = z;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let k = 2 * (j + 1);
        if j > 0 {
            rising = rising * (z + (k - 3) as f64) * (z + (k - 2) as f64);
        }
        let term = rising * rpow(nf, -z - (k as f64) + 1.0) * (b / factorial(k));
        s += term;
        if term.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    s
}

fn sawtooth_cut(z: C) -> usize {
    32 + (2.0 * z.norm()).ceil() as usize
}

fn zeta_em(z: C) -> C {
    let n = sawtooth_cut(z);
    sawtooth_head(z, n) + sawtooth_tail(z, n) + (z - 1.0).inv() + 0.5
}

fn zeta_strip(z: C) -> C {
    let n = sawtooth_cut(z);
    // z ∫_0^1 (1/2 − x) x^{-z-1} dx for σ < 0
    let unit = c(-0.5) - z / (c(1.0) - z);
    unit + sawtooth_head(z, n) + sawtooth_tail(z, n)
}

fn zeta_reflected(z: C) -> Result<C> {
    let g = gamma_c(-z)?;
    Ok(z / PI * rpow(TAU, z) * (-g) * (z * PI / 2.0).sin() * zeta_em(c(1.0) - z))
}

/// `ζ(z) = −sin(πz)/π ∫_0^∞ (ψ(1+x) − ln x) x^{−z} dx`, integrated along the
/// ray `x = rω`, `ω = e^{iθ}`, turned towards `−sign(Im z)` so that `|ω^{1−z}|`
/// absorbs most of the growth of `sin(πz)`.
fn zeta_mellin_digamma(z: C) -> Result<C> {
    let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 20000 };
    let cd = crate::plane::from_complex;
    let cc = |v: CdNumber| crate::plane::to_complex(&v);
    let theta = if z.im.abs() < 1.0 { 0.0 } else { -0.9 * PI * z.im.signum() };
    let w = C::from_polar(1.0, theta);
    // [0, 1] with r = u^k so the weight r^{-z} becomes bounded
    let k = (2.0 / (1.0 - z.re)).ceil();
    let near = integrate(
        |u: f64| {
            let r = u.powf(k);
            let e = (c(k - 1.0) - z * k) * u.ln();
            Ok(cd(digamma_c(w * r)? * e.exp() * k))
        },
        0.0,
        1.0,
        &opts,
    )?
    .value;
    // −∫_0^1 (ln r + iθ) r^{−z} dr
    let log_part = (c(1.0) - z).powi(-2) - C::new(0.0, theta) / (c(1.0) - z);
    let r_cut = 40.0;
    let mid = integrate(|r: f64| Ok(cd((digamma_c(w * r)? - (w * r).ln()) * rpow(r, -z))), 1.0, r_cut, &opts)?.value;
    // ψ(1+x) − ln x ~ 1/(2x) − Σ B_{2k}/(2k) x^{-2k}
    let mut tail = rpow(r_cut, -z) / z * 0.5 / w;
    for (j, b) in BERNOULLI.iter().enumerate().take(8) {
        let k2 = 2.0 * (j + 1) as f64;
        tail -= rpow(r_cut, c(1.0 - k2) - z) / (z + k2 - 1.0) * (b / k2) * w.powf(-k2);
    }
    let total = (cc(near) + log_part + cc(mid) + tail) * (C::new(0.0, theta) * (c(1.0) - z)).exp();
    Ok(-(z * PI).sin() / PI * total)
}

/// `J(z) = ∫_C η^{z−1} (e^η − 1)^{-1} dη` over the loop from `+∞` around
/// the circle `|η| = R` in the plane `ℝ ⊕ Mℝ` and back, with `arg η` tracked
/// from 0 to `2π`.
pub fn hankel_loop(z: &CdNumber, m: &CdNumber, radius: f64, tol: f64) -> Result<CdNumber> {
    let b = z.level().max(m.level()).max(1);
    let m = m.lift(b);
    let z = z.lift(b);
    let zm1 = z - 1.0;
    let sigma = z.re();
    // |η^{z−1}| ≤ x^{σ−1} e^{2π|v|} on the rays; stop when that times e^{−x} is negligible
    let v = z.im_norm();
    let mut t_end = 40.0f64;
    while (sigma - 1.0) * t_end.ln() + TAU * v - t_end > (1e-3 * tol).ln() {
        t_end *= 1.5;
    }
    let power = |eta: &CdNumber, phi: f64| -> CdNumber {
        let ln = m.scale(phi) + eta.norm().ln();
        crate::transcend::exp(&(zm1 * ln))
    };
    let denom = |eta: &CdNumber| -> Result<CdNumber> { (crate::transcend::exp(eta) - 1.0).inverse() };
    let arg_of = |eta: &CdNumber| -> f64 {
        let a = eta.dot(&m).atan2(eta.re());
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    };
    let re = |x: f64| CdNumber::real(x).lift(b);
    let inbound = Path::segment(re(t_end), re(radius));
    let outbound = Path::segment(re(radius), re(t_end));
    let zero = CdNumber::zero(b);
    let arcs = [Path::arc(zero, radius, m, 0.0, 0.5)?, Path::arc(zero, radius, m, 0.5, 1.0)?];
    let mut j = form_integral(|eta, d| Ok(power(eta, 0.0) * denom(eta)? * *d), &inbound, tol)?;
    for arc in &arcs {
        j += form_integral(|eta, d| Ok(power(eta, arg_of(eta)) * denom(eta)? * *d), arc, tol)?;
    }
    j += form_integral(|eta, d| Ok(power(eta, TAU) * denom(eta)? * *d), &outbound, tol)?;
    Ok(j)
}

fn zeta_hankel(z: &CdNumber) -> Result<CdNumber> {
    let m = axis_of(z).unwrap_or_else(|| gen(1)).lift(z.level().max(1));
    let zc = Plane::new(m).to_c(z);
    if zc.im == 0.0 && zc.re >= 2.0 && zc.re.fract() == 0.0 {
        return Err(CdError::DomainOfRepresentation(format!(
            "hankel: Γ(1−z) has a pole at z = {}",
            zc.re
        )));
    }
    let j = hankel_loop(z, &m, 1.0, 1e-13)?;
    let g = gamma(&(-*z + 1.0))?;
    let e = crate::transcend::exp(&(m * *z).scale(-PI));
    Ok(g * e * m.conj() * j.scale(1.0 / TAU))
}

fn check_zeta(z: C, rep: ZetaRep) -> Result<()> {
    if z == c(1.0) {
        return Err(CdError::PoleAtOne);
    }
    if !rep.contains(z) {
        return Err(CdError::DomainOfRepresentation(format!("{} at Re z = {}", rep.name(), z.re)));
    }
    Ok(())
}

pub fn zeta_c(z: C, rep: ZetaRep) -> Result<C> {
    check_zeta(z, rep)?;
    match rep {
        ZetaRep::EulerMaclaurin => Ok(zeta_em(z)),
        ZetaRep::Strip => Ok(zeta_strip(z)),
        ZetaRep::Reflected => zeta_reflected(z),
        ZetaRep::MellinDigamma => zeta_mellin_digamma(z),
        ZetaRep::Hankel => Ok(crate::plane::to_complex(&zeta_hankel(&crate::plane::from_complex(z))?)),
    }
}

/// ζ in the chosen representation. The Hankel loop is run in the plane of
/// `z` itself; the others are evaluated on the complex slice and carried back.
pub fn zeta_rep(z: &CdNumber, rep: ZetaRep) -> Result<CdNumber> {
    if rep == ZetaRep::Hankel {
        let zc = Plane::through(z).to_c(z);
        check_zeta(zc, rep)?;
        return zeta_hankel(z);
    }
    try_eval_in_plane(z, |w| zeta_c(w, rep))
}

/// ζ with the representation picked from `Re z`.
pub fn zeta(z: &CdNumber) -> Result<CdNumber> {
    let rep = if z.re() > -1.0 { ZetaRep::EulerMaclaurin } else { ZetaRep::Reflected };
    zeta_rep(z, rep)
}

/// ζ at `z` as `R(ζ(x))` with `x` the complex partner of `z`.
pub fn zeta_via_rotation(z: &CdNumber) -> Result<CdNumber> {
    let b = z.level().max(2);
    let zb = z.lift(b);
    let x = find_partner(&zb, 1);
    let r = build_rotation(&zb, &x, (1, b))?;
    r.apply(&zeta(&x)?)
}

/// Both sides of `Σ_{n=a+1}^q n^{-z} = (q^{1−z} − a^{1−z})/(1−z) − z ∫_a^q (x − [x] − 1/2) x^{−z−1} dx + (q^{−z} − a^{−z})/2`:
/// the direct sum and the right-hand side.
pub fn zeta_partial(z: C, a: usize, q: usize) -> Result<(C, C)> {
    if z == c(1.0) || a == 0 || q <= a {
        return Err(CdError::Invalid(format!("partial sum with z = {z}, a = {a}, q = {q}")));
    }
    let direct: C = (a + 1..=q).map(|n| rpow(n as f64, -z)).sum();
    let (af, qf) = (a as f64, q as f64);
    let int = sawtooth_head(z, q) - sawtooth_head(z, a);
    let rhs = (rpow(qf, c(1.0) - z) - rpow(af, c(1.0) - z)) / (c(1.0) - z) + int + (rpow(qf, -z) - rpow(af, -z)) / 2.0;
    Ok((direct, rhs))
}

pub fn chi_c(z: C) -> Result<C> {
    let g = gamma_c(c(1.0) - z)?;
    Ok(rpow(2.0, z) * rpow(PI, z - 1.0) * (z * PI / 2.0).sin() * g)
}

/// `χ(z) = 2^z π^{z−1} sin(πz/2) Γ(1−z)`.
pub fn chi(z: &CdNumber) -> Result<CdNumber> {
    try_eval_in_plane(z, chi_c)
}

pub fn xi_c(z: C) -> Result<C> {
    if z == c(1.0) || z == c(0.0) {
        return Ok(c(0.5));
    }
    let rep = if z.re > -1.0 { ZetaRep::EulerMaclaurin } else { ZetaRep::Reflected };
    let g = gamma_c(z / 2.0)?;
    Ok(z * (z - 1.0) * rpow(PI, -z / 2.0) * g * zeta_c(z, rep)? / 2.0)
}

/// `ξ(z) = z(z−1) π^{−z/2} Γ(z/2) ζ(z)/2`, with the removable values
/// `ξ(0) = ξ(1) = 1/2`.
pub fn xi(z: &CdNumber) -> Result<CdNumber> {
    try_eval_in_plane(z, xi_c)
}

/// `Υ(z) = ξ(z + 1/2)`.
pub fn upsilon(z: &CdNumber) -> Result<CdNumber> {
    xi(&(*z + 0.5))
}

/// `ψ(x) = Σ_{n≥1} exp(−n²πx)`, stopping once a term drops below `1e-18`.
pub fn theta_psi(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(CdError::NonPositive(x));
    }
    let mut s = 0.0;
    for n in 1.. {
        let t = (-((n * n) as f64) * PI * x).exp();
        s += t;
        if t < 1e-18 {
            break;
        }
    }
    Ok(s)
}

/// The even original `−e^{−|t|/2} + 2e^{|t|/2} ψ(e^{2|t|})` whose two-sided
/// image is `π^{−q/2−1/4} Γ(q/2+1/4) ζ(q+1/2)`.
pub fn omega_original() -> Original {
    Original::two_sided(
        |t| {
            let a = t.abs();
            let psi = if 2.0 * a > 6.0 { 0.0 } else { theta_psi((2.0 * a).exp()).unwrap_or(0.0) };
            CdNumber::real(-(-a / 2.0).exp() + 2.0 * (a / 2.0).exp() * psi)
        },
        -0.5,
        0.5,
    )
}

/// `Ω^s(p) = [w^s(p)]^{-1} g^s(p) / 2` with spherical-kernel two-sided
/// transforms, so that `Ω^s(q) = ξ(q + 1/2)` on the complex slice.
pub fn omega_s(p: &CdNumber) -> Result<CdNumber> {
    let b = p.level().max(2);
    if b > 3 {
        return Err(CdError::LevelMismatch("Ω^s needs level 2 or 3".into()));
    }
    let spec = TransformSpec::spherical(b)?.with_tol(1e-12);
    let g = laplace_two_sided(&omega_original(), p, &spec)?;
    let e = Original::two_sided(|t| CdNumber::real((-t.abs() / 2.0).exp()), -0.5, 0.5).with_discontinuities(vec![0.0]);
    let w = -laplace_two_sided(&e, p, &spec)?;
    Ok((w.inverse()? * g).scale(0.5))
}

/// Sign-change bracket of `t ↦ Re Υ(tM)` refined by bisection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub t: f64,
    pub abs_zeta: f64,
}

/// Width to which brackets are refined.
pub const SCAN_WIDTH: f64 = 1e-6;

/// Scans `t ∈ [t_lo, t_hi]` on a grid of spacing `step` for sign changes of
/// `Re Υ(tM) = Re ξ(1/2 + tM)`. Grid values and refinements are computed in
/// parallel and collected in grid order.
pub fn critical_line_scan(t_lo: f64, t_hi: f64, step: f64, m: &CdNumber) -> Result<Vec<ZeroBracket>> {
    if !(0.0 < t_lo && t_lo < t_hi && step > 0.0) {
        return Err(CdError::Invalid(format!("scan range ({t_lo}, {t_hi}) step {step}")));
    }
    let Some(axis) = axis_of(m) else {
        return Err(CdError::Invalid("scan direction must be imaginary".into()));
    };
    let f = |t: f64| -> Result<f64> { Ok(upsilon(&axis.scale(t))?.re()) };
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| (t_lo + k as f64 * step).min(t_hi)).collect();
    let vals: Vec<f64> = grid.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64, f64, f64)> = (0..n)
        .filter(|&k| vals[k] == 0.0 || vals[k].signum() != vals[k + 1].signum())
        .map(|k| (grid[k], grid[k + 1], vals[k], vals[k + 1]))
        .collect();
    pairs
        .par_iter()
        .map(|&(mut a, mut b, mut fa, _)| {
            while b - a > SCAN_WIDTH {
                let mid = 0.5 * (a + b);
                let fm = f(mid)?;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            let t = 0.5 * (a + b);
            let zv = zeta(&(axis.scale(t) + 0.5))?;
            Ok(ZeroBracket { t_lo: a, t_hi: b, t, abs_zeta: zv.norm() })
        })
        .collect()
}
