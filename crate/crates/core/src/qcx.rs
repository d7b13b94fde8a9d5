//! Quasi-conformal extension of complex seeds to `ℍ` and `𝕆`, and numeric
//! checks of the pseudo-conformality and (Q7) conditions.
//!
//! A seed `g` on `ℂ` is extended by `f(z) = R_{z-y0, x-y0} g(x)`, where `x`
//! is the canonical partner `Re z + i1 |Im z|`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{dim, CdNumber};
use crate::error::{CdError, Result};
use crate::plane::{from_complex, to_complex, Plane};
use crate::rotor::{build_rotation, find_partner};
use crate::transcend::{e_map, exp};

pub type ComplexFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;
pub type HyperFn = Arc<dyn Fn(&CdNumber) -> Result<CdNumber> + Send + Sync>;

pub const MAX_TERMS: usize = 100_000;
pub const FD_SCALE: f64 = 1e-5;

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Seed {
    /// `Σ c_n (y - center)^n`, valid for `|y - center| < radius`.
    PowerSeries { coeffs: Vec<f64>, center: f64, radius: f64 },
    /// `Σ c_n exp(a_n (y - center))`.
    ExpSum { coeffs: Vec<f64>, rates: Vec<f64>, center: f64 },
    /// Black-box complex function.
    #[serde(skip)]
    Callable(ComplexFn),
    /// A function already defined on `𝒜_b` (compositions and products).
    #[serde(skip)]
    Extended(HyperFn),
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::PowerSeries { coeffs, center, radius } => f
                .debug_struct("PowerSeries")
                .field("terms", &coeffs.len())
                .field("center", center)
                .field("radius", radius)
                .finish(),
            Seed::ExpSum { coeffs, rates, center } => f
                .debug_struct("ExpSum")
                .field("coeffs", coeffs)
                .field("rates", rates)
                .field("center", center)
                .finish(),
            Seed::Callable(_) => f.write_str("Callable"),
            Seed::Extended(_) => f.write_str("Extended"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub seed: Seed,
    pub level: u8,
    #[serde(default)]
    pub spherical: bool,
    /// Marked real point the rotations are centred on.
    #[serde(default)]
    pub y0: f64,
}

impl ExtensionSpec {
    pub fn new(seed: Seed, level: u8) -> Result<Self> {
        if !(1..=3).contains(&level) {
            return Err(CdError::LevelMismatch(format!("extension level {level}")));
        }
        let y0 = match &seed {
            Seed::PowerSeries { center, radius, coeffs } => {
                if !(*radius > 0.0) {
                    return Err(CdError::Invalid("series radius must be positive".into()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(CdError::Invalid("non-finite series coefficient".into()));
                }
                *center
            }
            Seed::ExpSum { coeffs, rates, center } => {
                if coeffs.len() != rates.len() {
                    return Err(CdError::Invalid("exp_sum needs one rate per coefficient".into()));
                }
                *center
            }
            _ => 0.0,
        };
        Ok(Self { seed, level, spherical: false, y0 })
    }

    pub fn power_series(coeffs: Vec<f64>, center: f64, radius: f64, level: u8) -> Result<Self> {
        Self::new(Seed::PowerSeries { coeffs, center, radius }, level)
    }

    pub fn exp_sum(coeffs: Vec<f64>, rates: Vec<f64>, center: f64, level: u8) -> Result<Self> {
        Self::new(Seed::ExpSum { coeffs, rates, center }, level)
    }

    pub fn callable<F>(f: F, y0: f64, level: u8) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Ok(Self { y0, ..Self::new(Seed::Callable(Arc::new(f)), level)? })
    }

    pub fn extended<F>(f: F, y0: f64, level: u8) -> Result<Self>
    where
        F: Fn(&CdNumber) -> Result<CdNumber> + Send + Sync + 'static,
    {
        Ok(Self { y0, ..Self::new(Seed::Extended(Arc::new(f)), level)? })
    }

    pub fn with_spherical(mut self, on: bool) -> Self {
        self.spherical = on;
        self
    }

    pub fn exp(level: u8) -> Self {
        Self::exp_sum(vec![1.0], vec![1.0], 0.0, level).unwrap()
    }

    /// `1/(1-y) = Σ y^n`, truncated at `terms`.
    pub fn geometric(terms: usize, level: u8) -> Self {
        Self::power_series(vec![1.0; terms], 0.0, 1.0, level).unwrap()
    }

    pub fn sin(level: u8) -> Self {
        Self::power_series(taylor(|n| [0.0, 1.0, 0.0, -1.0][n % 4]), 0.0, f64::INFINITY, level)
            .unwrap()
    }

    pub fn cos(level: u8) -> Self {
        Self::power_series(taylor(|n| [1.0, 0.0, -1.0, 0.0][n % 4]), 0.0, f64::INFINITY, level)
            .unwrap()
    }

    /// Evaluates the seed at a complex point (given as a level-1 number).
    pub fn eval_seed(&self, y: &CdNumber) -> Result<CdNumber> {
        match &self.seed {
            Seed::PowerSeries { coeffs, center, radius } => {
                let w = *y - *center;
                check_radius(&w, *radius)?;
                Ok(sum_series(coeffs, &w))
            }
            Seed::ExpSum { coeffs, rates, center } => {
                let w = *y - *center;
                Ok(coeffs.iter().zip(rates).map(|(c, a)| exp(&w.scale(*a)).scale(*c)).sum::<CdNumber>().lift(1))
            }
            Seed::Callable(f) => {
                let v = f(to_complex(y))?;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(CdError::SeedSingularity(format!("{y}")));
                }
                Ok(from_complex(v))
            }
            Seed::Extended(f) => f(&y.lift(self.level)),
        }
    }

    /// Real-direction derivative `∂g/∂x` of the seed.
    pub fn seed_dx(&self, y: &CdNumber) -> Result<CdNumber> {
        match &self.seed {
            Seed::PowerSeries { coeffs, center, radius } => {
                let w = *y - *center;
                check_radius(&w, *radius)?;
                let d: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(n, c)| n as f64 * c).collect();
                Ok(sum_series(&d, &w))
            }
            Seed::ExpSum { coeffs, rates, center } => {
                let w = *y - *center;
                Ok(coeffs.iter().zip(rates).map(|(c, a)| exp(&w.scale(*a)).scale(c * a)).sum::<CdNumber>().lift(1))
            }
            _ => {
                let one = CdNumber::real(1.0);
                central_difference(|p| self.eval_seed(p), y, &one)
            }
        }
    }
}

fn taylor(sign: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(171);
    let mut fact = 1.0f64;
    for n in 0..171 {
        if n > 0 {
            fact *= n as f64;
        }
        c.push(sign(n) / fact);
    }
    c
}

fn check_radius(w: &CdNumber, radius: f64) -> Result<()> {
    let d = w.norm();
    if d >= radius {
        return Err(CdError::DivergenceRadius { dist: d, radius });
    }
    Ok(())
}

/// `Σ c_n w^n` by forward powers; stops after three consecutive nonzero
/// terms below `1e-16 |partial sum|` or at [`MAX_TERMS`].
fn sum_series(coeffs: &[f64], w: &CdNumber) -> CdNumber {
    let mut p = CdNumber::one(w.level());
    let mut sum = CdNumber::zero(w.level());
    let mut small = 0;
    for c in coeffs.iter().take(MAX_TERMS) {
        if *c != 0.0 {
            let term = p.scale(*c);
            sum += term;
            if term.norm() <= 1e-16 * sum.norm() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        p = p * *w;
        if p.norm() == 0.0 {
            break;
        }
    }
    sum
}

/// Central difference of `f` at `z` along `h`, with step
/// `FD_SCALE · max(1, |z|)` along the unit direction.
pub fn central_difference<F>(f: F, z: &CdNumber, h: &CdNumber) -> Result<CdNumber>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    let hn = h.norm();
    if hn == 0.0 {
        return Ok(CdNumber::zero(z.level().max(h.level())));
    }
    let u = h.scale(1.0 / hn);
    let s = FD_SCALE * z.norm().max(1.0);
    let zp = *z + u.scale(s);
    let zm = *z - u.scale(s);
    if !s.is_finite() || zp == *z || zm == *z {
        return Err(CdError::StepUnderflow(s));
    }
    let d = (f(&zp)? - f(&zm)?).scale(hn / (2.0 * s));
    Ok(d)
}

/// Value of the extension at `z`.
pub fn eval_extension(spec: &ExtensionSpec, z: &CdNumber) -> Result<CdNumber> {
    let b = spec.level;
    if z.level() > b {
        return Err(CdError::OutOfDomain(format!("level {} point for a level {b} extension", z.level())));
    }
    let z = z.lift(b);
    let z = if spec.spherical && b >= 2 { e_map(&z)? } else { z };
    if let Seed::Extended(f) = &spec.seed {
        return f(&z);
    }
    let w = z - spec.y0;
    if w.lies_in(1, 0.0) {
        return Ok(spec.eval_seed(&z)?.lift(b));
    }
    let x = find_partner(&w, 1);
    let t = build_rotation(&w, &x, (1, b))?;
    let gx = spec.eval_seed(&(x + spec.y0))?;
    t.apply(&gx)
}

/// Direct substitution of `z` into the series (or exponential sum) using
/// `𝒜_b` arithmetic.
pub fn eval_series_direct(spec: &ExtensionSpec, z: &CdNumber) -> Result<CdNumber> {
    let b = spec.level;
    if z.level() > b {
        return Err(CdError::OutOfDomain(format!("level {} point for a level {b} extension", z.level())));
    }
    let z = z.lift(b);
    let z = if spec.spherical && b >= 2 { e_map(&z)? } else { z };
    match &spec.seed {
        Seed::PowerSeries { coeffs, center, radius } => {
            let w = z - *center;
            check_radius(&w, *radius)?;
            Ok(sum_series(coeffs, &w))
        }
        Seed::ExpSum { coeffs, rates, center } => {
            let w = z - *center;
            Ok(coeffs.iter().zip(rates).map(|(c, a)| exp(&w.scale(*a)).scale(*c)).sum::<CdNumber>().lift(b))
        }
        _ => Err(CdError::Invalid("direct evaluation needs a series or exponential-sum seed".into())),
    }
}

/// Samples of the zero surface through `z0` for the `(1, level)` family:
/// the sphere `Re z = Re z0`, `|Im z| = |Im z0|`. Deterministic in `seed`.
pub fn zero_surface(z0: &CdNumber, y0: f64, level: u8, n_samples: usize, seed: u64) -> Vec<CdNumber> {
    let w = *z0 - y0;
    let r = w.im_norm();
    if r == 0.0 {
        return vec![z0.lift(level)];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dim(level);
    (0..n_samples)
        .map(|_| loop {
            let mut c = [0.0; 8];
            for x in c.iter_mut().take(n).skip(1) {
                *x = rng.gen_range(-1.0..1.0);
            }
            let u = CdNumber::from_array(level, c);
            let un = u.norm();
            if un > 1e-3 && un <= 1.0 {
                break u.scale(r / un) + z0.re();
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoConformalReport {
    /// In-plane Cauchy–Riemann defect `|D_N f − N D_1 f| / 2`.
    pub p1: f64,
    /// Largest change of the cosine between in-plane directions.
    pub p2: f64,
    /// Smallest `|f'(ξ).h|` over the sampled unit directions.
    pub p3: f64,
}

/// Unit directions in `𝒜_level`, deterministic in `seed`.
pub fn unit_samples(level: u8, n: usize, seed: u64) -> Vec<CdNumber> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let mut c = [0.0; 8];
            for x in c.iter_mut().take(dim(level)) {
                *x = rng.gen_range(-1.0..1.0);
            }
            let u = CdNumber::from_array(level, c);
            if u.norm() > 1e-3 {
                break u.scale(1.0 / u.norm());
            }
        })
        .collect()
}

pub fn check_pseudo_conformal<F>(f: F, xi: &CdNumber, samples: &[CdNumber]) -> Result<PseudoConformalReport>
where
    F: Fn(&CdNumber) -> Result<CdNumber>,
{
    let plane = Plane::through(xi);
    let n = plane.axis();
    let one = CdNumber::real(1.0).lift(xi.level());
    let d1 = central_difference(&f, xi, &one)?;
    let dn = central_difference(&f, xi, &n)?;
    let p1 = (dn - n * d1).norm() / 2.0;

    let angles: Vec<f64> = (0..6).map(|k| k as f64 * std::f64::consts::PI / 6.0).collect();
    let dirs: Vec<CdNumber> = angles.iter().map(|t| n.scale(t.sin()) + t.cos()).collect();
    let imgs = dirs.iter().map(|h| central_difference(&f, xi, h)).collect::<Result<Vec<_>>>()?;
    let mut p2 = 0.0f64;
    for j in 0..dirs.len() {
        for k in j + 1..dirs.len() {
            let (a, b) = (imgs[j], imgs[k]);
            let (na, nb) = (a.norm(), b.norm());
            if na == 0.0 || nb == 0.0 {
                continue;
            }
            let c_img = a.dot(&b) / (na * nb);
            let c_src = dirs[j].dot(&dirs[k]);
            p2 = p2.max((c_img - c_src).abs());
        }
    }

    let mut p3 = f64::INFINITY;
    for h in samples {
        let hn = h.norm();
        if hn == 0.0 {
            continue;
        }
        let d = central_difference(&f, xi, &h.scale(1.0 / hn))?;
        p3 = p3.min(d.norm());
    }
    Ok(PseudoConformalReport { p1, p2, p3 })
}

/// Residual of condition (Q7) at `z = R y` for a complex direction `h`:
/// `|D_{Rh} f(z) − R[g_x(y) h]|`, where `f` is the extension and `g_x` the
/// real-direction derivative of the seed.
pub fn check_q7(spec: &ExtensionSpec, z: &CdNumber, y: &CdNumber, h: &CdNumber) -> Result<f64> {
    if !h.lies_in(1, 0.0) || !y.lies_in(1, 0.0) {
        return Err(CdError::LevelMismatch("y and h must be complex".into()));
    }
    if h.norm() == 0.0 {
        return Ok(0.0);
    }
    let b = spec.level;
    let t = build_rotation(&(*z - spec.y0), &(*y - spec.y0), (1, b))?;
    let rh = t.apply(h)?;
    let lhs = central_difference(|p| eval_extension(spec, p), &z.lift(b), &rh)?;
    let gx = spec.seed_dx(y)?;
    let rhs = t.apply(&(gx * *h))?;
    Ok(lhs.dist(&rhs))
}

/// `z ↦ g(f(z))`.
pub fn compose_extensions(f: &ExtensionSpec, g: &ExtensionSpec) -> Result<ExtensionSpec> {
    let level = f.level.max(g.level);
    let (f, g) = (f.clone(), g.clone());
    let y0 = f.y0;
    ExtensionSpec::extended(move |z| eval_extension(&g, &eval_extension(&f, z)?), y0, level)
}

/// Pointwise product `f_1(z) f_2(z)`.
pub fn product_extension(f1: &ExtensionSpec, f2: &ExtensionSpec) -> Result<ExtensionSpec> {
    if f1.y0 != f2.y0 {
        return Err(CdError::Invalid("factors must share the marked point".into()));
    }
    let level = f1.level.max(f2.level);
    let (a, b) = (f1.clone(), f2.clone());
    ExtensionSpec::extended(move |z| Ok(eval_extension(&a, z)? * eval_extension(&b, z)?), f1.y0, level)
}

/// Extension of the partial product `e^{Cz} Π_{k≤n} (1 + z/k) e^{−z/k}`
/// for `1/Γ(z+1)`.
pub fn gamma_reciprocal_partial(n: usize, level: u8) -> ExtensionSpec {
    const EULER: f64 = 0.577_215_664_901_532_9;
    ExtensionSpec::callable(
        move |z| {
            let mut p = (z * EULER).exp();
            for k in 1..=n {
                let q = z / k as f64;
                p *= (1.0 + q) * (-q).exp();
            }
            Ok(p)
        },
        0.0,
        level,
    )
    .unwrap()
}
