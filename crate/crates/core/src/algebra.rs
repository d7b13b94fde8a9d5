//! Cayley-Dickson arithmetic on ℝ, ℂ, ℍ and 𝕆.
//!
//! Elements are stored as eight coefficients plus a level tag `b`; only the
//! first `2^b` coefficients are meaningful and the rest stay zero. Mixed-level
//! operations embed the lower operand into the higher algebra.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CdError, Result};

pub const MAX_LEVEL: u8 = 3;
pub const MAX_DIM: usize = 8;

/// Default comparison tolerances (relative, absolute).
pub const REL_TOL: f64 = 1e-12;
pub const ABS_TOL: f64 = 1e-14;

/// Product of two basis generators from the doubling rule
/// `(a,b)(c,d) = (ac - d*b, da + bc*)`.
const fn basis_product(level: u32, j: usize, k: usize) -> (i8, usize) {
    if level == 0 {
        return (1, 0);
    }
    let h = 1usize << (level - 1);
    if j < h && k < h {
        basis_product(level - 1, j, k)
    } else if j < h {
        // (a,0)(0,d) = (0, d a)
        let (s, i) = basis_product(level - 1, k - h, j);
        (s, i + h)
    } else if k < h {
        // (0,b)(c,0) = (0, b c*)
        let (s, i) = basis_product(level - 1, j - h, k);
        (if k == 0 { s } else { -s }, i + h)
    } else {
        // (0,b)(0,d) = (-d* b, 0)
        let (s, i) = basis_product(level - 1, k - h, j - h);
        (if k == h { -s } else { s }, i)
    }
}

const fn build_table() -> [[(i8, u8); MAX_DIM]; MAX_DIM] {
    let mut t = [[(0i8, 0u8); MAX_DIM]; MAX_DIM];
    let mut j = 0;
    while j < MAX_DIM {
        let mut k = 0;
        while k < MAX_DIM {
            let (s, i) = basis_product(3, j, k);
            t[j][k] = (s, i as u8);
            k += 1;
        }
        j += 1;
    }
    t
}

/// Signed generator table: `TABLE[j][k] = (s, m)` means `i_j i_k = s i_m`.
/// Lower levels are the leading sub-blocks.
pub const TABLE: [[(i8, u8); MAX_DIM]; MAX_DIM] = build_table();

/// Octonion products fixed by the generator conventions, as (j, k, sign, m).
pub const REFERENCE_PRODUCTS: [(usize, usize, i8, usize); 13] = [
    (1, 2, 1, 3),
    (1, 4, 1, 5),
    (2, 4, 1, 6),
    (3, 4, 1, 7),
    (1, 6, -1, 7),
    (1, 7, 1, 6),
    (2, 5, 1, 7),
    (2, 7, -1, 5),
    (3, 5, -1, 6),
    (3, 6, 1, 5),
    (5, 6, -1, 3),
    (5, 7, 1, 2),
    (6, 7, -1, 1),
];

const fn table_is_consistent() -> bool {
    let mut n = 0;
    while n < REFERENCE_PRODUCTS.len() {
        let (j, k, s, m) = REFERENCE_PRODUCTS[n];
        let (ts, tm) = TABLE[j][k];
        if ts != s || tm as usize != m {
            return false;
        }
        // anticommutation of distinct imaginary generators
        let (rs, rm) = TABLE[k][j];
        if rs != -s || rm as usize != m {
            return false;
        }
        n += 1;
    }
    let mut k = 1;
    while k < MAX_DIM {
        let (s, m) = TABLE[k][k];
        if s != -1 || m != 0 {
            return false;
        }
        k += 1;
    }
    true
}

// A table that disagrees with the fixed octonion products fails compilation.
const _: () = assert!(table_is_consistent());

#[inline]
pub const fn dim(level: u8) -> usize {
    1usize << level
}

/// Element of the Cayley-Dickson algebra of level `b ≤ 3`.
#[derive(Clone, Copy, PartialEq)]
pub struct CdNumber {
    level: u8,
    c: [f64; MAX_DIM],
}

impl CdNumber {
    pub fn new(level: u8, coeffs: &[f64]) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(CdError::LevelMismatch(format!("level {level} exceeds {MAX_LEVEL}")));
        }
        if coeffs.len() != dim(level) {
            return Err(CdError::LevelMismatch(format!(
                "level {level} needs {} coefficients, got {}",
                dim(level),
                coeffs.len()
            )));
        }
        let mut c = [0.0; MAX_DIM];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self { level, c })
    }

    /// Builds from any number of coefficients (up to 8), choosing the
    /// smallest level that holds them.
    pub fn from_slice(coeffs: &[f64]) -> Result<Self> {
        let level = match coeffs.len() {
            0 | 1 => 0,
            2 => 1,
            3 | 4 => 2,
            5..=8 => 3,
            n => return Err(CdError::LevelMismatch(format!("{n} coefficients exceed octonions"))),
        };
        let mut c = [0.0; MAX_DIM];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self { level, c })
    }

    pub fn from_array(level: u8, c: [f64; MAX_DIM]) -> Self {
        assert!(level <= MAX_LEVEL);
        let mut c = c;
        for x in c.iter_mut().skip(dim(level)) {
            *x = 0.0;
        }
        Self { level, c }
    }

    pub fn real(x: f64) -> Self {
        let mut c = [0.0; MAX_DIM];
        c[0] = x;
        Self { level: 0, c }
    }

    pub fn zero(level: u8) -> Self {
        Self { level, c: [0.0; MAX_DIM] }
    }

    pub fn one(level: u8) -> Self {
        Self::real(1.0).lift(level)
    }

    pub fn complex(re: f64, im: f64) -> Self {
        let mut c = [0.0; MAX_DIM];
        c[0] = re;
        c[1] = im;
        Self { level: 1, c }
    }

    /// The generator `i_j` in the smallest algebra containing it.
    pub fn unit(j: usize) -> Self {
        assert!(j < MAX_DIM, "generator index {j} out of range");
        let level = match j {
            0 => 0,
            1 => 1,
            2 | 3 => 2,
            _ => 3,
        };
        let mut c = [0.0; MAX_DIM];
        c[j] = 1.0;
        Self { level, c }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn dim(&self) -> usize {
        dim(self.level)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..dim(self.level)]
    }

    pub fn raw(&self) -> &[f64; MAX_DIM] {
        &self.c
    }

    pub fn coeff(&self, j: usize) -> f64 {
        if j < MAX_DIM {
            self.c[j]
        } else {
            0.0
        }
    }

    pub fn with_coeff(mut self, j: usize, v: f64) -> Self {
        assert!(j < dim(self.level));
        self.c[j] = v;
        self
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    pub fn im(&self) -> Self {
        let mut out = *self;
        out.c[0] = 0.0;
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut().skip(1) {
            *x = -*x;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        // scaled to avoid overflow for huge coefficients
        let m = self.c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s: f64 = self.c.iter().map(|x| (x / m) * (x / m)).sum();
        m * s.sqrt()
    }

    pub fn im_norm(&self) -> f64 {
        self.im().norm()
    }

    /// Euclidean inner product `Re(x y*)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.im_norm() <= tol
    }

    /// True when every coefficient beyond `2^r` vanishes (within `tol`).
    pub fn lies_in(&self, r: u8, tol: f64) -> bool {
        self.c.iter().skip(dim(r)).all(|x| x.abs() <= tol)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_eps(ABS_TOL * ABS_TOL)
    }

    /// Inverse `z*/|z|²`, failing when `|z|² ≤ eps`.
    pub fn inverse_eps(&self, eps: f64) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= eps || n2 == 0.0 {
            return Err(CdError::ZeroDivision(n2.sqrt()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// `self · rhs⁻¹`.
    pub fn div_right(&self, rhs: &Self) -> Result<Self> {
        Ok(*self * rhs.inverse()?)
    }

    /// `lhs⁻¹ · self`.
    pub fn div_left(&self, lhs: &Self) -> Result<Self> {
        Ok(lhs.inverse()? * *self)
    }

    /// Embeds into a higher (or equal) level; lowering is allowed only
    /// when the dropped coefficients are exactly zero.
    pub fn embed(&self, target: u8) -> Result<Self> {
        if target > MAX_LEVEL {
            return Err(CdError::LevelMismatch(format!("level {target} exceeds {MAX_LEVEL}")));
        }
        if target < self.level && !self.lies_in(target, 0.0) {
            return Err(CdError::LevelMismatch(format!(
                "cannot lower level {} to {target}: nonzero high coefficients",
                self.level
            )));
        }
        Ok(Self { level: target, c: self.c })
    }

    /// Infallible embedding upward; levels below the current one are ignored.
    pub fn lift(&self, target: u8) -> Self {
        Self { level: self.level.max(target), c: self.c }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// Relative/absolute closeness with the library defaults.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_tol(other, REL_TOL, ABS_TOL)
    }

    pub fn approx_eq_tol(&self, other: &Self, rel: f64, abs: f64) -> bool {
        let d = self.dist(other);
        d <= abs + rel * self.norm().max(other.norm())
    }

    /// Conjugation through `(2^b - 2)^{-1} { -z + Σ_s s (z s*) }`, b ∈ {2, 3}.
    pub fn conj_formula(&self) -> Result<Self> {
        let b = self.level;
        if b < 2 {
            return Err(CdError::LevelMismatch(
                "closed conjugation formula needs level 2 or 3".into(),
            ));
        }
        let n = dim(b);
        let mut acc = -*self;
        for k in 1..n {
            let s = Self::unit(k).lift(b);
            acc += s * (*self * s.conj());
        }
        Ok(acc.scale(1.0 / (n as f64 - 2.0)))
    }

    /// Real part through `(z + z*)/2` with the closed conjugation formula.
    pub fn re_formula(&self) -> Result<f64> {
        Ok((*self + self.conj_formula()?).scale(0.5).re())
    }

    /// Norm through `(z z*)^{1/2}` with the closed conjugation formula.
    pub fn norm_formula(&self) -> Result<f64> {
        Ok((*self * self.conj_formula()?).re().max(0.0).sqrt())
    }

    /// Coefficient `j`.
    pub fn proj(&self, j: usize) -> Result<f64> {
        if j >= self.dim() {
            return Err(CdError::IndexOutOfRange { index: j, level: self.level });
        }
        Ok(self.c[j])
    }

    /// Coefficient `j` reconstructed by generator products:
    /// `π_0 = (z + z*)/2`, `π_j = (-z i_j + i_j z*)/2` with `z*` from the
    /// closed formula.
    pub fn proj_formula(&self, j: usize) -> Result<f64> {
        if j >= self.dim() {
            return Err(CdError::IndexOutOfRange { index: j, level: self.level });
        }
        let zs = self.conj_formula()?;
        if j == 0 {
            return Ok((*self + zs).scale(0.5).re());
        }
        let ij = Self::unit(j).lift(self.level);
        let v = (-(*self * ij) + ij * zs).scale(0.5);
        Ok(v.re())
    }
}

impl Default for CdNumber {
    fn default() -> Self {
        Self::zero(0)
    }
}

impl From<f64> for CdNumber {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl Add for CdNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
        Self { level: self.level.max(rhs.level), c }
    }
}

impl Sub for CdNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
        Self { level: self.level.max(rhs.level), c }
    }
}

impl Neg for CdNumber {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for CdNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let level = self.level.max(rhs.level);
        let n = dim(level);
        let mut c = [0.0; MAX_DIM];
        for j in 0..n {
            let a = self.c[j];
            for k in 0..n {
                let (s, m) = TABLE[j][k];
                c[m as usize] += f64::from(s) * a * rhs.c[k];
            }
        }
        Self { level, c }
    }
}

impl Add<f64> for CdNumber {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for CdNumber {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for CdNumber {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<CdNumber> for f64 {
    type Output = CdNumber;
    fn mul(self, rhs: CdNumber) -> CdNumber {
        rhs.scale(self)
    }
}

impl Div<f64> for CdNumber {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}

impl AddAssign for CdNumber {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for CdNumber {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for CdNumber {
    fn mul_assign(&mut self, rhs: f64) {
        *self = self.scale(rhs);
    }
}

impl std::iter::Sum for CdNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(0), |a, b| a + b)
    }
}

impl fmt::Debug for CdNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CdNumber(b={}, {:?})", self.level, self.coeffs())
    }
}

impl fmt::Display for CdNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c[0])?;
        for (j, x) in self.coeffs().iter().enumerate().skip(1) {
            if *x != 0.0 {
                let sign = if *x < 0.0 { '-' } else { '+' };
                write!(f, " {sign} {}*i{j}", x.abs())?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CdRepr {
    level: u8,
    coeffs: Vec<f64>,
}

impl Serialize for CdNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CdRepr { level: self.level, coeffs: self.coeffs().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CdNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CdRepr::deserialize(d)?;
        CdNumber::new(r.level, &r.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for the generator `i_j`.
pub fn gen(j: usize) -> CdNumber {
    CdNumber::unit(j)
}
