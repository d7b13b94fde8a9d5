//! Rotation automorphisms `R_{z,x}` fixing ℝ and carrying a point of a
//! subalgebra `𝒜_r` onto a point `z` of `𝒜_b` with the same real part and
//! modulus.
//!
//! An automorphism is fixed by the images of a basic triple `(i1, i2, i4)`.
//! Source and target frames are completed by Gram–Schmidt over the fixed
//! candidate order `i2, i3, …, i7, i1`, accepting the first candidate whose
//! residual has norm at least [`GS_THRESHOLD`]. The resulting map depends
//! continuously on `z` away from the null set where the accepted candidate
//! changes.

use serde::{Deserialize, Serialize};

use crate::algebra::{dim, gen, CdNumber};
use crate::error::{CdError, Result};
use crate::plane::axis_of;

pub const GS_THRESHOLD: f64 = 0.1;
pub const RE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationAutomorphism {
    level: u8,
    images: Vec<CdNumber>,
}

impl RotationAutomorphism {
    pub fn identity(level: u8) -> Self {
        Self { level, images: (1..dim(level)).map(|j| gen(j).lift(level)).collect() }
    }

    /// Closes the basic-triple images under the multiplication table.
    fn from_triple(level: u8, e1: CdNumber, e2: CdNumber, e4: Option<CdNumber>) -> Self {
        let mut images = vec![e1];
        if level >= 2 {
            images.push(e2);
            images.push(e1 * e2);
        }
        if let (3, Some(e4)) = (level, e4) {
            let e3 = images[2];
            images.extend([e4, e1 * e4, e2 * e4, e3 * e4]);
        }
        Self { level, images }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    /// Images of `i_1, …, i_{2^b-1}`.
    pub fn images(&self) -> &[CdNumber] {
        &self.images
    }

    pub fn apply(&self, w: &CdNumber) -> Result<CdNumber> {
        if w.level() > self.level {
            return Err(CdError::LevelMismatch(format!(
                "automorphism of level {} applied to level {}",
                self.level,
                w.level()
            )));
        }
        let mut out = CdNumber::real(w.re()).lift(self.level);
        for (j, img) in self.images.iter().enumerate() {
            let c = w.coeff(j + 1);
            if c != 0.0 {
                out += img.scale(c);
            }
        }
        Ok(out)
    }

    /// Inverse map (the transpose of an orthogonal matrix).
    pub fn inverse(&self) -> Self {
        let n = self.images.len();
        let images = (0..n)
            .map(|j| {
                let mut c = [0.0; 8];
                for (k, img) in self.images.iter().enumerate() {
                    c[k + 1] = img.coeff(j + 1);
                }
                CdNumber::from_array(self.level, c)
            })
            .collect();
        Self { level: self.level, images }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let images = other.images.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        Ok(Self { level: self.level.max(other.level), images })
    }

    /// Row-major real matrix on the basis `1, i_1, …`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = dim(self.level);
        let mut m = vec![vec![0.0; n]; n];
        m[0][0] = 1.0;
        for (j, img) in self.images.iter().enumerate() {
            for (r, row) in m.iter_mut().enumerate() {
                row[j + 1] = img.coeff(r);
            }
        }
        m
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.images.iter().enumerate().all(|(j, x)| x.dist(&gen(j + 1).lift(self.level)) <= tol)
    }
}

/// Unit vector from `cands` with the largest usable residual against `span`,
/// taking the first whose residual clears the threshold.
fn gram_schmidt(span: &[CdNumber], cands: impl Iterator<Item = CdNumber>) -> CdNumber {
    let mut best: Option<(f64, CdNumber)> = None;
    for c in cands {
        let mut r = c;
        for s in span {
            r -= s.scale(r.dot(s));
        }
        let n = r.norm();
        if n >= GS_THRESHOLD {
            return r.scale(1.0 / n);
        }
        if best.is_none_or(|(bn, _)| n > bn) {
            best = Some((n, r));
        }
    }
    let (n, r) = best.expect("empty candidate list");
    r.scale(1.0 / n)
}

fn candidates(level: u8) -> impl Iterator<Item = CdNumber> {
    (2..dim(level)).chain(std::iter::once(1)).map(move |j| gen(j).lift(level))
}

/// Automorphism of `𝒜_level` sending `i1` to the unit imaginary `u`, with
/// `i2` chosen inside `𝒜_within` when possible.
fn frame(level: u8, u: CdNumber, within: u8) -> RotationAutomorphism {
    let span1 = [u];
    let e2 = gram_schmidt(&span1, candidates(within.max(2).min(level)).chain(candidates(level)));
    let e3 = u * e2;
    let e4 = if level == 3 {
        Some(gram_schmidt(&[u, e2, e3], candidates(3)))
    } else {
        None
    };
    RotationAutomorphism::from_triple(level, u, e2, e4)
}

/// `R_{z,x}` for the pair `(r, b)`: an automorphism of `𝒜_b` fixing ℝ with
/// `Im x / |Im x| ↦ Im z / |Im z|`, so that `R(x) = z` when the real parts and
/// moduli agree.
pub fn build_rotation(z: &CdNumber, x: &CdNumber, pair: (u8, u8)) -> Result<RotationAutomorphism> {
    let (r, b) = pair;
    if !(r < b && b <= 3 && r >= 1) {
        return Err(CdError::LevelMismatch(format!("unsupported pair ({r},{b})")));
    }
    if z.level() > b {
        return Err(CdError::LevelMismatch(format!("z has level {} > {b}", z.level())));
    }
    if !x.lies_in(r, 0.0) {
        return Err(CdError::LevelMismatch(format!("x does not lie in level {r}")));
    }
    if (z.re() - x.re()).abs() > RE_TOL {
        return Err(CdError::RePartMismatch(z.re(), x.re()));
    }
    let (Some(w), u) = (axis_of(z), axis_of(x)) else {
        return Ok(RotationAutomorphism::identity(b));
    };
    let u = u.unwrap_or_else(|| gen(1)).lift(b);
    let w = w.lift(b);
    let src = frame(b, u, r);
    let dst = frame(b, w, b);
    dst.compose(&src.inverse())
}

/// Canonical partner of `z` in `𝒜_r`: `z` itself when it already lies there,
/// otherwise `Re z + i1 |Im z|`.
pub fn find_partner(z: &CdNumber, r: u8) -> CdNumber {
    if z.lies_in(r, 0.0) {
        return *z;
    }
    (gen(1).scale(z.im_norm()) + z.re()).lift(z.level())
}
