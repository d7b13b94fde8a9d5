//! Complex-like planes ℝ ⊕ Mℝ inside 𝒜_b.
//!
//! Functions with real Taylor coefficients act inside every such plane, so
//! they can be evaluated with ordinary complex arithmetic and mapped back
//! through the identification `M ↔ i`.

use num_complex::Complex64;

use crate::algebra::{gen, CdNumber};

/// Below this relative size an imaginary part is treated as zero.
pub const REAL_CUTOFF: f64 = 1e-13;

/// Unit axis of `Im z`, or `None` when `z` is (numerically) real.
pub fn axis_of(z: &CdNumber) -> Option<CdNumber> {
    let v = z.im();
    let n = v.norm();
    if n == 0.0 || n <= REAL_CUTOFF * z.norm() {
        None
    } else {
        Some(v.scale(1.0 / n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    axis: CdNumber,
}

impl Plane {
    /// Plane spanned by 1 and the unit imaginary `axis` (normalized here).
    pub fn new(axis: CdNumber) -> Self {
        let a = axis.im();
        let n = a.norm();
        assert!(n > 0.0, "plane axis must have a nonzero imaginary part");
        Self { axis: a.scale(1.0 / n) }
    }

    /// The plane through `z`; real points fall back to the `i1` plane.
    pub fn through(z: &CdNumber) -> Self {
        match axis_of(z) {
            Some(m) => Self { axis: m },
            None => Self { axis: gen(1).lift(z.level()) },
        }
    }

    pub fn axis(&self) -> CdNumber {
        self.axis
    }

    pub fn level(&self) -> u8 {
        self.axis.level()
    }

    pub fn to_c(&self, z: &CdNumber) -> Complex64 {
        Complex64::new(z.re(), z.im().dot(&self.axis))
    }

    pub fn from_c(&self, c: Complex64) -> CdNumber {
        self.axis.scale(c.im) + c.re
    }

    /// Distance of `z` from the plane.
    pub fn offset(&self, z: &CdNumber) -> f64 {
        (*z - self.from_c(self.to_c(z))).norm()
    }
}

/// Evaluates a real-coefficient function `f` at `z` through the plane of `z`.
pub fn eval_in_plane(z: &CdNumber, f: impl Fn(Complex64) -> Complex64) -> CdNumber {
    let p = Plane::through(z);
    p.from_c(f(p.to_c(z)))
}

/// Fallible variant of [`eval_in_plane`].
pub fn try_eval_in_plane<E>(
    z: &CdNumber,
    f: impl Fn(Complex64) -> Result<Complex64, E>,
) -> Result<CdNumber, E> {
    let p = Plane::through(z);
    Ok(p.from_c(f(p.to_c(z))?))
}

pub fn to_complex(z: &CdNumber) -> Complex64 {
    Complex64::new(z.re(), z.coeff(1))
}

pub fn from_complex(c: Complex64) -> CdNumber {
    CdNumber::complex(c.re, c.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_in_plane() {
        let z = CdNumber::new(2, &[0.5, 0.0, 3.0, -4.0]).unwrap();
        let p = Plane::through(&z);
        let c = p.to_c(&z);
        assert!((c.re - 0.5).abs() < 1e-15 && (c.im - 5.0).abs() < 1e-15);
        assert!(p.from_c(c).dist(&z) < 1e-15);
        assert!(p.offset(&z) < 1e-15);
    }

    #[test]
    fn real_points_use_i1() {
        let z = CdNumber::real(-2.0).lift(3);
        assert_eq!(Plane::through(&z).axis(), gen(1).lift(3));
        assert!(axis_of(&z).is_none());
    }
}
