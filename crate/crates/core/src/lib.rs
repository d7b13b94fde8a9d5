pub mod algebra;
pub mod contour;
pub mod error;
pub mod plane;
pub mod qcx;
pub mod quad;
pub mod rotor;
pub mod selftest;
pub mod special;
pub mod transcend;
pub mod xform;

pub use algebra::{gen, CdNumber};
pub use error::{CdError, Result};
