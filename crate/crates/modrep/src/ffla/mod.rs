//! Exact dense linear algebra over finite fields GF(p^n).

pub mod field;
pub mod fpoly;
pub mod gfp;
pub mod matrix;

pub use field::{Field, Scalar};
pub use fpoly::{min_poly, FPoly};
pub use matrix::{Echelon, Matrix, Rref};
