//! Exact arithmetic in cyclotomic fields and the α bookkeeping.

mod alpha;
mod cyclotomic;
mod field;
mod matrix;
mod root_sum;

pub use alpha::{alpha_grid, AlphaParam};
pub use cyclotomic::{CyclotomicNumber, ExactRepr};
pub use field::{euler_phi, moebius};
pub use matrix::{poly_from_roots, ExactMatrix};
pub use root_sum::RootSum;

/// ζ_N^a.
pub fn root_of_unity(n: u32, a: i64) -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(n, a)
}

/// Floating-point image of an exact value.
pub fn approx_complex(x: &CyclotomicNumber) -> num_complex::Complex64 {
    x.approx_complex()
}
