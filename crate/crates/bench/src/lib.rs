//! Fixtures shared by the criterion benchmarks under `benches/`.

use kzcocycle_core::number::root_of_unity;
use kzcocycle_core::{AlphaParam, CyclotomicNumber, ExactMatrix, GeneratorSet};

pub fn alpha(n: i64, d: i64) -> AlphaParam {
    AlphaParam::new(n, d).expect("valid α")
}

/// A nonzero element of Q(ζ_n) with small integer coefficients.
pub fn dense_cyclotomic(n: u32, seed: i64) -> CyclotomicNumber {
    let x: CyclotomicNumber = (0..n as i64)
        .map(|e| root_of_unity(n, e).scale_int((e * 7 + seed) % 5 - 2))
        .sum();
    if x.is_zero() {
        CyclotomicNumber::one() + root_of_unity(n, 1).scale_int(seed)
    } else {
        x
    }
}

/// The product of all top generators, a dense exact matrix.
pub fn dense_product(d: usize, a: AlphaParam) -> ExactMatrix {
    let set = GeneratorSet::new(d, a).expect("d ≥ 2");
    let mut m = ExactMatrix::identity(d);
    for g in &set.top {
        m = &m * g;
    }
    m
}
