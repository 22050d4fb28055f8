//! Integer combinations of N-th roots of unity kept unreduced, i.e. elements of
//! the group ring Z[C_N]. Cheap to add and multiply; reduced only to test values.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::cyclotomic::CyclotomicNumber;
use super::field::table;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    n: u32,
    coeffs: Vec<i64>,
}

impl RootSum {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 1);
        RootSum {
            n,
            coeffs: vec![0; n as usize],
        }
    }

    pub fn constant(n: u32, c: i64) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// c·ζ_n^e.
    pub fn monomial(n: u32, e: i64, c: i64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(e, c);
        s
    }

    /// ζ_n^e + ζ_n^{−e}, i.e. 2cos(2πe/n).
    pub fn two_cos(n: u32, e: i64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(e, 1);
        s.add_term(-e, 1);
        s
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn add_term(&mut self, e: i64, c: i64) {
        let i = e.rem_euclid(self.n as i64) as usize;
        self.coeffs[i] += c;
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs[e.rem_euclid(self.n as i64) as usize]
    }

    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut out = Self::zero(self.n);
        for (e, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(n - e) % n] = c;
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        RootSum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Coefficients over the power basis of Q(ζ_n) after reduction modulo Φ_n.
    pub fn reduced(&self) -> Vec<i64> {
        let t = table(self.n);
        let mut acc = vec![0i64; t.phi];
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                for (a, &r) in acc.iter_mut().zip(&t.powers[e]) {
                    *a += c * r;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r[1..].iter().all(|&c| c == 0) {
            Some(r[0])
        } else {
            None
        }
    }

    pub fn to_cyclotomic(&self) -> CyclotomicNumber {
        let r = self.reduced();
        CyclotomicNumber::from_exponents(self.n, r.into_iter().enumerate().map(|(j, c)| (j as i64, c)))
    }

    pub fn approx(&self) -> f64 {
        // the real part; callers use this for real-valued characters
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(e, &c)| c as f64 * (std::f64::consts::TAU * e as f64 / n).cos())
            .sum()
    }
}

impl Add<&RootSum> for &RootSum {
    type Output = RootSum;
    fn add(self, rhs: &RootSum) -> RootSum {
        assert_eq!(self.n, rhs.n);
        RootSum {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&RootSum> for &RootSum {
    type Output = RootSum;
    fn sub(self, rhs: &RootSum) -> RootSum {
        assert_eq!(self.n, rhs.n);
        RootSum {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&RootSum> for RootSum {
    fn add_assign(&mut self, rhs: &RootSum) {
        assert_eq!(self.n, rhs.n);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Mul<&RootSum> for &RootSum {
    type Output = RootSum;
    fn mul(self, rhs: &RootSum) -> RootSum {
        assert_eq!(self.n, rhs.n);
        let n = self.n as usize;
        let mut out = RootSum::zero(self.n);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0 {
                    out.coeffs[(i + j) % n] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &RootSum {
    type Output = RootSum;
    fn neg(self) -> RootSum {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..40 {
            let mut s = RootSum::zero(n);
            for e in 0..n as i64 {
                s.add_term(e, 1);
            }
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn two_cos_values() {
        // 2cos(2π/6) = 1
        assert_eq!(RootSum::two_cos(6, 1).to_integer(), Some(1));
        // 2cos(2π/5) is irrational
        assert_eq!(RootSum::two_cos(5, 1).to_integer(), None);
        // x = 2cos(2π/5) satisfies x² + x − 1 = 0
        let x = RootSum::two_cos(5, 1);
        let lhs = &(&(&x * &x) + &x) - &RootSum::constant(5, 1);
        assert!(lhs.is_zero());
    }

    #[test]
    fn agrees_with_cyclotomic() {
        let x = &RootSum::monomial(12, 5, 3) + &RootSum::monomial(12, 2, -1);
        let y = CyclotomicNumber::root_of_unity(12, 5).scale_int(3) - CyclotomicNumber::root_of_unity(12, 2);
        assert_eq!(x.to_cyclotomic(), y);
        assert_eq!(x.conj().to_cyclotomic(), y.conj());
    }
}
