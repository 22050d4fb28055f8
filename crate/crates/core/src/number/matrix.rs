//! Dense matrices over cyclotomic fields.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CyclotomicNumber;

/// Row-major exact matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CyclotomicNumber>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![CyclotomicNumber::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| CyclotomicNumber::from_integer((i == j) as i64))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CyclotomicNumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<CyclotomicNumber>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Column matrix from a vector.
    pub fn column(v: &[CyclotomicNumber]) -> Self {
        ExactMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<CyclotomicNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<CyclotomicNumber> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(CyclotomicNumber::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        self.map(|x| x * c)
    }

    pub fn apply(&self, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = CyclotomicNumber::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += a * vj;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CyclotomicNumber::is_zero)
    }

    pub fn trace(&self) -> CyclotomicNumber {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> CyclotomicNumber {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = CyclotomicNumber::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return CyclotomicNumber::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            let inv = piv.inverse();
            for r in c + 1..n {
                let f = a.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a.get(r, j) - &(&f * a.get(c, j));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = a.get(c, c).inverse();
            for j in 0..n {
                let v = a.get(c, j) * &pinv;
                a.set(c, j, v);
                let w = inv.get(c, j) * &pinv;
                inv.set(c, j, w);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &(&f * a.get(c, j));
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &(&f * inv.get(c, j));
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a.get(r, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let pinv = a.get(row, c).inverse();
            for j in c..self.cols {
                let v = a.get(row, j) * &pinv;
                a.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = a.get(r, j) - &(&f * a.get(row, j));
                    a.set(r, j, v);
                }
            }
            pivots.push(c);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {v : A v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<CyclotomicNumber>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CyclotomicNumber::zero(); self.cols];
                v[f] = CyclotomicNumber::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Coefficients of det(xI − A), constant term first (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<CyclotomicNumber> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![CyclotomicNumber::zero(); n + 1];
        c[n] = CyclotomicNumber::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                let v = next.get(i, i) + &c[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            let t = (self * &m).trace();
            c[n - k] = -(t * CyclotomicNumber::from_ratio(1, k as i64));
        }
        c
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).approx_complex())
    }

    /// Coefficient-level key with every entry embedded in Q(ζ_n); equal
    /// matrices give equal keys for a fixed `n`.
    pub fn key_in(&self, n: u32) -> Vec<BigInt> {
        let mut out = Vec::new();
        for x in &self.data {
            let y = x.embed(n);
            for q in y.coeffs() {
                out.push(q.numer().clone());
                out.push(q.denom().clone());
            }
        }
        out
    }

    /// Smallest common conductor of the entries.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.data.iter().fold(1u32, |a, x| a.lcm(&x.conductor()))
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }
}

impl Mul for ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: ExactMatrix) -> ExactMatrix {
        &self * &rhs
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

/// Coefficients of Π (x − r_i), constant term first.
pub fn poly_from_roots(roots: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
    let mut p = vec![CyclotomicNumber::one()];
    for r in roots {
        let mut next = vec![CyclotomicNumber::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(c * r);
        }
        p = next;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(v)
    }

    #[test]
    fn det_inverse_rank() {
        let i4 = CyclotomicNumber::root_of_unity(4, 1);
        let a = ExactMatrix::from_rows(vec![vec![q(1), i4.clone()], vec![i4.clone(), q(2)]]);
        // det = 2 - i² = 3
        assert_eq!(a.det(), q(3));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        let sing = ExactMatrix::from_rows(vec![vec![q(1), i4.clone()], vec![-&i4, q(1)]]);
        assert!(sing.det().is_zero());
        assert_eq!(sing.rank(), 1);
        let ns = sing.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(sing.apply(&ns[0]).iter().all(CyclotomicNumber::is_zero));
    }

    #[test]
    fn char_poly_of_companion() {
        // companion matrix of x^3 - 2x + 5
        let a = ExactMatrix::from_rows(vec![
            vec![q(0), q(0), q(-5)],
            vec![q(1), q(0), q(2)],
            vec![q(0), q(1), q(0)],
        ]);
        assert_eq!(a.char_poly(), vec![q(5), q(-2), q(0), q(1)]);
    }

    #[test]
    fn poly_roots() {
        let p = poly_from_roots(&[q(1), q(-2)]);
        assert_eq!(p, vec![q(-2), q(1), q(1)]);
    }
}
