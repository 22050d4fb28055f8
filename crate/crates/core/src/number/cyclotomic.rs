//! Exact elements of cyclotomic fields Q(ζ_N).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::{table, FieldTable};

/// An exact element of Q(ζ_N), stored as integer coefficients over the power
/// basis 1, ζ_N, …, ζ_N^{φ(N)−1} and one positive common denominator.
///
/// The representation is kept reduced modulo Φ_N with coprime
/// numerator/denominator, so equal values at the same conductor have identical
/// fields. Values at different conductors are compared after embedding into
/// the compositum.
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "ExactRepr", try_from = "ExactRepr")]
pub struct CyclotomicNumber {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicNumber {
    fn field(&self) -> Arc<FieldTable> {
        table(self.conductor)
    }

    /// Builds a normalized value; `num.len()` must equal φ(n).
    fn normalized(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            return CyclotomicNumber {
                conductor: n,
                num,
                den: BigInt::one(),
            };
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
        CyclotomicNumber {
            conductor: n,
            num,
            den,
        }
    }

    /// Σ coeff·ζ_n^exp over arbitrary integer exponents.
    pub fn from_exponents<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        assert!(n >= 1, "conductor must be positive");
        let t = table(n);
        let mut acc = vec![0i64; t.phi];
        for (e, c) in terms {
            if c == 0 {
                continue;
            }
            let row = &t.powers[e.rem_euclid(n as i64) as usize];
            for (a, &r) in acc.iter_mut().zip(row) {
                *a += c * r;
            }
        }
        Self::normalized(n, acc.into_iter().map(BigInt::from).collect(), BigInt::one())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        CyclotomicNumber {
            conductor: 1,
            num: vec![BigInt::from(v)],
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::normalized(1, vec![BigInt::from(p)], BigInt::from(q))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::normalized(1, vec![q.numer().clone()], q.denom().clone())
    }

    /// ζ_N^a with a reduced modulo N.
    pub fn root_of_unity(n: u32, a: i64) -> Self {
        Self::from_exponents(n, [(a, 1)])
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Reduced rational coefficients over the power basis of Q(ζ_conductor).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Image in Q(ζ_n); `n` must be a multiple of the current conductor.
    pub fn embed(&self, n: u32) -> Self {
        if n == self.conductor {
            return self.clone();
        }
        assert!(
            n.is_multiple_of(self.conductor),
            "cannot embed Q(zeta_{}) into Q(zeta_{})",
            self.conductor,
            n
        );
        let step = (n / self.conductor) as usize;
        let t = table(n);
        let mut acc = vec![BigInt::zero(); t.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[(j * step) % n as usize];
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a += c * r;
                }
            }
        }
        Self::normalized(n, acc, self.den.clone())
    }

    fn aligned(a: &Self, b: &Self) -> (u32, Self, Self) {
        if a.conductor == b.conductor {
            return (a.conductor, a.clone(), b.clone());
        }
        let n = a.conductor.lcm(&b.conductor);
        (n, a.embed(n), b.embed(n))
    }

    fn add_impl(&self, other: &Self, sign: i32) -> Self {
        if self.conductor != other.conductor {
            let (_, a, b) = Self::aligned(self, other);
            return a.add_impl(&b, sign);
        }
        let n = self.conductor;
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| if sign > 0 { x + y } else { x - y })
                .collect();
            return Self::normalized(n, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| {
                let l = x * &other.den;
                let r = y * &self.den;
                if sign > 0 {
                    l + r
                } else {
                    l - r
                }
            })
            .collect();
        Self::normalized(n, num, &self.den * &other.den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.conductor != other.conductor {
            if self.conductor == 1 {
                return other.scale(&self.num[0], &self.den);
            }
            if other.conductor == 1 {
                return self.scale(&other.num[0], &other.den);
            }
            let (_, a, b) = Self::aligned(self, other);
            return a.mul_impl(&b);
        }
        let t = self.field();
        let phi = t.phi;
        let n = t.n as usize;
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut acc: Vec<BigInt> = conv.drain(..phi).collect();
        for (off, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[(phi + off) % n];
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a += &c * r;
                }
            }
        }
        Self::normalized(self.conductor, acc, &self.den * &other.den)
    }

    fn scale(&self, p: &BigInt, q: &BigInt) -> Self {
        let num = self.num.iter().map(|c| c * p).collect();
        Self::normalized(self.conductor, num, &self.den * q)
    }

    /// Multiplies by the integer `c`.
    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c), &BigInt::one())
    }

    /// Galois automorphism ζ_N ↦ ζ_N^t; `t` must be a unit modulo N.
    pub fn galois(&self, t: i64) -> Self {
        let n = self.conductor as i64;
        assert!(
            t.gcd(&n) == 1,
            "{t} is not a unit modulo {n}"
        );
        let tab = self.field();
        let mut acc = vec![BigInt::zero(); tab.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &tab.powers[(t * j as i64).rem_euclid(n) as usize];
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a += c * r;
                }
            }
        }
        Self::normalized(self.conductor, acc, self.den.clone())
    }

    /// Complex conjugation, ζ_N ↦ ζ_N^{N−1}.
    pub fn conj(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let (_, prod) = self.norm_parts();
        prod
    }

    fn norm_parts(&self) -> (Self, BigRational) {
        let n = self.conductor as i64;
        let mut others = Self::one();
        for t in 2..n.max(2) {
            if t.gcd(&n) == 1 {
                others = others.mul_impl(&self.galois(t));
            }
        }
        let total = self.mul_impl(&others);
        let q = total
            .to_rational()
            .expect("product of all conjugates is rational");
        (others, q)
    }

    pub fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Self::from_rational(&q.recip()));
        }
        let (others, norm) = self.norm_parts();
        let inv = norm.recip();
        Some(others.scale(inv.numer(), inv.denom()))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inverse(&self) -> Self {
        self.try_inverse().expect("inverse of zero")
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Floating-point image under ζ_N ↦ exp(2πi/N).
    pub fn approx_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = if den.is_finite() && c.bits() < 1000 {
                c.to_f64().unwrap() / den
            } else {
                BigRational::new(c.clone(), self.den.clone())
                    .to_f64()
                    .unwrap_or(f64::NAN)
            };
            let th = std::f64::consts::TAU * j as f64 / n;
            z += Complex64::new(v * th.cos(), v * th.sin());
        }
        z
    }

    /// Tr(x)/φ(N); independent of the conductor used to represent x.
    pub fn normalized_trace(&self) -> BigRational {
        let t = self.field();
        let mut acc = BigRational::zero();
        for (j, c) in self.num.iter().enumerate() {
            let (mu, ph) = t.trace_weights[j];
            if mu != 0 && !c.is_zero() {
                acc += BigRational::new(c * mu, BigInt::from(ph));
            }
        }
        acc / BigRational::from_integer(self.den.clone())
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.den == other.den && self.num == other.num;
        }
        let (_, a, b) = Self::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CyclotomicNumber {}

impl Hash for CyclotomicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let tr = self.normalized_trace();
        tr.numer().hash(state);
        tr.denom().hash(state);
    }
}

impl Default for CyclotomicNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, q) in self.coeffs().into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (j, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z{}^{}", self.conductor, j)?,
                (_, false) => write!(f, "{a}*z{}^{}", self.conductor, j)?,
            }
        }
        Ok(())
    }
}

/// Serialized form: conductor, reduced coefficients as rational strings and a
/// floating-point preview that is ignored on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactRepr {
    pub conductor: u32,
    pub coeffs: Vec<String>,
    #[serde(default)]
    pub approx: [f64; 2],
}

impl From<CyclotomicNumber> for ExactRepr {
    fn from(x: CyclotomicNumber) -> Self {
        let z = x.approx_complex();
        ExactRepr {
            conductor: x.conductor,
            coeffs: x.coeffs().iter().map(ToString::to_string).collect(),
            approx: [z.re, z.im],
        }
    }
}

impl TryFrom<ExactRepr> for CyclotomicNumber {
    type Error = String;

    fn try_from(r: ExactRepr) -> Result<Self, Self::Error> {
        if r.conductor == 0 {
            return Err("conductor must be positive".into());
        }
        let phi = table(r.conductor).phi;
        if r.coeffs.len() != phi {
            return Err(format!(
                "expected {phi} coefficients for conductor {}, got {}",
                r.conductor,
                r.coeffs.len()
            ));
        }
        let mut acc = CyclotomicNumber::zero();
        for (j, s) in r.coeffs.iter().enumerate() {
            let q: BigRational = s.parse().map_err(|e| format!("bad coefficient {s:?}: {e}"))?;
            if q.is_zero() {
                continue;
            }
            acc += CyclotomicNumber::root_of_unity(r.conductor, j as i64)
                * CyclotomicNumber::from_rational(&q);
        }
        Ok(acc.embed_to_at_least(r.conductor))
    }
}

impl CyclotomicNumber {
    fn embed_to_at_least(self, n: u32) -> Self {
        if self.conductor == n {
            self
        } else {
            self.embed(n.lcm(&self.conductor))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                let f: fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber = $body;
                f(self, rhs)
            }
        }
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(rhs)
            }
        }
        impl $tr<CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, 1));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, -1));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a.mul_impl(&b.inverse()));

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = self.add_impl(rhs, 1);
    }
}

impl AddAssign for CyclotomicNumber {
    fn add_assign(&mut self, rhs: CyclotomicNumber) {
        *self = self.add_impl(&rhs, 1);
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = self.add_impl(rhs, -1);
    }
}

impl MulAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn mul_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl std::iter::Sum for CyclotomicNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for CyclotomicNumber {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}
