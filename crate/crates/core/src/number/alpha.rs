//! The rotation parameter α ∈ (0, ½) together with ρ = exp(2πiα) and ζ = ρ^{−1}.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CyclotomicNumber;
use crate::error::KzError;

/// A rational α = a/b in lowest terms with 0 < α < ½.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlphaParam {
    num: u32,
    den: u32,
}

impl AlphaParam {
    pub fn new(num: i64, den: i64) -> Result<Self, KzError> {
        if den == 0 {
            return Err(KzError::InvalidParameter("alpha has zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut a, mut b) = (num / g, den / g);
        if b < 0 {
            a = -a;
            b = -b;
        }
        if a <= 0 || 2 * a >= b {
            return Err(KzError::InvalidParameter(format!(
                "alpha = {num}/{den} is not in the open interval (0, 1/2)"
            )));
        }
        if b > u32::MAX as i64 {
            return Err(KzError::InvalidParameter("alpha denominator too large".into()));
        }
        Ok(AlphaParam {
            num: a as u32,
            den: b as u32,
        })
    }

    /// α = r/2k.
    pub fn from_rk(r: i64, k: i64) -> Result<Self, KzError> {
        Self::new(r, 2 * k)
    }

    pub fn numer(&self) -> u32 {
        self.num
    }

    pub fn denom(&self) -> u32 {
        self.den
    }

    /// (r, k) with α = r/2k and k minimal.
    pub fn rk(&self) -> (u32, u32) {
        if self.den.is_multiple_of(2) {
            (self.num, self.den / 2)
        } else {
            (2 * self.num, self.den)
        }
    }

    /// Smallest N with ρ ∈ Q(ζ_N); ρ = ζ_N^a.
    pub fn conductor(&self) -> u32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn rho(&self) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(self.den, self.num as i64)
    }

    pub fn zeta(&self) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(self.den, -(self.num as i64))
    }

    /// Whether m·α is an integer.
    pub fn times_is_integer(&self, m: i64) -> bool {
        (m * self.num as i64) % self.den as i64 == 0
    }

    pub fn equals(&self, num: u32, den: u32) -> bool {
        self.num as u64 * den as u64 == self.den as u64 * num as u64
    }

    /// α ∈ {1/6, 1/4}.
    pub fn is_finite_exceptional(&self) -> bool {
        self.equals(1, 6) || self.equals(1, 4)
    }

    pub fn tan_pi(&self) -> f64 {
        (std::f64::consts::PI * self.value()).tan()
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for AlphaParam {
    type Err = KzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KzError::InvalidParameter(format!("alpha must be a fraction a/b, got {s:?}"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        Self::new(a, b)
    }
}

impl TryFrom<String> for AlphaParam {
    type Error = KzError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<AlphaParam> for String {
    fn from(a: AlphaParam) -> String {
        a.to_string()
    }
}

/// Every reduced α = r/2k with 0 < r < k ≤ `kmax`, sorted and deduplicated.
pub fn alpha_grid(kmax: u32) -> Vec<AlphaParam> {
    let mut out: Vec<AlphaParam> = (2..=kmax as i64)
        .flat_map(|k| (1..k).map(move |r| AlphaParam::from_rk(r, k).unwrap()))
        .collect();
    out.sort_by(|x, y| (x.num as u64 * y.den as u64).cmp(&(y.num as u64 * x.den as u64)));
    out.dedup();
    out
}
