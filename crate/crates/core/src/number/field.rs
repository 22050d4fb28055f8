//! Per-conductor lookup tables: cyclotomic polynomials and reduced powers of ζ_N.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

/// Reduction data for Q(ζ_N).
#[derive(Debug)]
pub(crate) struct FieldTable {
    pub n: u32,
    pub phi: usize,
    /// `powers[e]` is ζ_N^e written in the power basis 1, ζ, …, ζ^{φ−1}.
    pub powers: Vec<Vec<i64>>,
    /// Möbius value and Euler φ of N/gcd(e, N), used for the normalized trace.
    pub trace_weights: Vec<(i64, i64)>,
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Coefficients (constant term first) of the N-th cyclotomic polynomial.
pub(crate) fn cyclotomic_poly(n: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

pub(crate) fn table(n: u32) -> Arc<FieldTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&n) {
        return Arc::clone(t);
    }
    let t = Arc::new(build_table(n));
    tables.lock().unwrap().insert(n, Arc::clone(&t));
    t
}

fn build_table(n: u32) -> FieldTable {
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x, then eliminate the degree-φ term with the monic Φ_N
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..phi {
                cur[j] -= top * poly[j];
            }
        }
    }
    let trace_weights = (0..n as u64)
        .map(|e| {
            let m = n as u64 / e.gcd(&(n as u64));
            (moebius(m), euler_phi(m) as i64)
        })
        .collect();
    FieldTable {
        n,
        phi,
        powers,
        trace_weights,
    }
}
