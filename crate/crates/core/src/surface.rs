//! The translation surface M_{k,ℓ} built from 2k regular ℓ-gons: singularity
//! data, the intersection form on the cycles V_i(p), and the Hodge form on the
//! block H_r computed from homology alone.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{KzError, Result};
use crate::number::{root_of_unity, CyclotomicNumber, ExactMatrix};

/// Parameters of M_{k,ℓ}; `varpi` = gcd(2k, ℓ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceParams {
    pub k: u32,
    pub ell: u32,
    pub varpi: u32,
}

impl SurfaceParams {
    pub fn new(k: u32, ell: u32) -> Result<Self> {
        if k == 0 {
            return Err(KzError::InvalidParameter("k must be positive".into()));
        }
        if ell < 3 {
            return Err(KzError::InvalidParameter(format!("ell must be at least 3, got {ell}")));
        }
        Ok(SurfaceParams {
            k,
            ell,
            varpi: (2 * k).gcd(&ell),
        })
    }

    /// d = ℓ − 1, the size of the alphabet A_d.
    pub fn d(&self) -> usize {
        self.ell as usize - 1
    }

    pub fn genus(&self) -> u32 {
        let (k, l, w) = (self.k, self.ell, self.varpi);
        l * k + 1 - k - (l + w) / 2
    }
}

/// A family of equivalent cone points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeClass {
    pub count: u32,
    /// Total angle divided by 2π.
    pub angle_over_2pi: u32,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityProfile {
    pub params: SurfaceParams,
    pub genus: u32,
    pub m_points: ConeClass,
    pub a_points: ConeClass,
    /// One entry per marked point: M-points first, then A-points.
    pub cone_orders: Vec<i64>,
    /// Order of the A-points as written in the usual stratum label k(ℓ−2−ϖ)/ϖ.
    pub label_a_order: i64,
    /// True when the label order disagrees with the cone-angle order.
    pub label_discrepancy: bool,
}

impl SingularityProfile {
    pub fn order_sum(&self) -> i64 {
        self.cone_orders.iter().sum()
    }

    pub fn gauss_bonnet_holds(&self) -> bool {
        self.order_sum() == 2 * self.genus as i64 - 2
    }

    /// 2kℓ − (2k−1) = 2g + (#Σ − 1).
    pub fn relative_dimension_holds(&self) -> bool {
        let (k, l) = (self.params.k as i64, self.params.ell as i64);
        let sigma = (self.m_points.count + self.a_points.count) as i64;
        2 * k * l - (2 * k - 1) == 2 * self.genus as i64 + sigma - 1
    }

    /// Orders of the stratum label, in the same layout as `cone_orders`.
    pub fn label_orders(&self) -> Vec<i64> {
        let mut v = vec![self.params.k as i64 - 1; self.m_points.count as usize];
        v.extend(std::iter::repeat_n(self.label_a_order, self.a_points.count as usize));
        v
    }
}

pub fn singularity_profile(params: SurfaceParams) -> SingularityProfile {
    let (k, l, w) = (params.k, params.ell, params.varpi);
    let m_points = ConeClass {
        count: l,
        angle_over_2pi: k,
        order: k as i64 - 1,
    };
    let a_angle = k * (l - 2) / w;
    let a_points = ConeClass {
        count: w,
        angle_over_2pi: a_angle,
        order: a_angle as i64 - 1,
    };
    let mut cone_orders = vec![m_points.order; l as usize];
    cone_orders.extend(std::iter::repeat_n(a_points.order, w as usize));
    let label_a_order = (k as i64) * (l as i64 - 2 - w as i64) / w as i64;
    SingularityProfile {
        params,
        genus: params.genus(),
        label_discrepancy: label_a_order != a_points.order,
        m_points,
        a_points,
        cone_orders,
        label_a_order,
    }
}

/// Coefficients (a_i)_{i ∈ Z_2k} of the class Σ a_i V_i(p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCoefficients {
    pub p: i64,
    pub coeffs: Vec<CyclotomicNumber>,
}

impl CycleCoefficients {
    pub fn new(p: i64, coeffs: Vec<CyclotomicNumber>) -> Self {
        CycleCoefficients { p, coeffs }
    }

    pub fn from_ints(p: i64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| CyclotomicNumber::from_integer(c)).collect())
    }

    fn check_absolute(&self) -> Result<()> {
        let s: CyclotomicNumber = self.coeffs.iter().cloned().sum();
        if s.is_zero() {
            Ok(())
        } else {
            Err(KzError::NonAbsoluteCycle(s.to_string()))
        }
    }

    /// Coefficients of 1_{2k}·v, using 1_{2k}·V_i = V_{i+1}.
    pub fn shifted(&self) -> Self {
        let n = self.coeffs.len();
        Self::new(self.p, (0..n).map(|i| self.coeffs[(i + n - 1) % n].clone()).collect())
    }
}

/// ω(Σ a_i V_i(a.p), Σ b_i V_i(b.p)) for absolute classes.
pub fn intersection_pairing(
    a: &CycleCoefficients,
    b: &CycleCoefficients,
    params: SurfaceParams,
) -> Result<CyclotomicNumber> {
    let n = 2 * params.k as usize;
    if a.coeffs.len() != n || b.coeffs.len() != n {
        return Err(KzError::InvalidParameter(format!(
            "cycle coefficient vectors must have length 2k = {n}"
        )));
    }
    a.check_absolute()?;
    b.check_absolute()?;
    Ok(pairing_unchecked(a, b))
}

fn pairing_unchecked(a: &CycleCoefficients, b: &CycleCoefficients) -> CyclotomicNumber {
    if a.p < b.p {
        return -pairing_unchecked(b, a);
    }
    // Σ_{1≤i≤i'<2k} a_i b_i' as Σ_i' b_i' · (a_1 + … + a_i')
    let upper = |x: &[CyclotomicNumber], y: &[CyclotomicNumber]| {
        let mut prefix = CyclotomicNumber::zero();
        let mut acc = CyclotomicNumber::zero();
        for i in 1..x.len() {
            prefix += &x[i];
            if !y[i].is_zero() {
                acc += &prefix * &y[i];
            }
        }
        acc
    };
    if a.p == b.p {
        upper(&a.coeffs, &b.coeffs) - upper(&b.coeffs, &a.coeffs)
    } else {
        upper(&a.coeffs, &b.coeffs)
    }
}

/// Index of p ∈ A_d = {1−d, 3−d, …, d−1} in the ascending basis.
pub fn letter_index(d: usize, p: i64) -> Result<usize> {
    let shifted = p + d as i64 - 1;
    if shifted < 0 || shifted % 2 != 0 || shifted > 2 * (d as i64 - 1) {
        return Err(KzError::InvalidIndex { index: p, d });
    }
    Ok((shifted / 2) as usize)
}

/// The letters of A_d in ascending order.
pub fn alphabet(d: usize) -> Vec<i64> {
    (0..d).map(|i| 2 * i as i64 + 1 - d as i64).collect()
}

/// x_i = cos(2π r i / 2k) as exact elements (ρ^i + ρ^{−i})/2.
fn cos_coefficients(k: u32, r: u32) -> Vec<CyclotomicNumber> {
    let half = CyclotomicNumber::from_ratio(1, 2);
    (0..2 * k as i64)
        .map(|i| {
            (root_of_unity(2 * k, r as i64 * i) + root_of_unity(2 * k, -(r as i64) * i)) * &half
        })
        .collect()
}

/// The Hodge form of H_r written in the basis Z(p) = V_cos(p, r), p ∈ A_d.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HodgeGram {
    pub params: SurfaceParams,
    pub r: u32,
    /// ⟨Z(p), Z(p')⟩ before rescaling; row/column order is ascending in p.
    pub raw: ExactMatrix,
    /// ω(1_{2k}Z(p), Z(p')).
    pub omega_shift: ExactMatrix,
    /// ω(Z(p), Z(p')).
    pub omega: ExactMatrix,
    /// The common diagonal value −k(1+cos πr/k)/sin(πr/k).
    pub diagonal: CyclotomicNumber,
    /// `raw` divided by `diagonal`: unit diagonal.
    pub rescaled: ExactMatrix,
}

/// Computes the Hodge form on H_r from the intersection form alone.
///
/// With θ = πr/k the complex structure is 1_{2k} = e^{iθ}, and the form linear
/// in its first argument with imaginary part ω is
/// ⟨v, w⟩ = (ω(1_{2k}v, w) − cos θ·ω(v, w))/sin θ + i·ω(v, w).
/// Its real part is the symmetrization (ω(1v, w) + ω(1w, v))/(2 sin θ).
pub fn hodge_gram(params: SurfaceParams, r: u32) -> Result<HodgeGram> {
    let k = params.k;
    if r == 0 || r.is_multiple_of(k) {
        return Err(KzError::DegenerateAngle {
            r: r as i64,
            k: k as i64,
        });
    }
    let d = params.d();
    let letters = alphabet(d);
    let x = cos_coefficients(k, r);
    let rho = root_of_unity(2 * k, r as i64);
    let i_unit = root_of_unity(4, 1);
    let cos = (&rho + &rho.conj()) * CyclotomicNumber::from_ratio(1, 2);
    let sin = (&rho - &rho.conj()) * (&i_unit * CyclotomicNumber::from_integer(2)).inverse();
    let sin_inv = sin.inverse();

    let z = |p: i64| CycleCoefficients::new(p, x.clone());
    let mut omega = ExactMatrix::zeros(d, d);
    let mut omega_shift = ExactMatrix::zeros(d, d);
    for (a, &p) in letters.iter().enumerate() {
        for (b, &q) in letters.iter().enumerate() {
            omega.set(a, b, intersection_pairing(&z(p), &z(q), params)?);
            omega_shift.set(a, b, intersection_pairing(&z(p).shifted(), &z(q), params)?);
        }
    }
    let raw = ExactMatrix::from_fn(d, d, |a, b| {
        let w = omega.get(a, b);
        (omega_shift.get(a, b) - &(&cos * w)) * &sin_inv + &i_unit * w
    });
    let diagonal = raw.get(0, 0).clone();
    let dinv = diagonal.inverse();
    let rescaled = raw.scale(&dinv);
    Ok(HodgeGram {
        params,
        r,
        raw,
        omega_shift,
        omega,
        diagonal,
        rescaled,
    })
}

/// The action of the loop operator L_p^t or L_p^b on H_r written in the
/// complex coordinates of the basis Z(p), ascending in p.
pub fn homology_operator(d: usize, k: u32, r: u32, p: i64, top: bool) -> Result<ExactMatrix> {
    let col = letter_index(d, p)?;
    let rho = root_of_unity(2 * k, r as i64);
    let rho_inv = rho.inverse();
    let one = CyclotomicNumber::one();
    let mut m = ExactMatrix::identity(d);
    for (b, &q) in alphabet(d).iter().enumerate() {
        // image of Z(q) is Z(q) + c·Z(p), except Z(p) ↦ c·Z(p)
        let c = match (top, q.cmp(&p)) {
            (true, std::cmp::Ordering::Less) => -&one,
            (true, _) => -&rho_inv,
            (false, std::cmp::Ordering::Greater) => -&one,
            (false, _) => -&rho,
        };
        m.set(col, b, c);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn f(x: &CyclotomicNumber) -> Complex64 {
        x.approx_complex()
    }

    #[test]
    fn profiles_match_closed_forms() {
        let p = singularity_profile(SurfaceParams::new(1, 5).unwrap());
        assert_eq!(p.genus, 2);
        assert_eq!((p.m_points.count, p.m_points.angle_over_2pi), (5, 1));
        assert_eq!((p.a_points.count, p.a_points.angle_over_2pi), (1, 3));
        assert!(p.gauss_bonnet_holds());
        assert!(!p.label_discrepancy);

        assert_eq!(singularity_profile(SurfaceParams::new(1, 3).unwrap()).genus, 1);

        let p = singularity_profile(SurfaceParams::new(2, 4).unwrap());
        assert_eq!(p.params.varpi, 4);
        assert_eq!(p.genus, 3);
        assert_eq!((p.m_points.count, p.m_points.angle_over_2pi), (4, 2));
        assert_eq!((p.a_points.count, p.a_points.angle_over_2pi, p.a_points.order), (4, 1, 0));
        assert_eq!(p.order_sum(), 4);
        assert!(p.label_discrepancy);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SurfaceParams::new(0, 5).is_err());
        assert!(SurfaceParams::new(2, 2).is_err());
    }

    #[test]
    fn pairing_examples() {
        let s1 = SurfaceParams::new(1, 5).unwrap();
        let a = CycleCoefficients::from_ints(1, &[1, -1]);
        assert!(intersection_pairing(&a, &a, s1).unwrap().is_zero());
        let b = CycleCoefficients::from_ints(-1, &[1, -1]);
        assert!(intersection_pairing(&a, &b, s1).unwrap().is_one());
        assert_eq!(intersection_pairing(&b, &a, s1).unwrap(), CyclotomicNumber::from_integer(-1));

        let s2 = SurfaceParams::new(2, 5).unwrap();
        let a = CycleCoefficients::from_ints(0, &[1, -1, 0, 0]);
        let b = CycleCoefficients::from_ints(0, &[0, 1, -1, 0]);
        assert!(intersection_pairing(&a, &b, s2).unwrap().is_one());

        let bad = CycleCoefficients::from_ints(0, &[1, 0, 0, 0]);
        assert!(matches!(
            intersection_pairing(&bad, &b, s2),
            Err(KzError::NonAbsoluteCycle(_))
        ));
    }

    #[test]
    fn hodge_values_k2() {
        let h = hodge_gram(SurfaceParams::new(2, 4).unwrap(), 1).unwrap();
        assert_eq!(h.diagonal, CyclotomicNumber::from_integer(-2));
        // p = 1 > p' = -1: rows/cols ascending, so (2, 1)
        let off = f(h.raw.get(2, 1));
        assert!((off.im - 1.0).abs() < 1e-12);
        assert!((off.re + 1.0).abs() < 1e-12);
        let half_one_minus_i = CyclotomicNumber::from_ratio(1, 2) - root_of_unity(4, 1) * CyclotomicNumber::from_ratio(1, 2);
        assert_eq!(h.rescaled.get(2, 1), &half_one_minus_i);
        assert_eq!(h.rescaled.get(1, 2), &half_one_minus_i.conj());
    }

    #[test]
    fn hodge_closed_forms_sweep() {
        for k in 2..=5u32 {
            for r in 1..k {
                let params = SurfaceParams::new(k, 5).unwrap();
                let h = hodge_gram(params, r).unwrap();
                let th = std::f64::consts::PI * r as f64 / k as f64;
                let diag = -(k as f64) * (1.0 + th.cos()) / th.sin();
                let half_tan = (th / 2.0).tan();
                for a in 0..4 {
                    assert!((f(h.raw.get(a, a)) - Complex64::new(diag, 0.0)).norm() < 1e-10);
                    for b in 0..a {
                        let z = f(h.raw.get(a, b));
                        assert!((z.re - diag / 2.0).abs() < 1e-10);
                        assert!((z.im - k as f64 / 2.0).abs() < 1e-10);
                        let w = f(h.rescaled.get(a, b));
                        assert!((w - Complex64::new(0.5, -0.5 * half_tan)).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn dropping_the_cosine_term_breaks_the_real_part() {
        let h = hodge_gram(SurfaceParams::new(3, 4).unwrap(), 1).unwrap();
        let th = std::f64::consts::PI / 3.0;
        let naive = f(h.omega_shift.get(1, 0)).re / th.sin();
        let expected = -1.5 * (1.0 + th.cos()) / th.sin();
        assert!((naive - expected).abs() > 0.5);
        assert!((f(h.raw.get(1, 0)).re - expected).abs() < 1e-12);
    }

    #[test]
    fn degenerate_angle() {
        let params = SurfaceParams::new(3, 5).unwrap();
        assert!(matches!(hodge_gram(params, 3), Err(KzError::DegenerateAngle { .. })));
        assert!(matches!(hodge_gram(params, 0), Err(KzError::DegenerateAngle { .. })));
    }

    #[test]
    fn homology_operators_preserve_hodge_form() {
        for (k, r, ell) in [(2u32, 1u32, 4u32), (3, 1, 5), (3, 2, 6), (5, 2, 4)] {
            let params = SurfaceParams::new(k, ell).unwrap();
            let g = hodge_gram(params, r).unwrap().rescaled;
            for &p in &alphabet(params.d()) {
                for top in [true, false] {
                    let t = homology_operator(params.d(), k, r, p, top).unwrap();
                    // ⟨Tv, Tw⟩ with the form linear in the first slot
                    let lhs = &(&t.transpose() * &g) * &t.conj();
                    assert_eq!(lhs, g, "k={k} r={r} p={p} top={top}");
                }
                let t = homology_operator(params.d(), k, r, p, true).unwrap();
                let b = homology_operator(params.d(), k, r, p, false).unwrap();
                assert!((&t * &b).is_identity());
            }
        }
    }
}
