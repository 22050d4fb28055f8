//! The operators L_p^t, L_p^b on C^{A_d}, the invariant hermitian form Q_α,
//! its diagonalization, and the explicit computations in dimension 2.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KzError, Result};
use crate::number::{root_of_unity, AlphaParam, CyclotomicNumber, ExactMatrix};
use crate::rauzy::ArrowType;
use crate::surface::{alphabet, hodge_gram, letter_index, SurfaceParams};

type Cyc = CyclotomicNumber;

/// L_p^t (or its inverse L_p^b) in the ascending basis (e_{1−d}, …, e_{d−1}).
///
/// Top: e_q ↦ e_q − e_p (q > p), e_q − ζe_p (q < p), −ζe_p (q = p).
/// Bottom: the same with ζ replaced by ρ and the order on A_d reversed.
pub fn build_generator(d: usize, alpha: AlphaParam, p: i64, kind: ArrowType) -> Result<ExactMatrix> {
    let row = letter_index(d, p)?;
    let (far, near) = match kind {
        ArrowType::Top => (alpha.zeta(), std::cmp::Ordering::Less),
        ArrowType::Bottom => (alpha.rho(), std::cmp::Ordering::Greater),
    };
    let minus_far = -&far;
    let minus_one = Cyc::from_integer(-1);
    let mut m = ExactMatrix::identity(d);
    for (col, &q) in alphabet(d).iter().enumerate() {
        let c = if q == p || q.cmp(&p) == near {
            &minus_far
        } else {
            &minus_one
        };
        m.set(row, col, c.clone());
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub d: usize,
    pub alpha: AlphaParam,
    /// L_p^t for p ascending.
    pub top: Vec<ExactMatrix>,
    /// L_p^b for p ascending.
    pub bottom: Vec<ExactMatrix>,
}

impl GeneratorSet {
    pub fn new(d: usize, alpha: AlphaParam) -> Result<Self> {
        if d < 2 {
            return Err(KzError::InvalidParameter(format!("need d ≥ 2, got {d}")));
        }
        let letters = alphabet(d);
        let top = letters
            .iter()
            .map(|&p| build_generator(d, alpha, p, ArrowType::Top))
            .collect::<Result<_>>()?;
        let bottom = letters
            .iter()
            .map(|&p| build_generator(d, alpha, p, ArrowType::Bottom))
            .collect::<Result<_>>()?;
        Ok(GeneratorSet { d, alpha, top, bottom })
    }

    pub fn letters(&self) -> Vec<i64> {
        alphabet(self.d)
    }

    pub fn get(&self, p: i64, kind: ArrowType) -> Result<&ExactMatrix> {
        let i = letter_index(self.d, p)?;
        Ok(match kind {
            ArrowType::Top => &self.top[i],
            ArrowType::Bottom => &self.bottom[i],
        })
    }

    /// All 2d generators as (p, kind, matrix).
    pub fn all(&self) -> Vec<(i64, ArrowType, &ExactMatrix)> {
        let letters = self.letters();
        let mut out = Vec::with_capacity(2 * self.d);
        for (i, &p) in letters.iter().enumerate() {
            out.push((p, ArrowType::Top, &self.top[i]));
            out.push((p, ArrowType::Bottom, &self.bottom[i]));
        }
        out
    }

    pub fn to_complex(&self) -> Vec<DMatrix<Complex64>> {
        self.all().into_iter().map(|(_, _, m)| m.to_complex()).collect()
    }
}

/// Q_α written as a matrix G with Q(v, w) = vᴴ G w.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HermitianGram {
    pub dim: usize,
    pub alpha: AlphaParam,
    pub entries: ExactMatrix,
}

/// Unit diagonal; (1+ζ)^{−1} = ½(1 + i tan πα) at (p', p) for p' < p, and its
/// conjugate in the other triangle. With the form antilinear in the first
/// argument this is the placement that makes every L_p an isometry.
pub fn build_form(d: usize, alpha: AlphaParam) -> HermitianGram {
    let c = (Cyc::one() + alpha.zeta()).inverse();
    let cbar = c.conj();
    let entries = ExactMatrix::from_fn(d, d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Cyc::one(),
        std::cmp::Ordering::Less => c.clone(),
        std::cmp::Ordering::Greater => cbar.clone(),
    });
    HermitianGram { dim: d, alpha, entries }
}

impl HermitianGram {
    pub fn is_hermitian(&self) -> bool {
        self.entries.adjoint() == self.entries
    }

    /// Whether Mᴴ G M = G exactly.
    pub fn preserved_by(&self, m: &ExactMatrix) -> bool {
        &(&m.adjoint() * &self.entries) * m == self.entries
    }

    pub fn eval(&self, v: &[Cyc], w: &[Cyc]) -> Cyc {
        let gw = self.entries.apply(w);
        v.iter().zip(&gw).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        self.entries.to_complex()
    }

    /// Eigenvalues of G in ascending order (floating point).
    pub fn numeric_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_complex().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Form rescaled from the homology of M_{k,ℓ} on H_r compared with Q_{r/2k}.
pub fn hodge_matches_form(k: u32, ell: u32, r: u32) -> Result<bool> {
    let params = SurfaceParams::new(k, ell)?;
    let hodge = hodge_gram(params, r)?;
    let alpha = AlphaParam::from_rk(r as i64, k as i64)?;
    Ok(hodge.rescaled == build_form(params.d(), alpha).entries)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub n_minus: usize,
    pub n_plus: usize,
    pub n_zero: usize,
}

/// (⌈ℓα − 1⌉, ⌈ℓ(1−α) − 1⌉, 0) when ℓα ∉ Z; otherwise the degenerate count
/// with a one-dimensional kernel.
pub fn predicted_signature(d: usize, alpha: AlphaParam) -> Signature {
    let ell = d as u64 + 1;
    let (a, b) = (alpha.numer() as u64, alpha.denom() as u64);
    let ceil = |num: u64| num.div_ceil(b);
    if (ell * a).is_multiple_of(b) {
        let m = (ell * a / b) as usize;
        Signature {
            n_minus: m - 1,
            n_plus: d - m,
            n_zero: 1,
        }
    } else {
        Signature {
            n_minus: ceil(ell * a) as usize - 1,
            n_plus: ceil(ell * (b - a)) as usize - 1,
            n_zero: 0,
        }
    }
}

/// The vectors w_s = (ξ^{s·m})_{m = 0..d−1}, ξ = exp(2πi/ℓ), s = 1..d, which
/// are pairwise Q_α-orthogonal.
pub fn diagonal_basis(d: usize) -> Vec<Vec<Cyc>> {
    let ell = d as u32 + 1;
    (1..=d as i64)
        .map(|s| (0..d as i64).map(|m| root_of_unity(ell, s * m)).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormDiagonalization {
    pub d: usize,
    pub alpha: AlphaParam,
    /// Q_α(w_s) for s = 1..d, exact.
    pub values: Vec<Cyc>,
    /// (ℓ/2)(1 − tan πα · cot πs/ℓ) for s = 1..d.
    pub closed_form: Vec<f64>,
    pub signature: Signature,
    pub kernel: Vec<Vec<Cyc>>,
    /// Eigenvalues of the Gram matrix from a floating-point solver.
    pub numeric_eigenvalues: Vec<f64>,
}

pub fn closed_form_value(d: usize, alpha: AlphaParam, s: usize) -> f64 {
    let ell = (d + 1) as f64;
    let angle = std::f64::consts::PI * s as f64 / ell;
    ell / 2.0 * (1.0 - alpha.tan_pi() / angle.tan())
}

/// Q_α(w_s) = d + 2 Re(c·Σ_{m=1}^{d−1} (d−m) ξ^{sm}) with c = (1+ζ)^{−1}.
fn diagonal_value(d: usize, alpha: AlphaParam, s: usize) -> Cyc {
    let ell = d as u32 + 1;
    let c = (Cyc::one() + alpha.zeta()).inverse();
    let t: Cyc = (1..d as i64)
        .map(|m| root_of_unity(ell, s as i64 * m).scale_int(d as i64 - m))
        .sum();
    let x = c * t;
    Cyc::from_integer(d as i64) + &x + x.conj()
}

pub fn diagonalize_form(d: usize, alpha: AlphaParam) -> FormDiagonalization {
    let values: Vec<Cyc> = (1..=d).map(|s| diagonal_value(d, alpha, s)).collect();
    let closed_form = (1..=d).map(|s| closed_form_value(d, alpha, s)).collect();
    let mut signature = Signature::default();
    let mut kernel = Vec::new();
    let basis = diagonal_basis(d);
    for (v, w) in values.iter().zip(basis) {
        if v.is_zero() {
            signature.n_zero += 1;
            kernel.push(w);
        } else if v.approx_complex().re < 0.0 {
            signature.n_minus += 1;
        } else {
            signature.n_plus += 1;
        }
    }
    let numeric_eigenvalues = build_form(d, alpha).numeric_eigenvalues();
    FormDiagonalization {
        d,
        alpha,
        values,
        closed_form,
        signature,
        kernel,
        numeric_eigenvalues,
    }
}

impl FormDiagonalization {
    /// Sign counts of the floating-point eigenvalues, with zero threshold 1e−9·‖Q‖.
    pub fn numeric_signature(&self) -> Signature {
        let scale = self.numeric_eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tol = 1e-9 * scale.max(1.0);
        let mut s = Signature::default();
        for &x in &self.numeric_eigenvalues {
            if x.abs() <= tol {
                s.n_zero += 1;
            } else if x < 0.0 {
                s.n_minus += 1;
            } else {
                s.n_plus += 1;
            }
        }
        s
    }

    pub fn max_closed_form_error(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.closed_form)
            .map(|(v, c)| (v.approx_complex().re - c).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpEigenstructure {
    pub p: i64,
    /// φ with H_p = ker φ: φ_q = ζ (q < p), 1 + ζ (q = p), 1 (q > p).
    pub functional: Vec<Cyc>,
    pub hyperplane_basis: Vec<Vec<Cyc>>,
    pub special_vector: Vec<Cyc>,
    pub special_value: Cyc,
    /// Characteristic polynomial, constant term first.
    pub char_poly: Vec<Cyc>,
}

pub fn eigenstructure_lp(d: usize, alpha: AlphaParam, p: i64) -> Result<LpEigenstructure> {
    let idx = letter_index(d, p)?;
    let zeta = alpha.zeta();
    let functional: Vec<Cyc> = alphabet(d)
        .iter()
        .map(|&q| match q.cmp(&p) {
            std::cmp::Ordering::Less => zeta.clone(),
            std::cmp::Ordering::Equal => Cyc::one() + &zeta,
            std::cmp::Ordering::Greater => Cyc::one(),
        })
        .collect();
    let row = ExactMatrix::from_rows(vec![functional.clone()]);
    let hyperplane_basis = row.nullspace();
    let mut special_vector = vec![Cyc::zero(); d];
    special_vector[idx] = Cyc::one();
    let l = build_generator(d, alpha, p, ArrowType::Top)?;
    Ok(LpEigenstructure {
        p,
        functional,
        hyperplane_basis,
        special_vector,
        special_value: -zeta,
        char_poly: l.char_poly(),
    })
}

impl LpEigenstructure {
    /// (x − 1)^{d−1}(x + ζ), constant term first.
    pub fn expected_char_poly(&self) -> Vec<Cyc> {
        let d = self.special_vector.len();
        let mut roots = vec![Cyc::one(); d - 1];
        roots.push(self.special_value.clone());
        crate::number::poly_from_roots(&roots)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum OrthogonalLine {
    /// ρ^{d+1} ≠ 1 and ρ^d ≠ 1: the line H'_p complementary to H_p.
    Complement(Vec<Cyc>),
    /// dα ∈ Z: the line is contained in H_p and isotropic.
    Isotropic(Vec<Cyc>),
}

impl OrthogonalLine {
    pub fn vector(&self) -> &[Cyc] {
        match self {
            OrthogonalLine::Complement(v) | OrthogonalLine::Isotropic(v) => v,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionData {
    pub p: i64,
    /// The d × (d−1) matrix of ι_p.
    pub iota: ExactMatrix,
    /// ι_p ∘ L_q = L_{ι_p(q)} ∘ ι_p for every q ∈ A_{d−1} and both kinds.
    pub intertwines: bool,
    /// ι_pᴴ Q_α ι_p = Q'_α.
    pub restriction_matches: bool,
    pub line: OrthogonalLine,
    /// L_q fixes the line pointwise for every q ≠ p.
    pub line_fixed: bool,
}

/// ι_p(q) = q − 1 if q < p, q + 1 if q > p.
pub fn iota_letter(p: i64, q: i64) -> i64 {
    if q < p {
        q - 1
    } else {
        q + 1
    }
}

pub fn restriction_embedding(d: usize, alpha: AlphaParam, p: i64) -> Result<RestrictionData> {
    if d < 3 {
        return Err(KzError::InvalidParameter(format!("restriction needs d ≥ 3, got {d}")));
    }
    letter_index(d, p)?;
    let small = alphabet(d - 1);
    let mut iota = ExactMatrix::zeros(d, d - 1);
    for (j, &q) in small.iter().enumerate() {
        iota.set(letter_index(d, iota_letter(p, q))?, j, Cyc::one());
    }
    let mut intertwines = true;
    for &q in &small {
        for kind in [ArrowType::Top, ArrowType::Bottom] {
            let lhs = &iota * &build_generator(d - 1, alpha, q, kind)?;
            let rhs = &build_generator(d, alpha, iota_letter(p, q), kind)? * &iota;
            intertwines &= lhs == rhs;
        }
    }
    let form = build_form(d, alpha);
    let restricted = &(&iota.adjoint() * &form.entries) * &iota;
    let restriction_matches = restricted == build_form(d - 1, alpha).entries;

    if alpha.times_is_integer(d as i64 + 1) {
        return Err(KzError::DegenerateConfiguration(format!(
            "Q_α is degenerate at d = {d}, α = {alpha}; the orthogonal of H_p is not a line"
        )));
    }
    let ginv = form
        .entries
        .inverse()
        .ok_or_else(|| KzError::DegenerateConfiguration("Gram matrix not invertible".into()))?;
    let v = ginv.col(letter_index(d, p)?);
    let mut line_fixed = true;
    for &q in alphabet(d).iter().filter(|&&q| q != p) {
        line_fixed &= build_generator(d, alpha, q, ArrowType::Top)?.apply(&v) == v;
    }
    let line = if alpha.times_is_integer(d as i64) {
        OrthogonalLine::Isotropic(v)
    } else {
        OrthogonalLine::Complement(v)
    };
    Ok(RestrictionData {
        p,
        iota,
        intertwines,
        restriction_matches,
        line,
        line_fixed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialClass {
    FiniteOrder,
    Parabolic,
    Hyperbolic,
    InfiniteElliptic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecialElementReport {
    pub alpha: AlphaParam,
    /// L_{−1}^b ∘ L_1^t.
    pub matrix: ExactMatrix,
    pub trace: Cyc,
    pub det: Cyc,
    pub classification: SpecialClass,
    /// Exact order when finite.
    pub order: Option<u32>,
}

pub fn special_element_d2(alpha: AlphaParam) -> SpecialElementReport {
    let lb = build_generator(2, alpha, -1, ArrowType::Bottom).expect("letter −1");
    let lt = build_generator(2, alpha, 1, ArrowType::Top).expect("letter 1");
    let matrix = &lb * &lt;
    let trace = matrix.trace();
    let det = matrix.det();
    let two = Cyc::from_integer(2);
    let is_scalar = matrix.is_identity() || (-&matrix).is_identity();
    let order = (1..=12u32).find(|&n| matrix.pow(n).is_identity());
    let classification = if trace == two && !is_scalar {
        SpecialClass::Parabolic
    } else if trace.approx_complex().re > 2.0 {
        SpecialClass::Hyperbolic
    } else if order.is_some() {
        SpecialClass::FiniteOrder
    } else {
        SpecialClass::InfiniteElliptic
    };
    SpecialElementReport {
        alpha,
        matrix,
        trace,
        det,
        classification,
        order,
    }
}

impl SpecialElementReport {
    /// 1 − (ρ + ρ^{−1}).
    pub fn expected_trace(&self) -> Cyc {
        let rho = self.alpha.rho();
        Cyc::one() - &rho - rho.inverse()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorFieldReport {
    pub alpha: AlphaParam,
    /// s(n) = a_+(n) + a_−(n) for n = 0, 1, 2.
    pub s: Vec<Cyc>,
    /// p(n) = a_+(n)·a_−(n) for n = 0, 1, 2.
    pub p: Vec<Cyc>,
    /// det of the rows (1, p(n), s(n)).
    pub det: Cyc,
    /// (1 − ζ³)(1 − ρ³).
    pub expected_det: Cyc,
    /// X(0), X(1), X(2) in floating point; absent when L_{−1}^b ∘ L_1^t has a
    /// repeated eigenvalue.
    #[serde(skip)]
    pub fields: Option<Vec<DMatrix<Complex64>>>,
}

/// Infinitesimal generator X with X v_± = ±c v_± for the eigenvectors v_± of
/// the special element, c = i in the elliptic case and 1 in the hyperbolic one,
/// followed by its conjugates X(n) = L_{−1}^n X L_{−1}^{−n}.
pub fn vector_fields_d2(alpha: AlphaParam) -> VectorFieldReport {
    let zeta = alpha.zeta();
    let rho = alpha.rho();
    let one = Cyc::one();
    let mut s = vec![Cyc::from_integer(-1) - &rho + rho.pow(2)];
    let mut p = vec![rho.clone()];
    for n in 0..2 {
        let (sn, pn) = (s[n].clone(), p[n].clone());
        s.push(-(&zeta * &sn) - Cyc::from_integer(2));
        p.push(zeta.pow(2) * &pn + &zeta * &sn + &one);
    }
    let m = ExactMatrix::from_rows((0..3).map(|n| vec![one.clone(), p[n].clone(), s[n].clone()]).collect());
    let det = m.det();
    let expected_det = (&one - zeta.pow(3)) * (&one - rho.pow(3));

    let fields = special_fields(alpha);
    VectorFieldReport {
        alpha,
        s,
        p,
        det,
        expected_det,
        fields,
    }
}

fn special_fields(alpha: AlphaParam) -> Option<Vec<DMatrix<Complex64>>> {
    let special = special_element_d2(alpha);
    let tr = special.trace.approx_complex().re;
    let disc = tr * tr - 4.0;
    if disc.abs() < 1e-12 {
        return None;
    }
    let sq = Complex64::new(disc, 0.0).sqrt();
    let lambdas = [(tr + sq) / 2.0, (tr - sq) / 2.0];
    let rho = alpha.rho().approx_complex();
    // v = a e_{−1} + e_1 with a = −1 − ρλ
    let a: Vec<Complex64> = lambdas.iter().map(|&l| -Complex64::new(1.0, 0.0) - rho * l).collect();
    let c = if disc < 0.0 { Complex64::i() } else { Complex64::new(1.0, 0.0) };
    let v = DMatrix::from_row_slice(2, 2, &[a[0], a[1], Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c, -c]));
    let x0 = &v * diag * v.clone().try_inverse()?;
    let l = build_generator(2, alpha, -1, ArrowType::Top).ok()?.to_complex();
    let linv = l.clone().try_inverse()?;
    let x1 = &l * &x0 * &linv;
    let x2 = &l * &x1 * &linv;
    Some(vec![x0, x1, x2])
}

/// The basis (w_{−3}, f_{−1}, f_1, w_3) of C^{A_4} at α = 1/4, as the columns of
/// a complex matrix: w_{±3} span the orthogonals of H_{±3} with Q(w_{−3}, w_3) = 1,
/// and f_{±1} are an orthonormal basis of their orthogonal.
pub fn quarter_basis_d4() -> DMatrix<Complex64> {
    let alpha = AlphaParam::new(1, 4).unwrap();
    let g = build_form(4, alpha).to_complex();
    let ginv = g.clone().try_inverse().expect("Q_{1/4} is non-degenerate at d = 4");
    let mut wm = ginv.column(0).into_owned();
    let wp = ginv.column(3).into_owned();
    let q = |x: &nalgebra::DVector<Complex64>, y: &nalgebra::DVector<Complex64>| (x.adjoint() * &g * y)[(0, 0)];
    let scale = q(&wm, &wp);
    wm /= scale.conj();
    // Q-orthogonal projection of e_{−1}, e_1 away from span(w_{−3}, w_3)
    let mut f: Vec<nalgebra::DVector<Complex64>> = [1, 2]
        .iter()
        .map(|&i| {
            let x = nalgebra::DVector::from_fn(4, |j, _| Complex64::new((i == j) as u8 as f64, 0.0));
            &x - &wm * q(&wp, &x) - &wp * q(&wm, &x)
        })
        .collect();
    let n0 = q(&f[0], &f[0]).re.sqrt();
    f[0] /= Complex64::new(n0, 0.0);
    let proj = q(&f[0], &f[1]);
    let f0 = f[0].clone();
    f[1] -= f0 * proj;
    let n1 = q(&f[1], &f[1]).re.sqrt();
    f[1] /= Complex64::new(n1, 0.0);
    DMatrix::from_columns(&[wm, f[0].clone(), f[1].clone(), wp])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> AlphaParam {
        AlphaParam::new(n, d).unwrap()
    }

    #[test]
    fn d2_columns() {
        let al = a(1, 5);
        let l = build_generator(2, al, 1, ArrowType::Top).unwrap();
        let z = al.zeta();
        // columns: e_{−1} ↦ e_{−1} − ζe_1, e_1 ↦ −ζe_1
        assert_eq!(l.col(0), vec![Cyc::one(), -&z]);
        assert_eq!(l.col(1), vec![Cyc::zero(), -&z]);
        let l0 = build_generator(3, al, 0, ArrowType::Top).unwrap();
        assert_eq!(l0.col(0), vec![Cyc::one(), -&z, Cyc::zero()]);
        assert!(build_generator(3, al, 1, ArrowType::Top).is_err());
    }

    #[test]
    fn inverse_pairs_and_determinants() {
        for d in 2..=5 {
            for al in [a(1, 5), a(1, 4), a(3, 10)] {
                let set = GeneratorSet::new(d, al).unwrap();
                for i in 0..d {
                    assert!((&set.top[i] * &set.bottom[i]).is_identity());
                    assert_eq!(set.top[i].det(), -al.zeta());
                }
            }
        }
    }

    #[test]
    fn form_examples() {
        let g = build_form(2, a(1, 4));
        let half = Cyc::from_ratio(1, 2);
        let i = root_of_unity(4, 1);
        assert_eq!(g.entries.get(0, 1), &(&half * (Cyc::one() + &i)));
        assert!(g.is_hermitian());
        let g6 = build_form(2, a(1, 6));
        let m = g6.entries.get(0, 1).approx_complex().norm();
        assert!((m - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn form_is_invariant_and_other_triangle_is_not() {
        for d in 2..=5 {
            for al in [a(1, 5), a(1, 4), a(2, 5), a(1, 12)] {
                let g = build_form(d, al);
                let set = GeneratorSet::new(d, al).unwrap();
                for (_, _, m) in set.all() {
                    assert!(g.preserved_by(m));
                }
                let swapped = HermitianGram {
                    entries: g.entries.transpose(),
                    ..g.clone()
                };
                assert!(!set.all().iter().all(|(_, _, m)| swapped.preserved_by(m)));
            }
        }
    }

    #[test]
    fn diagonalization_examples() {
        let f = diagonalize_form(4, a(1, 10));
        assert!((f.values[0].approx_complex().re - 1.381966011250105).abs() < 1e-12);
        assert_eq!((f.signature.n_minus, f.signature.n_plus), (0, 4));
        let f = diagonalize_form(4, a(1, 5));
        assert!(f.values[0].is_zero());
        assert_eq!(f.signature.n_zero, 1);
        let g = build_form(4, a(1, 5));
        assert!(g.entries.apply(&f.kernel[0]).iter().all(Cyc::is_zero));
        let f = diagonalize_form(6, a(3, 10));
        assert_eq!((f.signature.n_minus, f.signature.n_plus), (2, 4));
        assert_eq!(f.signature, predicted_signature(6, a(3, 10)));
        assert_eq!(f.numeric_signature(), f.signature);
        assert!(f.max_closed_form_error() < 1e-10);
    }

    #[test]
    fn diagonal_basis_is_orthogonal() {
        for (d, al) in [(3, a(1, 5)), (5, a(1, 4)), (4, a(1, 5))] {
            let g = build_form(d, al);
            let w = diagonal_basis(d);
            for s in 0..d {
                for t in 0..d {
                    if s != t {
                        assert!(g.eval(&w[s], &w[t]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_fixed() {
        let (d, al) = (4, a(1, 5));
        let f = diagonalize_form(d, al);
        let set = GeneratorSet::new(d, al).unwrap();
        for (_, _, m) in set.all() {
            assert_eq!(m.apply(&f.kernel[0]), f.kernel[0]);
        }
    }

    #[test]
    fn lp_eigenstructure() {
        let al = a(2, 7);
        for d in 2..=5 {
            for p in alphabet(d) {
                let e = eigenstructure_lp(d, al, p).unwrap();
                let l = build_generator(d, al, p, ArrowType::Top).unwrap();
                assert_eq!(l.apply(&e.special_vector), e.special_vector.iter().map(|x| x * &e.special_value).collect::<Vec<_>>());
                assert_eq!(e.hyperplane_basis.len(), d - 1);
                for v in &e.hyperplane_basis {
                    assert_eq!(&l.apply(v), v);
                }
                assert_eq!(e.char_poly, e.expected_char_poly());
            }
        }
    }

    #[test]
    fn restrictions() {
        for p in alphabet(3) {
            let r = restriction_embedding(3, a(1, 5), p).unwrap();
            assert!(r.intertwines && r.restriction_matches && r.line_fixed);
            assert!(matches!(r.line, OrthogonalLine::Complement(_)));
        }
        let al = a(1, 5);
        let g = build_form(5, al);
        for p in alphabet(5) {
            let r = restriction_embedding(5, al, p).unwrap();
            assert!(r.intertwines && r.restriction_matches && r.line_fixed);
            let OrthogonalLine::Isotropic(w) = &r.line else {
                panic!("dα = 1 should give an isotropic line")
            };
            assert!(g.eval(w, w).is_zero());
            assert!(w[letter_index(5, p).unwrap()].is_zero());
        }
        assert!(matches!(
            restriction_embedding(4, a(1, 5), 1),
            Err(KzError::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn special_element() {
        let r = special_element_d2(a(1, 3));
        assert_eq!(r.trace, Cyc::from_integer(2));
        assert_eq!(r.classification, SpecialClass::Parabolic);
        let r = special_element_d2(a(2, 5));
        assert_eq!(r.classification, SpecialClass::Hyperbolic);
        assert!((r.trace.approx_complex().re - (1.0 + 1.618033988749895)).abs() < 1e-12);
        let r = special_element_d2(a(1, 4));
        assert_eq!(r.trace, Cyc::one());
        assert_eq!(r.classification, SpecialClass::FiniteOrder);
        assert_eq!(r.order, Some(6));
        let r = special_element_d2(a(1, 5));
        assert_eq!(r.classification, SpecialClass::InfiniteElliptic);
        for al in [a(1, 7), a(3, 7), a(5, 12)] {
            let r = special_element_d2(al);
            assert!(r.det.is_one());
            assert_eq!(r.trace, r.expected_trace());
        }
    }

    #[test]
    fn vector_field_values() {
        let r = vector_fields_d2(a(1, 3));
        assert!(r.det.is_zero());
        assert!(r.fields.is_none());
        for al in [a(1, 5), a(2, 5), a(1, 7)] {
            let r = vector_fields_d2(al);
            assert_eq!(r.det, r.expected_det);
            let (z, rho) = (al.zeta(), al.rho());
            assert_eq!(r.s[1], &z - Cyc::one() - &rho);
            assert_eq!(r.s[2], -z.pow(2) + &z - Cyc::one());
            assert_eq!(r.p[1], rho);
            assert_eq!(r.p[2], z.pow(2));
            // X(n) has the displayed entries in terms of s(n), p(n)
            let fields = r.fields.unwrap();
            for n in 0..3 {
                let x = &fields[n];
                let sn = r.s[n].approx_complex();
                let pn = r.p[n].approx_complex();
                // X_{−1,1} = −2c·p/(a_+ − a_−) and X_{1,−1} = 2c/(a_+ − a_−)
                let ratio = x[(0, 1)] / x[(1, 0)];
                assert!((ratio + pn).norm() < 1e-9);
                assert!((x[(0, 0)] * 2.0 / x[(1, 0)] - sn).norm() < 1e-9);
                assert!((x[(1, 1)] + x[(0, 0)]).norm() < 1e-9);
            }
        }
        let r = vector_fields_d2(a(1, 5));
        assert!((r.det.approx_complex().re - 3.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn fields_are_skew_for_the_form() {
        for al in [a(1, 5), a(2, 5)] {
            let q = build_form(2, al).to_complex();
            for x in vector_fields_d2(al).fields.unwrap() {
                let defect = x.adjoint() * &q + &q * &x;
                assert!(defect.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn quarter_basis_has_the_stated_gram() {
        let b = quarter_basis_d4();
        let q = build_form(4, a(1, 4)).to_complex();
        let gram = b.adjoint() * q * &b;
        let one = Complex64::new(1.0, 0.0);
        let mut want = DMatrix::<Complex64>::zeros(4, 4);
        want[(0, 3)] = one;
        want[(3, 0)] = one;
        want[(1, 1)] = one;
        want[(2, 2)] = one;
        assert!((gram - want).norm() < 1e-10);
    }

    #[test]
    fn hodge_cross_oracle_small() {
        for k in 2..=4 {
            for r in 1..k {
                for ell in 3..=6 {
                    assert!(hodge_matches_form(k, ell, r).unwrap(), "k={k} r={r} ℓ={ell}");
                }
            }
        }
    }
}
