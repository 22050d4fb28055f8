//! Finite certificates for the groups generated by the L_p: exact enumeration,
//! Lie algebra closure dimensions, real irreducibility, and the density verdict.

use std::collections::{HashSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KzError, Result};
use crate::generators::{
    build_form, build_generator, diagonal_basis, predicted_signature, quarter_basis_d4, vector_fields_d2,
    GeneratorSet, Signature,
};
use crate::number::{AlphaParam, CyclotomicNumber, ExactMatrix};
use crate::rauzy::ArrowType;

pub const DEFAULT_BOUND: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupOrder {
    Finite(usize),
    Exceeded(usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupEnumeration {
    pub order: GroupOrder,
    #[serde(skip)]
    pub elements: Option<Vec<ExactMatrix>>,
}

impl GroupEnumeration {
    pub fn finite_order(&self) -> Option<usize> {
        match self.order {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Exceeded(_) => None,
        }
    }
}

/// Breadth-first closure of the identity under right multiplication by the
/// generators, with elements keyed by their canonical exact coefficients.
/// A finite monoid of invertible matrices is a group, so this yields the
/// generated group whenever it terminates.
pub fn enumerate_group(generators: &[ExactMatrix], bound: usize) -> Result<GroupEnumeration> {
    let Some(first) = generators.first() else {
        return Ok(GroupEnumeration {
            order: GroupOrder::Finite(1),
            elements: None,
        });
    };
    if generators.iter().any(|g| !g.is_square() || g.nrows() != first.nrows()) {
        return Err(KzError::InvalidParameter("generators must be square of equal size".into()));
    }
    let n = generators.iter().fold(1u32, |acc, g| num_integer::lcm(acc, g.conductor()));
    let id = ExactMatrix::identity(first.nrows());
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([id.key_in(n)]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let next = &m * g;
            if seen.insert(next.key_in(n)) {
                if seen.len() > bound {
                    return Ok(GroupEnumeration {
                        order: GroupOrder::Exceeded(bound),
                        elements: None,
                    });
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(GroupEnumeration {
        order: GroupOrder::Finite(elements.len()),
        elements: Some(elements),
    })
}

/// Rejects α written with a decimal point: only exact fractions are accepted.
pub fn parse_exact_alpha(s: &str) -> Result<AlphaParam> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(KzError::InexactInput(format!(
            "alpha {s:?} is not an exact fraction; write it as a/b"
        )));
    }
    s.parse()
}

/// The group generated by L_1 and L_{−1} in dimension 2.
pub fn enumerate_d2(alpha: AlphaParam, bound: usize) -> Result<GroupEnumeration> {
    let l1 = build_generator(2, alpha, 1, ArrowType::Top)?;
    let lm1 = build_generator(2, alpha, -1, ArrowType::Top)?;
    enumerate_group(&[lm1, l1], bound)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieClosure {
    pub closure_dim: usize,
    pub stabilized: bool,
    pub rounds: usize,
}

fn realify(m: &DMatrix<Complex64>) -> DVector<f64> {
    DVector::from_iterator(2 * m.len(), m.iter().flat_map(|z| [z.re, z.im]))
}

/// An orthonormal basis of a real subspace, grown one candidate at a time.
struct RealSpan {
    basis: Vec<DVector<f64>>,
    tol: f64,
}

impl RealSpan {
    fn new(tol: f64) -> Self {
        RealSpan { basis: Vec::new(), tol }
    }

    fn try_add(&mut self, v: &DVector<f64>) -> bool {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return false;
        }
        let mut r = v / norm;
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let res = r.norm();
        if res > self.tol {
            self.basis.push(r / res);
            true
        } else {
            false
        }
    }
}

/// Dimension of the real Lie algebra generated by the seeds under commutators.
/// Rounds bracket every pair of current elements; the loop ends after two
/// consecutive rounds without growth.
pub fn lie_closure_dim(seeds: &[DMatrix<Complex64>]) -> LieClosure {
    let mut span = RealSpan::new(1e-9);
    let mut elems: Vec<DMatrix<Complex64>> = Vec::new();
    for s in seeds {
        if span.try_add(&realify(s)) {
            elems.push(s.clone());
        }
    }
    let mut quiet = 0;
    let mut rounds = 0;
    let mut checked = 0;
    while quiet < 2 && rounds < 64 {
        rounds += 1;
        let before = elems.len();
        let mut fresh = Vec::new();
        for i in 0..before {
            for j in (i + 1)..before {
                if j < checked && i < checked && quiet > 0 {
                    continue;
                }
                let mut b = &elems[i] * &elems[j] - &elems[j] * &elems[i];
                let scale = b.norm();
                // commuting pairs leave pure round-off behind
                if scale <= 1e-10 * elems[i].norm() * elems[j].norm() {
                    continue;
                }
                b /= Complex64::new(scale, 0.0);
                if span.try_add(&realify(&b)) {
                    fresh.push(b);
                }
            }
        }
        checked = before;
        elems.extend(fresh);
        if elems.len() == before {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }
    LieClosure {
        closure_dim: elems.len(),
        stabilized: quiet >= 2,
        rounds,
    }
}

/// Bases of g_{−3} and g_3 at (d = 4, α = 1/4) in the basis (w_{−3}, f_{−1}, f_1, w_3).
pub fn quarter_seeds_d4() -> Vec<DMatrix<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let mut out = Vec::new();
    // g_{−3}: first row (0, v_{−1}, v_1, is), last column (is, −v̄_{−1}, −v̄_1, 0)
    for (slot, c) in [(1usize, one), (1, i), (2, one), (2, i)] {
        let mut a = DMatrix::<Complex64>::zeros(4, 4);
        a[(0, slot)] = c;
        a[(slot, 3)] = -c.conj();
        out.push(a);
    }
    let mut a = DMatrix::<Complex64>::zeros(4, 4);
    a[(0, 3)] = i;
    out.push(a);
    // g_3: first column (0, −ū_{−1}, −ū_1, ir), last row (ir, u_{−1}, u_1, 0)
    for (slot, c) in [(1usize, one), (1, i), (2, one), (2, i)] {
        let mut b = DMatrix::<Complex64>::zeros(4, 4);
        b[(3, slot)] = c;
        b[(slot, 0)] = -c.conj();
        out.push(b);
    }
    let mut b = DMatrix::<Complex64>::zeros(4, 4);
    b[(3, 0)] = i;
    out.push(b);
    out
}

/// The same seeds written in the standard basis of C^{A_4}.
pub fn quarter_seeds_d4_standard() -> Vec<DMatrix<Complex64>> {
    let b = quarter_basis_d4();
    let binv = b.clone().try_inverse().expect("basis");
    quarter_seeds_d4().into_iter().map(|x| &b * x * &binv).collect()
}

/// X(0), X(1), X(2) for d = 2, or None when they are undefined (α = 1/3).
pub fn d2_seeds(alpha: AlphaParam) -> Option<Vec<DMatrix<Complex64>>> {
    vector_fields_d2(alpha).fields
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    pub d: usize,
    pub alpha: AlphaParam,
    /// Real dimension of the algebra spanned by words in the realified L_p.
    pub algebra_dim: usize,
    pub irreducible: bool,
    /// A line fixed by every generator, when one exists.
    pub witness: Option<Vec<CyclotomicNumber>>,
}

pub fn real_irreducibility(d: usize, alpha: AlphaParam) -> Result<IrreducibilityReport> {
    let set = GeneratorSet::new(d, alpha)?;
    let gens: Vec<DMatrix<Complex64>> = set.top.iter().map(ExactMatrix::to_complex).collect();
    let mut span = RealSpan::new(1e-9);
    let id = DMatrix::<Complex64>::identity(d, d);
    span.try_add(&realify(&id));
    let mut members = vec![id];
    let mut frontier = 0;
    while frontier < members.len() {
        let a = members[frontier].clone();
        frontier += 1;
        for g in &gens {
            let mut p = &a * g;
            let n = p.norm();
            p /= Complex64::new(n, 0.0);
            if span.try_add(&realify(&p)) {
                members.push(p);
            }
        }
    }
    let algebra_dim = members.len();
    let irreducible = algebra_dim == 2 * d * d;
    let witness = if irreducible {
        None
    } else {
        // common fixed vectors: the null space of the stacked L_p − 1
        let mut rows = Vec::new();
        for l in &set.top {
            let diff = l - &ExactMatrix::identity(d);
            for i in 0..d {
                rows.push(diff.row(i));
            }
        }
        ExactMatrix::from_rows(rows).nullspace().into_iter().next()
    };
    Ok(IrreducibilityReport {
        d,
        alpha,
        algebra_dim,
        irreducible,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictCase {
    DefiniteDenseSu,
    IndefiniteZariskiDenseSu,
    DegenerateDenseSustar,
    ExceptionalFinite,
    ExceptionalParabolicStabilizer,
    ExceptionalSuDenseFromD4,
    Unclassified,
}

impl VerdictCase {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictCase::DefiniteDenseSu => "definite-dense-SU",
            VerdictCase::IndefiniteZariskiDenseSu => "indefinite-Zariski-dense-SU",
            VerdictCase::DegenerateDenseSustar => "degenerate-dense-SUstar",
            VerdictCase::ExceptionalFinite => "exceptional-finite",
            VerdictCase::ExceptionalParabolicStabilizer => "exceptional-parabolic-stabilizer",
            VerdictCase::ExceptionalSuDenseFromD4 => "exceptional-SU-dense-from-d4",
            VerdictCase::Unclassified => "unclassified",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub d: usize,
    pub alpha: AlphaParam,
    pub case: VerdictCase,
    pub signature: Signature,
    pub notes: Vec<String>,
}

/// The classification of the closure of the group generated by the L_p.
/// This is a verdict read off the case analysis, not a computed certificate.
pub fn density_verdict(d: usize, alpha: AlphaParam) -> DensityVerdict {
    let signature = predicted_signature(d, alpha);
    let ell = d as i64 + 1;
    let finite_exc = alpha.is_finite_exceptional();
    let third = alpha.equals(1, 3);
    let degenerate = alpha.times_is_integer(ell);
    let definite = (ell as u64) * (alpha.numer() as u64) < alpha.denom() as u64;
    let mut notes = Vec::new();
    let case = if finite_exc && d == 2 {
        VerdictCase::ExceptionalFinite
    } else if third && d == 2 {
        VerdictCase::ExceptionalParabolicStabilizer
    } else if finite_exc && d == 3 {
        notes.push(
            "d = 3 lies between the finite group at d = 2 and the dense groups from d = 4 on; \
             at α = 1/4 the closure is an extension of the finite group by a vector group"
                .into(),
        );
        VerdictCase::Unclassified
    } else if finite_exc {
        if degenerate {
            notes.push("Q_α is degenerate here; density is in SU*(Q_α)".into());
        }
        VerdictCase::ExceptionalSuDenseFromD4
    } else if degenerate {
        notes.push("density holds for the Zariski topology; the usual topology is left open".into());
        VerdictCase::DegenerateDenseSustar
    } else if definite {
        VerdictCase::DefiniteDenseSu
    } else {
        VerdictCase::IndefiniteZariskiDenseSu
    };
    if third && d > 2 {
        notes.push("α = 1/3 needs no extra work beyond d = 2".into());
    }
    DensityVerdict {
        d,
        alpha,
        case,
        signature,
        notes,
    }
}

/// At d = 3, α = 1/4, every L_p fixes the kernel vector e of Q. In the basis
/// (e, e_0, e_2) the lower-right 2×2 blocks must lie in the group generated by
/// L_{−1}, L_1 in dimension 2.
pub fn quarter_blocks_lie_in_gamma() -> Result<bool> {
    let alpha = AlphaParam::new(1, 4)?;
    let e = diagonal_basis(3).swap_remove(0);
    let form = build_form(3, alpha);
    if !form.entries.apply(&e).iter().all(CyclotomicNumber::is_zero) {
        return Ok(false);
    }
    let zero = CyclotomicNumber::zero;
    let one = CyclotomicNumber::one;
    let p = ExactMatrix::from_rows(vec![
        vec![e[0].clone(), zero(), zero()],
        vec![e[1].clone(), one(), zero()],
        vec![e[2].clone(), zero(), one()],
    ]);
    let pinv = p
        .inverse()
        .ok_or_else(|| KzError::DegenerateConfiguration("kernel vector has a zero coordinate".into()))?;
    let gamma = enumerate_d2(alpha, 1000)?;
    let elements = gamma.elements.unwrap_or_default();
    let keys: HashSet<Vec<BigInt>> = elements.iter().map(|m| m.key_in(4)).collect();
    for q in [-2, 0, 2] {
        let m = &(&pinv * &build_generator(3, alpha, q, ArrowType::Top)?) * &p;
        if !m.get(0, 0).is_one() || !m.get(1, 0).is_zero() || !m.get(2, 0).is_zero() {
            return Ok(false);
        }
        let block = ExactMatrix::from_fn(2, 2, |i, j| m.get(i + 1, j + 1).clone());
        if !keys.contains(&block.key_in(4)) {
            return Ok(false);
        }
    }
    Ok(true)
}
