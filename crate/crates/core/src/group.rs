//! The symmetry group G = (Z_2k × Z_ℓ) ⋊ Z_2 of M_{k,ℓ}, its characters, the
//! character of relative and absolute homology, and Galois orbits.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::number::{CyclotomicNumber, RootSum};

/// The element t_{(i,j)} ∘ σ^flip, where t is translation and σ the involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub i: u32,
    pub j: u32,
    pub flip: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        i: 0,
        j: 0,
        flip: false,
    };
    pub const SIGMA: GroupElement = GroupElement {
        i: 0,
        j: 0,
        flip: true,
    };

    pub fn translation(i: u32, j: u32) -> Self {
        GroupElement { i, j, flip: false }
    }
}

/// The group G of order 4kℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryGroup {
    pub k: u32,
    pub ell: u32,
}

impl SymmetryGroup {
    pub fn new(k: u32, ell: u32) -> Self {
        assert!(k >= 1 && ell >= 3, "need k ≥ 1 and ℓ ≥ 3");
        SymmetryGroup { k, ell }
    }

    pub fn order(&self) -> usize {
        4 * (self.k * self.ell) as usize
    }

    fn n(&self) -> u32 {
        2 * self.k
    }

    /// Π = lcm(2k, ℓ).
    pub fn exponent(&self) -> u32 {
        self.n().lcm(&self.ell)
    }

    pub fn varpi(&self) -> u32 {
        self.n().gcd(&self.ell)
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.order());
        for flip in [false, true] {
            for i in 0..self.n() {
                for j in 0..self.ell {
                    out.push(GroupElement { i, j, flip });
                }
            }
        }
        out
    }

    fn norm(&self, i: i64, j: i64) -> (u32, u32) {
        (
            i.rem_euclid(self.n() as i64) as u32,
            j.rem_euclid(self.ell as i64) as u32,
        )
    }

    /// (a, ε)(b, δ) = (a + εb, εδ).
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let s = if g.flip { -1 } else { 1 };
        let (i, j) = self.norm(g.i as i64 + s * h.i as i64, g.j as i64 + s * h.j as i64);
        GroupElement {
            i,
            j,
            flip: g.flip ^ h.flip,
        }
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        if g.flip {
            g
        } else {
            let (i, j) = self.norm(-(g.i as i64), -(g.j as i64));
            GroupElement::translation(i, j)
        }
    }

    pub fn pow(&self, g: GroupElement, t: i64) -> GroupElement {
        if g.flip {
            return if t.rem_euclid(2) == 0 {
                GroupElement::IDENTITY
            } else {
                g
            };
        }
        let (i, j) = self.norm(g.i as i64 * t, g.j as i64 * t);
        GroupElement::translation(i, j)
    }

    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let elems = self.elements();
        let mut seen = BTreeSet::new();
        let mut classes = Vec::new();
        for &g in &elems {
            if seen.contains(&g) {
                continue;
            }
            let class: BTreeSet<GroupElement> = elems
                .iter()
                .map(|&h| self.mul(self.mul(h, g), self.inverse(h)))
                .collect();
            seen.extend(class.iter().copied());
            classes.push(ConjugacyClass {
                representative: *class.iter().next().unwrap(),
                size: class.len(),
                elements: class.into_iter().collect(),
            });
        }
        classes
    }

    /// Canonical representative of ±(r, s) in R(2k, ℓ): the lexicographically
    /// smaller of the two.
    pub fn r_rep(&self, r: i64, s: i64) -> (u32, u32) {
        let a = self.norm(r, s);
        let b = self.norm(-r, -s);
        a.min(b)
    }

    /// R(2k, ℓ) as sorted canonical representatives.
    pub fn r_set(&self) -> Vec<(u32, u32)> {
        let set: BTreeSet<(u32, u32)> = (0..self.n())
            .flat_map(|r| (0..self.ell).map(move |s| (r, s)))
            .map(|(r, s)| self.r_rep(r as i64, s as i64))
            .collect();
        set.into_iter().collect()
    }

    /// Whether (r, s) has order greater than 2.
    pub fn is_generic(&self, r: u32, s: u32) -> bool {
        self.norm(2 * r as i64, 2 * s as i64) != (0, 0)
    }

    /// R*(2k, ℓ).
    pub fn r_star(&self) -> Vec<(u32, u32)> {
        self.r_set()
            .into_iter()
            .filter(|&(r, s)| self.is_generic(r, s))
            .collect()
    }

    /// Whether r/2k + s/ℓ is an integer.
    pub fn on_a_locus(&self, r: u32, s: u32) -> bool {
        (r as u64 * self.ell as u64 + s as u64 * self.n() as u64).is_multiple_of(self.n() as u64 * self.ell as u64)
    }

    /// The exponent e with χ_{r,s}(i, j) = 2cos(2πe/Π).
    fn phase(&self, r: u32, s: u32, g: GroupElement) -> u32 {
        let pi = self.exponent() as u64;
        let e = r as u64 * g.i as u64 * (pi / self.n() as u64) + s as u64 * g.j as u64 * (pi / self.ell as u64);
        (e % pi) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub size: usize,
    #[serde(skip)]
    pub elements: Vec<GroupElement>,
}

pub fn conjugacy_classes(k: u32, ell: u32) -> Vec<ConjugacyClass> {
    SymmetryGroup::new(k, ell).conjugacy_classes()
}

/// A character value: an integer, or 2cos(2πe/Π).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharValue {
    Int(i64),
    TwoCos(u32),
}

impl CharValue {
    fn add_into(&self, acc: &mut RootSum, scale: i64) {
        match *self {
            CharValue::Int(c) => acc.add_term(0, c * scale),
            CharValue::TwoCos(e) => {
                acc.add_term(e as i64, scale);
                acc.add_term(-(e as i64), scale);
            }
        }
    }

    fn add_product_into(&self, other: &CharValue, acc: &mut RootSum, scale: i64) {
        match (*self, *other) {
            (CharValue::Int(a), v) | (v, CharValue::Int(a)) => v.add_into(acc, a * scale),
            (CharValue::TwoCos(a), CharValue::TwoCos(b)) => {
                let (a, b) = (a as i64, b as i64);
                for e in [a + b, a - b, b - a, -a - b] {
                    acc.add_term(e, scale);
                }
            }
        }
    }

    pub fn to_cyclotomic(&self, pi: u32) -> CyclotomicNumber {
        let mut acc = RootSum::zero(pi);
        self.add_into(&mut acc, 1);
        acc.to_cyclotomic()
    }

    pub fn approx(&self, pi: u32) -> f64 {
        match *self {
            CharValue::Int(c) => c as f64,
            CharValue::TwoCos(e) => 2.0 * (std::f64::consts::TAU * e as f64 / pi as f64).cos(),
        }
    }
}

/// Which irreducible character a row is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterLabel {
    /// 1_{2k} ↦ a, 1_ℓ ↦ b, σ ↦ c with a, b, c ∈ {±1}.
    Linear { a: i8, b: i8, c: i8 },
    /// χ_{r,s}.
    Dihedral { r: u32, s: u32 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterRow {
    pub label: CharacterLabel,
    pub degree: u32,
    /// Values on the classes, in class order.
    pub values: Vec<CharValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTable {
    pub k: u32,
    pub ell: u32,
    pub exponent: u32,
    pub classes: Vec<ConjugacyClass>,
    pub rows: Vec<CharacterRow>,
}

fn linear_value(a: i8, b: i8, c: i8, g: GroupElement) -> i64 {
    let mut v = 1i64;
    if a < 0 && g.i % 2 == 1 {
        v = -v;
    }
    if b < 0 && g.j % 2 == 1 {
        v = -v;
    }
    if c < 0 && g.flip {
        v = -v;
    }
    v
}

/// χ_{r,s}(g) as a structured value; zero off the translation subgroup.
pub fn dihedral_value(group: &SymmetryGroup, r: u32, s: u32, g: GroupElement) -> CharValue {
    if g.flip {
        CharValue::Int(0)
    } else {
        CharValue::TwoCos(group.phase(r, s, g))
    }
}

/// χ_{r,s}(g) as an exact real cyclotomic number.
pub fn character_value(r: u32, s: u32, g: GroupElement, k: u32, ell: u32) -> CyclotomicNumber {
    let group = SymmetryGroup::new(k, ell);
    dihedral_value(&group, r, s, g).to_cyclotomic(group.exponent())
}

pub fn character_table(k: u32, ell: u32) -> CharacterTable {
    let group = SymmetryGroup::new(k, ell);
    let classes = group.conjugacy_classes();
    let mut rows = Vec::new();
    let bs: &[i8] = if ell.is_multiple_of(2) { &[1, -1] } else { &[1] };
    for &b in bs {
        for a in [1i8, -1] {
            for c in [1i8, -1] {
                rows.push(CharacterRow {
                    label: CharacterLabel::Linear { a, b, c },
                    degree: 1,
                    values: classes
                        .iter()
                        .map(|cl| CharValue::Int(linear_value(a, b, c, cl.representative)))
                        .collect(),
                });
            }
        }
    }
    for (r, s) in group.r_star() {
        rows.push(CharacterRow {
            label: CharacterLabel::Dihedral { r, s },
            degree: 2,
            values: classes
                .iter()
                .map(|cl| dihedral_value(&group, r, s, cl.representative))
                .collect(),
        });
    }
    CharacterTable {
        k,
        ell,
        exponent: group.exponent(),
        classes,
        rows,
    }
}

impl CharacterTable {
    pub fn group_order(&self) -> usize {
        4 * (self.k * self.ell) as usize
    }

    /// |G| · ⟨χ_a, χ_b⟩ as an exact value; all characters here are real.
    pub fn scaled_inner_product(&self, a: usize, b: usize) -> RootSum {
        let mut acc = RootSum::zero(self.exponent);
        for (c, cl) in self.classes.iter().enumerate() {
            self.rows[a].values[c].add_product_into(&self.rows[b].values[c], &mut acc, cl.size as i64);
        }
        acc
    }

    /// Checks ⟨χ_a, χ_b⟩ = δ_ab exactly for every pair of rows.
    pub fn orthogonality_holds(&self) -> bool {
        let order = self.group_order() as i64;
        (0..self.rows.len()).all(|a| {
            (a..self.rows.len()).all(|b| {
                let ip = self.scaled_inner_product(a, b);
                ip.to_integer() == Some(if a == b { order } else { 0 })
            })
        })
    }

    pub fn sum_of_squared_degrees(&self) -> usize {
        self.rows.iter().map(|r| (r.degree * r.degree) as usize).sum()
    }

    pub fn class_sizes_sum(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }
}

/// Characters of the homology-related permutation modules, computed from the
/// combinatorics of the polygon decomposition.
#[derive(Clone, Copy, Debug)]
pub struct PermutationCharacters<'a> {
    group: &'a SymmetryGroup,
}

impl<'a> PermutationCharacters<'a> {
    pub fn new(group: &'a SymmetryGroup) -> Self {
        PermutationCharacters { group }
    }

    /// Fixed points on the half-edge labels (i', j') ∈ Ž_2k × Ž_ℓ, written in
    /// doubled odd coordinates.
    fn chi_edges(&self, g: GroupElement) -> i64 {
        let (n2, l2) = (4 * self.group.k as i64, 2 * self.group.ell as i64);
        let count = |m: i64, shift: i64, flip: bool| -> i64 {
            (0..m)
                .filter(|x| x % 2 != 0)
                .filter(|&x| {
                    let y = if flip { shift + 2 - x } else { x + shift };
                    (y - x).rem_euclid(m) == 0
                })
                .count() as i64
        };
        let count_y = |m: i64, shift: i64, flip: bool| -> i64 {
            (0..m)
                .filter(|y| y % 2 != 0)
                .filter(|&y| {
                    let z = if flip { shift - y } else { y + shift };
                    (z - y).rem_euclid(m) == 0
                })
                .count() as i64
        };
        count(n2, 2 * g.i as i64, g.flip) * count_y(l2, 2 * g.j as i64, g.flip)
    }

    /// Trace on Q^{Z_2k} with σ·e_i = −e_{1−i}.
    fn chi_vertices(&self, g: GroupElement) -> i64 {
        let n = 2 * self.group.k as i64;
        if g.flip {
            -((0..n).filter(|&i| (1 - i + g.i as i64 - i).rem_euclid(n) == 0).count() as i64)
        } else if g.i == 0 {
            n
        } else {
            0
        }
    }

    fn chi_trivial_signed(&self, g: GroupElement) -> i64 {
        if g.flip {
            -1
        } else {
            1
        }
    }

    /// Character of H_1(M, Σ; Q) from the four-term exact sequence.
    pub fn chi_rel(&self, g: GroupElement) -> i64 {
        self.chi_edges(g) - self.chi_vertices(g) + self.chi_trivial_signed(g)
    }

    /// Permutation character on the midpoints M(j').
    pub fn chi_sigma_m(&self, g: GroupElement) -> i64 {
        let l2 = 2 * self.group.ell as i64;
        let b = 2 * g.j as i64;
        (0..l2)
            .filter(|y| y % 2 != 0)
            .filter(|&y| {
                let z = if g.flip { b - y } else { y + b };
                (z - y).rem_euclid(l2) == 0
            })
            .count() as i64
    }

    /// Permutation character on the vertex classes A(Δ), indexed by i − j mod ϖ.
    pub fn chi_sigma_a(&self, g: GroupElement) -> i64 {
        let w = self.group.varpi() as i64;
        let shift = g.i as i64 - g.j as i64;
        (0..w)
            .filter(|&c| {
                let image = if g.flip { 1 - c + shift } else { c + shift };
                (image - c).rem_euclid(w) == 0
            })
            .count() as i64
    }
}

/// Results of the pointwise character identities on all of G.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionChecks {
    /// χ_rel = 1 + Σ_{R*, s≠0} χ_{r,s} (+ χ_+ + χ_− for ℓ even).
    pub rel_expansion: bool,
    /// χ_{Σ_M} = 1 + Σ_{(0,s) ∈ R*} χ_{0,s} (+ χ_+).
    pub sigma_m_expansion: bool,
    /// χ_{Σ_A} = 1 + Σ_{R*, r/2k+s/ℓ ∈ Z} χ_{r,s} (+ χ_−).
    pub sigma_a_expansion: bool,
    /// χ_ab = χ_rel − χ_{Σ_M} − χ_{Σ_A} + 1.
    pub absolute_identity: bool,
    /// χ_rel on the translation subgroup equals 1 − 2kδ_{0i} + 2kℓδ_{0i}δ_{0j}.
    pub rel_closed_form: bool,
}

impl DecompositionChecks {
    pub fn all(&self) -> bool {
        self.rel_expansion
            && self.sigma_m_expansion
            && self.sigma_a_expansion
            && self.absolute_identity
            && self.rel_closed_form
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomologyDecomposition {
    pub k: u32,
    pub ell: u32,
    /// (r, s) with 0 < r ≤ k whose χ_{r,s} occur in H_1(M; Q).
    pub summands: Vec<(u32, u32)>,
    pub hr_dims: BTreeMap<u32, usize>,
    pub total_dim: usize,
    /// χ_ab(identity).
    pub chi_ab_identity: i64,
    pub checks: DecompositionChecks,
}

/// The support of χ_ab in R(2k, ℓ).
pub fn absolute_support(group: &SymmetryGroup) -> Vec<(u32, u32)> {
    group
        .r_set()
        .into_iter()
        .filter(|&(r, s)| r != 0 && s != 0 && !group.on_a_locus(r, s))
        .collect()
}

pub fn decompose_homology(k: u32, ell: u32) -> HomologyDecomposition {
    let group = SymmetryGroup::new(k, ell);
    let pi = group.exponent();
    let perm = PermutationCharacters::new(&group);
    let r_star = group.r_star();
    let support = absolute_support(&group);
    let even = ell.is_multiple_of(2);
    let chi_plus = |g| linear_value(1, -1, -1, g);
    let chi_minus = |g| linear_value(-1, -1, -1, g);

    let expansion_matches = |target: i64, pairs: &mut dyn Iterator<Item = &(u32, u32)>, g, extra: i64| {
        let mut acc = RootSum::constant(pi, 1 + extra - target);
        for &(r, s) in pairs {
            dihedral_value(&group, r, s, g).add_into(&mut acc, 1);
        }
        acc.is_zero()
    };

    let mut checks = DecompositionChecks {
        rel_expansion: true,
        sigma_m_expansion: true,
        sigma_a_expansion: true,
        absolute_identity: true,
        rel_closed_form: true,
    };
    let mut chi_ab_identity = 0;
    for g in group.elements() {
        let rel = perm.chi_rel(g);
        let sm = perm.chi_sigma_m(g);
        let sa = perm.chi_sigma_a(g);
        let (ep, em) = if even { (chi_plus(g), chi_minus(g)) } else { (0, 0) };

        checks.rel_expansion &= expansion_matches(rel, &mut r_star.iter().filter(|p| p.1 != 0), g, ep + em);
        checks.sigma_m_expansion &= expansion_matches(sm, &mut r_star.iter().filter(|p| p.0 == 0), g, ep);
        checks.sigma_a_expansion &= expansion_matches(
            sa,
            &mut r_star.iter().filter(|p| group.on_a_locus(p.0, p.1)),
            g,
            em,
        );

        let mut ab = RootSum::constant(pi, -(rel - sm - sa + 1));
        for &(r, s) in &support {
            dihedral_value(&group, r, s, g).add_into(&mut ab, 1);
        }
        checks.absolute_identity &= ab.is_zero();
        if g == GroupElement::IDENTITY {
            chi_ab_identity = rel - sm - sa + 1;
        }
        if !g.flip {
            let (di, dj) = ((g.i == 0) as i64, (g.j == 0) as i64);
            let closed = 1 - 2 * k as i64 * di + 2 * (k * ell) as i64 * di * dj;
            checks.rel_closed_form &= rel == closed;
        }
    }

    let mut hr_dims = BTreeMap::new();
    let mut summands = Vec::new();
    for r in 1..=k {
        let ss: Vec<u32> = if r < k {
            (1..ell).filter(|&s| !group.on_a_locus(r, s)).collect()
        } else {
            (1..ell).filter(|&s| 2 * s < ell).collect()
        };
        hr_dims.insert(r, 2 * ss.len());
        summands.extend(ss.into_iter().map(|s| (r, s)));
    }
    let total_dim = hr_dims.values().sum();
    HomologyDecomposition {
        k,
        ell,
        summands,
        hr_dims,
        total_dim,
        chi_ab_identity,
        checks,
    }
}

/// Orbits of (Z_Π)^* acting on R(2k, ℓ) by t·(r, s) = (tr, ts).
pub fn galois_orbits(k: u32, ell: u32) -> Vec<Vec<(u32, u32)>> {
    let group = SymmetryGroup::new(k, ell);
    let pi = group.exponent() as i64;
    let units: Vec<i64> = (1..=pi).filter(|t| t.gcd(&pi) == 1).collect();
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for (r, s) in group.r_set() {
        if seen.contains(&(r, s)) {
            continue;
        }
        let orbit: BTreeSet<(u32, u32)> = units
            .iter()
            .map(|&t| group.r_rep(t * r as i64, t * s as i64))
            .collect();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Number of orbits of (Z_{p^C})^* on pairs in Z_{p^A} × Z_{p^B} whose
/// components have orders p^a and p^b.
pub fn orbits_with_orders(p: u64, a: u32, b: u32) -> u64 {
    if a.min(b) == 0 {
        1
    } else {
        p.pow(a.min(b) - 1) * (p - 1)
    }
}

/// Brute-force version of [`orbits_with_orders`] for a single prime block,
/// returning a map (a, b) ↦ orbit count.
pub fn prime_block_orbits(p: u64, big_a: u32, big_b: u32) -> BTreeMap<(u32, u32), u64> {
    let (ma, mb) = (p.pow(big_a), p.pow(big_b));
    let mc = ma.max(mb);
    let order_exp = |x: u64, m: u64| -> u32 {
        let ord = m / x.gcd(&m);
        let mut e = 0;
        let mut o = ord;
        while o > 1 {
            o /= p;
            e += 1;
        }
        e
    };
    let units: Vec<u64> = (1..=mc).filter(|t| t.gcd(&mc) == 1).collect();
    let mut seen = BTreeSet::new();
    let mut counts = BTreeMap::new();
    for r in 0..ma {
        for s in 0..mb {
            if seen.contains(&(r, s)) {
                continue;
            }
            for &t in &units {
                seen.insert(((t * r) % ma, (t * s) % mb));
            }
            *counts
                .entry((order_exp(r, ma), order_exp(s, mb)))
                .or_insert(0) += 1;
        }
    }
    counts
}

/// Prime factorization as (p, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// H_r is defined over Q iff r/2k ∈ {1/6, 1/4, 1/3, 1/2}.
pub fn hr_is_rational(k: u32, r: u32) -> bool {
    assert!(0 < r && r <= k);
    let (num, den) = (r as u64, 2 * k as u64);
    [(1u64, 6u64), (1, 4), (1, 3), (1, 2)]
        .iter()
        .any(|&(a, b)| num * b == den * a)
}

/// Rationality of H_r decided by invariance of its support under (Z_Π)^*.
pub fn hr_is_rational_by_orbits(k: u32, ell: u32, r: u32) -> bool {
    let group = SymmetryGroup::new(k, ell);
    let support: BTreeSet<(u32, u32)> = (1..ell)
        .filter(|&s| !(r < k && group.on_a_locus(r, s)) && !(r == k && 2 * s == ell))
        .map(|s| group.r_rep(r as i64, s as i64))
        .collect();
    let pi = group.exponent() as i64;
    (1..pi).filter(|t| t.gcd(&pi) == 1).all(|t| {
        support
            .iter()
            .all(|&(a, b)| support.contains(&group.r_rep(t * a as i64, t * b as i64)))
    })
}

/// Class index of each element, for quick lookups.
pub fn class_index(classes: &[ConjugacyClass]) -> HashMap<GroupElement, usize> {
    classes
        .iter()
        .enumerate()
        .flat_map(|(c, cl)| cl.elements.iter().map(move |&g| (g, c)))
        .collect()
}
