use kzcocycle_core::generators::hodge_matches_form;
use kzcocycle_core::group::{character_table, decompose_homology};
use kzcocycle_core::surface::{intersection_pairing, singularity_profile, CycleCoefficients};
use kzcocycle_core::{CyclotomicNumber, SurfaceParams};
use proptest::prelude::*;

/// Integer coefficient vectors of length n summing to zero.
fn absolute(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n - 1).prop_map(|mut v| {
        let s: i64 = v.iter().sum();
        v.push(-s);
        v
    })
}

fn case() -> impl Strategy<Value = (u32, u32, i64, i64, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1u32..=4, 3u32..=7).prop_flat_map(|(k, ell)| {
        let n = 2 * k as usize;
        let d = ell as i64 - 1;
        let letters: Vec<i64> = (0..d).map(|i| 1 - d + 2 * i).collect();
        (
            Just(k),
            Just(ell),
            prop::sample::select(letters.clone()),
            prop::sample::select(letters),
            absolute(n),
            absolute(n),
            absolute(n),
        )
    })
}

proptest! {
    #[test]
    fn pairing_is_bilinear_and_antisymmetric((k, ell, p, q, a, b, c) in case()) {
        let params = SurfaceParams::new(k, ell).unwrap();
        let omega = |x: &CycleCoefficients, y: &CycleCoefficients| intersection_pairing(x, y, params).unwrap();
        let va = CycleCoefficients::from_ints(p, &a);
        let vb = CycleCoefficients::from_ints(q, &b);
        prop_assert_eq!(omega(&va, &vb), -omega(&vb, &va));
        prop_assert!(omega(&va, &va).is_zero());
        let sum: Vec<i64> = a.iter().zip(&c).map(|(x, y)| x + 2 * y).collect();
        let vc = CycleCoefficients::from_ints(p, &c);
        let vs = CycleCoefficients::from_ints(p, &sum);
        let two = CyclotomicNumber::from_integer(2);
        prop_assert_eq!(omega(&vs, &vb), omega(&va, &vb) + two * omega(&vc, &vb));
    }
}

#[test]
fn bookkeeping_over_the_grid() {
    for k in 1..=8 {
        for ell in 3..=12 {
            let prof = singularity_profile(SurfaceParams::new(k, ell).unwrap());
            assert!(prof.gauss_bonnet_holds(), "k={k} ℓ={ell}");
            assert!(prof.relative_dimension_holds(), "k={k} ℓ={ell}");
            assert_eq!(prof.label_discrepancy, k > 1, "k={k} ℓ={ell}");
        }
    }
}

#[test]
fn characters_and_homology() {
    for k in 1..=5 {
        for ell in 3..=9 {
            let t = character_table(k, ell);
            assert!(t.orthogonality_holds(), "k={k} ℓ={ell}");
            assert_eq!(t.sum_of_squared_degrees(), (4 * k * ell) as usize);
            let dec = decompose_homology(k, ell);
            let g = SurfaceParams::new(k, ell).unwrap().genus() as usize;
            assert!(dec.checks.all(), "k={k} ℓ={ell}");
            assert_eq!(dec.total_dim, 2 * g);
            assert_eq!(dec.chi_ab_identity, 2 * g as i64);
        }
    }
}

#[test]
fn hodge_form_cross_oracle() {
    for k in 2..=4 {
        for r in 1..k {
            for ell in 3..=7 {
                assert!(hodge_matches_form(k, ell, r).unwrap(), "k={k} r={r} ℓ={ell}");
            }
        }
    }
}
