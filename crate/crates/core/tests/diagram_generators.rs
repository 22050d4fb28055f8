use kzcocycle_core::generators::{build_form, diagonalize_form, eigenstructure_lp, predicted_signature};
use kzcocycle_core::rauzy::{build_diagram, letters};
use kzcocycle_core::{AlphaParam, ArrowType, GeneratorSet};
use proptest::prelude::*;

fn alpha_half() -> impl Strategy<Value = AlphaParam> {
    (3i64..25)
        .prop_flat_map(|b| (1..b, Just(b)))
        .prop_filter("α < 1/2", |(a, b)| 2 * a < *b)
        .prop_map(|(a, b)| AlphaParam::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_preserve_the_form(d in 2usize..=6, a in alpha_half()) {
        let set = GeneratorSet::new(d, a).unwrap();
        let q = build_form(d, a);
        prop_assert!(q.is_hermitian());
        for (_, _, m) in set.all() {
            prop_assert!(q.preserved_by(m));
        }
    }

    #[test]
    fn top_and_bottom_are_inverse(d in 2usize..=6, a in alpha_half()) {
        let set = GeneratorSet::new(d, a).unwrap();
        for p in set.letters() {
            let t = set.get(p, ArrowType::Top).unwrap();
            let b = set.get(p, ArrowType::Bottom).unwrap();
            prop_assert!((t * b).is_identity());
        }
    }

    #[test]
    fn char_poly_and_det(d in 2usize..=5, a in alpha_half()) {
        let set = GeneratorSet::new(d, a).unwrap();
        for (i, p) in set.letters().into_iter().enumerate() {
            let e = eigenstructure_lp(d, a, p).unwrap();
            prop_assert_eq!(&e.char_poly, &e.expected_char_poly());
            prop_assert_eq!(set.top[i].det(), -a.zeta());
        }
    }

    #[test]
    fn signature_matches_ceiling_formula(d in 2usize..=10, a in alpha_half()) {
        let diag = diagonalize_form(d, a);
        let pred = predicted_signature(d, a);
        prop_assert_eq!(diag.signature, pred);
        prop_assert_eq!(diag.numeric_signature(), pred);
        prop_assert!(diag.max_closed_form_error() < 1e-10);
    }

    #[test]
    fn arrows_are_permutations(d in 2usize..=9) {
        let g = build_diagram(d).unwrap();
        prop_assert_eq!(g.len(), (1usize << (d - 1)) - 1);
        prop_assert!(g.is_bijection(ArrowType::Top));
        prop_assert!(g.is_bijection(ArrowType::Bottom));
        for v in 0..g.len() {
            let (t, b) = g.winners(v);
            prop_assert!(t > b);
            prop_assert!(letters(d).contains(&t) && letters(d).contains(&b));
        }
    }
}

#[test]
fn degenerate_kernel_is_fixed() {
    // ℓα ∈ Z: d = 3, α = 1/4 and d = 5, α = 1/3
    for (d, n, m) in [(3usize, 1i64, 4i64), (5, 1, 3), (7, 1, 4)] {
        let a = AlphaParam::new(n, m).unwrap();
        let diag = diagonalize_form(d, a);
        assert_eq!(diag.kernel.len(), 1);
        let set = GeneratorSet::new(d, a).unwrap();
        for (_, _, l) in set.all() {
            assert_eq!(l.apply(&diag.kernel[0]), diag.kernel[0]);
        }
    }
}

#[test]
fn standard_moves_agree() {
    for d in 2..=8 {
        assert!(build_diagram(d).unwrap().matches_standard_moves(), "d={d}");
    }
}
