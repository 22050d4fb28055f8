use kzcocycle_bench::{alpha, dense_cyclotomic, dense_product};
use kzcocycle_core::generators::build_form;

#[test]
fn fixtures_are_nontrivial() {
    assert!(!dense_cyclotomic(24, 1).is_zero());
    let a = alpha(3, 10);
    let m = dense_product(5, a);
    assert!(!m.is_identity());
    assert!(build_form(5, a).preserved_by(&m));
}
