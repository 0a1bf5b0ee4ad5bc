use cartan_core::{Ambient, Derivation, Field, RowSpace, SnContext};

fn check(p: u32, n: usize) {
    let amb = Ambient::new(Field::prime(p).unwrap(), n).unwrap();
    let pn = amb.len();
    let dim = Derivation::dim(amb);
    let mut span = RowSpace::new(amb.field(), dim);
    for k in 0..dim {
        assert!(span.insert(&Derivation::basis_element(amb, k).unwrap().to_vector()));
    }
    assert_eq!(span.dim(), n * pn);
    let ctx = SnContext::new(amb).unwrap();
    assert_eq!(ctx.dim(), (n - 1) * (pn - 1));
    assert_eq!(ctx.tilde_dim(), (n - 1) * pn + 1);
}

#[test]
fn w2_and_s2_over_f5() {
    check(5, 2);
}

#[test]
fn w3_and_s3_over_f5() {
    check(5, 3);
}

#[test]
fn w2_and_s2_over_f7() {
    check(7, 2);
}

#[test]
fn w3_over_f5_has_375_elements_and_s3_has_248() {
    let amb = Ambient::new(Field::prime(5).unwrap(), 3).unwrap();
    assert_eq!(Derivation::dim(amb), 375);
    let ctx = SnContext::new(amb).unwrap();
    assert_eq!((ctx.dim(), ctx.tilde_dim()), (248, 251));
}
