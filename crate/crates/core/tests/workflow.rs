//! End-to-end use of the public API across modules.

use cartan_core::autgrp::{bukong_degeneration, compose, random_autom};
use cartan_core::invariants::{
    differential_rank, is_nilpotent, jordan_chevalley, minimal_p_polynomial, phi_values,
    quotient_s, regularity_classify,
};
use cartan_core::sample::{random_derivation, random_slice_conjugate, random_sn, trial_rng};
use cartan_core::slices::{delta_eps, epsilon_of, tangent_decomposition};
use cartan_core::special::sigma_embed;
use cartan_core::{Ambient, Field, Route, SnContext};

fn amb(n: usize) -> Ambient {
    Ambient::new(Field::prime(5).unwrap(), n).unwrap()
}

#[test]
fn conjugated_slice_points_recover_their_parameter() {
    let a = amb(2);
    for t in 0..10 {
        let mut rng = trial_rng(11, t);
        let eps = [t as u32 % 5, (t as u32 * 3 + 1) % 5];
        let (x, g) = random_slice_conjugate(a, &mut rng, &eps, 3).unwrap();
        assert_eq!(phi_values(&x).unwrap(), eps);
        let back = g.inverse().act(&x).unwrap();
        assert_eq!(epsilon_of(&back).unwrap(), eps);
        let flags = regularity_classify(&x, Route::Auto).unwrap();
        assert!(flags.u1 && flags.u3);
        assert_eq!(differential_rank(&x, Route::Dual).unwrap(), 2);
        assert_eq!(minimal_p_polynomial(&x).unwrap().coeffs, eps);
    }
}

#[test]
fn group_action_composes_and_preserves_the_quotient() {
    let a = amb(2);
    let mut rng = trial_rng(3, 0);
    let g = random_autom(a, &mut rng, 3, false).unwrap();
    let h = random_autom(a, &mut rng, 3, false).unwrap();
    let x = random_derivation(a, &mut rng);
    let gh = compose(&g, &h).unwrap();
    assert_eq!(gh.act(&x).unwrap(), g.act(&h.act(&x).unwrap()).unwrap());
    assert_eq!(phi_values(&gh.act(&x).unwrap()).unwrap(), phi_values(&x).unwrap());
}

#[test]
fn special_quotient_of_embedded_slice() {
    let ctx = SnContext::new(amb(3)).unwrap();
    let x = sigma_embed(&delta_eps(amb(2), &[1, 2]).unwrap()).unwrap();
    let q = quotient_s(&ctx, &x).unwrap();
    assert_eq!(q.values, [1, 2]);
    assert_eq!(q.to_string(), "(1, 2)");
}

#[test]
fn special_elements_have_vanishing_phi0_and_split() {
    let ctx = SnContext::new(amb(3)).unwrap();
    let mut rng = trial_rng(5, 1);
    for _ in 0..3 {
        let x = random_sn(&ctx, &mut rng);
        assert_eq!(phi_values(&x).unwrap()[0], 0);
        let (s, n) = jordan_chevalley(&x).unwrap();
        assert!(is_nilpotent(&n));
        assert_eq!(&s + &n, x);
    }
}

#[test]
fn degeneration_limit_is_the_embedded_slice_point() {
    let a = amb(3);
    let ctx = SnContext::new(a).unwrap();
    let x = sigma_embed(&delta_eps(amb(2), &[3, 1]).unwrap()).unwrap();
    let d = bukong_degeneration(&x, None).unwrap();
    assert_eq!(d.limit(), d.expected_limit().unwrap());
    assert!(ctx.is_member(&d.limit()));
    let q = quotient_s(&ctx, &x).unwrap();
    for c in 1..5 {
        assert_eq!(quotient_s(&ctx, &d.member(c)).unwrap(), q);
    }
}

#[test]
fn tangent_spaces_at_slice_points_are_complementary() {
    let r = tangent_decomposition(&delta_eps(amb(2), &[2, 4]).unwrap()).unwrap();
    assert_eq!((r.orbit, r.slice, r.intersection, r.sum), (48, 2, 0, 50));
    assert!(r.is_transverse());
}
