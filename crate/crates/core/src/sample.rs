//! Seeded samplers for the property suites.
//!
//! Every trial draws from its own stream of a ChaCha8 generator keyed by
//! `(seed, trial)`, so results do not depend on how trials are scheduled.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgrp::{random_autom, Automorphism};
use crate::derlie::Derivation;
use crate::error::Result;
use crate::slices::delta_eps;
use crate::special::SnContext;
use crate::truncpoly::{Ambient, TruncPoly};

/// Name and version of the generator, recorded in reports.
pub const PRNG_NAME: &str = "chacha8/v1";

pub type TrialRng = ChaCha8Rng;

/// Independent stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform element of `B_n` supported in degrees `>= min_degree`.
pub fn random_poly<R: Rng + ?Sized>(amb: Ambient, rng: &mut R, min_degree: usize) -> TruncPoly {
    let f = amb.field();
    let mut g = TruncPoly::zero(amb);
    for idx in 0..amb.len() {
        if amb.total_degree(idx) >= min_degree {
            g.set_coeff(idx, f.random(rng));
        }
    }
    g
}

/// Uniform element of `W_n`.
pub fn random_derivation<R: Rng + ?Sized>(amb: Ambient, rng: &mut R) -> Derivation {
    random_filtered(amb, rng, -1)
}

/// Uniform element of `(W_n)_i`.
pub fn random_filtered<R: Rng + ?Sized>(amb: Ambient, rng: &mut R, i: isize) -> Derivation {
    let min = (i + 1).max(0) as usize;
    let comps = (0..amb.n()).map(|_| random_poly(amb, rng, min)).collect();
    Derivation::new(amb, comps).expect("components match ambient")
}

/// Uniform combination of the canonical basis of `S_n`.
pub fn random_sn<R: Rng + ?Sized>(ctx: &SnContext, rng: &mut R) -> Derivation {
    let f = ctx.ambient().field();
    let coeffs: Vec<u32> = (0..ctx.dim()).map(|_| f.random(rng)).collect();
    ctx.combination(&coeffs).expect("length matches basis")
}

pub fn random_vector<R: Rng + ?Sized>(amb: Ambient, rng: &mut R, len: usize) -> Vec<u32> {
    (0..len).map(|_| amb.field().random(rng)).collect()
}

/// Parameters `f_1..f_{n-1}` in the span of `x_n^2, ..., x_n^{p-1}`.
pub fn random_k_params<R: Rng + ?Sized>(amb: Ambient, rng: &mut R) -> Vec<TruncPoly> {
    let last = amb.n() - 1;
    (0..last)
        .map(|_| {
            let mut g = TruncPoly::zero(amb);
            for k in 2..amb.p() {
                g.set_coeff(k * amb.stride(last), amb.field().random(rng));
            }
            g
        })
        .collect()
}

/// Element of `(W_n)_0` whose linear part is strictly upper triangular.
///
/// Such elements are nilpotent and kill the top monomial, so their
/// constants are never just `k`.
pub fn random_nilpotent_w0<R: Rng + ?Sized>(amb: Ambient, rng: &mut R) -> Derivation {
    let mut x = random_filtered(amb, rng, 1);
    let f = amb.field();
    let mut comps = x.clone().into_comps();
    for (j, comp) in comps.iter_mut().enumerate() {
        // coefficient of x_i in the D_j component, i > j
        for i in j + 1..amb.n() {
            comp.set_coeff(amb.stride(i), f.random(rng));
        }
    }
    x = Derivation::new(amb, comps).expect("components match ambient");
    x
}

/// `sum_i lambda_i x_i D_i` plus a random element of `(W_n)_1`.
pub fn random_torus_perturbed<R: Rng + ?Sized>(amb: Ambient, rng: &mut R) -> Derivation {
    let mut x = random_filtered(amb, rng, 1);
    for i in 0..amb.n() {
        let xi = TruncPoly::variable(amb, i).expect("axis in range");
        let t = Derivation::single(xi, i).expect("axis in range");
        x.add_scaled(&t, amb.field().random(rng));
    }
    x
}

/// `g(Delta_eps)` in `W_m` for a random automorphism `g` of the given depth.
pub fn random_slice_conjugate<R: Rng + ?Sized>(
    amb: Ambient,
    rng: &mut R,
    eps: &[u32],
    depth: usize,
) -> Result<(Derivation, Automorphism)> {
    let g = random_autom(amb, rng, depth, false)?;
    let x = g.act(&delta_eps(amb, eps)?)?;
    Ok((x, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::invariants::{is_nilpotent, phi_values};

    fn amb(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..8).map(|_| trial_rng(7, 3).gen()).collect();
        let b: Vec<u32> = (0..8).map(|_| trial_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        let c: u64 = trial_rng(7, 4).gen();
        let d: u64 = trial_rng(7, 3).gen();
        assert_ne!(c, d);
    }

    #[test]
    fn filtered_samples_respect_degree() {
        let mut rng = trial_rng(1, 0);
        for i in -1..3 {
            assert!(random_filtered(amb(2), &mut rng, i).in_filtration(i));
        }
    }

    #[test]
    fn nilpotent_samples_are_nilpotent_and_not_regular() {
        for t in 0..20 {
            let x = random_nilpotent_w0(amb(2), &mut trial_rng(2, t));
            assert!(is_nilpotent(&x));
            assert!(x.constants_dim() > 1);
        }
    }

    #[test]
    fn conjugated_slice_points_keep_their_invariants() {
        let a = amb(2);
        let mut rng = trial_rng(3, 0);
        let (x, _) = random_slice_conjugate(a, &mut rng, &[2, 3], 4).unwrap();
        assert_eq!(phi_values(&x).unwrap(), alloc::vec![2, 3]);
    }
}
