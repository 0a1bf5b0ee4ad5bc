//! The special algebra `S_n`, its divergence-free hull, the embedding
//! `sigma: W_{n-1} -> S_n` and the standard torus of `S_n`.

use alloc::vec::Vec;

use crate::derlie::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace};
use crate::truncpoly::{Ambient, TruncPoly};

/// Outcome of [`SnContext::contains`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InSn,
    /// Divergence zero but not in `S_n`.
    InTildeOnly,
    Outside,
}

/// `D_{i,j}{u} = D_j(u) D_i - D_i(u) D_j` (axes 0-based).
pub fn dij_generator(i: usize, j: usize, u: &TruncPoly) -> Result<Derivation> {
    let amb = u.ambient();
    amb.check_axis(i)?;
    amb.check_axis(j)?;
    if i == j {
        return Err(Error::SameAxis(i + 1));
    }
    let mut comps = alloc::vec![TruncPoly::zero(amb); amb.n()];
    comps[i] = u.derivative(j);
    comps[j] = -&u.derivative(i);
    Derivation::new(amb, comps)
}

/// `sigma(x) = x - div(x) x_n D_n` for `x` in `W_{n-1}`.
pub fn sigma_embed(x: &Derivation) -> Result<Derivation> {
    let big = x.ambient().extended()?;
    let n = big.n();
    let div = x.divergence().extend()?;
    let xn = TruncPoly::variable(big, n - 1)?;
    let correction = Derivation::single(div.mul(&xn), n - 1)?;
    Ok(&x.extend()? - &correction)
}

/// Generators `x_i D_i - x_n D_n`, `i < n`, of the torus `T_n`.
pub fn torus_tn(amb: Ambient) -> Vec<Derivation> {
    let n = amb.n();
    (0..n - 1)
        .map(|i| {
            let mut comps = alloc::vec![TruncPoly::zero(amb); n];
            comps[i] = TruncPoly::variable(amb, i).expect("axis in range");
            comps[n - 1] = -&TruncPoly::variable(amb, n - 1).expect("axis in range");
            Derivation::new(amb, comps).expect("components match ambient")
        })
        .collect()
}

/// Generators `x_i D_i` of the diagonal torus of `W_m`.
pub fn torus_prime(amb: Ambient) -> Vec<Derivation> {
    (0..amb.n())
        .map(|i| {
            Derivation::single(TruncPoly::variable(amb, i).expect("axis in range"), i)
                .expect("axis in range")
        })
        .collect()
}

/// Cached bases of `S_n` and of the divergence-free derivations.
#[derive(Clone, Debug)]
pub struct SnContext {
    amb: Ambient,
    basis: Vec<Derivation>,
    space: RowSpace,
    tilde_basis: Vec<Derivation>,
}

impl SnContext {
    pub fn new(amb: Ambient) -> Result<Self> {
        let n = amb.n();
        if n < 2 {
            return Err(Error::InvalidVariableCount(n));
        }
        let field = amb.field();
        let width = Derivation::dim(amb);
        let mut space = RowSpace::new(field, width);
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for idx in 0..amb.len() {
                    let mut u = TruncPoly::zero(amb);
                    u.set_coeff(idx, 1);
                    let d = dij_generator(i, j, &u)?;
                    if space.insert(&d.to_vector()) {
                        basis.push(d);
                    }
                }
            }
        }
        let (_, ker) = divergence_matrix(amb).rank_kernel()?;
        let tilde_basis = ker
            .iter()
            .map(|v| Derivation::from_vector(amb, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(SnContext {
            amb,
            basis,
            space,
            tilde_basis,
        })
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    /// Canonical basis of `S_n`, extracted from the generators
    /// `D_{i,j}{x^alpha}` (`i < j`, monomials in index order).
    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    pub fn tilde_basis(&self) -> &[Derivation] {
        &self.tilde_basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tilde_dim(&self) -> usize {
        self.tilde_basis.len()
    }

    pub fn contains(&self, x: &Derivation) -> Result<Membership> {
        if x.ambient() != self.amb {
            return Err(Error::AmbientMismatch);
        }
        if !x.divergence().is_zero() {
            return Ok(Membership::Outside);
        }
        Ok(if self.space.contains(&x.to_vector()) {
            Membership::InSn
        } else {
            Membership::InTildeOnly
        })
    }

    pub fn is_member(&self, x: &Derivation) -> bool {
        matches!(self.contains(x), Ok(Membership::InSn))
    }

    /// `sum_k coeffs[k] basis[k]`.
    pub fn combination(&self, coeffs: &[u32]) -> Result<Derivation> {
        if coeffs.len() != self.basis.len() {
            return Err(Error::LengthMismatch {
                expected: self.basis.len(),
                got: coeffs.len(),
            });
        }
        let mut x = Derivation::zero(self.amb);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            x.add_scaled(b, c);
        }
        Ok(x)
    }

    pub fn torus(&self) -> Vec<Derivation> {
        torus_tn(self.amb)
    }
}

/// Matrix of `div: W_n -> B_n`.
fn divergence_matrix(amb: Ambient) -> Matrix {
    let dim = Derivation::dim(amb);
    let mut m = Matrix::zeros(amb.field(), amb.len(), dim);
    for k in 0..dim {
        let b = Derivation::basis_element(amb, k).expect("index in range");
        m.set_column(k, b.divergence().coeffs());
    }
    m
}
