//! Automorphisms of `B_n` and their action on `W_n` by conjugation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::derlie::Derivation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::special::sigma_embed;
use crate::truncpoly::{monomial_images, substitute_with, Ambient, TruncPoly};

/// Attempts made by [`random_autom`] before giving up.
pub const RESAMPLE_BUDGET: usize = 64;

/// An algebra automorphism `phi` of `B_n`, stored through the images
/// `phi(x_i)` and those of its inverse.
#[derive(Clone)]
pub struct Automorphism {
    amb: Ambient,
    images: Vec<TruncPoly>,
    inverse: Vec<TruncPoly>,
    // phi(x^alpha) and phi^{-1}(x^alpha) for every monomial
    forward: Vec<TruncPoly>,
    backward: Vec<TruncPoly>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.amb == other.amb && self.images == other.images
    }
}

impl Eq for Automorphism {}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.images).finish()
    }
}

/// Linear part of a list of images in the maximal ideal.
fn linear_part(amb: Ambient, images: &[TruncPoly]) -> Matrix {
    Matrix::from_fn(amb.field(), amb.n(), amb.n(), |i, j| {
        images[i].coeff(amb.stride(j))
    })
}

/// Determinant over the field, read off the characteristic polynomial.
fn det(m: &Matrix) -> u32 {
    let f = m.ring();
    let c0 = m.charpoly().expect("square matrix")[0];
    if m.rows() % 2 == 0 {
        c0
    } else {
        f.neg(c0)
    }
}

/// Determinant of a square matrix over `B_n` by Laplace expansion.
fn poly_det(rows: &[Vec<TruncPoly>], amb: Ambient) -> TruncPoly {
    let k = rows.len();
    if k == 0 {
        return TruncPoly::one(amb);
    }
    let mut acc = TruncPoly::zero(amb);
    for (c, lead) in rows[0].iter().enumerate() {
        if lead.is_zero() {
            continue;
        }
        let minor: Vec<Vec<TruncPoly>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = lead.mul(&poly_det(&minor, amb));
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl Automorphism {
    pub fn identity(amb: Ambient) -> Self {
        let images = (0..amb.n())
            .map(|i| TruncPoly::variable(amb, i).expect("axis in range"))
            .collect();
        Self::new(amb, images).expect("identity is invertible")
    }

    /// Validates the images `phi(x_1), ..., phi(x_n)` and inverts them.
    pub fn new(amb: Ambient, images: Vec<TruncPoly>) -> Result<Self> {
        let n = amb.n();
        if images.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: images.len(),
            });
        }
        if images.iter().any(|g| g.ambient() != amb) {
            return Err(Error::AmbientMismatch);
        }
        if let Some(axis) = images.iter().position(|g| !g.in_maximal_ideal()) {
            return Err(Error::ConstantTerm { axis });
        }
        let lin = linear_part(amb, &images);
        if lin.rank()? < n {
            return Err(Error::SingularLinearPart);
        }
        let inverse = invert(amb, &images, &lin)?;
        Ok(Automorphism {
            amb,
            forward: monomial_images(&images),
            backward: monomial_images(&inverse),
            images,
            inverse,
        })
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn images(&self) -> &[TruncPoly] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[TruncPoly] {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Automorphism {
            amb: self.amb,
            images: self.inverse.clone(),
            inverse: self.images.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `phi(f) = f(phi(x_1), ..., phi(x_n))`.
    pub fn apply(&self, f: &TruncPoly) -> Result<TruncPoly> {
        if f.ambient() != self.amb {
            return Err(Error::AmbientMismatch);
        }
        Ok(substitute_with(f, &self.forward, self.amb))
    }

    pub fn apply_inverse(&self, f: &TruncPoly) -> Result<TruncPoly> {
        if f.ambient() != self.amb {
            return Err(Error::AmbientMismatch);
        }
        Ok(substitute_with(f, &self.backward, self.amb))
    }

    /// `g(D) = phi o D o phi^{-1}`.
    pub fn act(&self, d: &Derivation) -> Result<Derivation> {
        if d.ambient() != self.amb {
            return Err(Error::AmbientMismatch);
        }
        let comps = self
            .inverse
            .iter()
            .map(|psi| self.apply(&d.apply(psi)))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(self.amb, comps)
    }

    /// `det(d_i phi(x_j))` as an element of `B_n`.
    pub fn jacobian_determinant(&self) -> TruncPoly {
        let rows: Vec<Vec<TruncPoly>> = (0..self.amb.n())
            .map(|i| self.images.iter().map(|g| g.derivative(i)).collect())
            .collect();
        poly_det(&rows, self.amb)
    }

    /// The Jacobian determinant is a nonzero constant.
    pub fn is_special(&self) -> bool {
        let j = self.jacobian_determinant();
        j.is_constant() && j.constant_term() != 0
    }
}

/// Solves `images_i(psi) = x_i` by the iteration `psi <- L^{-1}(x - h(psi))`,
/// where `L` is the linear part and `h` the higher-order part.
fn invert(amb: Ambient, images: &[TruncPoly], lin: &Matrix) -> Result<Vec<TruncPoly>> {
    let n = amb.n();
    let field = amb.field();
    let mut lin_inv = Matrix::zeros(field, n, n);
    for c in 0..n {
        let mut e = vec![0u32; n];
        e[c] = 1;
        let col = lin.solve(&e)?.ok_or(Error::SingularLinearPart)?;
        lin_inv.set_column(c, &col);
    }
    let higher: Vec<TruncPoly> = images
        .iter()
        .map(|g| {
            let mut h = g.clone();
            for j in 0..n {
                h.set_coeff(amb.stride(j), 0);
            }
            h
        })
        .collect();
    let xs: Vec<TruncPoly> = (0..n)
        .map(|i| TruncPoly::variable(amb, i))
        .collect::<Result<_>>()?;
    let apply_lin_inv = |v: &[TruncPoly]| -> Vec<TruncPoly> {
        (0..n)
            .map(|i| {
                let mut acc = TruncPoly::zero(amb);
                for (j, vj) in v.iter().enumerate() {
                    acc.add_scaled(vj, lin_inv.get(i, j));
                }
                acc
            })
            .collect()
    };
    let mut psi = apply_lin_inv(&xs);
    let rounds = n * (amb.p() - 1);
    for _ in 0..=rounds {
        let powers = monomial_images(&psi);
        let rhs: Vec<TruncPoly> = xs
            .iter()
            .zip(&higher)
            .map(|(x, h)| x - &substitute_with(h, &powers, amb))
            .collect();
        let next = apply_lin_inv(&rhs);
        if next == psi {
            return Ok(psi);
        }
        psi = next;
    }
    Err(Error::TheoryViolation(
        "inverse iteration did not stabilise within n(p-1) rounds".into(),
    ))
}

/// Validated automorphism from the images of the generators.
pub fn make_autom(amb: Ambient, images: Vec<TruncPoly>) -> Result<Automorphism> {
    Automorphism::new(amb, images)
}

/// `g o h`: first `h`, then `g`, so `(g o h)(x_i) = h_i(g(x_1), ..., g(x_n))`.
pub fn compose(g: &Automorphism, h: &Automorphism) -> Result<Automorphism> {
    if g.amb != h.amb {
        return Err(Error::AmbientMismatch);
    }
    let images = h
        .images
        .iter()
        .map(|hi| g.apply(hi))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::new(g.amb, images)
}

pub fn act(g: &Automorphism, d: &Derivation) -> Result<Derivation> {
    g.act(d)
}

pub fn is_special(g: &Automorphism) -> bool {
    g.is_special()
}

/// `x_n -> c x_n`, other generators fixed.
pub fn scale_last(amb: Ambient, c: u32) -> Result<Automorphism> {
    let n = amb.n();
    let mut images: Vec<TruncPoly> = (0..n)
        .map(|i| TruncPoly::variable(amb, i))
        .collect::<Result<_>>()?;
    images[n - 1] = images[n - 1].scale(c);
    Automorphism::new(amb, images)
}

/// Exchanges `x_i` and `x_j`.
pub fn swap_axes(amb: Ambient, i: usize, j: usize) -> Result<Automorphism> {
    amb.check_axis(i)?;
    amb.check_axis(j)?;
    let mut images: Vec<TruncPoly> = (0..amb.n())
        .map(|k| TruncPoly::variable(amb, k))
        .collect::<Result<_>>()?;
    images.swap(i, j);
    Automorphism::new(amb, images)
}

/// Random polynomial supported on monomials of total degree `2..=depth`
/// that avoid the axes flagged in `skip`.
fn random_higher<R: Rng + ?Sized>(
    amb: Ambient,
    rng: &mut R,
    depth: usize,
    skip: Option<usize>,
) -> TruncPoly {
    let f = amb.field();
    let mut g = TruncPoly::zero(amb);
    for idx in 0..amb.len() {
        let d = amb.total_degree(idx);
        if d < 2 || d > depth {
            continue;
        }
        if let Some(axis) = skip {
            if amb.exponent(idx, axis) > 0 {
                continue;
            }
        }
        g.set_coeff(idx, f.random(rng));
    }
    g
}

fn random_linear<R: Rng + ?Sized>(amb: Ambient, rng: &mut R, unimodular: bool) -> Result<Matrix> {
    let f = amb.field();
    let n = amb.n();
    for _ in 0..RESAMPLE_BUDGET {
        let mut m = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, f.random(rng));
            }
        }
        let d = det(&m);
        if d == 0 {
            continue;
        }
        if unimodular {
            let s = f.inv(d).expect("nonzero");
            for c in 0..n {
                m.set(0, c, f.mul(m.get(0, c), s));
            }
        }
        return Ok(m);
    }
    Err(Error::ResampleBudgetExhausted)
}

fn linear_automorphism(amb: Ambient, m: &Matrix) -> Result<Automorphism> {
    let images = (0..amb.n())
        .map(|i| {
            let mut g = TruncPoly::zero(amb);
            for j in 0..amb.n() {
                g.set_coeff(amb.stride(j), m.get(i, j));
            }
            g
        })
        .collect();
    Automorphism::new(amb, images)
}

/// Random automorphism with a random invertible linear part and random
/// terms of degree up to `depth`.
///
/// With `special`, the linear part has determinant 1 and the nonlinear part
/// is a product of elementary maps `x_i -> x_i + h(other variables)`.
pub fn random_autom<R: Rng + ?Sized>(
    amb: Ambient,
    rng: &mut R,
    depth: usize,
    special: bool,
) -> Result<Automorphism> {
    for _ in 0..RESAMPLE_BUDGET {
        let lin = linear_automorphism(amb, &random_linear(amb, rng, special)?)?;
        let g = if special {
            let mut g = lin;
            for axis in 0..amb.n() {
                let mut images: Vec<TruncPoly> = (0..amb.n())
                    .map(|i| TruncPoly::variable(amb, i))
                    .collect::<Result<_>>()?;
                let h = random_higher(amb, rng, depth, Some(axis));
                images[axis] = &images[axis] + &h;
                g = compose(&g, &Automorphism::new(amb, images)?)?;
            }
            g
        } else {
            let images = lin
                .images()
                .iter()
                .map(|l| l + &random_higher(amb, rng, depth, None))
                .collect();
            match Automorphism::new(amb, images) {
                Ok(g) => g,
                Err(Error::SingularLinearPart) => continue,
                Err(e) => return Err(e),
            }
        };
        if !special || g.is_special() {
            return Ok(g);
        }
    }
    Err(Error::ResampleBudgetExhausted)
}

/// The one-parameter family attached to an element of `S_n` whose
/// `i_0`-th component is divisible by `x_{i_0}`.
///
/// After exchanging `x_{i_0}` and `x_n`, the family is
/// `g_c(x) = sum_{i<n} f_i(x', c x_n) D_i + sum_j f_{n,j} c^{j-1} x_n^j D_n`,
/// which for `c != 0` is the image of `x` under `x_n -> c x_n`.
#[derive(Clone, Debug)]
pub struct Degeneration {
    axis: usize,
    normalized: Derivation,
}

impl Degeneration {
    /// The original divisible axis (0-based).
    pub fn axis(&self) -> usize {
        self.axis
    }

    /// `x` after moving the divisible axis to the last position.
    pub fn normalized(&self) -> &Derivation {
        &self.normalized
    }

    /// `g_c(x)`; `c = 0` gives the limit.
    pub fn member(&self, c: u32) -> Derivation {
        let amb = self.normalized.ambient();
        let f = amb.field();
        let last = amb.n() - 1;
        let comps = self
            .normalized
            .comps()
            .iter()
            .enumerate()
            .map(|(i, fi)| {
                if i < last {
                    fi.weight_axis(last, |e| f.pow(c, e as u64))
                } else {
                    // every exponent is at least 1 by divisibility
                    fi.weight_axis(last, |e| f.pow(c, e.saturating_sub(1) as u64))
                }
            })
            .collect();
        Derivation::new(amb, comps).expect("same ambient")
    }

    pub fn limit(&self) -> Derivation {
        self.member(0)
    }

    /// `Delta_1 = sum_{i<n} f_i(x', 0) D_i` in `W_{n-1}`.
    pub fn delta_one(&self) -> Result<Derivation> {
        let amb = self.normalized.ambient();
        let small = amb.reduced()?;
        let comps = self.normalized.comps()[..amb.n() - 1]
            .iter()
            .map(TruncPoly::restrict_last_to_zero)
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(small, comps)
    }

    /// `sigma(Delta_1)`, which the limit should equal.
    pub fn expected_limit(&self) -> Result<Derivation> {
        sigma_embed(&self.delta_one()?)
    }

    /// `g_c(x)` computed through the scaling automorphism, `c != 0`.
    pub fn member_via_action(&self, c: u32) -> Result<Derivation> {
        if c == 0 {
            return Err(Error::DivisionByZero);
        }
        scale_last(self.normalized.ambient(), c)?.act(&self.normalized)
    }
}

/// Builds the degeneration family at `axis`, or at the first axis whose
/// component is divisible by the matching variable.
pub fn bukong_degeneration(x: &Derivation, axis: Option<usize>) -> Result<Degeneration> {
    let amb = x.ambient();
    let divisible = |i: usize| x.comp(i).divisible_by_variable(i);
    let axis = match axis {
        Some(i) => {
            amb.check_axis(i)?;
            if !divisible(i) {
                return Err(Error::NoDivisibleAxis);
            }
            i
        }
        None => (0..amb.n()).find(|&i| divisible(i)).ok_or(Error::NoDivisibleAxis)?,
    };
    let last = amb.n() - 1;
    let normalized = if axis == last {
        x.clone()
    } else {
        swap_axes(amb, axis, last)?.act(x)?
    };
    Ok(Degeneration { axis, normalized })
}
