//! Explicit slice elements: `Delta`, the affine family `Delta_eps` in
//! `W_{n-1}`, the fiber families `Omega^eps` in `S_n`, and the tangent space
//! decomposition along the slice.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::derlie::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace};
use crate::special::{sigma_embed, torus_tn};
use crate::truncpoly::{Ambient, TruncPoly};

/// `(x_1 ... x_k)^e` in `amb`.
fn power_product(amb: Ambient, k: usize, e: usize) -> TruncPoly {
    let mut exps = vec![0usize; amb.n()];
    for x in exps.iter_mut().take(k) {
        *x = e;
    }
    TruncPoly::monomial(amb, &exps, 1).expect("exponents below p")
}

/// `Delta = D_1 + x_1^{p-1} D_2 + ... + (x_1 ... x_{m-1})^{p-1} D_m` in `W_m`.
pub fn delta(amb: Ambient) -> Derivation {
    let p = amb.p();
    let comps = (0..amb.n()).map(|i| power_product(amb, i, p - 1)).collect();
    Derivation::new(amb, comps).expect("components match ambient")
}

/// `Delta_eps = Delta + (x_1 ... x_m)^{p-1} sum_i (-1)^{m+1-i} eps_i D_i`.
pub fn delta_eps(amb: Ambient, eps: &[u32]) -> Result<Derivation> {
    let m = amb.n();
    if eps.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: eps.len(),
        });
    }
    let f = amb.field();
    let top = power_product(amb, m, amb.p() - 1);
    let mut comps = delta(amb).into_comps();
    for (i, (&e, comp)) in eps.iter().zip(comps.iter_mut()).enumerate() {
        // 1-based index i+1, sign (-1)^{m+1-(i+1)}
        let sign = if (m - i) % 2 == 0 { e } else { f.neg(e) };
        comp.add_scaled(&top, sign);
    }
    Derivation::new(amb, comps)
}

/// Recovers `eps` from an element of the form `Delta_eps`.
pub fn epsilon_of(x: &Derivation) -> Result<Vec<u32>> {
    let amb = x.ambient();
    let m = amb.n();
    let f = amb.field();
    let diff = x - &delta(amb);
    let top = amb.top_index();
    let mut eps = Vec::with_capacity(m);
    for (i, c) in diff.comps().iter().enumerate() {
        if c.support().any(|(idx, _)| idx != top) {
            return Err(Error::NotOnSlice);
        }
        let v = c.coeff(top);
        eps.push(if (m - i) % 2 == 0 { v } else { f.neg(v) });
    }
    Ok(eps)
}

/// `(n-1)(p-2)`, the number of free coefficients in the `Omega^eps` family.
pub fn omega_parameter_dim(amb: Ambient) -> usize {
    (amb.n() - 1) * (amb.p() - 2)
}

fn check_k_parameter(f: &TruncPoly, amb: Ambient) -> Result<()> {
    if f.ambient() != amb {
        return Err(Error::AmbientMismatch);
    }
    let last = amb.n() - 1;
    if !f.depends_only_on(last) {
        return Err(Error::InvalidSliceParameter(format!(
            "{f} involves variables other than x_{}",
            amb.n()
        )));
    }
    if f.min_degree() < 2 {
        return Err(Error::InvalidSliceParameter(format!("{f} has degree below 2")));
    }
    Ok(())
}

/// `Omega^eps_{f_1..f_{n-1}}` in `S_n`, with `eps` in `k^{n-1}` and each
/// `f_i` in the span of `x_n^2, ..., x_n^{p-1}`.
pub fn omega_element(amb: Ambient, eps: &[u32], f: &[TruncPoly]) -> Result<Derivation> {
    let n = amb.n();
    if n < 2 {
        return Err(Error::InvalidVariableCount(n));
    }
    if f.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: f.len(),
        });
    }
    for fi in f {
        check_k_parameter(fi, amb)?;
    }
    let small = amb.reduced()?;
    let base = sigma_embed(&delta_eps(small, eps)?)?;
    let p = amb.p();
    let last = n - 1;
    let top = power_product(amb, last, p - 1);
    let sub = power_product(amb, last, p - 2);
    let mut comps = base.into_comps();
    let mut tail = TruncPoly::zero(amb);
    for (i, fi) in f.iter().enumerate() {
        comps[i] = &comps[i] + &top.mul(&fi.derivative(last));
        // f_i times the product of the other x_j, j < n
        let mut term = fi.clone();
        for j in (0..last).filter(|&j| j != i) {
            term = term.mul(&TruncPoly::variable(amb, j)?);
        }
        tail = &tail + &term;
    }
    comps[last] = &comps[last] + &sub.mul(&tail);
    Derivation::new(amb, comps)
}

/// Which explicit family a [`SliceElement`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceKind {
    DeltaEps,
    Omega,
    /// `sum_i eps_i (x_i D_i - x_n D_n)`.
    Torus,
}

/// A slice element with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceElement {
    pub kind: SliceKind,
    pub eps: Vec<u32>,
    pub f: Vec<TruncPoly>,
    pub realized: Derivation,
}

impl SliceElement {
    /// `Delta_eps` in `W_m` for the given ambient `B_m`.
    pub fn delta_eps(amb: Ambient, eps: &[u32]) -> Result<Self> {
        Ok(SliceElement {
            kind: SliceKind::DeltaEps,
            eps: eps.to_vec(),
            f: Vec::new(),
            realized: delta_eps(amb, eps)?,
        })
    }

    /// `Omega^eps_f` in `S_n` for the given ambient `B_n`.
    pub fn omega(amb: Ambient, eps: &[u32], f: Vec<TruncPoly>) -> Result<Self> {
        let realized = omega_element(amb, eps, &f)?;
        Ok(SliceElement {
            kind: SliceKind::Omega,
            eps: eps.to_vec(),
            f,
            realized,
        })
    }

    pub fn torus(amb: Ambient, eps: &[u32]) -> Result<Self> {
        let gens = torus_tn(amb);
        if eps.len() != gens.len() {
            return Err(Error::LengthMismatch {
                expected: gens.len(),
                got: eps.len(),
            });
        }
        let mut realized = Derivation::zero(amb);
        for (g, &e) in gens.iter().zip(eps) {
            realized.add_scaled(g, e);
        }
        Ok(SliceElement {
            kind: SliceKind::Torus,
            eps: eps.to_vec(),
            f: Vec::new(),
            realized,
        })
    }
}

/// Kernel and image of `Delta` acting on `B_n`.
#[derive(Debug, Clone)]
pub struct KernelImage {
    /// `1, x_n, ..., x_n^{p-1}`.
    pub kernel: Vec<TruncPoly>,
    /// Monomials `x^a` with `(a_1, ..., a_{n-1}) != (p-1, ..., p-1)`.
    pub image: Vec<TruncPoly>,
}

/// `K = ker Delta` and a monomial basis of `im Delta`, validated against
/// the matrix of `Delta` on `B_n`.
pub fn kernel_k_and_image(amb: Ambient) -> Result<KernelImage> {
    let n = amb.n();
    let p = amb.p();
    let last = n - 1;
    let d = delta(amb.reduced()?).extend()?;
    let kernel: Vec<TruncPoly> = (0..p)
        .map(|k| {
            let mut e = vec![0usize; n];
            e[last] = k;
            TruncPoly::monomial(amb, &e, 1)
        })
        .collect::<Result<_>>()?;
    let image: Vec<TruncPoly> = (0..amb.len())
        .filter(|&idx| (0..last).any(|ax| amb.exponent(idx, ax) != p - 1))
        .map(|idx| {
            let mut g = TruncPoly::zero(amb);
            g.set_coeff(idx, 1);
            g
        })
        .collect();
    let rho = d.rho_matrix();
    let (rank, ker) = rho.rank_kernel()?;
    let field = amb.field();
    let mut kspace = RowSpace::new(field, amb.len());
    for v in &ker {
        kspace.insert(v);
    }
    let kernel_ok = ker.len() == kernel.len() && kernel.iter().all(|g| kspace.contains(g.coeffs()));
    let mut ispace = RowSpace::new(field, amb.len());
    for c in 0..amb.len() {
        ispace.insert(&rho.column(c));
    }
    let image_ok = rank == image.len() && image.iter().all(|g| ispace.contains(g.coeffs()));
    if !kernel_ok || !image_ok {
        return Err(Error::TheoryViolation(
            "kernel or image of Delta differs from the displayed bases".into(),
        ));
    }
    Ok(KernelImage { kernel, image })
}

/// Dimensions of the tangent spaces at a point `Delta_eps` of the slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangentReport {
    /// `dim [ (W_m)_0, x ]`.
    pub orbit: usize,
    /// `dim span{ (x_1 ... x_m)^{p-1} D_i }`.
    pub slice: usize,
    pub intersection: usize,
    pub sum: usize,
    /// `dim (ker ad x  cap  (W_m)_0)`.
    pub stabilizer: usize,
    /// `dim W_m`.
    pub total: usize,
}

impl TangentReport {
    /// Orbit and slice tangents are complementary and the stabilizer in
    /// `(W_m)_0` is trivial.
    pub fn is_transverse(&self) -> bool {
        self.intersection == 0 && self.sum == self.total && self.stabilizer == 0
    }
}

/// Basis of `(W_m)_0`: canonical basis elements with no constant part.
pub fn filtration_zero_basis(amb: Ambient) -> Vec<Derivation> {
    (0..Derivation::dim(amb))
        .filter(|k| k % amb.len() != 0)
        .map(|k| Derivation::basis_element(amb, k).expect("index in range"))
        .collect()
}

pub fn tangent_decomposition(x: &Derivation) -> Result<TangentReport> {
    epsilon_of(x)?;
    let amb = x.ambient();
    let field = amb.field();
    let total = Derivation::dim(amb);
    let w0 = filtration_zero_basis(amb);
    let orbit_vecs: Vec<Vec<u32>> = w0.iter().map(|y| y.bracket(x).to_vector()).collect();
    let top = power_product(amb, amb.n(), amb.p() - 1);
    let slice_vecs: Vec<Vec<u32>> = (0..amb.n())
        .map(|i| Derivation::single(top.clone(), i).map(|d| d.to_vector()))
        .collect::<Result<_>>()?;
    let orbit = Matrix::from_columns(field, total, &orbit_vecs)?.rank()?;
    let slice = Matrix::from_columns(field, total, &slice_vecs)?.rank()?;
    let mut all = orbit_vecs;
    all.extend(slice_vecs);
    let sum = Matrix::from_columns(field, total, &all)?.rank()?;
    Ok(TangentReport {
        orbit,
        slice,
        intersection: orbit + slice - sum,
        sum,
        stabilizer: w0.len() - orbit,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::invariants::{is_nilpotent, minimal_p_polynomial, phi_values, quotient_s};
    use crate::special::SnContext;

    fn amb(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    fn xn_poly(a: Ambient, coeffs: &[(usize, i64)]) -> TruncPoly {
        let mut out = TruncPoly::zero(a);
        for &(k, c) in coeffs {
            let mut e = vec![0usize; a.n()];
            e[a.n() - 1] = k;
            out = &out + &TruncPoly::from_terms(a, &[(&e, c)]).unwrap();
        }
        out
    }

    #[test]
    fn delta_examples() {
        let a = amb(2);
        assert_eq!(delta_eps(a, &[0, 0]).unwrap(), delta(a));
        assert!(delta(a).divergence().is_zero());
        assert_eq!(phi_values(&delta_eps(a, &[1, 2]).unwrap()).unwrap(), vec![1, 2]);
        assert_eq!(epsilon_of(&delta_eps(a, &[3, 4]).unwrap()).unwrap(), vec![3, 4]);
        assert_eq!(epsilon_of(&Derivation::zero(a)).unwrap_err(), Error::NotOnSlice);
    }

    #[test]
    fn quotient_recovers_eps_exhaustively_on_w1_and_w2() {
        for m in 1..=2 {
            let a = amb(m);
            let count = 5usize.pow(m as u32);
            for code in 0..count {
                let eps: Vec<u32> = (0..m).map(|i| (code / 5usize.pow(i as u32) % 5) as u32).collect();
                let x = delta_eps(a, &eps).unwrap();
                assert_eq!(phi_values(&x).unwrap(), eps);
                assert_eq!(x.constants_dim(), 1);
                assert_eq!(minimal_p_polynomial(&x).unwrap().coeffs, eps);
            }
        }
    }

    #[test]
    fn p_powers_of_delta_modulo_m() {
        for m in 2..=3 {
            let a = amb(m);
            let x = delta_eps(a, &vec![2; m]).unwrap();
            let mut cur = x.clone();
            for i in 0..m - 1 {
                let expect_sign = if i % 2 == 0 { 1 } else { 4 };
                for (j, c) in cur.comps().iter().enumerate() {
                    let want = if j == i { expect_sign } else { 0 };
                    assert_eq!(c.constant_term(), want, "m={m} i={i} j={j}");
                }
                cur = cur.p_power();
            }
        }
    }

    #[test]
    fn omega_examples() {
        let a = amb(3);
        let ctx = SnContext::new(a).unwrap();
        let zero_f = vec![TruncPoly::zero(a); 2];
        let base = omega_element(a, &[1, 2], &zero_f).unwrap();
        assert_eq!(base, sigma_embed(&delta_eps(amb(2), &[1, 2]).unwrap()).unwrap());
        assert_eq!(omega_parameter_dim(a), 6);
        let f = vec![xn_poly(a, &[(2, 1), (4, 3)]), xn_poly(a, &[(3, 2)])];
        let x = omega_element(a, &[0, 0], &f).unwrap();
        assert!(ctx.is_member(&x));
        assert!(is_nilpotent(&x));
        let y = omega_element(a, &[3, 1], &f).unwrap();
        assert_eq!(quotient_s(&ctx, &y).unwrap().values, vec![3, 1]);
        let bad = vec![xn_poly(a, &[(1, 1)]), TruncPoly::zero(a)];
        assert!(matches!(
            omega_element(a, &[0, 0], &bad),
            Err(Error::InvalidSliceParameter(_))
        ));
        let mixed = vec![TruncPoly::variable(a, 0).unwrap().pow(2), TruncPoly::zero(a)];
        assert!(matches!(
            omega_element(a, &[0, 0], &mixed),
            Err(Error::InvalidSliceParameter(_))
        ));
    }

    #[test]
    fn kernel_and_image_of_delta() {
        for n in 2..=3 {
            let a = amb(n);
            let ki = kernel_k_and_image(a).unwrap();
            assert_eq!(ki.kernel.len(), 5);
            assert_eq!(ki.image.len(), a.len() - 5);
            let d = delta(a.reduced().unwrap()).extend().unwrap();
            assert!(d.apply(&TruncPoly::variable(a, n - 1).unwrap()).is_zero());
        }
    }

    #[test]
    fn tangent_dims_on_w2() {
        let a = amb(2);
        let r = tangent_decomposition(&delta_eps(a, &[4, 1]).unwrap()).unwrap();
        assert_eq!((r.orbit, r.slice, r.intersection, r.sum), (48, 2, 0, 50));
        assert!(r.is_transverse());
        assert_eq!(
            tangent_decomposition(&Derivation::zero(a)).unwrap_err(),
            Error::NotOnSlice
        );
    }

    #[test]
    fn torus_slice_element() {
        let a = amb(3);
        let t = SliceElement::torus(a, &[1, 0]).unwrap();
        assert_eq!(t.realized, torus_tn(a)[0]);
    }
}
