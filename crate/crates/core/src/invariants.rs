//! Coefficients of the characteristic polynomial of the tautological
//! representation, adjoint quotient maps, their differentials, regularity,
//! nilpotency and Jordan-Chevalley decomposition.
//!
//! For `x` in `W_n` the characteristic polynomial of `rho(x)` has the shape
//! `t^{p^n} - sum_i phi_i(x) t^{p^i}`; any other nonzero coefficient is
//! reported as [`Error::TheoryViolation`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::derlie::Derivation;
use crate::error::{Error, Result};
use crate::ffield::{fmt_elem, Dual, DualRing, Field};
use crate::linalg::{solve_in_span, span_dim, Matrix, RowSpace};
use crate::special::{Membership, SnContext};
use crate::truncpoly::Ambient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    W,
    S,
}

/// Values of the invariants at one element.
///
/// For `W_n`, `values = (phi_0, ..., phi_{n-1})`. For `S_n`, `values` holds
/// the `p`-th roots `(phi_1^{1/p}, ..., phi_{n-1}^{1/p})`. `raw` is always the
/// full `phi` vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantVector {
    pub algebra: Algebra,
    pub field: Field,
    pub values: Vec<u32>,
    pub raw: Vec<u32>,
}

impl InvariantVector {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            fmt_elem(&self.field, v, f)?;
        }
        write!(f, ")")
    }
}

/// `t^{p^r} - sum_{i<r} coeffs[i] t^{p^i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PPolynomial {
    pub field: Field,
    pub coeffs: Vec<u32>,
}

impl PPolynomial {
    /// The exponent `r` of the leading term `t^{p^r}`.
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> u64 {
        (self.field.characteristic() as u64).pow(self.rank() as u32)
    }

    /// Dense ascending coefficients.
    pub fn to_dense(&self) -> Vec<u32> {
        let p = self.field.characteristic() as usize;
        let mut out = vec![0u32; self.degree() as usize + 1];
        *out.last_mut().unwrap() = 1;
        let mut e = 1usize;
        for &c in &self.coeffs {
            out[e] = self.field.neg(c);
            e *= p;
        }
        out
    }
}

impl fmt::Display for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", self.degree())?;
        let p = self.field.characteristic() as u64;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            write!(f, " - ")?;
            if c != 1 {
                fmt_elem(&self.field, c, f)?;
                write!(f, "*")?;
            }
            write!(f, "t^{}", p.pow(i as u32))?;
        }
        Ok(())
    }
}

/// Reads `(phi_0, ..., phi_{n-1})` off a dense characteristic polynomial,
/// checking that only `p`-power slots are occupied.
fn p_shape<T: Copy>(
    cp: &[T],
    amb: Ambient,
    is_zero: impl Fn(T) -> bool,
) -> Result<Vec<T>> {
    let p = amb.p();
    let n = amb.n();
    let d = amb.len();
    if cp.len() != d + 1 {
        return Err(Error::TheoryViolation(format!(
            "characteristic polynomial of degree {} for a space of dimension {d}",
            cp.len() - 1
        )));
    }
    let mut slots = Vec::with_capacity(n);
    let mut next_power = 1usize;
    for (j, &c) in cp.iter().enumerate().take(d) {
        if j == next_power {
            slots.push(c);
            next_power *= p;
        } else if !is_zero(c) {
            return Err(Error::TheoryViolation(format!(
                "coefficient of t^{j} is nonzero; the characteristic polynomial is not a p-polynomial"
            )));
        }
    }
    Ok(slots)
}

/// `(phi_0(x), ..., phi_{n-1}(x))` as a plain vector.
pub fn phi_values(x: &Derivation) -> Result<Vec<u32>> {
    let amb = x.ambient();
    let f = amb.field();
    let cp = x.rho_matrix().charpoly()?;
    Ok(p_shape(&cp, amb, |c| c == 0)?
        .into_iter()
        .map(|c| f.neg(c))
        .collect())
}

pub fn phi_vector(x: &Derivation) -> Result<InvariantVector> {
    let raw = phi_values(x)?;
    Ok(InvariantVector {
        algebra: Algebra::W,
        field: x.ambient().field(),
        values: raw.clone(),
        raw,
    })
}

/// The adjoint quotient of `W_n`.
pub fn quotient_w(x: &Derivation) -> Result<Vec<u32>> {
    phi_values(x)
}

/// The adjoint quotient of `S_n`: `(phi_1^{1/p}, ..., phi_{n-1}^{1/p})`.
pub fn quotient_s(ctx: &SnContext, x: &Derivation) -> Result<InvariantVector> {
    if ctx.contains(x)? != Membership::InSn {
        return Err(Error::NotInSn);
    }
    quotient_s_unchecked(x)
}

/// [`quotient_s`] without the membership test; `phi_0` is still checked.
pub fn quotient_s_unchecked(x: &Derivation) -> Result<InvariantVector> {
    let f = x.ambient().field();
    let raw = phi_values(x)?;
    if raw[0] != 0 {
        return Err(Error::TheoryViolation(format!(
            "phi_0 = {} on an element of S_n",
            raw[0]
        )));
    }
    Ok(InvariantVector {
        algebra: Algebra::S,
        field: f,
        values: raw[1..].iter().map(|&v| f.pth_root(v)).collect(),
        raw,
    })
}

/// Characteristic polynomial of `rho(x) + eps rho(y)` over the dual numbers.
pub fn dual_charpoly(x: &Derivation, y: &Derivation) -> Result<Vec<Dual>> {
    if x.ambient() != y.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let f = x.ambient().field();
    let (rx, ry) = (x.rho_matrix(), y.rho_matrix());
    let d = rx.rows();
    let m = Matrix::from_fn(DualRing(f), d, d, |r, c| Dual::new(rx.get(r, c), ry.get(r, c)));
    m.charpoly_berkowitz()
}

/// `((d phi_0)_x(y), ..., (d phi_{n-1})_x(y))` via first-order deformation.
pub fn phi_differential(x: &Derivation, y: &Derivation) -> Result<Vec<u32>> {
    let amb = x.ambient();
    let f = amb.field();
    let cp = dual_charpoly(x, y)?;
    Ok(p_shape(&cp, amb, |c| c.re == 0 && c.eps == 0)?
        .into_iter()
        .map(|c| f.neg(c.eps))
        .collect())
}

/// Gradient matrices `G_i` with `(d phi_i)_x(y) = tr(G_i rho(y))`.
///
/// `G_i` is the coefficient of `t^{p^i}` in `adj(t - rho(x))`, i.e.
/// `A^{p^n - p^i - 1} - sum_{l > i} phi_l A^{p^l - p^i - 1}`.
pub fn phi_gradients(x: &Derivation, phi: &[u32]) -> Result<Vec<Matrix>> {
    let amb = x.ambient();
    let (p, n) = (amb.p() as u64, amb.n());
    let a = x.rho_matrix();
    let pk = |k: usize| p.pow(k as u32);
    (0..n)
        .map(|i| {
            let mut g = a.mat_power(pk(n) - pk(i) - 1)?;
            for (l, &phl) in phi.iter().enumerate().skip(i + 1) {
                if phl != 0 {
                    let t = a.mat_power(pk(l) - pk(i) - 1)?;
                    g.add_scaled(&t, amb.field().neg(phl))?;
                }
            }
            Ok(g)
        })
        .collect()
}

/// `(d phi_i)_x(y)` through [`phi_gradients`].
pub fn phi_differential_adjugate(x: &Derivation, y: &Derivation) -> Result<Vec<u32>> {
    if x.ambient() != y.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let f = x.ambient().field();
    let phi = phi_values(x)?;
    let ry = y.rho_matrix();
    let d = ry.rows();
    Ok(phi_gradients(x, &phi)?
        .iter()
        .map(|g| {
            let mut acc = 0u32;
            for r in 0..d {
                for c in 0..d {
                    acc = f.add(acc, f.mul(g.get(r, c), ry.get(c, r)));
                }
            }
            acc
        })
        .collect())
}

/// `tr(G rho(x^alpha D_j))` for the canonical basis element with index `k`.
fn trace_against_basis(g: &Matrix, amb: Ambient, k: usize) -> u32 {
    let f = amb.field();
    let (j, alpha) = (k / amb.len(), k % amb.len());
    let mut acc = 0u32;
    // rho(x^alpha D_j) sends x^beta to beta_j x^{alpha + beta - e_j}
    for beta in 0..amb.len() {
        let bj = amb.exponent(beta, j);
        if bj == 0 {
            continue;
        }
        let fits = (0..amb.n()).all(|ax| {
            let s = amb.exponent(alpha, ax) + amb.exponent(beta, ax);
            let s = if ax == j { s - 1 } else { s };
            s < amb.p()
        });
        if !fits {
            continue;
        }
        let image = alpha + beta - amb.stride(j);
        acc = f.add(acc, f.mul(g.get(beta, image), f.from_int(bj as i64)));
    }
    acc
}

/// How the differential of the quotient is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// One dual-number characteristic polynomial per direction.
    Dual,
    /// Traces against the adjugate coefficients of `t - rho(x)`.
    Adjugate,
    /// Image of `M_{ad x}` when the `p`-powers of `x` are independent,
    /// otherwise `Dual` on small ambients and `Adjugate` on large ones.
    Auto,
}

/// Largest `p^n` for which `Route::Auto` falls back to dual numbers.
pub const AUTO_DUAL_LIMIT: usize = 64;

/// The `n x dim W_n` matrix of `(d phi_i)_x` on the canonical basis.
pub fn differential_matrix(x: &Derivation, route: Route) -> Result<Matrix> {
    let amb = x.ambient();
    let n = amb.n();
    let dim = Derivation::dim(amb);
    let mut m = Matrix::zeros(amb.field(), n, dim);
    match route {
        Route::Dual | Route::Auto => {
            for k in 0..dim {
                let b = Derivation::basis_element(amb, k)?;
                for (i, v) in phi_differential(x, &b)?.into_iter().enumerate() {
                    m.set(i, k, v);
                }
            }
        }
        Route::Adjugate => {
            let phi = phi_values(x)?;
            for (i, g) in phi_gradients(x, &phi)?.iter().enumerate() {
                for k in 0..dim {
                    m.set(i, k, trace_against_basis(g, amb, k));
                }
            }
        }
    }
    Ok(m)
}

/// `x, x^{[p]}, ..., x^{[p]^{k-1}}`.
pub fn p_powers(x: &Derivation, k: usize) -> Vec<Derivation> {
    let mut out = Vec::with_capacity(k);
    let mut cur = x.clone();
    for _ in 0..k {
        let next = cur.p_power();
        out.push(cur);
        cur = next;
    }
    out
}

/// `M_{ad x}(y) = (ad x)^{p^n - 1}(y) - sum_i phi_i (ad x)^{p^i - 1}(y)`.
pub fn m_adx_apply(x: &Derivation, y: &Derivation, phi: &[u32]) -> Result<Derivation> {
    if x.ambient() != y.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let amb = x.ambient();
    let f = amb.field();
    let (p, n) = (amb.p(), amb.n());
    let top = amb.len() - 1;
    let mut out = Derivation::zero(amb);
    let mut cur = y.clone();
    let mut next_power = 1usize;
    let mut i = 0;
    for step in 0..=top {
        if step == next_power - 1 && i < n {
            out.add_scaled(&cur, f.neg(phi[i]));
            i += 1;
            next_power *= p;
        }
        if step == top {
            break;
        }
        cur = x.bracket(&cur);
        if cur.is_zero() {
            break;
        }
    }
    if !cur.is_zero() {
        out = &out + &cur;
    }
    Ok(out)
}

/// `M_{ad x}` as a matrix on `W_n`.
pub fn m_adx_matrix(x: &Derivation, phi: &[u32]) -> Result<Matrix> {
    let amb = x.ambient();
    let (p, n) = (amb.p() as u64, amb.n());
    let a = x.ad_matrix();
    let mut m = a.mat_power(p.pow(n as u32) - 1)?;
    for (i, &ph) in phi.iter().enumerate() {
        if ph != 0 {
            let t = a.mat_power(p.pow(i as u32) - 1)?;
            m.add_scaled(&t, amb.field().neg(ph))?;
        }
    }
    Ok(m)
}

pub fn m_adx_image_dim(x: &Derivation) -> Result<usize> {
    let phi = phi_values(x)?;
    m_adx_matrix(x, &phi)?.rank()
}

/// `sum_i c_i x^{[p]^i}`.
pub fn combine_p_powers(x: &Derivation, coeffs: &[u32]) -> Derivation {
    let mut out = Derivation::zero(x.ambient());
    for (xp, &c) in p_powers(x, coeffs.len()).iter().zip(coeffs) {
        out.add_scaled(xp, c);
    }
    out
}

/// Whether `x, x^{[p]}, ..., x^{[p]^{n-1}}` are linearly independent.
pub fn p_powers_independent(x: &Derivation) -> bool {
    let amb = x.ambient();
    let vs: Vec<Vec<u32>> = p_powers(x, amb.n()).iter().map(Derivation::to_vector).collect();
    span_dim(amb.field(), Derivation::dim(amb), &vs) == amb.n()
}

/// Rank of `(d Phi)_x`.
pub fn differential_rank(x: &Derivation, route: Route) -> Result<usize> {
    let amb = x.ambient();
    let route = match route {
        Route::Auto => {
            if p_powers_independent(x) {
                return m_adx_image_dim(x);
            }
            if amb.len() <= AUTO_DUAL_LIMIT {
                Route::Dual
            } else {
                Route::Adjugate
            }
        }
        r => r,
    };
    differential_matrix(x, route)?.rank()
}

/// Membership flags for the three regularity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityFlags {
    /// `B_n^x = k`.
    pub u1: bool,
    /// `dim` of the centralizer equals `n`.
    pub u2: bool,
    /// The differentials `(d phi_i)_x` are linearly independent.
    pub u3: bool,
}

impl RegularityFlags {
    /// `u2` disagrees with the other two flags.
    pub fn u2_anomaly(&self) -> bool {
        self.u2 != self.u1
    }
}

/// Classifies `x`; an element with `u1 != u3` is reported as a
/// [`Error::TheoryViolation`].
pub fn regularity_classify(x: &Derivation, route: Route) -> Result<RegularityFlags> {
    let n = x.ambient().n();
    let flags = RegularityFlags {
        u1: x.constants_dim() == 1,
        u2: x.centralizer_dim() == n,
        u3: differential_rank(x, route)? == n,
    };
    if flags.u1 != flags.u3 {
        return Err(Error::TheoryViolation(format!(
            "regularity flags disagree: constants {} vs differentials {}",
            flags.u1, flags.u3
        )));
    }
    Ok(flags)
}

/// `x^{[p]^n} = 0`.
pub fn is_nilpotent(x: &Derivation) -> bool {
    x.p_power_iter(x.ambient().n()).is_zero()
}

/// `x` lies in the span of `x^{[p]}, ..., x^{[p]^n}`.
pub fn is_semisimple(x: &Derivation) -> bool {
    let amb = x.ambient();
    let mut space = RowSpace::new(amb.field(), Derivation::dim(amb));
    let mut cur = x.p_power();
    for _ in 0..amb.n() {
        space.insert(&cur.to_vector());
        cur = cur.p_power();
    }
    space.contains(&x.to_vector())
}

/// The least `r` with `x^{[p]^r}` in the span of the lower `p`-powers,
/// together with the dependency.
pub fn minimal_p_polynomial(x: &Derivation) -> Result<PPolynomial> {
    let amb = x.ambient();
    let field = amb.field();
    let mut powers: Vec<Vec<u32>> = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=amb.n() {
        let v = cur.to_vector();
        if let Some(coeffs) = solve_in_span(field, &powers, &v)? {
            return Ok(PPolynomial { field, coeffs });
        }
        powers.push(v);
        cur = cur.p_power();
    }
    Err(Error::TheoryViolation(format!(
        "no p-polynomial of degree at most p^{} annihilates the element",
        amb.n()
    )))
}

/// Semisimple and nilpotent parts `(x_s, x_n)`.
///
/// The semisimple part of `rho(x)` is computed by Newton iteration on the
/// separable `p`-polynomial `Q` with `Q^{p^s} = P(t, x)`, then read back as a
/// derivation through its values on the generators.
pub fn jordan_chevalley(x: &Derivation) -> Result<(Derivation, Derivation)> {
    let amb = x.ambient();
    let field = amb.field();
    let n = amb.n();
    let phi = phi_values(x)?;
    // c[i] is the coefficient of t^{p^i} in P, i = 0..=n
    let mut c: Vec<u32> = phi.iter().map(|&v| field.neg(v)).collect();
    c.push(1);
    let s = c.iter().position(|&v| v != 0).expect("P is monic");
    if s == n {
        return Ok((Derivation::zero(amb), x.clone()));
    }
    let q: Vec<u32> = c[s..].iter().map(|&v| field.pth_root_iter(v, s)).collect();
    let q0_inv = field.inv(q[0]).expect("q_0 is nonzero");
    let a = x.rho_matrix();
    let eval_q = |m: &Matrix| -> Result<Matrix> {
        let mut acc = Matrix::zeros(field, m.rows(), m.cols());
        let mut pw = m.clone();
        for (k, &qk) in q.iter().enumerate() {
            if k > 0 {
                pw = pw.mat_power(amb.p() as u64)?;
            }
            if qk != 0 {
                acc.add_scaled(&pw, qk)?;
            }
        }
        Ok(acc)
    };
    let mut semi = a;
    let mut converged = false;
    for _ in 0..64 {
        let r = eval_q(&semi)?;
        if r.is_zero() {
            converged = true;
            break;
        }
        semi.add_scaled(&r, field.neg(q0_inv))?;
    }
    if !converged {
        return Err(Error::TheoryViolation(
            "Newton iteration for the semisimple part did not converge".into(),
        ));
    }
    let comps = (0..n)
        .map(|axis| {
            let mut e = vec![0u32; amb.len()];
            e[amb.stride(axis)] = 1;
            crate::truncpoly::TruncPoly::from_coeffs(amb, semi.mul_vec(&e)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let xs = Derivation::new(amb, comps)?;
    if xs.rho_matrix() != semi {
        return Err(Error::TheoryViolation(
            "semisimple part of rho(x) is not a derivation".into(),
        ));
    }
    let xn = x - &xs;
    if !xs.bracket(&xn).is_zero() || !is_nilpotent(&xn) || !is_semisimple(&xs) {
        return Err(Error::TheoryViolation(
            "Jordan-Chevalley parts fail validation".into(),
        ));
    }
    Ok((xs, xn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncpoly::TruncPoly;
    use proptest::prelude::*;

    fn amb(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    fn term(a: Ambient, e: &[usize], c: i64, axis: usize) -> Derivation {
        Derivation::single(TruncPoly::from_terms(a, &[(e, c)]).unwrap(), axis).unwrap()
    }

    #[test]
    fn phi_examples() {
        let a1 = amb(1);
        assert_eq!(phi_values(&Derivation::partial(amb(2), 0).unwrap()).unwrap(), vec![0, 0]);
        assert_eq!(phi_values(&term(a1, &[1], 1, 0)).unwrap(), vec![1]);
        let y = &term(a1, &[0], 1, 0) + &term(a1, &[1], 1, 0);
        assert_eq!(phi_values(&y).unwrap(), vec![1]);
        for lambda in 1..5 {
            assert_eq!(phi_values(&term(a1, &[1], lambda, 0)).unwrap(), vec![1]);
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        let a1 = amb(1);
        let d1 = Derivation::partial(amb(2), 0).unwrap();
        let mp = minimal_p_polynomial(&d1).unwrap();
        assert_eq!((mp.rank(), mp.coeffs.clone()), (1, vec![0]));
        let mp = minimal_p_polynomial(&term(a1, &[1], 1, 0)).unwrap();
        assert_eq!(mp.coeffs, vec![1]);
        assert_eq!(mp.to_string(), "t^5 - t^1");
        assert_eq!(mp.to_dense(), vec![0, 4, 0, 0, 0, 1]);
        let mp = minimal_p_polynomial(&Derivation::zero(a1)).unwrap();
        assert_eq!(mp.rank(), 0);
    }

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&Derivation::partial(amb(2), 0).unwrap()));
        assert!(!is_nilpotent(&term(amb(2), &[1, 0], 1, 0)));
    }

    #[test]
    fn jordan_chevalley_examples() {
        let a2 = amb(2);
        let d1 = Derivation::partial(a2, 0).unwrap();
        assert_eq!(jordan_chevalley(&d1).unwrap(), (Derivation::zero(a2), d1.clone()));
        let t = term(a2, &[1, 0], 1, 0);
        assert_eq!(jordan_chevalley(&t).unwrap(), (t.clone(), Derivation::zero(a2)));
        let d2 = Derivation::partial(a2, 1).unwrap();
        let x = &t + &d2;
        assert_eq!(jordan_chevalley(&x).unwrap(), (t, d2));
    }

    #[test]
    fn regularity_examples() {
        let a2 = amb(2);
        let none = RegularityFlags {
            u1: false,
            u2: false,
            u3: false,
        };
        for route in [Route::Dual, Route::Adjugate, Route::Auto] {
            let d1 = Derivation::partial(a2, 0).unwrap();
            assert_eq!(regularity_classify(&d1, route).unwrap(), none);
            assert_eq!(regularity_classify(&Derivation::zero(a2), route).unwrap(), none);
        }
        assert_eq!(m_adx_image_dim(&Derivation::zero(a2)).unwrap(), 0);
        assert_ne!(m_adx_image_dim(&Derivation::partial(a2, 0).unwrap()).unwrap(), 2);
    }

    #[test]
    fn differential_of_zero_direction() {
        let a2 = amb(2);
        let x = &term(a2, &[1, 0], 2, 0) + &term(a2, &[3, 1], 1, 1);
        assert_eq!(phi_differential(&x, &Derivation::zero(a2)).unwrap(), vec![0, 0]);
    }

    #[test]
    fn non_p_polynomial_is_rejected() {
        let a1 = amb(1);
        // t^5 - t^2 is not a p-polynomial
        let cp = [0u32, 0, 4, 0, 0, 1];
        assert!(matches!(p_shape(&cp, a1, |c| c == 0), Err(Error::TheoryViolation(_))));
    }

    fn arb_w(n: usize) -> impl Strategy<Value = Derivation> {
        let a = amb(n);
        proptest::collection::vec(0u32..5, Derivation::dim(a))
            .prop_map(move |v| Derivation::from_vector(a, &v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn p_polynomial_annihilates(x in arb_w(2)) {
            let phi = phi_values(&x).unwrap();
            let lhs = x.p_power_iter(2);
            prop_assert_eq!(lhs, combine_p_powers(&x, &phi));
        }

        #[test]
        fn routes_agree(x in arb_w(2), y in arb_w(2)) {
            let dual = phi_differential(&x, &y).unwrap();
            let phi = phi_values(&x).unwrap();
            let g = phi_gradients(&x, &phi).unwrap();
            let ry = y.rho_matrix();
            let adj: Vec<u32> = g
                .iter()
                .map(|gi| {
                    let prod = gi.try_mul(&ry).unwrap();
                    (0..prod.rows()).fold(0, |acc, r| x.ambient().field().add(acc, prod.get(r, r)))
                })
                .collect();
            prop_assert_eq!(&dual, &adj);
            // the identity linking M_{ad x} to the differentials
            let lhs = m_adx_apply(&x, &y, &phi).unwrap();
            let rhs = combine_p_powers(&x, &dual);
            prop_assert_eq!(&lhs, &rhs);
            let via_matrix = m_adx_matrix(&x, &phi).unwrap().mul_vec(&y.to_vector()).unwrap();
            prop_assert_eq!(lhs.to_vector(), via_matrix);
        }

        #[test]
        fn euler_relation(x in arb_w(2)) {
            let f = x.ambient().field();
            let phi = phi_values(&x).unwrap();
            let d = phi_differential(&x, &x).unwrap();
            prop_assert_eq!(d, vec![f.neg(phi[0]), 0]);
        }

        #[test]
        fn homogeneity(x in arb_w(2), c in 1u32..5) {
            let f = x.ambient().field();
            let phi = phi_values(&x).unwrap();
            let scaled = phi_values(&x.scale(c)).unwrap();
            let expect: Vec<u32> = [24u64, 20]
                .iter()
                .zip(&phi)
                .map(|(&e, &v)| f.mul(f.pow(c, e), v))
                .collect();
            prop_assert_eq!(scaled, expect);
        }

        #[test]
        fn adjugate_matrix_matches_dual(x in arb_w(1)) {
            prop_assert_eq!(
                differential_matrix(&x, Route::Dual).unwrap(),
                differential_matrix(&x, Route::Adjugate).unwrap()
            );
        }

        #[test]
        fn jordan_chevalley_round_trip(x in arb_w(2)) {
            let (xs, xn) = jordan_chevalley(&x).unwrap();
            prop_assert_eq!(&(&xs + &xn), &x);
            prop_assert!(is_semisimple(&xs));
            prop_assert!(is_nilpotent(&xn));
            prop_assert_eq!(phi_values(&xs).unwrap(), phi_values(&x).unwrap());
        }

        #[test]
        fn nilpotent_iff_quotient_vanishes(x in arb_w(2)) {
            let nil = is_nilpotent(&x);
            prop_assert_eq!(nil, phi_values(&x).unwrap().iter().all(|&v| v == 0));
            prop_assert_eq!(nil, x.rho_matrix().mat_power(25).unwrap().is_zero());
        }
    }
}
