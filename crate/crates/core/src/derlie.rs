//! The Jacobson-Witt algebra `W_n = Der(B_n)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::truncpoly::{Ambient, Degree, TruncPoly};

/// `sum_i f_i D_i` with `f_i` in `B_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    amb: Ambient,
    comps: Vec<TruncPoly>,
}

impl Derivation {
    pub fn zero(amb: Ambient) -> Self {
        Derivation {
            amb,
            comps: vec![TruncPoly::zero(amb); amb.n()],
        }
    }

    /// The partial derivative `D_{axis+1}`.
    pub fn partial(amb: Ambient, axis: usize) -> Result<Self> {
        amb.check_axis(axis)?;
        let mut d = Self::zero(amb);
        d.comps[axis] = TruncPoly::one(amb);
        Ok(d)
    }

    pub fn new(amb: Ambient, comps: Vec<TruncPoly>) -> Result<Self> {
        if comps.len() != amb.n() {
            return Err(Error::LengthMismatch {
                expected: amb.n(),
                got: comps.len(),
            });
        }
        if comps.iter().any(|c| c.ambient() != amb) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Derivation { amb, comps })
    }

    /// `f D_{axis+1}`.
    pub fn single(f: TruncPoly, axis: usize) -> Result<Self> {
        let amb = f.ambient();
        amb.check_axis(axis)?;
        let mut d = Self::zero(amb);
        d.comps[axis] = f;
        Ok(d)
    }

    /// `dim W_n = n p^n`.
    pub fn dim(amb: Ambient) -> usize {
        amb.n() * amb.len()
    }

    /// The canonical basis vector `x^alpha D_i` with index `i p^n + idx(alpha)`.
    pub fn basis_element(amb: Ambient, k: usize) -> Result<Self> {
        let dim = Self::dim(amb);
        if k >= dim {
            return Err(Error::LengthMismatch { expected: dim, got: k });
        }
        let mut d = Self::zero(amb);
        d.comps[k / amb.len()].set_coeff(k % amb.len(), 1);
        Ok(d)
    }

    #[inline]
    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn comps(&self) -> &[TruncPoly] {
        &self.comps
    }

    pub fn comp(&self, axis: usize) -> &TruncPoly {
        &self.comps[axis]
    }

    pub fn into_comps(self) -> Vec<TruncPoly> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(TruncPoly::is_zero)
    }

    /// Coordinates in the canonical basis.
    pub fn to_vector(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(Self::dim(self.amb));
        for c in &self.comps {
            v.extend_from_slice(c.coeffs());
        }
        v
    }

    pub fn from_vector(amb: Ambient, v: &[u32]) -> Result<Self> {
        let dim = Self::dim(amb);
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let comps = v
            .chunks(amb.len())
            .map(|c| TruncPoly::from_coeffs(amb, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { amb, comps })
    }

    pub fn scale(&self, c: u32) -> Self {
        Derivation {
            amb: self.amb,
            comps: self.comps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Derivation, c: u32) {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled(b, c);
        }
    }

    pub fn try_add(&self, other: &Derivation) -> Result<Self> {
        self.check_same(other)?;
        Ok(self + other)
    }

    fn check_same(&self, other: &Derivation) -> Result<()> {
        if self.amb == other.amb {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// `x(f) = sum_i f_i d_i f`.
    pub fn try_apply(&self, f: &TruncPoly) -> Result<TruncPoly> {
        if f.ambient() != self.amb {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.apply(f))
    }

    pub fn apply(&self, f: &TruncPoly) -> TruncPoly {
        let mut out = TruncPoly::zero(self.amb);
        for (axis, fi) in self.comps.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let d = f.derivative(axis);
            if !d.is_zero() {
                out = &out + &fi.mul(&d);
            }
        }
        out
    }

    /// `x(x^alpha)` for the monomial with index `idx`.
    fn apply_monomial(&self, idx: usize) -> TruncPoly {
        let amb = self.amb;
        let field = amb.field();
        let mut out = TruncPoly::zero(amb);
        for (axis, fi) in self.comps.iter().enumerate() {
            let a = amb.exponent(idx, axis);
            if a == 0 || fi.is_zero() {
                continue;
            }
            let lowered = idx - amb.stride(axis);
            out = &out + &fi.mul_monomial(lowered, field.from_int(a as i64));
        }
        out
    }

    pub fn try_bracket(&self, other: &Derivation) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.bracket(other))
    }

    /// `[x, y]` with components `x(y_j) - y(x_j)`.
    pub fn bracket(&self, other: &Derivation) -> Self {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(xj, yj)| &self.apply(yj) - &other.apply(xj))
            .collect();
        Derivation {
            amb: self.amb,
            comps,
        }
    }

    /// `x^{[p]}`: the `i`-th component is `x` applied `p` times to `x_i`.
    pub fn p_power(&self) -> Self {
        let amb = self.amb;
        let comps = (0..amb.n())
            .map(|axis| {
                // x(x_i) = f_i, so start from there
                let mut g = self.comps[axis].clone();
                for _ in 1..amb.p() {
                    if g.is_zero() {
                        break;
                    }
                    g = self.apply(&g);
                }
                g
            })
            .collect();
        Derivation { amb, comps }
    }

    /// `x^{[p]^k}`.
    pub fn p_power_iter(&self, k: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..k {
            if x.is_zero() {
                break;
            }
            x = x.p_power();
        }
        x
    }

    pub fn divergence(&self) -> TruncPoly {
        let mut out = TruncPoly::zero(self.amb);
        for (axis, fi) in self.comps.iter().enumerate() {
            out = &out + &fi.derivative(axis);
        }
        out
    }

    /// Matrix of `f -> x(f)` in the monomial basis.
    pub fn rho_matrix(&self) -> Matrix {
        let amb = self.amb;
        let len = amb.len();
        let mut m = Matrix::zeros(amb.field(), len, len);
        for idx in 0..len {
            m.set_column(idx, self.apply_monomial(idx).coeffs());
        }
        m
    }

    /// Matrix of `ad x` in the canonical basis of `W_n`.
    pub fn ad_matrix(&self) -> Matrix {
        let amb = self.amb;
        let n = amb.n();
        let len = amb.len();
        let field = amb.field();
        // partials[i][j] = d_i f_j
        let partials: Vec<Vec<TruncPoly>> = (0..n)
            .map(|i| self.comps.iter().map(|fj| fj.derivative(i)).collect())
            .collect();
        let dim = n * len;
        let mut m = Matrix::zeros(field, dim, dim);
        let minus_one = field.neg(1);
        for i in 0..n {
            for idx in 0..len {
                // [x, x^a D_i] = x(x^a) D_i - sum_j x^a d_i(f_j) D_j
                let mut col = vec![0u32; dim];
                let head = self.apply_monomial(idx);
                col[i * len..(i + 1) * len].copy_from_slice(head.coeffs());
                for (j, dij) in partials[i].iter().enumerate() {
                    if dij.is_zero() {
                        continue;
                    }
                    let t = dij.mul_monomial(idx, minus_one);
                    for (slot, &c) in col[j * len..(j + 1) * len].iter_mut().zip(t.coeffs()) {
                        *slot = field.add(*slot, c);
                    }
                }
                m.set_column(i * len + idx, &col);
            }
        }
        m
    }

    /// Basis of the `x`-constants `B_n^x = ker rho(x)`.
    pub fn constants_subring(&self) -> Vec<TruncPoly> {
        let (_, ker) = self
            .rho_matrix()
            .rank_kernel()
            .expect("prime field coefficients");
        ker.into_iter()
            .map(|v| TruncPoly::from_coeffs(self.amb, v).expect("kernel vector length"))
            .collect()
    }

    pub fn constants_dim(&self) -> usize {
        let rank = self.rho_matrix().rank().expect("field coefficients");
        self.amb.len() - rank
    }

    /// `dim ker ad x`.
    pub fn centralizer_dim(&self) -> usize {
        let rank = self.ad_matrix().rank().expect("field coefficients");
        Self::dim(self.amb) - rank
    }

    /// Smallest `min_degree` over the components.
    pub fn min_degree(&self) -> Degree {
        self.comps
            .iter()
            .map(TruncPoly::min_degree)
            .min()
            .unwrap_or(Degree::INFINITY)
    }

    /// Largest `i` with `x` in `(W_n)_i`.
    pub fn filtration_degree(&self) -> Result<isize> {
        match self.min_degree().value() {
            Some(d) => Ok(d as isize - 1),
            None => Err(Error::ZeroDerivation),
        }
    }

    pub fn in_filtration(&self, i: isize) -> bool {
        match self.min_degree().value() {
            Some(d) => d as isize >= i + 1,
            None => true,
        }
    }

    /// Image under `W_{n-1} -> W_n`, with no `D_n` component.
    pub fn extend(&self) -> Result<Self> {
        let big = self.amb.extended()?;
        let mut comps = self
            .comps
            .iter()
            .map(TruncPoly::extend)
            .collect::<Result<Vec<_>>>()?;
        comps.push(TruncPoly::zero(big));
        Ok(Derivation { amb: big, comps })
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (axis, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*D{}", axis + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Derivation {
    type Output = Derivation;

    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.amb, rhs.amb, "ambient mismatch");
        Derivation {
            amb: self.amb,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Derivation {
    type Output = Derivation;

    fn sub(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.amb, rhs.amb, "ambient mismatch");
        Derivation {
            amb: self.amb,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Derivation {
    type Output = Derivation;

    fn neg(self) -> Derivation {
        Derivation {
            amb: self.amb,
            comps: self.comps.iter().map(|a| -a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use proptest::prelude::*;

    fn amb(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    fn mono(a: Ambient, e: &[usize], c: i64) -> TruncPoly {
        TruncPoly::from_terms(a, &[(e, c)]).unwrap()
    }

    fn der(a: Ambient, terms: &[(&[usize], i64, usize)]) -> Derivation {
        let mut d = Derivation::zero(a);
        for &(e, c, axis) in terms {
            let t = Derivation::single(mono(a, e, c), axis).unwrap();
            d = &d + &t;
        }
        d
    }

    /// Commutator of operators, evaluated on every monomial.
    fn operator_commutator_matches(x: &Derivation, y: &Derivation, z: &Derivation) -> bool {
        let a = x.ambient();
        (0..a.len()).all(|idx| {
            let mut e = TruncPoly::zero(a);
            e.set_coeff(idx, 1);
            let lhs = z.apply(&e);
            let rhs = &x.apply(&y.apply(&e)) - &y.apply(&x.apply(&e));
            lhs == rhs
        })
    }

    #[test]
    fn apply_examples() {
        let a1 = amb(1);
        let x = der(a1, &[(&[1], 1, 0)]);
        assert_eq!(x.apply(&mono(a1, &[3], 1)), mono(a1, &[3], 3));
        let d1 = Derivation::partial(a1, 0).unwrap();
        assert!(d1.apply(&TruncPoly::constant(a1, 3)).is_zero());
        let y = der(a1, &[(&[0], 1, 0), (&[1], 1, 0)]);
        let expect = TruncPoly::from_terms(a1, &[(&[0], 1), (&[1], 1)]).unwrap();
        assert_eq!(y.apply(&mono(a1, &[1], 1)), expect);
        let a2 = amb(2);
        assert_eq!(
            x.try_apply(&TruncPoly::one(a2)).unwrap_err(),
            Error::AmbientMismatch
        );
    }

    #[test]
    fn bracket_examples() {
        let a2 = amb(2);
        let d1 = Derivation::partial(a2, 0).unwrap();
        let x1d1 = der(a2, &[(&[1, 0], 1, 0)]);
        assert_eq!(d1.bracket(&x1d1), d1);
        assert!(x1d1.bracket(&x1d1).is_zero());
        let x = der(a2, &[(&[1, 0], 1, 1)]);
        let y = der(a2, &[(&[0, 1], 1, 0)]);
        let z = x.bracket(&y);
        assert_eq!(z, der(a2, &[(&[1, 0], 1, 0), (&[0, 1], -1, 1)]));
        assert!(operator_commutator_matches(&x, &y, &z));
        assert_eq!(
            x.try_bracket(&Derivation::zero(amb(1))).unwrap_err(),
            Error::AmbientMismatch
        );
    }

    #[test]
    fn p_power_examples() {
        let a1 = amb(1);
        assert!(Derivation::partial(a1, 0).unwrap().p_power().is_zero());
        let x = der(a1, &[(&[1], 1, 0)]);
        assert_eq!(x.p_power(), x);
        let y = der(a1, &[(&[0], 1, 0), (&[1], 1, 0)]);
        assert_eq!(y.p_power(), y);
        // matrix oracle
        assert_eq!(y.p_power().rho_matrix(), y.rho_matrix().mat_power(5).unwrap());
    }

    #[test]
    fn divergence_examples() {
        let a2 = amb(2);
        assert_eq!(der(a2, &[(&[1, 0], 1, 0)]).divergence(), TruncPoly::one(a2));
        // D_2(u) D_1 - D_1(u) D_2 for u = x1^2 x2^3 + 4 x1 x2
        let u = TruncPoly::from_terms(a2, &[(&[2, 3], 1), (&[1, 1], 4)]).unwrap();
        let d = Derivation::new(a2, vec![u.derivative(1), -&u.derivative(0)]).unwrap();
        assert!(d.divergence().is_zero());
    }

    #[test]
    fn rho_matrix_examples() {
        let a1 = amb(1);
        assert!(Derivation::zero(a1).rho_matrix().is_zero());
        let x = der(a1, &[(&[1], 1, 0)]);
        let m = x.rho_matrix();
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(m.get(r, c), if r == c { r as u32 } else { 0 });
            }
        }
        let d1 = Derivation::partial(a1, 0).unwrap().rho_matrix();
        let (rank, ker) = d1.rank_kernel().unwrap();
        assert_eq!(rank, 4);
        assert_eq!(ker, vec![vec![1, 0, 0, 0, 0]]);
        assert!(d1.mat_power(5).unwrap().is_zero());
    }

    #[test]
    fn constants_and_centralizers() {
        for n in 1..=3 {
            let a = amb(n);
            let d1 = Derivation::partial(a, 0).unwrap();
            assert_eq!(d1.constants_subring().len(), 5usize.pow(n as u32 - 1));
            assert_eq!(Derivation::zero(a).constants_dim(), a.len());
            assert_eq!(Derivation::zero(a).centralizer_dim(), Derivation::dim(a));
        }
        assert!(Derivation::partial(amb(2), 0).unwrap().centralizer_dim() > 2);
    }

    #[test]
    fn filtration_examples() {
        let a2 = amb(2);
        assert_eq!(Derivation::partial(a2, 0).unwrap().filtration_degree(), Ok(-1));
        assert_eq!(der(a2, &[(&[1, 0], 1, 0)]).filtration_degree(), Ok(0));
        assert_eq!(der(a2, &[(&[4, 4], 1, 0)]).filtration_degree(), Ok(7));
        assert_eq!(
            Derivation::zero(a2).filtration_degree(),
            Err(Error::ZeroDerivation)
        );
    }

    #[test]
    fn vector_round_trip_and_basis() {
        let a2 = amb(2);
        assert_eq!(Derivation::dim(a2), 50);
        let b = Derivation::basis_element(a2, 25 + 6).unwrap();
        assert_eq!(b, der(a2, &[(&[1, 1], 1, 1)]));
        let v = b.to_vector();
        assert_eq!(Derivation::from_vector(a2, &v).unwrap(), b);
    }

    fn arb_der(n: usize) -> impl Strategy<Value = Derivation> {
        let a = amb(n);
        proptest::collection::vec(0u32..5, Derivation::dim(a))
            .prop_map(move |v| Derivation::from_vector(a, &v).unwrap())
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = TruncPoly> {
        let a = amb(n);
        proptest::collection::vec(0u32..5, a.len())
            .prop_map(move |v| TruncPoly::from_coeffs(a, v).unwrap())
    }

    fn arb_homogeneous(n: usize) -> impl Strategy<Value = (Derivation, usize)> {
        (arb_der(n), 0usize..4 * n).prop_map(|(x, d)| {
            let comps = x.comps().iter().map(|c| c.homogeneous_component(d)).collect();
            (Derivation::new(x.ambient(), comps).unwrap(), d)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn jacobi(x in arb_der(2), y in arb_der(2), z in arb_der(2)) {
            let s = &(&x.bracket(&y.bracket(&z)) + &y.bracket(&z.bracket(&x)))
                + &z.bracket(&x.bracket(&y));
            prop_assert!(s.is_zero());
        }

        #[test]
        fn leibniz(x in arb_der(2), f in arb_poly(2), g in arb_poly(2)) {
            let lhs = x.apply(&f.mul(&g));
            let rhs = &f.mul(&x.apply(&g)) + &g.mul(&x.apply(&f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_is_operator_commutator(x in arb_der(2), y in arb_der(2)) {
            let z = x.bracket(&y);
            prop_assert!(operator_commutator_matches(&x, &y, &z));
            let rz = z.rho_matrix();
            let (rx, ry) = (x.rho_matrix(), y.rho_matrix());
            let comm = rx.try_mul(&ry).unwrap().try_sub(&ry.try_mul(&rx).unwrap()).unwrap();
            prop_assert_eq!(rz, comm);
        }

        #[test]
        fn rho_of_p_power(x in arb_der(2)) {
            prop_assert_eq!(x.p_power().rho_matrix(), x.rho_matrix().mat_power(5).unwrap());
        }

        #[test]
        fn ad_of_p_power(x in arb_der(2)) {
            prop_assert_eq!(x.p_power().ad_matrix(), x.ad_matrix().mat_power(5).unwrap());
        }

        #[test]
        fn ad_matrix_matches_brackets(x in arb_der(2), y in arb_der(2)) {
            let col = x.ad_matrix().mul_vec(&y.to_vector()).unwrap();
            prop_assert_eq!(col, x.bracket(&y).to_vector());
        }

        #[test]
        fn filtration_is_multiplicative((x, i) in arb_homogeneous(2), (y, j) in arb_homogeneous(2)) {
            // homogeneous of degree d lies in (W)_{d-1}
            let z = x.bracket(&y);
            prop_assert!(z.in_filtration(i as isize + j as isize - 2));
        }

        #[test]
        fn divergence_of_bracket(x in arb_der(2), y in arb_der(2)) {
            // div [x,y] = x(div y) - y(div x)
            let lhs = x.bracket(&y).divergence();
            let rhs = &x.apply(&y.divergence()) - &y.apply(&x.divergence());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lie_of_g_has_dimension_at_most_np_n_minus_n() {
        // span of ad y for y in (W_n)_0 acting on a generic x
        let a2 = amb(2);
        let x = der(a2, &[(&[0, 0], 1, 0), (&[4, 0], 1, 1), (&[2, 3], 2, 0), (&[1, 1], 3, 1)]);
        let vs: Vec<Vec<u32>> = (0..Derivation::dim(a2))
            .map(|k| Derivation::basis_element(a2, k).unwrap())
            .filter(|b| b.in_filtration(0))
            .map(|b| b.bracket(&x).to_vector())
            .collect();
        assert_eq!(vs.len(), 48);
        let dim = crate::linalg::span_dim(a2.field(), 50, &vs);
        assert!(dim <= 48);
    }
}
