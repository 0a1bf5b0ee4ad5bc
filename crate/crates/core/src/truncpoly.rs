//! The truncated polynomial ring `B_n = k[x_1..x_n]/(x_1^p..x_n^p)`.
//!
//! Elements are dense coefficient vectors of length `p^n`, indexed by the
//! mixed-radix index `idx(a) = a_1 + a_2 p + ... + a_n p^{n-1}` of the
//! exponent vector (so `x_1` varies fastest). Axes are 0-based in the API:
//! axis `i` is the variable `x_{i+1}`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::ffield::{fmt_elem, Field};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

// Keeps dense vectors and p^n x p^n matrices addressable.
const MAX_DIM: usize = 1 << 20;

/// Exponent vector of a monomial.
pub type Exponents = [usize; MAX_VARS];

/// The ambient ring `B_n` over a given field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    field: Field,
    n: usize,
    len: usize,
}

impl Ambient {
    pub fn new(field: Field, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidVariableCount(n));
        }
        let len = (field.characteristic() as usize)
            .checked_pow(n as u32)
            .filter(|&l| l <= MAX_DIM)
            .ok_or(Error::InvalidVariableCount(n))?;
        Ok(Ambient { field, n, len })
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.field.characteristic() as usize
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim B_n = p^n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Largest total degree of a nonzero monomial, `n(p-1)`.
    pub fn top_degree(&self) -> usize {
        self.n * (self.p() - 1)
    }

    /// Mixed-radix stride of an axis, `p^axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.p().pow(axis as u32)
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis < self.n {
            Ok(())
        } else {
            Err(Error::AxisOutOfRange { axis, n: self.n })
        }
    }

    #[inline]
    pub fn exponent(&self, idx: usize, axis: usize) -> usize {
        idx / self.stride(axis) % self.p()
    }

    pub fn exponents(&self, idx: usize) -> Exponents {
        let mut e = [0; MAX_VARS];
        let mut v = idx;
        for slot in e.iter_mut().take(self.n) {
            *slot = v % self.p();
            v /= self.p();
        }
        e
    }

    /// Index of an exponent vector, or `None` if some exponent is `>= p`.
    pub fn index(&self, exps: &[usize]) -> Option<usize> {
        if exps.len() > self.n || exps.iter().any(|&a| a >= self.p()) {
            return None;
        }
        Some(
            exps.iter()
                .enumerate()
                .map(|(i, &a)| a * self.stride(i))
                .sum(),
        )
    }

    pub fn total_degree(&self, idx: usize) -> usize {
        let mut v = idx;
        let mut d = 0;
        while v > 0 {
            d += v % self.p();
            v /= self.p();
        }
        d
    }

    /// Index of `x_1^{p-1} ... x_n^{p-1}`.
    pub fn top_index(&self) -> usize {
        self.len - 1
    }

    /// The same field with one more variable.
    pub fn extended(&self) -> Result<Ambient> {
        Ambient::new(self.field, self.n + 1)
    }

    /// The same field with the last variable dropped.
    pub fn reduced(&self) -> Result<Ambient> {
        Ambient::new(self.field, self.n.wrapping_sub(1))
    }

    pub(crate) fn check_same(&self, other: &Ambient) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }
}

impl fmt::Debug for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}({:?})", self.n, self.field)
    }
}

/// Minimal total degree of the monomials of a polynomial; `deg 0 = +inf`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Degree(usize);

impl Degree {
    pub const INFINITY: Degree = Degree(usize::MAX);

    pub const fn finite(d: usize) -> Self {
        Degree(d)
    }

    pub fn is_infinite(&self) -> bool {
        *self == Self::INFINITY
    }

    pub fn value(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0)
        }
    }

    pub fn saturating_add(self, other: Degree) -> Degree {
        if self.is_infinite() || other.is_infinite() {
            Self::INFINITY
        } else {
            Degree(self.0 + other.0)
        }
    }
}

impl PartialEq<usize> for Degree {
    fn eq(&self, other: &usize) -> bool {
        self.0 == *other && !self.is_infinite()
    }
}

impl PartialOrd<usize> for Degree {
    fn partial_cmp(&self, other: &usize) -> Option<Ordering> {
        Some(self.0.cmp(other))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "inf"),
        }
    }
}

/// Calls `visit(offset)` for every index of the box `[0, limits_i]` in
/// mixed-radix order.
fn for_each_in_box(amb: &Ambient, limits: &Exponents, mut visit: impl FnMut(usize)) {
    let n = amb.n;
    let mut digits = [0usize; MAX_VARS];
    let mut offset = 0usize;
    loop {
        visit(offset);
        let mut axis = 0;
        loop {
            if axis == n {
                return;
            }
            if digits[axis] < limits[axis] {
                digits[axis] += 1;
                offset += amb.stride(axis);
                break;
            }
            offset -= digits[axis] * amb.stride(axis);
            digits[axis] = 0;
            axis += 1;
        }
    }
}

/// Dense element of `B_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    amb: Ambient,
    coeffs: Vec<u32>,
}

impl TruncPoly {
    pub fn zero(amb: Ambient) -> Self {
        TruncPoly {
            amb,
            coeffs: vec![0; amb.len],
        }
    }

    pub fn constant(amb: Ambient, c: u32) -> Self {
        let mut f = Self::zero(amb);
        f.coeffs[0] = c;
        f
    }

    pub fn one(amb: Ambient) -> Self {
        Self::constant(amb, 1)
    }

    /// The variable along `axis` (0-based).
    pub fn variable(amb: Ambient, axis: usize) -> Result<Self> {
        amb.check_axis(axis)?;
        let mut f = Self::zero(amb);
        f.coeffs[amb.stride(axis)] = 1;
        Ok(f)
    }

    /// `c x^exps`; exponents `>= p` give zero.
    pub fn monomial(amb: Ambient, exps: &[usize], c: u32) -> Result<Self> {
        if exps.len() > amb.n {
            return Err(Error::LengthMismatch {
                expected: amb.n,
                got: exps.len(),
            });
        }
        let mut f = Self::zero(amb);
        if let Some(idx) = amb.index(exps) {
            f.coeffs[idx] = amb.field.check(c as u64)?;
        }
        Ok(f)
    }

    pub fn from_coeffs(amb: Ambient, mut coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() > amb.len {
            return Err(Error::LengthMismatch {
                expected: amb.len,
                got: coeffs.len(),
            });
        }
        for &c in &coeffs {
            amb.field.check(c as u64)?;
        }
        coeffs.resize(amb.len, 0);
        Ok(TruncPoly { amb, coeffs })
    }

    /// Sum of `c x^exps` terms.
    pub fn from_terms(amb: Ambient, terms: &[(&[usize], i64)]) -> Result<Self> {
        let mut f = Self::zero(amb);
        for (exps, c) in terms {
            let m = Self::monomial(amb, exps, amb.field.from_int(*c))?;
            f = &f + &m;
        }
        Ok(f)
    }

    #[inline]
    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, idx: usize) -> u32 {
        self.coeffs[idx]
    }

    pub fn coeff_of(&self, exps: &[usize]) -> u32 {
        self.amb.index(exps).map_or(0, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, idx: usize, c: u32) {
        self.coeffs[idx] = c;
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeffs[0]
    }

    /// Membership in the maximal ideal `m` (no constant term).
    pub fn in_maximal_ideal(&self) -> bool {
        self.coeffs[0] == 0
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn scale(&self, c: u32) -> TruncPoly {
        let f = self.amb.field;
        TruncPoly {
            amb: self.amb,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &TruncPoly, c: u32) {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        if c == 0 {
            return;
        }
        let f = self.amb.field;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if b != 0 {
                *a = f.add(*a, f.mul(b, c));
            }
        }
    }

    pub fn try_add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.amb.check_same(&other.amb)?;
        Ok(self + other)
    }

    /// Truncated product.
    pub fn try_mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.amb.check_same(&other.amb)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn mul(&self, other: &TruncPoly) -> TruncPoly {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        self.mul_unchecked(other)
    }

    fn mul_unchecked(&self, other: &TruncPoly) -> TruncPoly {
        let amb = self.amb;
        let f = amb.field;
        // iterate over the sparser factor
        let (a, b) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![0u32; amb.len];
        for (ia, ca) in a.support() {
            let ea = amb.exponents(ia);
            let mut limits = [0usize; MAX_VARS];
            for i in 0..amb.n {
                limits[i] = amb.p() - 1 - ea[i];
            }
            for_each_in_box(&amb, &limits, |ib| {
                let cb = b.coeffs[ib];
                if cb != 0 {
                    // carry-free addition of exponents
                    let k = ia + ib;
                    out[k] = f.add(out[k], f.mul(ca, cb));
                }
            });
        }
        TruncPoly { amb, coeffs: out }
    }

    /// `c x^exps * self`, truncating.
    pub fn mul_monomial(&self, idx: usize, c: u32) -> TruncPoly {
        let amb = self.amb;
        let f = amb.field;
        let mut out = vec![0u32; amb.len];
        if c == 0 {
            return TruncPoly { amb, coeffs: out };
        }
        let e = amb.exponents(idx);
        let mut limits = [0usize; MAX_VARS];
        for i in 0..amb.n {
            limits[i] = amb.p() - 1 - e[i];
        }
        for_each_in_box(&amb, &limits, |ib| {
            let cb = self.coeffs[ib];
            if cb != 0 {
                out[idx + ib] = f.mul(c, cb);
            }
        });
        TruncPoly { amb, coeffs: out }
    }

    pub fn pow(&self, e: usize) -> TruncPoly {
        let mut acc = TruncPoly::one(self.amb);
        for _ in 0..e {
            acc = acc.mul(self);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Formal partial derivative along `axis` (0-based).
    pub fn partial_derivative(&self, axis: usize) -> Result<TruncPoly> {
        self.amb.check_axis(axis)?;
        Ok(self.derivative(axis))
    }

    pub(crate) fn derivative(&self, axis: usize) -> TruncPoly {
        let amb = self.amb;
        let f = amb.field;
        let stride = amb.stride(axis);
        let mut out = vec![0u32; amb.len];
        for (idx, c) in self.support() {
            let a = amb.exponent(idx, axis);
            if a > 0 {
                out[idx - stride] = f.mul(c, f.from_int(a as i64));
            }
        }
        TruncPoly { amb, coeffs: out }
    }

    /// Minimal total degree of a monomial with nonzero coefficient.
    pub fn min_degree(&self) -> Degree {
        self.support()
            .map(|(i, _)| Degree(self.amb.total_degree(i)))
            .min()
            .unwrap_or(Degree::INFINITY)
    }

    /// Largest total degree of a monomial with nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.support().map(|(i, _)| self.amb.total_degree(i)).max()
    }

    /// Membership in the filtration piece `(B_n)_i`.
    pub fn in_filtration(&self, i: usize) -> bool {
        self.min_degree() >= Degree(i)
    }

    pub fn homogeneous_component(&self, d: usize) -> TruncPoly {
        let mut out = TruncPoly::zero(self.amb);
        for (i, c) in self.support() {
            if self.amb.total_degree(i) == d {
                out.coeffs[i] = c;
            }
        }
        out
    }

    /// Whether every monomial involves only the variable along `axis`.
    pub fn depends_only_on(&self, axis: usize) -> bool {
        let stride = self.amb.stride(axis);
        self.support().all(|(i, _)| i % stride == 0 && i / stride < self.amb.p())
    }

    /// Whether `x_axis` divides `self`.
    pub fn divisible_by_variable(&self, axis: usize) -> bool {
        self.support().all(|(i, _)| self.amb.exponent(i, axis) > 0)
    }

    /// Scales the coefficient of each monomial by `w(exponent along axis)`.
    pub fn weight_axis(&self, axis: usize, w: impl Fn(usize) -> u32) -> TruncPoly {
        let f = self.amb.field;
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            if *c != 0 {
                *c = f.mul(*c, w(self.amb.exponent(idx, axis)));
            }
        }
        out
    }

    /// Image under `B_{n-1} -> B_n` (the same monomials).
    pub fn extend(&self) -> Result<TruncPoly> {
        let big = self.amb.extended()?;
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(big.len, 0);
        Ok(TruncPoly { amb: big, coeffs })
    }

    /// `f(x_1..x_{n-1}, 0)` as an element of `B_{n-1}`.
    pub fn restrict_last_to_zero(&self) -> Result<TruncPoly> {
        let small = self.amb.reduced()?;
        Ok(TruncPoly {
            amb: small,
            coeffs: self.coeffs[..small.len].to_vec(),
        })
    }

    /// `f(x_1..x_{n-1}, 0)` kept in `B_n`.
    pub fn drop_last_variable(&self) -> TruncPoly {
        let keep = self.amb.len / self.amb.p();
        let mut out = TruncPoly::zero(self.amb);
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        out
    }
}

/// All products `a^alpha` of `n` images in the maximal ideal, indexed like
/// monomials. Used to evaluate substitution homomorphisms `f -> f(a)`.
pub(crate) fn monomial_images(images: &[TruncPoly]) -> Vec<TruncPoly> {
    let amb = images[0].amb;
    let src_n = images.len();
    let p = amb.p();
    let len = p.pow(src_n as u32);
    let mut out: Vec<TruncPoly> = Vec::with_capacity(len);
    out.push(TruncPoly::one(amb));
    for idx in 1..len {
        // split off the lowest nonzero exponent
        let mut axis = 0;
        let mut stride = 1;
        while idx / stride % p == 0 {
            axis += 1;
            stride *= p;
        }
        let prev = out[idx - stride].mul(&images[axis]);
        out.push(prev);
    }
    out
}

/// `f(a_1, ..., a_k)` given precomputed [`monomial_images`] of the `a_i`.
pub(crate) fn substitute_with(f: &TruncPoly, images: &[TruncPoly], target: Ambient) -> TruncPoly {
    let mut out = TruncPoly::zero(target);
    for (idx, c) in f.support() {
        out.add_scaled(&images[idx], c);
    }
    out
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.amb.field;
        let mut first = true;
        for (idx, c) in self.support() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.amb.exponents(idx);
            let is_one = idx == 0;
            if c != 1 || is_one {
                fmt_elem(&field, c, f)?;
            }
            let mut wrote = c != 1 || is_one;
            for (axis, &a) in e.iter().enumerate().take(self.amb.n) {
                if a == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if a == 1 {
                    write!(f, "x{}", axis + 1)?;
                } else {
                    write!(f, "x{}^{}", axis + 1, a)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &TruncPoly {
    type Output = TruncPoly;

    fn add(self, other: &TruncPoly) -> TruncPoly {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        let f = self.amb.field;
        TruncPoly {
            amb: self.amb,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;

    fn sub(self, other: &TruncPoly) -> TruncPoly {
        assert_eq!(self.amb, other.amb, "ambient mismatch");
        let f = self.amb.field;
        TruncPoly {
            amb: self.amb,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;

    fn neg(self) -> TruncPoly {
        let f = self.amb.field;
        TruncPoly {
            amb: self.amb,
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }
}

impl core::ops::Mul for &TruncPoly {
    type Output = TruncPoly;

    fn mul(self, other: &TruncPoly) -> TruncPoly {
        TruncPoly::mul(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize) -> Ambient {
        Ambient::new(Field::prime(5).unwrap(), n).unwrap()
    }

    fn x(amb: Ambient, i: usize) -> TruncPoly {
        TruncPoly::variable(amb, i).unwrap()
    }

    #[test]
    fn product_truncates() {
        let amb = b(1);
        let f = TruncPoly::monomial(amb, &[4], 1).unwrap();
        assert!(f.mul(&x(amb, 0)).is_zero());
    }

    #[test]
    fn one_plus_x_to_the_p_is_one() {
        for n in 1..=3 {
            let amb = b(n);
            let f = &TruncPoly::one(amb) + &x(amb, 0);
            assert_eq!(f.pow(5), TruncPoly::one(amb));
        }
    }

    #[test]
    fn difference_of_squares() {
        let amb = b(2);
        let (x1, x2) = (x(amb, 0), x(amb, 1));
        let lhs = (&x1 + &x2).mul(&(&x1 - &x2));
        // schoolbook expansion: x1^2 - x1 x2 + x2 x1 - x2^2
        let expect =
            TruncPoly::from_terms(amb, &[(&[2, 0], 1), (&[1, 1], -1), (&[1, 1], 1), (&[0, 2], -1)])
                .unwrap();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        assert_eq!(
            TruncPoly::one(b(1)).try_mul(&TruncPoly::one(b(2))),
            Err(Error::AmbientMismatch)
        );
    }

    #[test]
    fn partial_derivative_examples() {
        let amb = b(2);
        let f = TruncPoly::monomial(amb, &[2, 1], 1).unwrap();
        assert_eq!(
            f.partial_derivative(0).unwrap(),
            TruncPoly::monomial(amb, &[1, 1], 2).unwrap()
        );
        assert!(TruncPoly::constant(amb, 3).partial_derivative(1).unwrap().is_zero());
        let g = TruncPoly::monomial(amb, &[4], 1).unwrap();
        assert_eq!(
            g.partial_derivative(0).unwrap(),
            TruncPoly::monomial(amb, &[3], 4).unwrap()
        );
        assert_eq!(
            f.partial_derivative(2),
            Err(Error::AxisOutOfRange { axis: 2, n: 2 })
        );
    }

    #[test]
    fn min_degree_convention() {
        let amb = b(2);
        let f = TruncPoly::from_terms(amb, &[(&[1, 0], 1), (&[1, 1], 1)]).unwrap();
        assert_eq!(f.min_degree(), Degree::finite(1));
        assert_eq!(TruncPoly::zero(amb).min_degree(), Degree::INFINITY);
        assert!(Degree::INFINITY > amb.top_degree());
        let g = TruncPoly::from_terms(amb, &[(&[], 3), (&[2], 1)]).unwrap();
        assert_eq!(g.min_degree(), Degree::finite(0));
    }

    #[test]
    fn maximal_ideal_elements_are_p_nilpotent() {
        let amb = b(2);
        let f = TruncPoly::from_terms(amb, &[(&[1, 0], 2), (&[0, 1], 1), (&[1, 1], 3)]).unwrap();
        assert!(f.in_maximal_ideal());
        assert!(f.pow(5).is_zero());
    }

    #[test]
    fn display_is_readable() {
        let amb = b(2);
        let f = TruncPoly::from_terms(amb, &[(&[], 2), (&[1, 2], 1), (&[0, 1], 3)]).unwrap();
        assert_eq!(alloc::format!("{f}"), "2 + 3*x2 + x1*x2^2");
    }

    #[test]
    fn extend_and_restrict() {
        let amb = b(2);
        let f = TruncPoly::from_terms(amb, &[(&[1, 2], 1)]).unwrap();
        let big = f.extend().unwrap();
        assert_eq!(big.coeff_of(&[1, 2, 0]), 1);
        let g = &big + &TruncPoly::monomial(big.ambient(), &[0, 0, 1], 1).unwrap();
        assert_eq!(g.restrict_last_to_zero().unwrap(), f);
    }
}
