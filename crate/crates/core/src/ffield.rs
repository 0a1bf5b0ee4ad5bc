//! Finite fields `F_{p^m}`, the dual numbers over them, and the [`Ring`]
//! abstraction the matrix code is generic over.
//!
//! Field elements are stored as their canonical `u32` encoding: for `m = 1`
//! the residue in `[0, p)`, for `m > 1` the base-`p` integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of the coefficient vector modulo a
//! fixed irreducible polynomial. Containers (polynomials, matrices) carry a
//! single [`Field`] descriptor next to raw values; [`Scalar`] bundles both
//! for standalone checked arithmetic.

use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported extension degree `m`.
pub const MAX_EXTENSION_DEGREE: usize = 6;

/// Descriptor of a finite field `F_{p^m}` with `p > 3` prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    // x^m + modulus[m-1] x^{m-1} + ... + modulus[0]; unused when m = 1
    modulus: [u32; MAX_EXTENSION_DEGREE],
    // number of products of reduced residues that fit in a u64 accumulator
    lazy_chunk: usize,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `F_{p^m}`, with modulus the first monic irreducible polynomial of
    /// degree `m` when coefficient vectors are ordered by their base-`p`
    /// encoding.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p <= 3 || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        if m == 0 || m as usize > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidExtensionDegree(m));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= i32::MAX as u64)
            .ok_or(Error::FieldTooLarge { p, m })? as u32;
        let sq = (p as u64 - 1) * (p as u64 - 1);
        let lazy_chunk = (u64::MAX / sq.max(1) / 2).min(1 << 30) as usize;
        let mut field = Field {
            p,
            m,
            q,
            modulus: [0; MAX_EXTENSION_DEGREE],
            lazy_chunk,
        };
        if m > 1 {
            field.modulus = first_irreducible(p, m as usize);
        }
        Ok(field)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements `q = p^m`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Coefficients `c_0..c_{m-1}` of the monic modulus (empty for `m = 1`).
    pub fn modulus(&self) -> &[u32] {
        if self.m == 1 {
            &[]
        } else {
            &self.modulus[..self.m as usize]
        }
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    pub fn check(&self, a: u64) -> Result<u32> {
        if a < self.q as u64 {
            Ok(a as u32)
        } else {
            Err(Error::InvalidElement {
                value: a,
                order: self.q,
            })
        }
    }

    /// Image of an integer in the prime subfield.
    #[inline]
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Element from its coefficient vector over `F_p` (lowest first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.m as usize {
            return Err(Error::LengthMismatch {
                expected: self.m as usize,
                got: coeffs.len(),
            });
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidElement {
                    value: c as u64,
                    order: self.p,
                });
            }
            v = v * self.p as u64 + c as u64;
        }
        Ok(v as u32)
    }

    /// Coefficient vector over `F_p` of length `m`.
    pub fn to_coeffs(&self, a: u32) -> [u32; MAX_EXTENSION_DEGREE] {
        let mut out = [0; MAX_EXTENSION_DEGREE];
        let mut v = a;
        for c in out.iter_mut().take(self.m as usize) {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            let s = a as u64 + b as u64;
            (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            if a >= b {
                a - b
            } else {
                (a as u64 + self.p as u64 - b as u64) as u32
            }
        } else {
            self.digitwise(a, b, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            (a as u64 * b as u64 % self.p as u64) as u32
        } else {
            self.mul_ext(a, b)
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Inverse Frobenius, computed as `a^{p^{m-1}}`.
    pub fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(self.m - 1))
    }

    /// Iterated inverse Frobenius `a^{p^{-k}}`.
    pub fn pth_root_iter(&self, a: u32, k: usize) -> u32 {
        (0..k % self.m as usize).fold(a, |acc, _| self.pth_root(acc))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.q)
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }

    /// `sum a_i b_i`, reducing lazily for prime fields.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        if self.m == 1 {
            let p = self.p as u64;
            let mut total = 0u64;
            for (ca, cb) in a.chunks(self.lazy_chunk).zip(b.chunks(self.lazy_chunk)) {
                let mut acc = 0u64;
                for (&x, &y) in ca.iter().zip(cb) {
                    acc += x as u64 * y as u64;
                }
                total = (total + acc % p) % p;
            }
            total as u32
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
        }
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.m {
            out += op(a % self.p, b % self.p, self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        out
    }

    fn mul_ext(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let p = self.p as u64;
        let da = self.to_coeffs(a);
        let db = self.to_coeffs(b);
        let mut prod = [0u64; 2 * MAX_EXTENSION_DEGREE];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let t = prod[k];
            if t != 0 {
                for j in 0..m {
                    prod[k - m + j] = (prod[k - m + j] + (p - t) * self.modulus[j] as u64) % p;
                }
                prod[k] = 0;
            }
        }
        let mut v = 0u64;
        for &c in prod[..m].iter().rev() {
            v = v * p + c;
        }
        v as u32
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

// Polynomial helpers over F_p on fixed-size coefficient arrays, used only to
// pick the extension modulus.
fn poly_rem_is_zero(p: u64, num: &[u64], den: &[u64]) -> bool {
    let mut r = [0u64; MAX_EXTENSION_DEGREE + 1];
    r[..num.len()].copy_from_slice(num);
    let dd = den.len() - 1;
    let lead_inv = {
        let mut acc = 1u64;
        let mut base = den[dd] % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    for k in (dd..num.len()).rev() {
        let t = r[k] * lead_inv % p;
        if t != 0 {
            for j in 0..=dd {
                r[k - dd + j] = (r[k - dd + j] + (p - t) * den[j]) % p;
            }
        }
    }
    r[..dd].iter().all(|&c| c == 0)
}

fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut den = [0u64; MAX_EXTENSION_DEGREE + 1];
            let mut c = code;
            for slot in den.iter_mut().take(d) {
                *slot = c % p;
                c /= p;
            }
            den[d] = 1;
            if poly_rem_is_zero(p, poly, &den[..=d]) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, m: usize) -> [u32; MAX_EXTENSION_DEGREE] {
    let p64 = p as u64;
    let count = p64.pow(m as u32);
    for code in 0..count {
        let mut poly = [0u64; MAX_EXTENSION_DEGREE + 1];
        let mut c = code;
        for slot in poly.iter_mut().take(m) {
            *slot = c % p64;
            c /= p64;
        }
        poly[m] = 1;
        if is_irreducible(p64, &poly[..=m]) {
            let mut out = [0u32; MAX_EXTENSION_DEGREE];
            for (o, &v) in out.iter_mut().zip(poly.iter()).take(m) {
                *o = v as u32;
            }
            return out;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Element of the dual numbers `k[eps]/(eps^2)` in raw form.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub struct Dual {
    pub re: u32,
    pub eps: u32,
}

impl Dual {
    pub const fn new(re: u32, eps: u32) -> Self {
        Dual { re, eps }
    }
}

/// The dual-number ring over a finite field.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DualRing(pub Field);

/// Commutative coefficient ring for the matrix code.
pub trait Ring: Copy + PartialEq + fmt::Debug {
    type Elem: Copy + PartialEq + fmt::Debug;

    /// Whether every nonzero element is a unit.
    const IS_FIELD: bool;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn unit_inverse(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn neg(&self, a: Self::Elem) -> Self::Elem {
        self.sub(self.zero(), a)
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn dot(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl Ring for Field {
    type Elem = u32;
    const IS_FIELD: bool = true;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_int(&self, v: i64) -> u32 {
        Field::from_int(self, v)
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        Field::add(self, a, b)
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        Field::sub(self, a, b)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        Field::mul(self, a, b)
    }
    fn unit_inverse(&self, a: u32) -> Option<u32> {
        self.inv(a)
    }
    fn neg(&self, a: u32) -> u32 {
        Field::neg(self, a)
    }
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
    fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        Field::dot(self, a, b)
    }
}

impl Ring for DualRing {
    type Elem = Dual;
    const IS_FIELD: bool = false;

    fn zero(&self) -> Dual {
        Dual::default()
    }
    fn one(&self) -> Dual {
        Dual::new(1, 0)
    }
    fn from_int(&self, v: i64) -> Dual {
        Dual::new(self.0.from_int(v), 0)
    }
    fn add(&self, a: Dual, b: Dual) -> Dual {
        Dual::new(self.0.add(a.re, b.re), self.0.add(a.eps, b.eps))
    }
    fn sub(&self, a: Dual, b: Dual) -> Dual {
        Dual::new(self.0.sub(a.re, b.re), self.0.sub(a.eps, b.eps))
    }
    fn mul(&self, a: Dual, b: Dual) -> Dual {
        let f = &self.0;
        Dual::new(
            f.mul(a.re, b.re),
            f.add(f.mul(a.re, b.eps), f.mul(a.eps, b.re)),
        )
    }
    fn unit_inverse(&self, a: Dual) -> Option<Dual> {
        let f = &self.0;
        let inv = f.inv(a.re)?;
        Some(Dual::new(inv, f.neg(f.mul(a.eps, f.mul(inv, inv)))))
    }
    fn dot(&self, a: &[Dual], b: &[Dual]) -> Dual {
        let f = &self.0;
        if !f.is_prime_field() {
            return a
                .iter()
                .zip(b)
                .fold(self.zero(), |acc, (&x, &y)| self.add(acc, self.mul(x, y)));
        }
        let p = f.p as u64;
        let chunk = (f.lazy_chunk / 2).max(1);
        let (mut re, mut eps) = (0u64, 0u64);
        for (ca, cb) in a.chunks(chunk).zip(b.chunks(chunk)) {
            let (mut r, mut e) = (0u64, 0u64);
            for (x, y) in ca.iter().zip(cb) {
                r += x.re as u64 * y.re as u64;
                e += x.re as u64 * y.eps as u64 + x.eps as u64 * y.re as u64;
            }
            re = (re + r % p) % p;
            eps = (eps + e % p) % p;
        }
        Dual::new(re as u32, eps as u32)
    }
}

/// Arithmetic operations accepted by [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// A field element bundled with its field descriptor.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    value: u32,
}

impl Scalar {
    pub fn new(field: Field, value: u64) -> Result<Self> {
        Ok(Scalar {
            field,
            value: field.check(value)?,
        })
    }

    pub fn from_int(field: Field, v: i64) -> Self {
        Scalar {
            field,
            value: field.from_int(v),
        }
    }

    pub fn zero(field: Field) -> Self {
        Scalar { field, value: 0 }
    }

    pub fn one(field: Field) -> Self {
        Scalar { field, value: 1 }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Scalar) -> Result<Field> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.same_field(other)?;
        Ok(Scalar {
            field: f,
            value: f.add(self.value, other.value),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.same_field(other)?;
        Ok(Scalar {
            field: f,
            value: f.sub(self.value, other.value),
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.same_field(other)?;
        Ok(Scalar {
            field: f,
            value: f.mul(self.value, other.value),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.same_field(other)?;
        let value = f.div(self.value, other.value).ok_or(Error::DivisionByZero)?;
        Ok(Scalar { field: f, value })
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            field: self.field,
            value: self.field.neg(self.value),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        let value = self.field.inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        Scalar {
            field: self.field,
            value: self.field.pow(self.value, e),
        }
    }

    pub fn frobenius(&self) -> Scalar {
        Scalar {
            field: self.field,
            value: self.field.frobenius(self.value),
        }
    }

    /// The unique `b` with `b^p = self`.
    pub fn pth_root(&self) -> Scalar {
        frobenius_pth_root(*self)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_elem(&self.field, self.value, f)
    }
}

/// Formats a raw element: the residue for prime fields, the coefficient
/// tuple otherwise.
pub fn fmt_elem(field: &Field, a: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if field.is_prime_field() {
        write!(f, "{a}")
    } else {
        let c = field.to_coeffs(a);
        write!(f, "(")?;
        for (i, v) in c.iter().take(field.degree() as usize).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Checked binary arithmetic. For `Pow` the exponent is the canonical
/// integer encoding of `b`.
pub fn field_arith(a: Scalar, b: Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.add(&b),
        ArithOp::Sub => a.sub(&b),
        ArithOp::Mul => a.mul(&b),
        ArithOp::Div => a.div(&b),
        ArithOp::Pow => {
            a.same_field(&b)?;
            Ok(a.pow(b.value as u64))
        }
    }
}

pub fn frobenius_pth_root(a: Scalar) -> Scalar {
    Scalar {
        field: a.field,
        value: a.field.pth_root(a.value),
    }
}

/// `real + eps * ε` with `ε^2 = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DualScalar {
    pub real: Scalar,
    pub eps: Scalar,
}

impl DualScalar {
    pub fn new(real: Scalar, eps: Scalar) -> Result<Self> {
        real.same_field(&eps)?;
        Ok(DualScalar { real, eps })
    }

    fn ring(&self, other: &DualScalar) -> Result<DualRing> {
        Ok(DualRing(self.real.same_field(&other.real)?))
    }

    fn raw(&self) -> Dual {
        Dual::new(self.real.value, self.eps.value)
    }

    fn wrap(field: Field, d: Dual) -> DualScalar {
        DualScalar {
            real: Scalar { field, value: d.re },
            eps: Scalar { field, value: d.eps },
        }
    }

    pub fn add(&self, other: &DualScalar) -> Result<DualScalar> {
        let r = self.ring(other)?;
        Ok(Self::wrap(r.0, r.add(self.raw(), other.raw())))
    }

    pub fn sub(&self, other: &DualScalar) -> Result<DualScalar> {
        let r = self.ring(other)?;
        Ok(Self::wrap(r.0, r.sub(self.raw(), other.raw())))
    }

    pub fn mul(&self, other: &DualScalar) -> Result<DualScalar> {
        let r = self.ring(other)?;
        Ok(Self::wrap(r.0, r.mul(self.raw(), other.raw())))
    }

    pub fn is_unit(&self) -> bool {
        !self.real.is_zero()
    }

    pub fn inv(&self) -> Result<DualScalar> {
        let r = DualRing(self.real.field);
        r.unit_inverse(self.raw())
            .map(|d| Self::wrap(r.0, d))
            .ok_or(Error::DivisionByZero)
    }
}
