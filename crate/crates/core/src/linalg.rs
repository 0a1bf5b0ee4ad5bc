//! Dense exact linear algebra over a [`Ring`].
//!
//! Characteristic polynomials come in two flavours: a Hessenberg reduction
//! (`O(d^3)`, divides by pivots, fields only) and Berkowitz's division-free
//! algorithm (`O(d^4)`), which is what the dual-number ring needs since it
//! has nonzero non-units.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Field, Ring};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring = Field> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_fn(ring: R, rows: usize, cols: usize, f: impl Fn(usize, usize) -> R::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: R, rows: &[Vec<R::Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Matrix {
            ring,
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(ring: R, rows: usize, columns: &[Vec<R::Elem>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch);
        }
        let cols = columns.len();
        let mut m = Self::zeros(ring, rows, cols);
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.data[r * cols + c] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn ring(&self) -> R {
        self.ring
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> R::Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: R::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[R::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn set_column(&mut self, c: usize, col: &[R::Elem]) {
        for (r, &v) in col.iter().enumerate() {
            self.set(r, c, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| self.ring.is_zero(v))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Entrywise image under a ring map.
    pub fn map<S: Ring>(&self, ring: S, f: impl Fn(R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.ring.add(a, b)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.ring.sub(a, b)))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(R::Elem, R::Elem) -> R::Elem) -> Self {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch)
        }
    }

    pub fn scale(&self, c: R::Elem) -> Self {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| self.ring.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: R::Elem) -> Result<()> {
        self.check_same_shape(other)?;
        let ring = self.ring;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = ring.add(*a, ring.mul(b, c));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch);
        }
        let t = other.transpose();
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for c in 0..other.cols {
                data.push(self.ring.dot(row, t.row(c)));
            }
        }
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch);
        }
        Ok((0..self.rows).map(|r| self.ring.dot(self.row(r), v)).collect())
    }

    /// `self^e` by repeated squaring.
    pub fn mat_power(&self, mut e: u64) -> Result<Self> {
        self.check_square()?;
        let mut acc = Self::identity(self.ring, self.rows);
        let mut base = self.clone();
        let mut started = false;
        while e > 0 {
            if e & 1 == 1 {
                acc = if started { acc.try_mul(&base)? } else { base.clone() };
                started = true;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Evaluates `sum coeffs[k] M^k` (Horner).
    pub fn eval_poly(&self, coeffs: &[R::Elem]) -> Result<Self> {
        self.check_square()?;
        let mut acc = Self::zeros(self.ring, self.rows, self.cols);
        for &c in coeffs.iter().rev() {
            acc = acc.try_mul(self)?;
            for i in 0..self.rows {
                let v = acc.get(i, i);
                acc.set(i, i, self.ring.add(v, c));
            }
        }
        Ok(acc)
    }

    /// Monic characteristic polynomial `det(tI - M)`, coefficients in
    /// ascending degree. Fields use the Hessenberg route, other rings the
    /// division-free one.
    pub fn charpoly(&self) -> Result<Vec<R::Elem>> {
        if R::IS_FIELD {
            self.charpoly_hessenberg()
        } else {
            self.charpoly_berkowitz()
        }
    }

    /// Berkowitz's division-free algorithm.
    pub fn charpoly_berkowitz(&self) -> Result<Vec<R::Elem>> {
        self.check_square()?;
        let ring = self.ring;
        let n = self.rows;
        // descending coefficients of the charpoly of the leading r x r block
        let mut v: Vec<R::Elem> = vec![ring.one()];
        let mut w = Vec::with_capacity(n);
        let mut next = Vec::with_capacity(n);
        for r in 0..n {
            let mut t = Vec::with_capacity(r + 2);
            t.push(ring.one());
            t.push(ring.neg(self.get(r, r)));
            let row_r = &self.row(r)[..r];
            w.clear();
            w.extend((0..r).map(|i| self.get(i, r)));
            for k in 0..r {
                t.push(ring.neg(ring.dot(row_r, &w)));
                if k + 1 < r {
                    next.clear();
                    next.extend((0..r).map(|i| ring.dot(&self.row(i)[..r], &w)));
                    core::mem::swap(&mut w, &mut next);
                }
            }
            let mut nv = vec![ring.zero(); r + 2];
            for (i, slot) in nv.iter_mut().enumerate() {
                let mut acc = ring.zero();
                for (j, &vj) in v.iter().enumerate().take(i + 1) {
                    acc = ring.add(acc, ring.mul(t[i - j], vj));
                }
                *slot = acc;
            }
            v = nv;
        }
        v.reverse();
        Ok(v)
    }

    /// Similarity reduction to upper Hessenberg form followed by the
    /// standard three-term recurrence.
    pub fn charpoly_hessenberg(&self) -> Result<Vec<R::Elem>> {
        self.check_square()?;
        if !R::IS_FIELD {
            return Err(Error::NotAField);
        }
        let ring = self.ring;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !ring.is_zero(h.get(i, m - 1))) else {
                continue;
            };
            if piv != m {
                h.swap_rows(piv, m);
                h.swap_cols(piv, m);
            }
            let inv = ring.unit_inverse(h.get(m, m - 1)).ok_or(Error::NotAField)?;
            for i in m + 1..n {
                let u = ring.mul(h.get(i, m - 1), inv);
                if ring.is_zero(u) {
                    continue;
                }
                for c in 0..n {
                    let v = ring.sub(h.get(i, c), ring.mul(u, h.get(m, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = ring.add(h.get(r, m), ring.mul(u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        // polys[k] = charpoly of the leading k x k block, ascending
        let mut polys: Vec<Vec<R::Elem>> = Vec::with_capacity(n + 1);
        polys.push(vec![ring.one()]);
        for k in 1..=n {
            let prev = &polys[k - 1];
            let mut pk = vec![ring.zero(); k + 1];
            let hkk = h.get(k - 1, k - 1);
            for (d, &c) in prev.iter().enumerate() {
                pk[d + 1] = ring.add(pk[d + 1], c);
                pk[d] = ring.sub(pk[d], ring.mul(hkk, c));
            }
            let mut prod = ring.one();
            for i in 1..k {
                prod = ring.mul(prod, h.get(k - i, k - i - 1));
                if ring.is_zero(prod) {
                    break;
                }
                let coef = ring.mul(h.get(k - i - 1, k - 1), prod);
                for (d, &c) in polys[k - i - 1].iter().enumerate() {
                    pk[d] = ring.sub(pk[d], ring.mul(coef, c));
                }
            }
            polys.push(pk);
        }
        Ok(polys.pop().unwrap())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are the first nonzero entry in column order.
    fn rref(&mut self) -> Result<Vec<usize>> {
        if !R::IS_FIELD {
            return Err(Error::NotAField);
        }
        let ring = self.ring;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !ring.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(piv, row);
            let inv = ring.unit_inverse(self.get(row, col)).ok_or(Error::NotAField)?;
            for c in col..self.cols {
                let v = ring.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if ring.is_zero(factor) {
                    continue;
                }
                for c in col..self.cols {
                    let v = ring.sub(self.get(r, c), ring.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    /// Rank and a kernel basis (one vector per free column).
    pub fn rank_kernel(&self) -> Result<(usize, Vec<Vec<R::Elem>>)> {
        let mut m = self.clone();
        let pivots = m.rref()?;
        let ring = self.ring;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![ring.zero(); self.cols];
            v[free] = ring.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ring.neg(m.get(r, free));
            }
            kernel.push(v);
        }
        Ok((pivots.len(), kernel))
    }

    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.rref()?.len())
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch);
        }
        let ring = self.ring;
        let mut aug = Matrix::from_fn(ring, self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                b[r]
            }
        });
        let pivots = aug.rref()?;
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![ring.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }
}

/// Incrementally built row space with membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, width: usize) -> Self {
        RowSpace {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Residual of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                // stored rows are normalized to 1 at their pivot
                for (a, &b) in v.iter_mut().zip(row) {
                    if b != 0 {
                        *a = f.sub(*a, f.mul(c, b));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.width, "row width mismatch");
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = self.field.inv(r[pc]).unwrap();
        for a in r.iter_mut() {
            *a = self.field.mul(*a, inv);
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }
}

/// Dimension of the span of a list of vectors over a field.
pub fn span_dim(field: Field, width: usize, vectors: &[Vec<u32>]) -> usize {
    let mut space = RowSpace::new(field, width);
    for v in vectors {
        space.insert(v);
    }
    space.dim()
}

/// Coefficients `c` with `target = sum c_i generators[i]`, if any.
pub fn solve_in_span(
    field: Field,
    generators: &[Vec<u32>],
    target: &[u32],
) -> Result<Option<Vec<u32>>> {
    let width = target.len();
    if generators.is_empty() {
        return Ok(if target.iter().all(|&c| c == 0) {
            Some(Vec::new())
        } else {
            None
        });
    }
    let m = Matrix::from_columns(field, width, generators)?;
    m.solve(target)
}

/// `rank_kernel` as a free function.
pub fn rank_kernel<R: Ring>(m: &Matrix<R>) -> Result<(usize, Vec<Vec<R::Elem>>)> {
    m.rank_kernel()
}

/// `charpoly` as a free function.
pub fn charpoly<R: Ring>(m: &Matrix<R>) -> Result<Vec<R::Elem>> {
    m.charpoly()
}

/// `mat_power` as a free function.
pub fn mat_power<R: Ring>(m: &Matrix<R>, e: u64) -> Result<Matrix<R>> {
    m.mat_power(e)
}
