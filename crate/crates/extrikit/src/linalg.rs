//! Dense exact linear algebra over a [`Scalar`] field.
//!
//! Vectors are plain `Vec<S>`; a [`Subspace`] keeps a basis as the columns of a
//! matrix. Elimination picks the first nonzero entry of each column as pivot,
//! which is exact and deterministic.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entries from different fields (characteristics {0} and {1})")]
    MixedField(u32, u32),
}

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
}

/// A quotient `K^rows -> K^quotient_dim` killing the image of some matrix.
#[derive(Clone, Debug)]
pub struct Cokernel<S> {
    pub quotient_dim: usize,
    /// Surjection in reduced row echelon form.
    pub projection: Matrix<S>,
    /// Right inverse of `projection` built from its pivot columns.
    pub section: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct Solution<S> {
    pub particular: Vec<S>,
    pub kernel: Subspace<S>,
}

/// Linearly independent columns spanning a subspace of `K^ambient`.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
}

fn rref_in_place<S: Scalar>(data: &mut [S], rows: usize, cols: usize, limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                data.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = data[r * cols + c].inv().expect("nonzero pivot");
        for k in c..cols {
            let v = data[r * cols + k].mul_ref(&inv);
            data[r * cols + k] = v;
        }
        let pivot_row: Vec<(usize, S)> = (c..cols)
            .filter(|&k| !data[r * cols + k].is_zero())
            .map(|k| (k, data[r * cols + k].clone()))
            .collect();
        for i in 0..rows {
            if i == r || data[i * cols + c].is_zero() {
                continue;
            }
            let f = data[i * cols + c].clone();
            for (k, v) in &pivot_row {
                let t = f.mul_ref(v);
                data[i * cols + k] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[S]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.rows, "product shape {:?} * {:?}", self.shape(), o.shape());
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a.mul_ref(b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "vector length");
        let mut out = vec![S::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o += a.mul_ref(b);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), o.shape(), "sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), o.shape(), "difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(s)).collect(),
        }
    }

    /// `self += s * o`.
    pub fn add_scaled(&mut self, s: &S, o: &Matrix<S>) {
        assert_eq!(self.shape(), o.shape(), "sum shape");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += s.mul_ref(b);
            }
        }
    }

    /// Adds `block` into the window starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix<S>) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = &block.data[i * block.cols + j];
                if !b.is_zero() {
                    self.data[(r0 + i) * self.cols + c0 + j] += b.clone();
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<S> {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn hstack(parts: &[&Matrix<S>], rows: usize) -> Matrix<S> {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack rows");
            m.add_block(0, c0, p);
            c0 += p.cols;
        }
        m
    }

    pub fn vstack(parts: &[&Matrix<S>], cols: usize) -> Matrix<S> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack cols");
            m.add_block(r0, 0, p);
            r0 += p.rows;
        }
        m
    }

    pub fn block_diag(parts: &[&Matrix<S>]) -> Matrix<S> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            m.add_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    pub fn kron(&self, o: &Matrix<S>) -> Matrix<S> {
        let mut m = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.set(i * o.rows + k, j * o.cols + l, a.mul_ref(b));
                        }
                    }
                }
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix<S> {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<S> {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// The common characteristic of the entries, if any entry knows it.
    pub fn field_descriptor(&self) -> Result<Option<u32>, LinalgError> {
        let mut seen: Option<u32> = None;
        for x in &self.data {
            if let Some(c) = x.characteristic() {
                match seen {
                    Some(s) if s != c => return Err(LinalgError::MixedField(s, c)),
                    _ => seen = Some(c),
                }
            }
        }
        Ok(seen)
    }

    pub fn rref(&self) -> Rref<S> {
        let mut data = self.data.clone();
        let pivots = rref_in_place(&mut data, self.rows, self.cols, self.cols);
        Rref {
            reduced: Matrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().pivots.len()
    }

    pub fn kernel_basis(&self) -> Subspace<S> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vecs = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[f] = S::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(i, f).clone();
            }
            vecs.push(v);
        }
        Subspace {
            ambient: self.cols,
            basis: Matrix::from_columns(self.cols, &vecs),
        }
    }

    pub fn image_basis(&self) -> Subspace<S> {
        let pivots = self.rref().pivots;
        Subspace {
            ambient: self.rows,
            basis: self.select_columns(&pivots),
        }
    }

    pub fn cokernel(&self) -> Cokernel<S> {
        let left = self.transpose().kernel_basis();
        let q = left.dim();
        let Rref { reduced, pivots } = left.basis.transpose().rref();
        let mut section = Matrix::zeros(self.rows, q);
        for (k, &p) in pivots.iter().enumerate() {
            section.set(p, k, S::one());
        }
        Cokernel {
            quotient_dim: q,
            projection: reduced,
            section,
        }
    }

    pub fn solve(&self, b: &[S]) -> Result<Option<Solution<S>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let w = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.push(b[i].clone());
        }
        let pivots = rref_in_place(&mut data, self.rows, w, self.cols);
        if (pivots.len()..self.rows).any(|i| !data[i * w + self.cols].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = data[i * w + self.cols].clone();
        }
        Ok(Some(Solution {
            particular: x,
            kernel: self.kernel_basis(),
        }))
    }

    /// Some solution of `self * X = rhs` for every column of `rhs` at once.
    pub fn solve_matrix(&self, rhs: &Matrix<S>) -> Option<Matrix<S>> {
        assert_eq!(rhs.rows, self.rows, "right-hand side rows");
        let w = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        let pivots = rref_in_place(&mut data, self.rows, w, self.cols);
        for i in pivots.len()..self.rows {
            if (self.cols..w).any(|k| !data[i * w + k].is_zero()) {
                return None;
            }
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, data[i * w + self.cols + j].clone());
            }
        }
        Some(x)
    }
}

impl<S: Scalar> Subspace<S> {
    /// Span of the given columns; dependent columns are dropped.
    pub fn span(ambient: usize, generators: &Matrix<S>) -> Self {
        assert_eq!(generators.rows, ambient, "generator length");
        if generators.cols == 0 {
            return Self::zero(ambient);
        }
        generators.image_basis()
    }

    pub fn from_vectors(ambient: usize, vecs: &[Vec<S>]) -> Self {
        Self::span(ambient, &Matrix::from_columns(ambient, vecs))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<S>> {
        self.basis.columns()
    }

    pub fn coords(&self, v: &[S]) -> Option<Vec<S>> {
        self.coords_matrix(&Matrix::column_vector(v)).map(|m| m.column(0))
    }

    /// Coordinates of every column of `m` in this basis, or `None` if some
    /// column lies outside the subspace.
    pub fn coords_matrix(&self, m: &Matrix<S>) -> Option<Matrix<S>> {
        self.basis.solve_matrix(m)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, o: &Subspace<S>) -> bool {
        o.dim() == 0 || self.coords_matrix(&o.basis).is_some()
    }

    pub fn same_as(&self, o: &Subspace<S>) -> bool {
        self.dim() == o.dim() && self.contains_subspace(o)
    }

    pub fn sum(&self, o: &Subspace<S>) -> Subspace<S> {
        Subspace::span(self.ambient, &Matrix::hstack(&[&self.basis, &o.basis], self.ambient))
    }

    pub fn intersect(&self, o: &Subspace<S>) -> Subspace<S> {
        intersect_subspaces(self, o)
    }

    pub fn quotient(&self) -> Cokernel<S> {
        self.basis.cokernel()
    }

    /// Image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix<S>) -> Subspace<S> {
        Subspace::span(m.rows, &m.mul(&self.basis))
    }
}

/// `{v : m v ∈ u}`.
pub fn preimage_of_subspace<S: Scalar>(m: &Matrix<S>, u: &Subspace<S>) -> Subspace<S> {
    assert_eq!(m.rows, u.ambient, "preimage target");
    let q = u.quotient().projection;
    q.mul(m).kernel_basis()
}

pub fn intersect_subspaces<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
    assert_eq!(a.ambient, b.ambient, "intersection ambient");
    let q = b.quotient().projection;
    let k = q.mul(&a.basis).kernel_basis();
    Subspace::span(a.ambient, &a.basis.mul(k.basis()))
}

pub fn kronecker_tensor<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.kron(b)
}

pub fn kron_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul_ref(y));
        }
    }
    out
}

/// `Ker g = Im f` for a composable pair `U -f-> V -g-> W`.
pub fn is_exact_at<S: Scalar>(f: &Matrix<S>, g: &Matrix<S>) -> bool {
    exactness_defect(f, g) == (0, 0)
}

/// `(dim Ker g - rank f, rank(g f))`; both vanish exactly when the pair is exact.
pub fn exactness_defect<S: Scalar>(f: &Matrix<S>, g: &Matrix<S>) -> (usize, usize) {
    assert_eq!(f.rows, g.cols, "composable pair");
    let gf = if f.cols == 0 || g.rows == 0 { 0 } else { g.mul(f).rank() };
    let ker = g.cols - g.rank();
    let im = f.rank();
    (ker.saturating_sub(im) + im.saturating_sub(ker), gf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn kernel_examples() {
        let k = m(&[&[1, 0], &[0, 0]]).kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors()[0], vec![q(0), q(1)]);
        assert_eq!(Matrix::<Rational>::zeros(2, 3).kernel_basis().dim(), 3);
        let k = m(&[&[1, 2], &[2, 4]]).kernel_basis();
        assert_eq!(k.vectors()[0], vec![q(-2), q(1)]);
    }

    #[test]
    fn cokernel_examples() {
        let c = m(&[&[1], &[0]]).cokernel();
        assert_eq!(c.quotient_dim, 1);
        let c = Matrix::<Rational>::zeros(2, 1).cokernel();
        assert_eq!(c.quotient_dim, 2);
        assert_eq!(c.projection, Matrix::identity(2));
        assert_eq!(m(&[&[2]]).cokernel().quotient_dim, 0);
    }

    #[test]
    fn cokernel_section_is_right_inverse() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1], &[3, 3]]);
        let c = a.cokernel();
        assert!(c.projection.mul(&a).is_zero());
        assert_eq!(c.projection.mul(&c.section), Matrix::identity(c.quotient_dim));
    }

    #[test]
    fn solve_examples() {
        let s = Matrix::<Rational>::identity(2).solve(&[q(3), q(5)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![q(3), q(5)]);
        assert_eq!(s.kernel.dim(), 0);
        assert!(Matrix::<Rational>::zeros(2, 2).solve(&[q(1), q(0)]).unwrap().is_none());
        let s = m(&[&[1, 1]]).solve(&[q(2)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![q(2), q(0)]);
        assert_eq!(s.kernel.vectors()[0], vec![q(-1), q(1)]);
        assert!(m(&[&[1, 1]]).solve(&[q(2), q(1)]).is_err());
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::from_vectors(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::from_vectors(3, &[vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[q(0), q(5), q(0)]));
        assert_eq!(a.sum(&b).dim(), 3);
        let p = preimage_of_subspace(&m(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 1]]), &a);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn mixed_fields_are_reported() {
        use crate::scalar::Fp;
        let mut a = Matrix::<Fp>::zeros(1, 2);
        a.set(0, 0, Fp::new(1, 5));
        a.set(0, 1, Fp::new(1, 7));
        assert_eq!(a.field_descriptor(), Err(LinalgError::MixedField(5, 7)));
    }
}
